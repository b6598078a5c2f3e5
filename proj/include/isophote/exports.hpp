#pragma once
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "isophote/errors.hpp"
#include "isophote/param_surface.hpp"
#include "isophote/trace.hpp"
#include "isophote/types.hpp"

namespace isophote {

// ---------------------------------------------------------------------------
// Curve CSV: "s,u,v,x,y,z" rows at 17 significant digits (doubles round-trip)
// ---------------------------------------------------------------------------

struct CurveCsvRow {
    double s, u, v, x, y, z;
};

inline void write_curve_csv(const std::string& path, const std::vector<CurveCsvRow>& rows) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << "s,u,v,x,y,z\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.s, r.u, r.v,
                      r.x, r.y, r.z);
        f << buf;
    }
}

inline std::vector<CurveCsvRow> read_curve_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("s,u,v", 0) != 0)
        throw ParseError(path + ": missing CSV header");
    std::vector<CurveCsvRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        CurveCsvRow r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &r.s, &r.u, &r.v, &r.x, &r.y,
                        &r.z) != 6)
            throw ParseError(path + ": malformed row '" + line + "'");
        rows.push_back(r);
    }
    return rows;
}

/// Rows for one traced polyline; s is the cumulative chord length.
inline std::vector<CurveCsvRow> trace_polyline_rows(const IsophoteTrace& tr, size_t k) {
    std::vector<CurveCsvRow> rows;
    double s = 0.0;
    for (size_t i = 0; i < tr.uv_polylines[k].size(); ++i) {
        if (i > 0) s += (tr.xyz_polylines[k][i] - tr.xyz_polylines[k][i - 1]).norm();
        const Vec2& uv = tr.uv_polylines[k][i];
        const Vec3& p = tr.xyz_polylines[k][i];
        rows.push_back({s, uv.x(), uv.y(), p.x(), p.y(), p.z()});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// OBJ export: v/vn/f records, CCW winding consistent with the surface normal,
// row-major vertex ordering in (u, v), watertight across periodic seams
// ---------------------------------------------------------------------------

struct MeshStats {
    int vertex_count = 0;
    int face_count = 0;
    std::vector<SingularCell> degenerate_vertices;  ///< cells flagged, not dropped
};

inline MeshStats export_mesh(const ParamSurface& S, int nu, int nv, const std::string& path,
                             double eps_degenerate = 1e-9) {
    if (nu < 4 || nv < 4) throw ParameterOutOfRange("mesh resolution must be at least 4x4");
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    MeshStats stats;

    const int ucols = S.u_periodic() ? nu : nu + 1;
    const int vrows = S.v_periodic() ? nv : nv + 1;
    auto vid = [&](int i, int j) {  // 1-based OBJ index, row-major in (u, v)
        return 1 + (j % vrows) * ucols + (i % ucols);
    };

    char buf[256];
    f << "# parametric surface, " << nu << "x" << nv << " cells\n";
    for (int j = 0; j < vrows; ++j) {
        for (int i = 0; i < ucols; ++i) {
            const double u = S.u_min() + (S.u_max() - S.u_min()) * i / nu;
            const double v = S.v_min() + (S.v_max() - S.v_min()) * j / nv;
            const Vec3 p = S.eval(u, v);
            std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
            f << buf;
        }
    }
    for (int j = 0; j < vrows; ++j) {
        for (int i = 0; i < ucols; ++i) {
            const double u = S.u_min() + (S.u_max() - S.u_min()) * i / nu;
            const double v = S.v_min() + (S.v_max() - S.v_min()) * j / nv;
            Vec3 n = Vec3::Zero();
            try {
                n = unit_normal(S, u, v, eps_degenerate);
            } catch (const SingularPoint&) {
                stats.degenerate_vertices.push_back({i, j, u, v});
            }
            std::snprintf(buf, sizeof(buf), "vn %.17g %.17g %.17g\n", n.x(), n.y(), n.z());
            f << buf;
        }
    }
    // Quads (i,j)-(i+1,j)-(i+1,j+1)-(i,j+1) are CCW seen from the +normal side;
    // each splits into two triangles.
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            std::snprintf(buf, sizeof(buf), "f %d//%d %d//%d %d//%d\n", a, a, b, b, c, c);
            f << buf;
            std::snprintf(buf, sizeof(buf), "f %d//%d %d//%d %d//%d\n", a, a, c, c, d, d);
            f << buf;
            stats.face_count += 2;
        }
    }
    stats.vertex_count = ucols * vrows;
    return stats;
}

struct ObjData {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 3>> faces;  ///< 0-based vertex indices
};

inline ObjData read_obj(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    ObjData obj;
    std::string line;
    while (std::getline(f, line)) {
        if (line.rfind("v ", 0) == 0) {
            Vec3 p;
            std::sscanf(line.c_str(), "v %lf %lf %lf", &p.x(), &p.y(), &p.z());
            obj.vertices.push_back(p);
        } else if (line.rfind("vn ", 0) == 0) {
            Vec3 n;
            std::sscanf(line.c_str(), "vn %lf %lf %lf", &n.x(), &n.y(), &n.z());
            obj.normals.push_back(n);
        } else if (line.rfind("f ", 0) == 0) {
            int a = 0, b = 0, c = 0, an, bn, cn;
            if (std::sscanf(line.c_str(), "f %d//%d %d//%d %d//%d", &a, &an, &b, &bn, &c, &cn) == 6)
                obj.faces.push_back({a - 1, b - 1, c - 1});
        }
    }
    return obj;
}

// ---------------------------------------------------------------------------
// Parameter-domain SVG: field heat map plus traced polylines
// ---------------------------------------------------------------------------

inline void write_svg_plot(const std::string& path, const ParamSurface& S, const Vec3& d,
                           double theta, const IsophoteTrace& tr, int width = 720,
                           int heat_cells = 48) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    const double u0 = S.u_min(), u1 = S.u_max(), v0 = S.v_min(), v1 = S.v_max();
    const int height = static_cast<int>(width * (v1 - v0) / (u1 - u0));
    auto px = [&](double u) { return (u - u0) / (u1 - u0) * width; };
    auto py = [&](double v) { return height - (v - v0) / (v1 - v0) * height; };

    // field samples for the heat layer
    const double ct = std::cos(theta);
    std::vector<double> field(static_cast<size_t>(heat_cells) * heat_cells, 0.0);
    double fmax = 1e-300;
    std::vector<char> ok(field.size(), 1);
    for (int j = 0; j < heat_cells; ++j) {
        for (int i = 0; i < heat_cells; ++i) {
            const double u = u0 + (u1 - u0) * (i + 0.5) / heat_cells;
            const double v = v0 + (v1 - v0) * (j + 0.5) / heat_cells;
            const size_t idx = static_cast<size_t>(j) * heat_cells + i;
            try {
                field[idx] = unit_normal(S, u, v).dot(d.normalized()) - ct;
                fmax = std::max(fmax, std::abs(field[idx]));
            } catch (const SingularPoint&) {
                ok[idx] = 0;
            }
        }
    }

    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    char buf[512];
    for (int j = 0; j < heat_cells; ++j) {
        for (int i = 0; i < heat_cells; ++i) {
            const size_t idx = static_cast<size_t>(j) * heat_cells + i;
            int rr = 200, gg = 200, bb = 200;
            if (ok[idx]) {
                const double t = std::clamp(field[idx] / fmax, -1.0, 1.0);
                // diverging blue-white-red
                rr = static_cast<int>(255 * std::min(1.0, 1.0 + t));
                bb = static_cast<int>(255 * std::min(1.0, 1.0 - t));
                gg = static_cast<int>(255 * (1.0 - std::abs(t)));
            }
            const double x = px(u0 + (u1 - u0) * i / heat_cells);
            const double y = py(v0 + (v1 - v0) * (j + 1.0) / heat_cells);
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                          "fill=\"rgb(%d,%d,%d)\"/>\n",
                          x, y, static_cast<double>(width) / heat_cells,
                          static_cast<double>(height) / heat_cells, rr, gg, bb);
            f << buf;
        }
    }
    for (size_t k = 0; k < tr.uv_polylines.size(); ++k) {
        f << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
        const Vec2* prev = nullptr;
        for (const auto& p : tr.uv_polylines[k]) {
            // break wrapped polylines at periodic seams for display
            if (prev && ((S.u_periodic() && std::abs(p.x() - prev->x()) > 0.5 * (u1 - u0)) ||
                         (S.v_periodic() && std::abs(p.y() - prev->y()) > 0.5 * (v1 - v0)))) {
                f << "\"/>\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
            }
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(p.x()), py(p.y()));
            f << buf;
            prev = &p;
        }
        f << "\"/>\n";
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"8\" y=\"16\" font-family=\"monospace\" font-size=\"12\">"
                  "d=(%.3g, %.3g, %.3g)  theta=%.6g rad  residual=%.2e</text>\n",
                  tr.d.x(), tr.d.y(), tr.d.z(), theta, tr.field_residual);
    f << buf;
    f << "</svg>\n";
}

}  // namespace isophote
