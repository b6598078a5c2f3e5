#pragma once
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "isophote/errors.hpp"
#include "isophote/param_surface.hpp"
#include "isophote/tolerances.hpp"
#include "isophote/types.hpp"

namespace isophote {

/// Level set of f(u,v) = <N(u,v), d> - cos(theta) extracted on a cell grid.
/// Crossings are refined by bisection to |f| <= trace_tol; crossings link into
/// polylines, saddle cells are split by the sign of f at the cell center, and
/// periodic directions stitch across the seam.
struct IsophoteTrace {
    std::vector<std::vector<Vec2>> uv_polylines;
    std::vector<std::vector<Vec3>> xyz_polylines;
    std::vector<bool> polyline_closed;
    Vec3 d = Vec3::UnitZ();
    double theta = 0.0;
    double field_residual = 0.0;  ///< max |f| over all refined crossings
    double min_f = 0.0, max_f = 0.0;  ///< node-field range (diagnostic, esp. for empty traces)
    std::vector<SingularCell> singular_cells;

    bool empty() const { return uv_polylines.empty(); }
    size_t total_points() const {
        size_t n = 0;
        for (const auto& p : uv_polylines) n += p.size();
        return n;
    }
};

/// Tangent direction of the isophote through (u,v) in parameter space,
/// proportional to (<N_v,d>, -<N_u,d>).
inline Vec2 poeschl_direction(const ParamSurface& S, const Vec3& d, double u, double v,
                              double eps = 1e-9) {
    const Vec3 Nu = unit_normal_derivative(S, u, v, 1.0, 0.0, eps);
    const Vec3 Nv = unit_normal_derivative(S, u, v, 0.0, 1.0, eps);
    Vec2 t(Nv.dot(d), -Nu.dot(d));
    const double n = t.norm();
    if (n < 1e-300) return Vec2(0.0, 0.0);
    return t / n;
}

namespace detail {

struct TraceGrid {
    int nu = 0, nv = 0;  // cells
    std::vector<double> us, vs;
    std::vector<double> f;       // (nu+1) x (nv+1), NaN at singular nodes
    bool u_periodic = false, v_periodic = false;
    double& at(int i, int j) { return f[static_cast<size_t>(j) * (nu + 1) + i]; }
    double at(int i, int j) const { return f[static_cast<size_t>(j) * (nu + 1) + i]; }
};

// Edge key: (is_vertical, i, j) with periodic wrap applied to the node index.
struct EdgeKey {
    int type;  // 0 horizontal (u-direction), 1 vertical (v-direction)
    int i, j;
    bool operator<(const EdgeKey& o) const {
        if (type != o.type) return type < o.type;
        if (j != o.j) return j < o.j;
        return i < o.i;
    }
};

}  // namespace detail

inline IsophoteTrace trace_isophote(const ParamSurface& S, Vec3 d, double theta, int nu, int nv,
                                    double trace_tol = 1e-9,
                                    const Tolerances& tol = Tolerances::defaults(),
                                    bool poeschl_newton = false) {
    if (nu < 8 || nv < 8) throw TooFewSamples("trace grid must be at least 8x8");
    if (d.norm() < 1e-12) throw ParameterOutOfRange("trace direction must be nonzero");
    d.normalize();
    const double ct = std::cos(theta);

    IsophoteTrace out;
    out.d = d;
    out.theta = theta;

    detail::TraceGrid g;
    g.nu = nu;
    g.nv = nv;
    g.u_periodic = S.u_periodic();
    g.v_periodic = S.v_periodic();
    g.us.resize(nu + 1);
    g.vs.resize(nv + 1);
    for (int i = 0; i <= nu; ++i) g.us[i] = S.u_min() + (S.u_max() - S.u_min()) * i / nu;
    for (int j = 0; j <= nv; ++j) g.vs[j] = S.v_min() + (S.v_max() - S.v_min()) * j / nv;
    g.f.assign(static_cast<size_t>(nu + 1) * (nv + 1), 0.0);

    auto field = [&](double u, double v) { return unit_normal(S, u, v, tol.eps_degenerate).dot(d) - ct; };

    out.min_f = std::numeric_limits<double>::infinity();
    out.max_f = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= nv; ++j) {
        for (int i = 0; i <= nu; ++i) {
            // Periodic seams reuse the first row/column so crossings match exactly.
            if (g.u_periodic && i == nu) {
                g.at(i, j) = g.at(0, j);
                continue;
            }
            if (g.v_periodic && j == nv) {
                g.at(i, j) = g.at(i, 0);
                continue;
            }
            double val;
            try {
                val = field(g.us[i], g.vs[j]);
            } catch (const SingularPoint&) {
                val = std::numeric_limits<double>::quiet_NaN();
            }
            g.at(i, j) = val;
            if (std::isfinite(val)) {
                out.min_f = std::min(out.min_f, val);
                out.max_f = std::max(out.max_f, val);
            }
        }
    }

    // Refined crossing per edge with a sign change, keyed canonically.
    auto edge_key = [&](int type, int i, int j) {
        if (type == 0) {  // horizontal edge at node row j
            if (g.v_periodic && j == nv) j = 0;
        } else {  // vertical edge at node column i
            if (g.u_periodic && i == nu) i = 0;
        }
        return detail::EdgeKey{type, i, j};
    };

    std::map<detail::EdgeKey, int> crossing_index;
    std::vector<Vec2> crossing_uv;
    std::vector<double> crossing_f;

    auto refine_edge = [&](double ua, double va, double ub, double vb, double fa) -> Vec2 {
        double ta = 0.0, tb = 1.0;
        for (int it = 0; it < 120; ++it) {
            const double tm = 0.5 * (ta + tb);
            const double um = ua + (ub - ua) * tm, vm = va + (vb - va) * tm;
            const double fm = field(um, vm);
            if (std::abs(fm) <= trace_tol || tb - ta < 4.0 * std::numeric_limits<double>::epsilon()) {
                return Vec2(um, vm);
            }
            if ((fm >= 0.0) == (fa >= 0.0)) {
                ta = tm;
                fa = fm;
            } else {
                tb = tm;
            }
        }
        return Vec2(ua + (ub - ua) * 0.5 * (ta + tb), va + (vb - va) * 0.5 * (ta + tb));
    };

    auto crossing_on = [&](int type, int i, int j) -> int {
        const auto key = edge_key(type, i, j);
        auto it = crossing_index.find(key);
        if (it != crossing_index.end()) return it->second;
        // Endpoint nodes of the (canonical) edge.
        const int i0 = key.i, j0 = key.j;
        int i1 = i0, j1 = j0;
        if (key.type == 0) i1 = i0 + 1; else j1 = j0 + 1;
        const double fa = g.at(i0, j0);
        Vec2 p = refine_edge(g.us[i0], g.vs[j0], g.us[i1], g.vs[j1], fa);
        if (poeschl_newton) {
            try {
                const Vec3 Nu = unit_normal_derivative(S, p.x(), p.y(), 1.0, 0.0, tol.eps_degenerate);
                const Vec3 Nv = unit_normal_derivative(S, p.x(), p.y(), 0.0, 1.0, tol.eps_degenerate);
                const Vec2 grad(Nu.dot(d), Nv.dot(d));
                const double g2 = grad.squaredNorm();
                if (g2 > 1e-300) p -= field(p.x(), p.y()) / g2 * grad;
            } catch (const SingularPoint&) {
            }
        }
        const int idx = static_cast<int>(crossing_uv.size());
        crossing_uv.push_back(p);
        crossing_f.push_back(std::abs(field(p.x(), p.y())));
        crossing_index.emplace(key, idx);
        return idx;
    };

    // March cells, producing segments between crossing indices.
    std::vector<std::pair<int, int>> segments;
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const double c00 = g.at(i, j), c10 = g.at(i + 1, j);
            const double c01 = g.at(i, j + 1), c11 = g.at(i + 1, j + 1);
            if (!std::isfinite(c00) || !std::isfinite(c10) || !std::isfinite(c01) ||
                !std::isfinite(c11)) {
                out.singular_cells.push_back(
                    {i, j, 0.5 * (g.us[i] + g.us[i + 1]), 0.5 * (g.vs[j] + g.vs[j + 1])});
                continue;
            }
            int mask = 0;
            if (c00 >= 0) mask |= 1;
            if (c10 >= 0) mask |= 2;
            if (c11 >= 0) mask |= 4;
            if (c01 >= 0) mask |= 8;
            if (mask == 0 || mask == 15) continue;

            const auto bottom = [&] { return crossing_on(0, i, j); };
            const auto top = [&] { return crossing_on(0, i, j + 1); };
            const auto left = [&] { return crossing_on(1, i, j); };
            const auto right = [&] { return crossing_on(1, i + 1, j); };
            auto emit = [&](int a, int b) { segments.emplace_back(a, b); };

            switch (mask) {
                case 1: case 14: emit(bottom(), left()); break;
                case 2: case 13: emit(bottom(), right()); break;
                case 3: case 12: emit(left(), right()); break;
                case 4: case 11: emit(top(), right()); break;
                case 6: case 9: emit(bottom(), top()); break;
                case 8: case 7: emit(left(), top()); break;
                case 5: case 10: {
                    // Saddle: split by the field sign at the cell center.
                    const double fc = field(0.5 * (g.us[i] + g.us[i + 1]),
                                            0.5 * (g.vs[j] + g.vs[j + 1]));
                    const bool center_pos = fc >= 0.0;
                    const bool diag00_pos = (mask == 5);  // c00 and c11 positive
                    if (center_pos == diag00_pos) {
                        emit(bottom(), right());
                        emit(left(), top());
                    } else {
                        emit(bottom(), left());
                        emit(right(), top());
                    }
                    break;
                }
                default: break;
            }
        }
    }

    if (segments.empty()) return out;  // empty trace: min_f/max_f explain why

    // Link segments into polylines by walking the crossing adjacency.
    std::vector<std::vector<std::pair<int, int>>> adj(crossing_uv.size());
    for (int sidx = 0; sidx < static_cast<int>(segments.size()); ++sidx) {
        adj[segments[sidx].first].push_back({segments[sidx].second, sidx});
        adj[segments[sidx].second].push_back({segments[sidx].first, sidx});
    }
    std::vector<char> seg_used(segments.size(), 0);
    auto walk = [&](int start) {
        std::vector<int> chain{start};
        int current = start;
        while (true) {
            int next = -1;
            for (const auto& [nbr, sidx] : adj[current]) {
                if (!seg_used[sidx]) {
                    seg_used[sidx] = 1;
                    next = nbr;
                    break;
                }
            }
            if (next < 0) break;
            chain.push_back(next);
            current = next;
        }
        return chain;
    };

    std::vector<std::vector<int>> chains;
    for (size_t c = 0; c < crossing_uv.size(); ++c) {
        if (adj[c].size() == 1) {
            bool fresh = false;
            for (const auto& [nbr, sidx] : adj[c]) fresh |= !seg_used[sidx];
            if (fresh) chains.push_back(walk(static_cast<int>(c)));
        }
    }
    for (size_t c = 0; c < crossing_uv.size(); ++c) {  // remaining loops
        for (const auto& [nbr, sidx] : adj[c]) {
            if (!seg_used[sidx]) {
                chains.push_back(walk(static_cast<int>(c)));
                break;
            }
        }
    }

    for (const auto& chain : chains) {
        if (chain.size() < 2) continue;
        const bool closed = chain.size() > 2 && chain.front() == chain.back();
        std::vector<Vec2> uvp;
        std::vector<Vec3> xyzp;
        const size_t npts = closed ? chain.size() - 1 : chain.size();
        for (size_t k = 0; k < npts; ++k) {
            const Vec2 p = crossing_uv[chain[k]];
            uvp.push_back(p);
            xyzp.push_back(S.eval(p.x(), p.y()));
        }
        out.uv_polylines.push_back(std::move(uvp));
        out.xyz_polylines.push_back(std::move(xyzp));
        out.polyline_closed.push_back(closed);
    }
    for (double fv : crossing_f) out.field_residual = std::max(out.field_residual, fv);
    return out;
}

/// The theta = pi/2 special case.
inline IsophoteTrace silhouette(const ParamSurface& S, const Vec3& d, int nu, int nv,
                                double trace_tol = 1e-9,
                                const Tolerances& tol = Tolerances::defaults()) {
    return trace_isophote(S, d, kPi / 2, nu, nv, trace_tol, tol);
}

}  // namespace isophote
