#pragma once
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "isophote/arclength.hpp"
#include "isophote/canal.hpp"
#include "isophote/catalog.hpp"
#include "isophote/curve_on_surface.hpp"
#include "isophote/errors.hpp"
#include "isophote/param_surface.hpp"

namespace isophote {

using json = nlohmann::json;

/// Angles in config files and on the command line carry an explicit unit
/// suffix ("60deg", "1.047rad"); stored internally in radians. Bare numbers in
/// JSON are accepted as radians.
inline double parse_angle(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string())
        throw ParseError(what + ": expected an angle (number in radians or \"<value>deg|rad\")");
    const std::string s = j.get<std::string>();
    size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(what + ": cannot parse angle '" + s + "'");
    }
    std::string unit = s.substr(pos);
    while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
    if (unit == "deg") return value * kPi / 180.0;
    if (unit == "rad") return value;
    throw ParseError(what + ": angle '" + s + "' needs a 'deg' or 'rad' suffix");
}

struct SurfaceDef {
    std::string id;
    std::string kind;
    json params = json::object();
};

struct CurveDef {
    std::string id;
    std::string kind;
    json params = json::object();
};

struct JobDef {
    std::string verb;
    json args = json::object();
};

struct SceneConfig {
    std::vector<SurfaceDef> surfaces;
    std::vector<CurveDef> curves;
    std::vector<JobDef> jobs;
};

struct ParseIssue {
    int line = 0;  ///< 1-based; 0 when the issue has no text position (semantic)
    int column = 0;
    std::string path;  ///< JSON path for semantic issues
    std::string message;

    std::string to_string() const {
        std::string s;
        if (line > 0) s += "line " + std::to_string(line) + ", col " + std::to_string(column) + ": ";
        if (!path.empty()) s += path + ": ";
        return s + message;
    }
};

struct SceneParseResult {
    std::optional<SceneConfig> config;
    std::vector<ParseIssue> errors;
    bool ok() const { return config.has_value() && errors.empty(); }
};

namespace detail {

inline ParseIssue issue_at(const std::string& text, size_t byte, const std::string& msg) {
    ParseIssue is;
    is.line = 1;
    is.column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++is.line;
            is.column = 1;
        } else {
            ++is.column;
        }
    }
    is.message = msg;
    return is;
}

inline const std::set<std::string>& surface_kinds() {
    static const std::set<std::string> k{"sphere", "cylinder", "torus", "graph",
                                         "rectifying_developable", "tube", "canal"};
    return k;
}

inline const std::set<std::string>& curve_kinds() {
    static const std::set<std::string> k{"circle", "circular_helix", "slant_helix",
                                         "line", "iso_u", "iso_v"};
    return k;
}

inline const std::set<std::string>& job_verbs() {
    static const std::set<std::string> k{"trace",  "silhouette", "axis",       "mu",
                                         "classify", "gauss-map", "canal",     "tube",
                                         "radius-law", "verify-theorem4", "verify-prop2",
                                         "verify-prop3", "example1"};
    return k;
}

inline double num_or(const json& j, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw ParseError("'" + key + "' must be a number");
    return j.at(key).get<double>();
}

// Per-kind parameter validation; keeps range errors at parse time.
inline void validate_surface_params(const SurfaceDef& def, std::vector<ParseIssue>& errors,
                                    const std::set<std::string>& curve_ids) {
    auto err = [&](const std::string& msg) {
        errors.push_back({0, 0, "surfaces/" + def.id, msg});
    };
    const json& p = def.params;
    try {
        if (def.kind == "sphere") {
            if (num_or(p, "radius", 1.0) <= 0) err("radius must be positive");
        } else if (def.kind == "cylinder") {
            if (num_or(p, "radius", 1.0) <= 0) err("radius must be positive");
            if (num_or(p, "v_min", -2.0) >= num_or(p, "v_max", 2.0)) err("empty height range");
        } else if (def.kind == "torus") {
            const double R = num_or(p, "R", 2.0), r = num_or(p, "r", 0.5);
            if (!(R > r && r > 0)) err("need R > r > 0");
        } else if (def.kind == "graph") {
            if (num_or(p, "u_min", -1.0) >= num_or(p, "u_max", 1.0)) err("empty u range");
            if (num_or(p, "v_min", -1.0) >= num_or(p, "v_max", 1.0)) err("empty v range");
        } else if (def.kind == "rectifying_developable") {
            if (!p.contains("curve") || !p.at("curve").is_string())
                err("needs a 'curve' id");
            else if (!curve_ids.count(p.at("curve").get<std::string>()))
                errors.push_back({0, 0, "surfaces/" + def.id,
                                  "UnknownCatalogId: curve '" +
                                      p.at("curve").get<std::string>() + "' is not defined"});
            if (num_or(p, "w_min", -0.5) >= num_or(p, "w_max", 0.5)) err("empty ruling range");
        } else if (def.kind == "tube" || def.kind == "canal") {
            if (!p.contains("spine") || !p.at("spine").is_string())
                err("needs a 'spine' curve id");
            else if (!curve_ids.count(p.at("spine").get<std::string>()))
                errors.push_back({0, 0, "surfaces/" + def.id,
                                  "UnknownCatalogId: curve '" +
                                      p.at("spine").get<std::string>() + "' is not defined"});
            if (def.kind == "tube" && num_or(p, "radius", 0.3) <= 0)
                err("tube radius must be positive");
            if (def.kind == "canal") {
                const bool has_slope = p.contains("slope");
                const bool has_law = p.contains("law");
                if (!has_slope && !has_law) err("canal needs 'slope' or 'law'");
                if (has_slope && std::abs(p.at("slope").get<double>()) >= 1.0)
                    err("|slope| must be < 1");
                if (num_or(p, "intercept", 1.0) <= 0) err("intercept must be positive");
            }
            if (p.contains("branch")) {
                const std::string b = p.at("branch").get<std::string>();
                if (b != "Minus" && b != "Plus") err("branch must be 'Minus' or 'Plus'");
            }
        }
    } catch (const std::exception& e) {
        err(e.what());
    }
}

inline void validate_curve_params(const CurveDef& def, std::vector<ParseIssue>& errors,
                                  const std::set<std::string>& surface_ids) {
    auto err = [&](const std::string& msg) {
        errors.push_back({0, 0, "curves/" + def.id, msg});
    };
    const json& p = def.params;
    try {
        if (def.kind == "circle") {
            if (num_or(p, "radius", 1.0) <= 0) err("radius must be positive");
        } else if (def.kind == "circular_helix") {
            if (num_or(p, "a", 1.0) <= 0) err("a must be positive");
            if (num_or(p, "turns", 1.0) <= 0) err("turns must be positive");
        } else if (def.kind == "slant_helix") {
            const double a = num_or(p, "a", 2.0), b = num_or(p, "b", 1.0);
            if (!(a > b && b > 0)) err("need a > b > 0");
        } else if (def.kind == "line") {
            if (num_or(p, "s_min", 0.0) >= num_or(p, "s_max", 1.0)) err("empty range");
        } else if (def.kind == "iso_u" || def.kind == "iso_v") {
            if (!p.contains("surface") || !p.at("surface").is_string())
                err("needs a 'surface' id");
            else if (!surface_ids.count(p.at("surface").get<std::string>()))
                errors.push_back({0, 0, "curves/" + def.id,
                                  "UnknownCatalogId: surface '" +
                                      p.at("surface").get<std::string>() + "' is not defined"});
            if (num_or(p, "t0", 0.0) >= num_or(p, "t1", 1.0)) err("empty parameter range");
        }
    } catch (const std::exception& e) {
        err(e.what());
    }
}

}  // namespace detail

/// Parses the JSON scene text, collecting located syntax errors and
/// path-located semantic errors (unknown kinds/ids, out-of-range parameters).
inline SceneParseResult try_parse_scene(const std::string& text) {
    SceneParseResult out;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        out.errors.push_back(detail::issue_at(text, e.byte > 0 ? e.byte - 1 : 0, e.what()));
        return out;
    }
    if (!doc.is_object()) {
        out.errors.push_back({1, 1, "", "scene must be a JSON object"});
        return out;
    }

    SceneConfig cfg;
    std::set<std::string> surface_ids, curve_ids;
    auto read_entities = [&](const char* section, auto&& fn) {
        if (!doc.contains(section)) return;
        if (!doc.at(section).is_array()) {
            out.errors.push_back({0, 0, section, "must be an array"});
            return;
        }
        size_t idx = 0;
        for (const auto& e : doc.at(section)) {
            fn(e, idx++);
        }
    };

    read_entities("curves", [&](const json& e, size_t idx) {
        CurveDef def;
        const std::string path = "curves[" + std::to_string(idx) + "]";
        if (!e.is_object() || !e.contains("id") || !e.contains("kind")) {
            out.errors.push_back({0, 0, path, "each curve needs 'id' and 'kind'"});
            return;
        }
        def.id = e.at("id").get<std::string>();
        def.kind = e.at("kind").get<std::string>();
        def.params = e.value("params", json::object());
        if (!detail::curve_kinds().count(def.kind)) {
            out.errors.push_back({0, 0, path,
                                  "UnknownCatalogId: curve kind '" + def.kind + "'"});
            return;
        }
        if (!curve_ids.insert(def.id).second)
            out.errors.push_back({0, 0, path, "duplicate curve id '" + def.id + "'"});
        cfg.curves.push_back(def);
    });
    read_entities("surfaces", [&](const json& e, size_t idx) {
        SurfaceDef def;
        const std::string path = "surfaces[" + std::to_string(idx) + "]";
        if (!e.is_object() || !e.contains("id") || !e.contains("kind")) {
            out.errors.push_back({0, 0, path, "each surface needs 'id' and 'kind'"});
            return;
        }
        def.id = e.at("id").get<std::string>();
        def.kind = e.at("kind").get<std::string>();
        def.params = e.value("params", json::object());
        if (!detail::surface_kinds().count(def.kind)) {
            out.errors.push_back({0, 0, path,
                                  "UnknownCatalogId: surface kind '" + def.kind + "'"});
            return;
        }
        if (!surface_ids.insert(def.id).second)
            out.errors.push_back({0, 0, path, "duplicate surface id '" + def.id + "'"});
        cfg.surfaces.push_back(def);
    });
    read_entities("jobs", [&](const json& e, size_t idx) {
        JobDef def;
        const std::string path = "jobs[" + std::to_string(idx) + "]";
        if (!e.is_object() || !e.contains("verb")) {
            out.errors.push_back({0, 0, path, "each job needs a 'verb'"});
            return;
        }
        def.verb = e.at("verb").get<std::string>();
        def.args = e;
        def.args.erase("verb");
        if (!detail::job_verbs().count(def.verb)) {
            out.errors.push_back({0, 0, path, "unknown job verb '" + def.verb + "'"});
            return;
        }
        cfg.jobs.push_back(def);
    });

    for (const auto& c : cfg.curves) detail::validate_curve_params(c, out.errors, surface_ids);
    for (const auto& s : cfg.surfaces) detail::validate_surface_params(s, out.errors, curve_ids);

    if (out.errors.empty()) out.config = std::move(cfg);
    return out;
}

inline SceneConfig parse_scene(const std::string& text) {
    SceneParseResult r = try_parse_scene(text);
    if (!r.ok()) {
        std::string msg = "scene has " + std::to_string(r.errors.size()) + " error(s):";
        for (const auto& e : r.errors) msg += "\n  " + e.to_string();
        // surface the most specific error kind when there is a single cause
        if (r.errors.size() == 1 && r.errors[0].message.rfind("UnknownCatalogId", 0) == 0)
            throw UnknownCatalogId(r.errors[0].to_string());
        throw ParseError(msg);
    }
    return *r.config;
}

/// Canonical serialization: sorted keys, two-space indent, newline-terminated.
/// parse_scene(serialize_scene(cfg)) reproduces cfg exactly.
inline std::string serialize_scene(const SceneConfig& cfg) {
    json doc = json::object();
    doc["curves"] = json::array();
    for (const auto& c : cfg.curves) {
        json e;
        e["id"] = c.id;
        e["kind"] = c.kind;
        if (!c.params.empty()) e["params"] = c.params;
        doc["curves"].push_back(e);
    }
    doc["surfaces"] = json::array();
    for (const auto& s : cfg.surfaces) {
        json e;
        e["id"] = s.id;
        e["kind"] = s.kind;
        if (!s.params.empty()) e["params"] = s.params;
        doc["surfaces"].push_back(e);
    }
    doc["jobs"] = json::array();
    for (const auto& jdef : cfg.jobs) {
        json e = jdef.args;
        e["verb"] = jdef.verb;
        doc["jobs"].push_back(e);
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Resolution into live geometry
// ---------------------------------------------------------------------------

struct ResolvedScene {
    std::map<std::string, std::shared_ptr<ParamSurface>> surfaces;
    std::map<std::string, CatalogCurve> space_curves;
    std::map<std::string, CurveOnSurface> surface_curves;
    std::map<std::string, CanalSpec> canal_specs;  ///< for tube/canal surfaces

    bool has_curve(const std::string& id) const {
        return space_curves.count(id) || surface_curves.count(id);
    }
};

inline ResolvedScene resolve_scene(const SceneConfig& cfg,
                                   const Tolerances& tol = Tolerances::defaults()) {
    using detail::num_or;
    ResolvedScene rs;
    // space curves first (no dependencies)
    for (const auto& c : cfg.curves) {
        const json& p = c.params;
        if (c.kind == "circle") {
            rs.space_curves.emplace(c.id, catalog::circle(num_or(p, "radius", 1.0)));
        } else if (c.kind == "circular_helix") {
            rs.space_curves.emplace(
                c.id, catalog::circular_helix(num_or(p, "a", 1.0), num_or(p, "b", 1.0),
                                              num_or(p, "turns", 1.0)));
        } else if (c.kind == "slant_helix") {
            const double a = num_or(p, "a", 2.0), b = num_or(p, "b", 1.0);
            const double half = 0.85 * kPi / (2.0 * b);
            rs.space_curves.emplace(c.id,
                                    catalog::slant_helix(a, b, num_or(p, "s_min", -half),
                                                         num_or(p, "s_max", half)));
        } else if (c.kind == "line") {
            Vec3 origin = Vec3::Zero(), dir = Vec3::UnitZ();
            if (p.contains("origin"))
                for (int k = 0; k < 3; ++k) origin[k] = p.at("origin").at(k).get<double>();
            if (p.contains("direction"))
                for (int k = 0; k < 3; ++k) dir[k] = p.at("direction").at(k).get<double>();
            rs.space_curves.emplace(c.id, catalog::line(origin, dir, num_or(p, "s_min", 0.0),
                                                        num_or(p, "s_max", 1.0)));
        }
    }
    // surfaces (may reference space curves)
    for (const auto& s : cfg.surfaces) {
        const json& p = s.params;
        if (s.kind == "sphere") {
            rs.surfaces[s.id] = catalog::sphere(num_or(p, "radius", 1.0));
        } else if (s.kind == "cylinder") {
            rs.surfaces[s.id] = catalog::cylinder(num_or(p, "radius", 1.0),
                                                  num_or(p, "v_min", -2.0), num_or(p, "v_max", 2.0));
        } else if (s.kind == "torus") {
            rs.surfaces[s.id] = catalog::torus(num_or(p, "R", 2.0), num_or(p, "r", 0.5));
        } else if (s.kind == "graph") {
            rs.surfaces[s.id] =
                catalog::graph(num_or(p, "ax", 1.0), num_or(p, "by", -1.0),
                               num_or(p, "u_min", -1.0), num_or(p, "u_max", 1.0),
                               num_or(p, "v_min", -1.0), num_or(p, "v_max", 1.0));
        } else if (s.kind == "rectifying_developable") {
            const std::string cid = p.at("curve").get<std::string>();
            auto it = rs.space_curves.find(cid);
            if (it == rs.space_curves.end())
                throw UnknownCatalogId("rectifying_developable needs a space curve, got '" + cid + "'");
            rs.surfaces[s.id] = catalog::rectifying_developable(
                it->second, num_or(p, "w_min", -0.5), num_or(p, "w_max", 0.5));
        } else if (s.kind == "tube" || s.kind == "canal") {
            const std::string cid = p.at("spine").get<std::string>();
            auto it = rs.space_curves.find(cid);
            if (it == rs.space_curves.end())
                throw UnknownCatalogId("canal spine must be a space curve, got '" + cid + "'");
            const CanalBranch branch =
                p.value("branch", std::string("Minus")) == "Plus" ? CanalBranch::Plus
                                                                  : CanalBranch::Minus;
            CanalSpec spec;
            if (s.kind == "tube") {
                spec = make_tube_spec(it->second.curve, num_or(p, "radius", 0.3), branch);
            } else if (p.contains("law")) {
                const json& law = p.at("law");
                const std::string kind = law.at("kind").get<std::string>();
                RadiusLaw rl;
                if (kind == "cor3a") {
                    rl = radius_law_linear_cor3a(
                        parse_angle(law.at("theta"), "law.theta"),
                        parse_angle(law.at("v"), "law.v"),
                        law.value("sign", std::string("Minus")) == "Plus" ? SignBranch::Plus
                                                                          : SignBranch::Minus);
                } else if (kind == "cor3b") {
                    rl = radius_law_integral_cor3b(parse_angle(law.at("beta"), "law.beta"),
                                                   parse_angle(law.at("v"), "law.v"),
                                                   parse_angle(law.at("phi"), "law.phi"));
                } else if (kind == "prop1") {
                    rl = radius_law_prop1(parse_angle(law.at("theta"), "law.theta"),
                                          parse_angle(law.at("v"), "law.v"));
                } else {
                    throw UnknownCatalogId("radius law kind '" + kind + "'");
                }
                spec = make_linear_canal_spec(it->second.curve, rl.slope,
                                              num_or(p, "intercept", 1.0), branch);
            } else {
                spec = make_linear_canal_spec(it->second.curve, num_or(p, "slope", 0.0),
                                              num_or(p, "intercept", 1.0), branch);
            }
            rs.surfaces[s.id] = make_canal_surface(spec, tol);
            rs.canal_specs.emplace(s.id, std::move(spec));
        }
    }
    // curves on surfaces
    for (const auto& c : cfg.curves) {
        if (c.kind != "iso_u" && c.kind != "iso_v") continue;
        const json& p = c.params;
        const std::string sid = p.at("surface").get<std::string>();
        auto it = rs.surfaces.find(sid);
        if (it == rs.surfaces.end()) throw UnknownCatalogId("surface '" + sid + "'");
        const double t0 = num_or(p, "t0", 0.0), t1 = num_or(p, "t1", 1.0);
        const bool closed = p.value("closed", false);
        if (c.kind == "iso_u") {
            rs.surface_curves.emplace(
                c.id, CurveOnSurface::iso_u(it->second, num_or(p, "u0", 0.0), t0, t1, closed));
        } else {
            rs.surface_curves.emplace(
                c.id, CurveOnSurface::iso_v(it->second, num_or(p, "v0", 0.0), t0, t1, closed));
        }
    }
    return rs;
}

}  // namespace isophote
