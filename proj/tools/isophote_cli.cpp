// Command-line front end: runs verification jobs against the surface/curve
// catalog, either directly (verb + key=value arguments) or from a JSON scene
// file, and writes traces, meshes, plots, and reports into a timestamped
// output directory.
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isophote/jobs.hpp"
#include "isophote/scene.hpp"

namespace fs = std::filesystem;
using namespace isophote;

namespace {

constexpr const char* kUsageNotes = R"(verbs:
  run <scene.json>                        run all jobs of a scene file
  trace <surface> d=X,Y,Z theta=<angle> [grid=NxM] [trace_tol=..]
  silhouette <surface> d=X,Y,Z [grid=NxM]
  mu|axis|classify|gauss-map surface=<kind> (u0|v0)=<number> [t0=..] [t1=..] [closed=true] [samples=N] [theta=<angle>]
  tube spine=<curve> r=<radius> [branch=Minus|Plus] [mesh=NxM]
  canal spine=<curve> slope=<r'> intercept=<c> [branch=..] [mesh=NxM]
  radius-law kind=cor3a|cor3b|prop1 <law params> [grid_sweep=true n1=50 n2=50]
  verify-theorem4 spine=<curve> r=<radius> v0=<angle> [d=X,Y,Z] [theta=<angle>]
  verify-prop2 spine=<curve> r=<radius>
  verify-prop3 spine=<curve> r=<radius>
  example1 [a=2] [b=1]

catalog surfaces: sphere, cylinder, torus, graph   (scene files add
rectifying_developable, tube, canal with full parameter control)
catalog curves:   circle, circular_helix, slant_helix, line

angles take an explicit unit suffix: 60deg or 1.0472rad.

exit code classes:
  0  every job check passed
  1  at least one job check failed
  2  configuration error (bad scene, unknown id/verb, parameter out of range)
  3  numeric/geometry error (singular data, vanishing curvature, ...)
  4  I/O error
)";

json guess_value(const std::string& v) {
    if (v == "true") return json(true);
    if (v == "false") return json(false);
    if (v.find_first_not_of("+-0123456789.eE") == std::string::npos) {
        try {
            size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos == v.size()) return json(d);
        } catch (const std::exception&) {
        }
    }
    return json(v);  // angles, grids, vectors, names stay strings
}

// direct-mode argument tokens are key=value pairs; a bare first token names a
// catalog surface (matching e.g. `trace sphere d=0,0,1 theta=60deg`)
json parse_tokens(const std::vector<std::string>& tokens, SceneConfig& cfg) {
    json args = json::object();
    const std::set<std::string> surface_kinds{"sphere", "cylinder", "torus", "graph"};
    const std::set<std::string> curve_kinds{"circle", "circular_helix", "slant_helix", "line"};

    auto ensure_surface = [&](const std::string& kind) {
        for (const auto& s : cfg.surfaces)
            if (s.id == kind) return;
        cfg.surfaces.push_back({kind, kind, json::object()});
    };
    auto ensure_curve = [&](const std::string& kind) {
        for (const auto& c : cfg.curves)
            if (c.id == kind) return;
        cfg.curves.push_back({kind, kind, json::object()});
    };

    for (const auto& tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (!surface_kinds.count(tok))
                throw ParseError("unexpected argument '" + tok +
                                 "' (expected key=value or a catalog surface name)");
            ensure_surface(tok);
            args["surface"] = tok;
            continue;
        }
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "surface" && surface_kinds.count(value)) ensure_surface(value);
        if (key == "spine" && curve_kinds.count(value)) ensure_curve(value);
        args[key] = guess_value(value);
    }
    return args;
}

// curve-centric verbs in direct mode synthesize an iso-parameter curve
void synthesize_curve(json& args, SceneConfig& cfg) {
    if (args.contains("curve")) return;
    if (!args.contains("surface"))
        throw ParseError("this verb needs surface=<kind> plus u0= or v0=");
    const std::string sid = args.at("surface").get<std::string>();
    const bool iso_u = args.contains("u0");
    if (!iso_u && !args.contains("v0")) throw ParseError("give u0=<value> or v0=<value>");
    json params;
    params["surface"] = sid;
    params[iso_u ? "u0" : "v0"] = args.at(iso_u ? "u0" : "v0");
    // default parameter range: the full cross direction of known catalogs
    double t0 = 0.0, t1 = 1.0;
    bool closed = false;
    if (sid == "sphere") {
        t0 = iso_u ? -1.4 : 0.0;
        t1 = iso_u ? 1.4 : kTwoPi;
        closed = !iso_u;
    } else if (sid == "cylinder") {
        t0 = iso_u ? -2.0 : 0.0;
        t1 = iso_u ? 2.0 : kTwoPi;
        closed = !iso_u;
    } else if (sid == "torus") {
        t0 = 0.0;
        t1 = kTwoPi;
        closed = true;
    }
    params["t0"] = args.value("t0", t0);
    params["t1"] = args.value("t1", t1);
    params["closed"] = args.value("closed", closed);
    cfg.curves.push_back({"__curve", iso_u ? "iso_u" : "iso_v", params});
    args["curve"] = "__curve";
    args.erase("surface");
    args.erase("u0");
    args.erase("v0");
    args.erase("t0");
    args.erase("t1");
    args.erase("closed");
}

fs::path timestamped_subdir(const fs::path& base) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&t));
    fs::path dir = base / buf;
    for (int k = 1; fs::exists(dir); ++k) dir = base / (std::string(buf) + "-" + std::to_string(k));
    return dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isophote: traces isophote curves on parametric surfaces, reconstructs their "
                 "fixed axis from Darboux-frame data, classifies them against special curve "
                 "families, and builds canal/tube surfaces with isophote parameter curves"};
    app.footer(kUsageNotes);

    std::string outdir_flag;
    unsigned seed = 12345;
    std::vector<std::string> tol_overrides;
    app.add_option("--outdir", outdir_flag,
                   "output directory (default $ISOPHOTE_OUTDIR or ./isophote-out)");
    app.add_option("--seed", seed, "seed for randomized sampling (default 12345)");
    app.add_option("--tol", tol_overrides, "tolerance override name=value (repeatable)");
    app.allow_extras();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::vector<std::string> tokens = app.remaining();
    if (tokens.empty()) {
        std::cout << app.help() << "\n";
        return 2;
    }

    try {
        Tolerances tol;
        for (const auto& ov : tol_overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos) throw ParseError("--tol expects name=value");
            tol.set(ov.substr(0, eq), std::stod(ov.substr(eq + 1)));
        }

        fs::path base = outdir_flag.empty()
                            ? (std::getenv("ISOPHOTE_OUTDIR")
                                   ? fs::path(std::getenv("ISOPHOTE_OUTDIR"))
                                   : fs::path("isophote-out"))
                            : fs::path(outdir_flag);

        SceneConfig cfg;
        const std::string verb = tokens.front();
        tokens.erase(tokens.begin());
        if (verb == "run") {
            if (tokens.size() != 1) throw ParseError("run takes exactly one scene file");
            std::ifstream f(tokens[0]);
            if (!f) throw IoError("cannot open scene file " + tokens[0]);
            std::stringstream ss;
            ss << f.rdbuf();
            cfg = parse_scene(ss.str());
        } else {
            if (!detail::job_verbs().count(verb)) throw ParseError("unknown verb '" + verb + "'");
            json args = parse_tokens(tokens, cfg);
            if (verb == "mu" || verb == "axis" || verb == "classify" || verb == "gauss-map")
                synthesize_curve(args, cfg);
            JobDef job;
            job.verb = verb;
            job.args = args;
            cfg.jobs.push_back(job);
            // validate the synthesized scene the same way files are validated
            cfg = parse_scene(serialize_scene(cfg));
        }

        RunOptions opt;
        opt.outdir = timestamped_subdir(base);
        opt.seed = seed;
        opt.tol = tol;
        const VerificationReport report = run_scene(cfg, opt);
        std::cout << report.to_text();
        std::cout << "artifacts in " << opt.outdir.string() << "\n";
        return report.all_passed() ? 0 : 1;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::ParseError:
            case ErrorKind::UnknownCatalogId:
            case ErrorKind::ParameterOutOfRange:
                return 2;
            case ErrorKind::IoError:
                return 4;
            default:
                return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
