#pragma once
#include <array>
#include <string>
#include <string_view>

#include "isophote/errors.hpp"

namespace isophote {

/// Named tolerance table. Every certification in a report cites one of these
/// by name so that pass/fail lines are reproducible. Values may be overridden
/// per job (CLI: --tol name=value).
struct Tolerances {
    double eps_degenerate = 1e-9;   ///< eps_deg: below this, speeds/curvatures/normal data count as degenerate
    double frame_rtol     = 1e-6;   ///< residual bound for frame-equation consistency checks
    double trace_tol      = 1e-9;   ///< |field| bound for refined contour crossings
    double axis_tol       = 1e-6;   ///< max spread of the per-sample axis for certification
    double class_tol      = 1e-6;   ///< threshold for classification rules (|k_g|, |k_n|, |tau_g|, ...)
    double const_atol     = 1e-6;   ///< constancy test: absolute part
    double const_rtol     = 1e-6;   ///< constancy test: relative part
    double quad_tol       = 1e-10;  ///< arc-length quadrature convergence target
    double gauss_plane_tol  = 1e-6;  ///< Gauss-map image planarity for certified isophotes
    double gauss_match_tol  = 1e-5;  ///< agreement between kbar_g and mu
    double envelope_tol     = 1e-8;  ///< moving-sphere identity residuals on canal surfaces
    double normal_xcheck_tol = 1e-7; ///< angle between the two canal-normal routes
    double iso_general_tol  = 1e-9;  ///< stdev of <N, d> along general-helix tube isophotes
    double iso_slant_tol    = 1e-8;  ///< stdev of <N, d> along slant-helix tube isophotes
    double theorem4_tol     = 1e-8;  ///< canal-isophote identity residual (best branch)

    static const Tolerances& defaults() {
        static const Tolerances t{};
        return t;
    }

    static constexpr std::array<std::string_view, 15> names() {
        return {"eps_degenerate", "frame_rtol", "trace_tol", "axis_tol", "class_tol",
                "const_atol", "const_rtol", "quad_tol", "gauss_plane_tol", "gauss_match_tol",
                "envelope_tol", "normal_xcheck_tol", "iso_general_tol", "iso_slant_tol",
                "theorem4_tol"};
    }

    double get(std::string_view name) const {
        if (name == "eps_degenerate") return eps_degenerate;
        if (name == "frame_rtol") return frame_rtol;
        if (name == "trace_tol") return trace_tol;
        if (name == "axis_tol") return axis_tol;
        if (name == "class_tol") return class_tol;
        if (name == "const_atol") return const_atol;
        if (name == "const_rtol") return const_rtol;
        if (name == "quad_tol") return quad_tol;
        if (name == "gauss_plane_tol") return gauss_plane_tol;
        if (name == "gauss_match_tol") return gauss_match_tol;
        if (name == "envelope_tol") return envelope_tol;
        if (name == "normal_xcheck_tol") return normal_xcheck_tol;
        if (name == "iso_general_tol") return iso_general_tol;
        if (name == "iso_slant_tol") return iso_slant_tol;
        if (name == "theorem4_tol") return theorem4_tol;
        throw ParameterOutOfRange("unknown tolerance name '" + std::string(name) + "'");
    }

    void set(std::string_view name, double value) {
        if (name == "eps_degenerate") { eps_degenerate = value; return; }
        if (name == "frame_rtol") { frame_rtol = value; return; }
        if (name == "trace_tol") { trace_tol = value; return; }
        if (name == "axis_tol") { axis_tol = value; return; }
        if (name == "class_tol") { class_tol = value; return; }
        if (name == "const_atol") { const_atol = value; return; }
        if (name == "const_rtol") { const_rtol = value; return; }
        if (name == "quad_tol") { quad_tol = value; return; }
        if (name == "gauss_plane_tol") { gauss_plane_tol = value; return; }
        if (name == "gauss_match_tol") { gauss_match_tol = value; return; }
        if (name == "envelope_tol") { envelope_tol = value; return; }
        if (name == "normal_xcheck_tol") { normal_xcheck_tol = value; return; }
        if (name == "iso_general_tol") { iso_general_tol = value; return; }
        if (name == "iso_slant_tol") { iso_slant_tol = value; return; }
        if (name == "theorem4_tol") { theorem4_tol = value; return; }
        throw ParameterOutOfRange("unknown tolerance name '" + std::string(name) + "'");
    }
};

}  // namespace isophote
