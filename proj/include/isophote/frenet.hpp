#pragma once
#include <optional>
#include <string>
#include <vector>

#include "isophote/errors.hpp"
#include "isophote/numeric.hpp"
#include "isophote/space_curve.hpp"
#include "isophote/tolerances.hpp"

namespace isophote {

/// Frenet frame and scalars of a unit-speed curve at arc length s.
/// kappa = |alpha''|, tau = <alpha' x alpha'', alpha'''> / kappa^2.
struct FrenetData {
    double s = 0.0;
    Vec3 T = Vec3::UnitX();
    Vec3 n = Vec3::UnitY();
    Vec3 b = Vec3::UnitZ();
    double kappa = 0.0;
    double tau = 0.0;
};

inline FrenetData frenet_at(const SpaceCurve& curve, double s,
                            const Tolerances& tol = Tolerances::defaults()) {
    if (!curve.is_unit_speed())
        throw NotUnitSpeed("frenet_at requires an arc-length parametrized curve");
    FrenetData f;
    f.s = s;
    const Vec3 d1 = curve.derivative1(s);
    const Vec3 d2 = curve.derivative2(s);
    f.kappa = d2.norm();
    if (f.kappa < tol.eps_degenerate)
        throw VanishingCurvature("kappa below tolerance at s=" + std::to_string(s));
    const Vec3 d3 = curve.derivative3(s);
    f.T = d1;
    f.n = d2 / f.kappa;
    f.b = f.T.cross(f.n);
    f.tau = d1.cross(d2).dot(d3) / (f.kappa * f.kappa);
    return f;
}

enum class HelixKind { GeneralHelix, SlantHelix, Both, Neither };

inline const char* helix_kind_name(HelixKind k) {
    switch (k) {
        case HelixKind::GeneralHelix: return "GeneralHelix";
        case HelixKind::SlantHelix:   return "SlantHelix";
        case HelixKind::Both:         return "Both";
        case HelixKind::Neither:      return "Neither";
    }
    return "Unknown";
}

/// Helix-family detection evidence. tau/kappa constant <=> general helix;
/// sigma = kappa^2 (tau/kappa)' / (kappa^2+tau^2)^{3/2} constant <=> slant helix.
/// Plane curves (tau ~ 0) satisfy the general-helix test literally and are
/// reported as such with degenerate_planar set.
struct HelixVerdict {
    HelixKind kind = HelixKind::Neither;
    ConstancyResult tau_over_kappa;
    ConstancyResult sigma;
    std::vector<double> s;              ///< sample parameters
    std::vector<double> kappa, tau;     ///< per-sample scalars
    std::vector<double> sigma_samples;  ///< per-sample sigma
    bool degenerate_planar = false;
};

inline HelixVerdict classify_helix(const SpaceCurve& curve, int samples,
                                   double const_atol = 1e-6, double const_rtol = 1e-6,
                                   const Tolerances& tol = Tolerances::defaults()) {
    if (samples < 8) throw TooFewSamples("classify_helix needs >= 8 samples");
    HelixVerdict v;
    v.s = curve.sample_params(samples);
    const double h = v.s[1] - v.s[0];
    v.kappa.reserve(v.s.size());
    v.tau.reserve(v.s.size());
    std::vector<double> ratio;
    ratio.reserve(v.s.size());
    for (double s : v.s) {
        const FrenetData f = frenet_at(curve, s, tol);  // throws VanishingCurvature if kappa ~ 0
        v.kappa.push_back(f.kappa);
        v.tau.push_back(f.tau);
        ratio.push_back(f.tau / f.kappa);
    }
    // sigma = kappa^2 (tau/kappa)' / (kappa^2+tau^2)^{3/2}, expanded by the
    // quotient rule to (tau' kappa - tau kappa') / (kappa^2+tau^2)^{3/2}:
    // differencing kappa and tau separately stays conditioned where the raw
    // ratio blows up.
    const std::vector<double> dkappa = grid_derivative(v.kappa, h, curve.is_closed());
    const std::vector<double> dtau = grid_derivative(v.tau, h, curve.is_closed());
    v.sigma_samples.resize(v.s.size());
    for (size_t i = 0; i < v.s.size(); ++i) {
        const double k2t2 = v.kappa[i] * v.kappa[i] + v.tau[i] * v.tau[i];
        if (k2t2 < tol.eps_degenerate * tol.eps_degenerate)
            throw VanishingCurvature("kappa^2 + tau^2 below tolerance");
        v.sigma_samples[i] =
            (dtau[i] * v.kappa[i] - v.tau[i] * dkappa[i]) / std::pow(k2t2, 1.5);
    }
    v.tau_over_kappa = constancy_test(ratio, const_atol, const_rtol);
    v.sigma = constancy_test(v.sigma_samples, const_atol, const_rtol);

    double max_abs_tau = 0.0;
    for (double t : v.tau) max_abs_tau = std::max(max_abs_tau, std::abs(t));
    v.degenerate_planar = max_abs_tau <= const_atol;

    const bool general = v.tau_over_kappa.constant;
    const bool slant = v.sigma.constant;
    if (v.degenerate_planar) v.kind = HelixKind::GeneralHelix;  // tau == 0 passes the test literally
    else if (general && slant) v.kind = HelixKind::Both;
    else if (general) v.kind = HelixKind::GeneralHelix;
    else if (slant) v.kind = HelixKind::SlantHelix;
    else v.kind = HelixKind::Neither;
    return v;
}

}  // namespace isophote
