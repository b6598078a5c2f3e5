#pragma once
#include <optional>
#include <vector>

#include "isophote/axis.hpp"
#include "isophote/darboux.hpp"
#include "isophote/errors.hpp"
#include "isophote/tolerances.hpp"

namespace isophote {

enum class IsophoteKind {
    GeodesicSlantHelix,
    AsymptoticGeneralHelix,
    LineOfCurvaturePlanar,
    Silhouette,
    Generic,
};

inline const char* isophote_kind_name(IsophoteKind k) {
    switch (k) {
        case IsophoteKind::GeodesicSlantHelix:      return "GeodesicSlantHelix";
        case IsophoteKind::AsymptoticGeneralHelix:  return "AsymptoticGeneralHelix";
        case IsophoteKind::LineOfCurvaturePlanar:   return "LineOfCurvaturePlanar";
        case IsophoteKind::Silhouette:              return "Silhouette";
        case IsophoteKind::Generic:                 return "Generic";
    }
    return "Unknown";
}

/// Classification of a certified isophote against the special-curve families.
/// Rules fire in a fixed priority order; all residuals that were evaluated are
/// kept as evidence regardless of which rule fired.
struct IsophoteClassification {
    IsophoteKind kind = IsophoteKind::Generic;
    double theta = 0.0;
    double max_abs_kg = 0.0;
    double max_abs_kn = 0.0;
    double max_abs_taug = 0.0;

    bool frenet_degenerate = false;  ///< straight-line case: kappa ~ 0, ratio tests skipped

    // Line-of-curvature evidence (rule 1): planarity and theta = -/+ phi.
    std::optional<double> max_abs_tau;
    std::optional<double> phi_theta_residual;

    // Geodesic evidence (rule 2): sigma constancy and the closed-form axis.
    std::optional<ConstancyResult> sigma;
    std::optional<double> axis_form_angular_error;

    // Asymptotic evidence (rule 3): tau/kappa constancy and tan(theta) = -/+ tau/kappa.
    std::optional<ConstancyResult> tau_over_kappa;
    std::optional<double> tan_theta_ratio_residual;

    // Perpendicular-principal-normal evidence, reported for every kind:
    // <n, d> = 0 iff k_n = 0 or tau_g / k_n constant.
    std::optional<double> max_abs_n_dot_d;
    std::optional<ConstancyResult> taug_over_kn;
};

namespace detail {

/// Per-sample Theorem-2(1)-style axis candidates
///   d = s1 * tau/m sin(theta) T + s2 * cos(theta) n + s3 * kappa/m sin(theta) b,
/// m = sqrt(kappa^2 + tau^2); returns the sign combo with the smallest spread.
inline std::optional<std::pair<Vec3, double>> geodesic_axis_form(
    const std::vector<DarbouxSample>& samples, double theta) {
    for (const auto& d : samples)
        if (!d.tau || !d.phi) return std::nullopt;
    const double st = std::sin(theta), ct = std::cos(theta);
    std::optional<std::pair<Vec3, double>> best;
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            for (int s3 : {+1, -1}) {
                std::vector<Vec3> ds;
                ds.reserve(samples.size());
                Vec3 mean = Vec3::Zero();
                for (const auto& smp : samples) {
                    const auto [n, b] = rotate_to_frenet(smp);
                    const double m = std::hypot(smp.kappa, *smp.tau);
                    const Vec3 v = s1 * (*smp.tau / m) * st * smp.T + s2 * ct * n +
                                   s3 * (smp.kappa / m) * st * b;
                    ds.push_back(v);
                    mean += v;
                }
                mean.normalize();
                double spread = 0.0;
                for (const auto& v : ds) spread = std::max(spread, (v - mean).norm());
                if (!best || spread < best->second) best = {{mean, spread}};
            }
        }
    }
    return best;
}

}  // namespace detail

inline IsophoteClassification classify_isophote(const DarbouxTrace& trace,
                                                const MuProfile& profile, double class_tol,
                                                const Tolerances& tol = Tolerances::defaults()) {
    if (!profile.constant)
        throw NotCertifiedIsophote("mu(s) is not constant; classification applies to isophotes");
    IsophoteClassification c;
    c.theta = profile.theta_estimate;
    const auto& ss = trace.samples;

    double max_kappa = 0.0;
    bool have_frenet = true;
    for (const auto& d : ss) {
        c.max_abs_kg = std::max(c.max_abs_kg, std::abs(d.k_g));
        c.max_abs_kn = std::max(c.max_abs_kn, std::abs(d.k_n));
        c.max_abs_taug = std::max(c.max_abs_taug, std::abs(d.tau_g));
        max_kappa = std::max(max_kappa, d.kappa);
        have_frenet = have_frenet && d.tau.has_value();
    }

    // tau_g / k_n constancy where k_n is meaningfully nonzero (Theorem-3(2) evidence).
    {
        std::vector<double> ratio;
        for (const auto& d : ss)
            if (std::abs(d.k_n) > tol.eps_degenerate) ratio.push_back(d.tau_g / d.k_n);
        if (ratio.size() >= 2) c.taug_over_kn = constancy_test(ratio, tol.const_atol, tol.const_rtol);
    }
    // <n, d> against the recovered axis, where the principal normal exists.
    if (!profile.degenerate_normal) {
        try {
            const IsophoteAxis axis = recover_axis_unchecked(trace, c.theta, tol);
            if (axis.certified && have_frenet) {
                double worst = 0.0;
                for (const auto& d : ss) {
                    const auto [n, b] = rotate_to_frenet(d);
                    worst = std::max(worst, std::abs(n.dot(axis.d)));
                }
                c.max_abs_n_dot_d = worst;
            }
        } catch (const GeometryError&) {
        }
    }

    if (have_frenet) {
        std::vector<double> taus;
        for (const auto& d : ss) taus.push_back(std::abs(*d.tau));
        c.max_abs_tau = compute_stats(taus).max;
    }

    // Rule 0: straight lines (kappa ~ 0 throughout). They are asymptotic
    // curves with the Frenet side of the evidence undefined.
    if (max_kappa <= class_tol) {
        c.kind = IsophoteKind::AsymptoticGeneralHelix;
        c.frenet_degenerate = true;
        return c;
    }

    // Rule 1: line of curvature (tau_g ~ 0) => planar, theta = -/+ phi.
    if (c.max_abs_taug <= class_tol) {
        c.kind = IsophoteKind::LineOfCurvaturePlanar;
        if (have_frenet) {
            double worst = 0.0;
            for (const auto& d : ss) {
                const double phi = *d.phi;
                const double r = std::min(
                    std::min(std::abs(c.theta - phi), std::abs(c.theta + phi)),
                    std::min(std::abs(c.theta - (kPi - phi)), std::abs(c.theta + (kPi - phi))));
                worst = std::max(worst, r);
            }
            c.phi_theta_residual = worst;
        }
        return c;
    }

    // Rule 2: geodesic (k_g ~ 0) => slant helix with the closed-form axis.
    if (c.max_abs_kg <= class_tol) {
        c.kind = IsophoteKind::GeodesicSlantHelix;
        if (have_frenet) {
            std::vector<double> kap(ss.size()), ta(ss.size());
            for (size_t i = 0; i < ss.size(); ++i) {
                kap[i] = ss[i].kappa;
                ta[i] = *ss[i].tau;
            }
            const auto dk = grid_derivative(kap, trace.ds, trace.closed);
            const auto dt = grid_derivative(ta, trace.ds, trace.closed);
            std::vector<double> sigma(ss.size());
            for (size_t i = 0; i < ss.size(); ++i) {
                const double m2 = kap[i] * kap[i] + ta[i] * ta[i];
                sigma[i] = (dt[i] * kap[i] - ta[i] * dk[i]) / std::pow(m2, 1.5);
            }
            c.sigma = constancy_test(sigma, tol.const_atol, tol.const_rtol);
            if (const auto form = detail::geodesic_axis_form(ss, c.theta)) {
                try {
                    const IsophoteAxis axis = recover_axis_unchecked(trace, c.theta, tol);
                    c.axis_form_angular_error = axis_angle_between(form->first, axis.d);
                } catch (const GeometryError&) {
                }
            }
        }
        return c;
    }

    // Rule 3: asymptotic (k_n ~ 0) => general helix, tan(theta) = -/+ tau/kappa.
    if (c.max_abs_kn <= class_tol) {
        c.kind = IsophoteKind::AsymptoticGeneralHelix;
        if (have_frenet) {
            std::vector<double> ratio(ss.size());
            for (size_t i = 0; i < ss.size(); ++i) ratio[i] = *ss[i].tau / ss[i].kappa;
            c.tau_over_kappa = constancy_test(ratio, tol.const_atol, tol.const_rtol);
            const double tt = std::tan(c.theta);
            double worst = 0.0;
            for (double r : ratio) worst = std::max(worst, std::min(std::abs(tt - r), std::abs(tt + r)));
            c.tan_theta_ratio_residual = worst;
        } else {
            c.frenet_degenerate = true;
        }
        return c;
    }

    // Rule 4: silhouette.
    if (std::abs(c.theta - kPi / 2) <= class_tol) {
        c.kind = IsophoteKind::Silhouette;
        return c;
    }

    c.kind = IsophoteKind::Generic;
    return c;
}

/// Overload for constant-normal curves, which cannot produce a regular
/// MuProfile: the caller passes the known cone angle theta.
inline IsophoteClassification classify_isophote_degenerate(
    const DarbouxTrace& trace, double theta, double class_tol,
    const Tolerances& tol = Tolerances::defaults()) {
    if (!has_constant_normal(trace, tol.eps_degenerate))
        throw NotCertifiedIsophote("degenerate classification requires a constant surface normal");
    MuProfile p = degenerate_mu_profile(trace, theta);
    return classify_isophote(trace, p, class_tol, tol);
}

}  // namespace isophote
