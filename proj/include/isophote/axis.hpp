#pragma once
#include <optional>
#include <vector>

#include "isophote/darboux.hpp"
#include "isophote/errors.hpp"
#include "isophote/numeric.hpp"
#include "isophote/tolerances.hpp"

namespace isophote {

/// Per-sample profile of mu(s), the geodesic curvature of the Gauss-map image.
/// A curve is an isophote exactly when mu is constant, and then cot(theta) =
/// |mu|. Computed in the quotient-expanded form
///   mu = (k_n tau_g' - k_n' tau_g + k_g (k_n^2 + tau_g^2)) / (k_n^2 + tau_g^2)^{3/2},
/// which stays finite when k_n crosses zero.
struct MuProfile {
    std::vector<double> s;
    std::vector<double> mu;
    ConstancyResult constancy;
    bool constant = false;
    double theta_estimate = 0.0;  ///< arccot(|median mu|), in [0, pi/2]
    bool degenerate_normal = false;  ///< N is constant along the curve; mu is undefined
};

inline MuProfile mu_invariant(const DarbouxTrace& trace,
                              const Tolerances& tol = Tolerances::defaults()) {
    const auto& ss = trace.samples;
    if (ss.size() < 5) throw TooFewSamples("mu_invariant needs >= 5 samples");
    MuProfile out;
    std::vector<double> kn(ss.size()), tg(ss.size());
    for (size_t i = 0; i < ss.size(); ++i) {
        kn[i] = ss[i].k_n;
        tg[i] = ss[i].tau_g;
        const double m2 = kn[i] * kn[i] + tg[i] * tg[i];
        if (m2 < tol.eps_degenerate * tol.eps_degenerate)
            throw DegenerateNormalData("k_n^2 + tau_g^2 below tolerance at s=" +
                                       std::to_string(ss[i].s));
    }
    const auto dkn = grid_derivative(kn, trace.ds, trace.closed);
    const auto dtg = grid_derivative(tg, trace.ds, trace.closed);
    out.s.resize(ss.size());
    out.mu.resize(ss.size());
    for (size_t i = 0; i < ss.size(); ++i) {
        const double m2 = kn[i] * kn[i] + tg[i] * tg[i];
        out.s[i] = ss[i].s;
        out.mu[i] = (kn[i] * dtg[i] - dkn[i] * tg[i] + ss[i].k_g * m2) / std::pow(m2, 1.5);
    }
    out.constancy = constancy_test(out.mu, tol.const_atol, tol.const_rtol);
    out.constant = out.constancy.constant;
    out.theta_estimate = kPi / 2 - std::atan(std::abs(out.constancy.stats.median));
    return out;
}

/// A MuProfile for curves with constant surface normal (k_n = tau_g = 0
/// everywhere): the isophote condition holds trivially for every axis and mu
/// carries no information.
inline MuProfile degenerate_mu_profile(const DarbouxTrace& trace, double theta) {
    MuProfile out;
    for (const auto& d : trace.samples) out.s.push_back(d.s);
    out.constant = true;
    out.degenerate_normal = true;
    out.theta_estimate = theta;
    return out;
}

/// True when the surface normal is constant along the samples (straight
/// rulings and similar): the axis equations degenerate there.
inline bool has_constant_normal(const DarbouxTrace& trace, double eps = 1e-9) {
    for (const auto& d : trace.samples)
        if (std::hypot(d.k_n, d.tau_g) >= eps) return false;
    return true;
}

enum class SignBranch { Plus, Minus };

inline const char* sign_branch_name(SignBranch b) {
    return b == SignBranch::Plus ? "Plus" : "Minus";
}

/// The reconstructed fixed axis of an isophote:
///   d(s) = sgn * tau_g/sqrt(k_n^2+tau_g^2) sin(theta) T
///        - sgn * k_n /sqrt(k_n^2+tau_g^2) sin(theta) B + cos(theta) N,
/// with sgn = +1 (Plus) or -1 (Minus); the branch with the smaller spread of
/// d(s) around its mean wins, and `residual` is max_s |d(s) - d_mean|.
struct IsophoteAxis {
    Vec3 d = Vec3::UnitZ();
    double theta = 0.0;
    SignBranch sign_branch = SignBranch::Plus;
    double residual = 0.0;
    double residual_other_branch = 0.0;
    bool certified = false;  ///< residual <= axis_tol
    bool degenerate_normal = false;
};

namespace detail {

inline Vec3 axis_sample(const DarbouxSample& d, double theta, double sgn) {
    const double m = std::hypot(d.k_n, d.tau_g);
    const double st = std::sin(theta), ct = std::cos(theta);
    return sgn * (d.tau_g / m) * st * d.T - sgn * (d.k_n / m) * st * d.B + ct * d.N;
}

inline std::pair<Vec3, double> axis_branch(const DarbouxTrace& trace, double theta, double sgn) {
    Vec3 mean = Vec3::Zero();
    for (const auto& d : trace.samples) mean += axis_sample(d, theta, sgn);
    mean.normalize();
    double resid = 0.0;
    for (const auto& d : trace.samples)
        resid = std::max(resid, (axis_sample(d, theta, sgn) - mean).norm());
    return {mean, resid};
}

}  // namespace detail

/// Never throws on a bad fit; callers inspect `certified`.
inline IsophoteAxis recover_axis_unchecked(const DarbouxTrace& trace, double theta,
                                           const Tolerances& tol = Tolerances::defaults()) {
    IsophoteAxis axis;
    axis.theta = theta;
    if (has_constant_normal(trace, tol.eps_degenerate)) {
        // Constant-normal degeneracy. tau_g == 0 certifies <T, d> == 0, so the
        // axis lies in the (B, N) plane: d = cos(theta) N +/- sin(theta) B.
        axis.degenerate_normal = true;
        Vec3 meanN = Vec3::Zero(), meanB = Vec3::Zero();
        for (const auto& d : trace.samples) {
            meanN += d.N;
            meanB += d.B;
        }
        meanN.normalize();
        meanB.normalize();
        const double st = std::sin(theta), ct = std::cos(theta);
        const Vec3 dplus = (ct * meanN + st * meanB).normalized();
        const Vec3 dminus = (ct * meanN - st * meanB).normalized();
        auto spread = [&](const Vec3& dd, double sgn) {
            double r = 0.0;
            for (const auto& smp : trace.samples)
                r = std::max(r, ((ct * smp.N + sgn * st * smp.B) - dd).norm());
            return r;
        };
        const double rp = spread(dplus, +1.0), rm = spread(dminus, -1.0);
        if (rp <= rm) {
            axis.d = dplus;
            axis.sign_branch = SignBranch::Plus;
            axis.residual = rp;
            axis.residual_other_branch = rm;
        } else {
            axis.d = dminus;
            axis.sign_branch = SignBranch::Minus;
            axis.residual = rm;
            axis.residual_other_branch = rp;
        }
        axis.certified = axis.residual <= tol.axis_tol;
        return axis;
    }

    for (const auto& d : trace.samples)
        if (std::hypot(d.k_n, d.tau_g) < tol.eps_degenerate)
            throw DegenerateNormalData("k_n^2 + tau_g^2 below tolerance at s=" +
                                       std::to_string(d.s));

    const auto [dp, rp] = detail::axis_branch(trace, theta, +1.0);
    const auto [dm, rm] = detail::axis_branch(trace, theta, -1.0);
    if (rp <= rm) {
        axis.d = dp;
        axis.sign_branch = SignBranch::Plus;
        axis.residual = rp;
        axis.residual_other_branch = rm;
    } else {
        axis.d = dm;
        axis.sign_branch = SignBranch::Minus;
        axis.residual = rm;
        axis.residual_other_branch = rp;
    }
    axis.certified = axis.residual <= tol.axis_tol;
    return axis;
}

/// Contract-checking variant: throws NoConsistentAxis when neither sign branch
/// meets axis_tol.
inline IsophoteAxis recover_axis(const DarbouxTrace& trace, double theta,
                                 const Tolerances& tol = Tolerances::defaults()) {
    IsophoteAxis axis = recover_axis_unchecked(trace, theta, tol);
    if (!axis.certified)
        throw NoConsistentAxis("both sign branches exceed axis_tol (best residual " +
                               std::to_string(axis.residual) + ")");
    return axis;
}

/// Max finite-difference |d'(s)| * ds over the per-sample axis sequence for
/// the axis' recorded branch; values <= axis_tol certify a constant axis.
inline double axis_derivative_check(const DarbouxTrace& trace, const IsophoteAxis& axis) {
    std::vector<Vec3> ds;
    ds.reserve(trace.samples.size());
    const double sgn = axis.sign_branch == SignBranch::Plus ? 1.0 : -1.0;
    const double st = std::sin(axis.theta), ct = std::cos(axis.theta);
    for (const auto& d : trace.samples) {
        if (axis.degenerate_normal) {
            ds.push_back(ct * d.N + sgn * st * d.B);
        } else {
            ds.push_back(detail::axis_sample(d, axis.theta, sgn));
        }
    }
    const auto dprime = grid_derivative(ds, trace.ds, trace.closed);
    double worst = 0.0;
    for (const auto& v : dprime) worst = std::max(worst, v.norm() * trace.ds);
    return worst;
}

/// Both sign pairings of the closed-form tan(theta) relation
///   tan(theta) = (k_n^2+tau_g^2)^{3/2} / (s1 * k_g (k_n^2+tau_g^2) + s2 * (k_n tau_g' - k_n' tau_g))
/// evaluated against a given theta. Returns the per-pairing max residuals,
/// best first; the sign pairing of the second line is ambiguous, so both are
/// reported rather than asserted.
struct TanThetaCheck {
    double best = 0.0;
    double other = 0.0;
    int best_s1 = 1, best_s2 = 1;
};

inline TanThetaCheck tan_theta_consistency(const DarbouxTrace& trace, double theta) {
    const auto& ss = trace.samples;
    std::vector<double> kn(ss.size()), tg(ss.size());
    for (size_t i = 0; i < ss.size(); ++i) {
        kn[i] = ss[i].k_n;
        tg[i] = ss[i].tau_g;
    }
    const auto dkn = grid_derivative(kn, trace.ds, trace.closed);
    const auto dtg = grid_derivative(tg, trace.ds, trace.closed);
    const double t = std::tan(theta);
    TanThetaCheck out;
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            double worst = 0.0;
            for (size_t i = 0; i < ss.size(); ++i) {
                const double m2 = kn[i] * kn[i] + tg[i] * tg[i];
                const double den = s1 * ss[i].k_g * m2 + s2 * (kn[i] * dtg[i] - dkn[i] * tg[i]);
                if (std::abs(den) < 1e-300) {
                    worst = std::numeric_limits<double>::infinity();
                    break;
                }
                worst = std::max(worst, std::abs(std::pow(m2, 1.5) / den - t));
            }
            if (worst < best) {
                second = best;
                best = worst;
                out.best_s1 = s1;
                out.best_s2 = s2;
            } else if (worst < second) {
                second = worst;
            }
        }
    }
    out.best = best;
    out.other = second;
    return out;
}

}  // namespace isophote
