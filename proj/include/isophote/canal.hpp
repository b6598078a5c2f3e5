#pragma once
#include <array>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "isophote/axis.hpp"
#include "isophote/darboux.hpp"
#include "isophote/errors.hpp"
#include "isophote/frenet.hpp"
#include "isophote/param_surface.hpp"
#include "isophote/space_curve.hpp"
#include "isophote/tolerances.hpp"

namespace isophote {

/// Which sign of the moving-frame offset the canal parametrization uses:
///   K(s,v) = C(s) - r r' T + sgn * r sqrt(1 - r'^2) (cos v n + sin v b),
/// Minus (sgn = -1) is the default branch.
enum class CanalBranch { Minus, Plus };

inline double canal_branch_sign(CanalBranch b) { return b == CanalBranch::Minus ? -1.0 : 1.0; }

/// Envelope data of a moving sphere: unit-speed spine C(s) with kappa > 0,
/// radius r(s) > 0 with |r'(s)| < 1 on the range, and the branch sign.
struct CanalSpec {
    SpaceCurve spine;
    std::function<double(double)> r;
    std::function<double(double)> dr;
    std::function<double(double)> ddr;  // optional; linear/constant laws leave it null (== 0)
    CanalBranch branch = CanalBranch::Minus;
    double s0 = 0.0, s1 = 1.0;

    double r2(double s) const { return ddr ? ddr(s) : 0.0; }
};

/// Constant-radius helper (a tube).
inline CanalSpec make_tube_spec(SpaceCurve spine, double radius,
                                CanalBranch branch = CanalBranch::Minus) {
    if (!(radius > 0)) throw ParameterOutOfRange("tube radius must be positive");
    CanalSpec spec;
    spec.s0 = spine.s_min();
    spec.s1 = spine.s_max();
    spec.spine = std::move(spine);
    spec.r = [radius](double) { return radius; };
    spec.dr = [](double) { return 0.0; };
    spec.ddr = [](double) { return 0.0; };
    spec.branch = branch;
    return spec;
}

/// Linear-radius helper r(s) = slope * s + c.
inline CanalSpec make_linear_canal_spec(SpaceCurve spine, double slope, double c,
                                        CanalBranch branch = CanalBranch::Minus) {
    CanalSpec spec;
    spec.s0 = spine.s_min();
    spec.s1 = spine.s_max();
    spec.spine = std::move(spine);
    spec.r = [slope, c](double s) { return slope * s + c; };
    spec.dr = [slope](double) { return slope; };
    spec.ddr = [](double) { return 0.0; };
    spec.branch = branch;
    return spec;
}

/// Checks the CanalSpec invariants on a dense parameter sample.
inline void validate_canal_spec(const CanalSpec& spec, int probes = 257,
                                const Tolerances& tol = Tolerances::defaults()) {
    if (!spec.spine.is_unit_speed()) throw NotUnitSpeed("canal spine must be unit speed");
    if (!(spec.s0 < spec.s1)) throw ParameterOutOfRange("canal: empty s range");
    for (int i = 0; i < probes; ++i) {
        const double s = spec.s0 + (spec.s1 - spec.s0) * i / (probes - 1);
        const double rr = spec.r(s), rp = spec.dr(s);
        if (!(rr > 0)) throw DomainViolation("canal radius must stay positive (r(" +
                                             std::to_string(s) + ") = " + std::to_string(rr) + ")");
        if (!(std::abs(rp) < 1.0))
            throw RadiusSlopeTooLarge("|r'| >= 1 at s=" + std::to_string(s));
        if (spec.spine.derivative2(s).norm() < tol.eps_degenerate)
            throw VanishingCurvature("spine curvature vanishes at s=" + std::to_string(s));
    }
}

namespace detail {

struct SpineFrame {
    Vec3 C, T, n, b;
    double kappa, tau;
};

inline SpineFrame spine_frame(const CanalSpec& spec, double s) {
    SpineFrame f;
    f.C = spec.spine.point(s);
    const Vec3 d1 = spec.spine.derivative1(s);
    const Vec3 d2 = spec.spine.derivative2(s);
    f.kappa = d2.norm();
    if (f.kappa < 1e-12) throw VanishingCurvature("spine curvature vanishes at s=" + std::to_string(s));
    f.T = d1;
    f.n = d2 / f.kappa;
    f.b = f.T.cross(f.n);
    f.tau = d1.cross(d2).dot(spec.spine.derivative3(s)) / (f.kappa * f.kappa);
    return f;
}

}  // namespace detail

/// K(s, v) on the envelope.
inline Vec3 canal_point(const CanalSpec& spec, double s, double v) {
    const auto f = detail::spine_frame(spec, s);
    const double rr = spec.r(s), rp = spec.dr(s);
    const double sgn = canal_branch_sign(spec.branch);
    const double g = rr * std::sqrt(1.0 - rp * rp);
    return f.C - rr * rp * f.T + sgn * g * (std::cos(v) * f.n + std::sin(v) * f.b);
}

/// The sphere-contact unit normal (K - C)/r = -r' T + sgn sqrt(1-r'^2)(cos v n + sin v b).
inline Vec3 canal_unit_normal(const CanalSpec& spec, double s, double v) {
    const auto f = detail::spine_frame(spec, s);
    const double rp = spec.dr(s);
    if (!(std::abs(rp) < 1.0)) throw RadiusSlopeTooLarge("|r'| >= 1 at s=" + std::to_string(s));
    const double sgn = canal_branch_sign(spec.branch);
    const double w = std::sqrt(1.0 - rp * rp);
    return -rp * f.T + sgn * w * (std::cos(v) * f.n + std::sin(v) * f.b);
}

/// dK/ds with the spine frame advanced by the Frenet-Serret equations.
inline Vec3 canal_partial_s(const CanalSpec& spec, double s, double v) {
    const auto f = detail::spine_frame(spec, s);
    const double rr = spec.r(s), rp = spec.dr(s), rpp = spec.r2(s);
    const double sgn = canal_branch_sign(spec.branch);
    const double w = std::sqrt(1.0 - rp * rp);
    const double g = rr * w;
    const double gp = rp * w - rr * rp * rpp / w;
    const double cv = std::cos(v), sv = std::sin(v);
    const double tcomp = 1.0 - rp * rp - rr * rpp - sgn * g * f.kappa * cv;
    const double ncomp = -rr * rp * f.kappa + sgn * (gp * cv - g * f.tau * sv);
    const double bcomp = sgn * (gp * sv + g * f.tau * cv);
    return tcomp * f.T + ncomp * f.n + bcomp * f.b;
}

/// dK/dv.
inline Vec3 canal_partial_v(const CanalSpec& spec, double s, double v) {
    const auto f = detail::spine_frame(spec, s);
    const double g = spec.r(s) * std::sqrt(1.0 - spec.dr(s) * spec.dr(s));
    const double sgn = canal_branch_sign(spec.branch);
    return sgn * g * (-std::sin(v) * f.n + std::cos(v) * f.b);
}

/// d2K/dsdv.
inline Vec3 canal_partial_sv(const CanalSpec& spec, double s, double v) {
    const auto f = detail::spine_frame(spec, s);
    const double rr = spec.r(s), rp = spec.dr(s), rpp = spec.r2(s);
    const double sgn = canal_branch_sign(spec.branch);
    const double w = std::sqrt(1.0 - rp * rp);
    const double g = rr * w;
    const double gp = rp * w - rr * rp * rpp / w;
    const double cv = std::cos(v), sv = std::sin(v);
    return sgn * (g * f.kappa * sv * f.T + (-gp * sv - g * f.tau * cv) * f.n +
                  (gp * cv - g * f.tau * sv) * f.b);
}

/// d2K/dv2.
inline Vec3 canal_partial_vv(const CanalSpec& spec, double s, double v) {
    const auto f = detail::spine_frame(spec, s);
    const double g = spec.r(s) * std::sqrt(1.0 - spec.dr(s) * spec.dr(s));
    const double sgn = canal_branch_sign(spec.branch);
    return sgn * g * (-std::cos(v) * f.n - std::sin(v) * f.b);
}

/// Assembles the envelope as a ParamSurface. Parameter order is
/// (u = tube angle, v = spine arc length) so the cross-product normal points
/// outward, away from the spine; u is periodic, v is periodic iff the spine
/// closes up.
inline std::shared_ptr<ParamSurface> make_canal_surface(CanalSpec spec,
                                                        const Tolerances& tol = Tolerances::defaults()) {
    validate_canal_spec(spec, 257, tol);
    auto sp = std::make_shared<CanalSpec>(std::move(spec));
    const bool spine_closed =
        (sp->spine.point(sp->s0) - sp->spine.point(sp->s1)).norm() <= 1e-8;
    auto out = std::make_shared<ParamSurface>(
        [sp](double u, double v) { return canal_point(*sp, v, u); }, 0.0, kTwoPi, sp->s0, sp->s1);
    out->with_su([sp](double u, double v) { return canal_partial_v(*sp, v, u); })
        .with_sv([sp](double u, double v) { return canal_partial_s(*sp, v, u); })
        .with_suu([sp](double u, double v) { return canal_partial_vv(*sp, v, u); })
        .with_suv([sp](double u, double v) { return canal_partial_sv(*sp, v, u); })
        .with_periodic(true, spine_closed);
    // d2K/ds2 falls back to differences of the closed-form dK/ds.
    return out;
}

// ---------------------------------------------------------------------------
// Theorem-4 style identity on canal isophotes
// ---------------------------------------------------------------------------

/// One sample of an isophote on a canal surface: the envelope coordinates
/// together with the curve's Darboux data at that point.
struct CanalCurveSample {
    double spine_s = 0.0;
    double v = 0.0;
    DarbouxSample darboux;
};

/// Residuals of the identity
///   -r' <T,d> + sc * sqrt(1-r'^2) cos(v+phi) <B,d>
///              + (ss * sqrt(1-r'^2) sin(v+phi) - 1) <N,d> = 0
/// over the samples, for all four sign pairings (sc, ss). `best` is the
/// smallest max-residual with consistent signs (sc == ss), matching how the
/// derivation propagates the parametrization branch; the literal printed form
/// (sin term fixed positive) is also reported, as are variants with <B,d>
/// replaced by its closed form with and without the sin(theta) factor.
struct Theorem4Result {
    double best = 0.0;
    int best_sign = +1;  ///< the consistent pairing that won
    double consistent_plus = 0.0, consistent_minus = 0.0;
    double printed_upper = 0.0;  ///< (sc, ss) = (-1, +1), the paper's upper-sign reading
    double printed_lower = 0.0;  ///< (sc, ss) = (+1, +1)
    double substituted_with_sin_theta = 0.0;
    double substituted_without_sin_theta = 0.0;
};

inline Theorem4Result theorem4_residual(const CanalSpec& spec,
                                        const std::vector<CanalCurveSample>& samples,
                                        const Vec3& d, double theta) {
    if (samples.empty()) throw TooFewSamples("theorem4_residual needs samples");
    auto lhs = [&](const CanalCurveSample& cs, double sc, double ss, int bsub) {
        const auto& dx = cs.darboux;
        if (!dx.phi)
            throw DegenerateNormalData("phi undefined (kappa ~ 0) at s=" + std::to_string(dx.s));
        const double rp = spec.dr(cs.spine_s);
        const double w = std::sqrt(1.0 - rp * rp);
        const double vp = cs.v + *dx.phi;
        double Bd = dx.B.dot(d);
        if (bsub != 0) {
            const double m = std::hypot(dx.k_n, dx.tau_g);
            const double base = dx.k_n / m;
            // bsub: +/-1 -> closed form with sin(theta); +/-2 -> without.
            const double mag = (std::abs(bsub) == 1) ? base * std::sin(theta) : base;
            Bd = (bsub > 0 ? 1.0 : -1.0) * mag;
        }
        return -rp * dx.T.dot(d) + sc * w * std::cos(vp) * Bd +
               (ss * w * std::sin(vp) - 1.0) * dx.N.dot(d);
    };
    auto max_abs = [&](double sc, double ss, int bsub) {
        double worst = 0.0;
        for (const auto& cs : samples) worst = std::max(worst, std::abs(lhs(cs, sc, ss, bsub)));
        return worst;
    };

    Theorem4Result r;
    r.consistent_plus = max_abs(+1, +1, 0);
    r.consistent_minus = max_abs(-1, -1, 0);
    r.printed_upper = max_abs(-1, +1, 0);
    r.printed_lower = r.consistent_plus;
    if (r.consistent_plus <= r.consistent_minus) {
        r.best = r.consistent_plus;
        r.best_sign = +1;
    } else {
        r.best = r.consistent_minus;
        r.best_sign = -1;
    }
    r.substituted_with_sin_theta = std::min(std::min(max_abs(+1, +1, +1), max_abs(-1, -1, +1)),
                                            std::min(max_abs(+1, +1, -1), max_abs(-1, -1, -1)));
    r.substituted_without_sin_theta = std::min(std::min(max_abs(+1, +1, +2), max_abs(-1, -1, +2)),
                                               std::min(max_abs(+1, +1, -2), max_abs(-1, -1, -2)));
    return r;
}

// ---------------------------------------------------------------------------
// Radius-function laws
// ---------------------------------------------------------------------------

enum class RadiusLawKind { LinearCor3a, IntegralCor3b, LinearProp1, Constant };

inline const char* radius_law_kind_name(RadiusLawKind k) {
    switch (k) {
        case RadiusLawKind::LinearCor3a:   return "LinearCor3a";
        case RadiusLawKind::IntegralCor3b: return "IntegralCor3b";
        case RadiusLawKind::LinearProp1:   return "LinearProp1";
        case RadiusLawKind::Constant:      return "Constant";
    }
    return "Unknown";
}

/// A closed-form radius slope, validated as a root of its defining quadratic
/// before use. Laws that fail validation are first-class results
/// (validated = false), never silently patched.
struct RadiusLaw {
    RadiusLawKind kind = RadiusLawKind::Constant;
    double slope = 0.0;  ///< r'(s)
    bool domain_ok = false;
    bool validated = false;
    double quadratic_residual = 0.0;
    std::array<double, 2> quadratic_roots{0.0, 0.0};
    bool printed_condition_holds = false;  ///< the paper-side inequalities, where stated
    std::string note;
};

/// Linear law for axes orthogonal to the tangent:
///   lambda = sqrt(E^2 - 1)/E,  E = tan(theta) cos(v+theta) -/+ sin(v+theta),
/// valid when E^2 > 1; checked against 1 - r'^2 = 1/(cos^2(v+theta)(tan(theta) -/+ tan(v+theta))^2).
inline RadiusLaw try_radius_law_linear_cor3a(double theta, double v, SignBranch sign) {
    RadiusLaw law;
    law.kind = RadiusLawKind::LinearCor3a;
    const double sgn = (sign == SignBranch::Minus) ? -1.0 : 1.0;
    const double cvt = std::cos(v + theta);
    const double E = std::tan(theta) * cvt + sgn * std::sin(v + theta);
    const double sv = std::sin(v);
    law.printed_condition_holds =
        std::abs(std::sin(v + 2.0 * theta)) > std::cos(theta) &&
        (std::cos(theta) < sv && sv < -std::cos(theta));
    if (std::abs(cvt) < 1e-12) {
        law.note = "cos(v+theta) = 0: defining relation is singular";
        return law;
    }
    if (!(E * E > 1.0)) {
        law.note = "E^2 <= 1: closed form is complex";
        return law;
    }
    law.domain_ok = true;
    law.slope = std::sqrt(E * E - 1.0) / E;
    const double rhs = 1.0 / (cvt * cvt * std::pow(std::tan(theta) + sgn * std::tan(v + theta), 2));
    law.quadratic_residual = std::abs(1.0 - law.slope * law.slope - rhs);
    law.validated = law.quadratic_residual <= 1e-10;
    if (law.domain_ok && law.validated != law.printed_condition_holds)
        law.note = "numeric validity disagrees with the printed side condition";
    return law;
}

inline RadiusLaw radius_law_linear_cor3a(double theta, double v, SignBranch sign) {
    RadiusLaw law = try_radius_law_linear_cor3a(theta, v, sign);
    if (!law.domain_ok) throw DomainViolation("cor3a: " + law.note);
    if (!law.validated)
        throw FormulaInconsistent("cor3a quadratic residual " +
                                  std::to_string(law.quadratic_residual));
    return law;
}

/// Silhouette-on-general-helix law: slope = tan(beta)/sqrt(tan^2(beta)+cos^2(v+phi)),
/// a root of (tan^2 beta + cos^2(v+phi)) r'^2 - tan^2 beta = 0. Always < 1
/// except at cos(v+phi) = 0, which the CanalSpec invariant rejects.
inline RadiusLaw try_radius_law_integral_cor3b(double beta, double v, double phi) {
    RadiusLaw law;
    law.kind = RadiusLawKind::IntegralCor3b;
    if (!(beta > 0.0 && beta < kPi / 2)) {
        law.note = "beta must be acute";
        return law;
    }
    law.domain_ok = true;
    const double tb = std::tan(beta);
    const double c = std::cos(v + phi);
    law.slope = tb / std::sqrt(tb * tb + c * c);
    law.quadratic_residual = std::abs((tb * tb + c * c) * law.slope * law.slope - tb * tb);
    law.validated = law.quadratic_residual <= 1e-12;
    law.printed_condition_holds = law.domain_ok;
    if (std::abs(c) < 1e-12) law.note = "cos(v+phi) = 0: slope degenerates to 1 (|r'| < 1 fails)";
    return law;
}

inline RadiusLaw radius_law_integral_cor3b(double beta, double v, double phi) {
    RadiusLaw law = try_radius_law_integral_cor3b(beta, v, phi);
    if (!law.domain_ok) throw DomainViolation("cor3b: " + law.note);
    return law;
}

/// Shared-axis law: omega = (-1 + sin^2 v tan(theta)) / (1 + sin^2 v tan^2(theta)),
/// checked as a root of
///   (l1^2 + l2^2 sin^2 v) r'^2 + 2 l1^2 r' + l1^2 - l2^2 sin^2 v = 0,
/// l1 = cos(theta), l2 = sin(theta). Both roots are reported; the printed
/// omega frequently is not one of them, which FormulaInconsistent surfaces.
inline RadiusLaw try_radius_law_prop1(double theta, double v) {
    RadiusLaw law;
    law.kind = RadiusLawKind::LinearProp1;
    const double t = std::tan(theta);
    const double S = std::sin(v) * std::sin(v);
    if (!(t > 1.0)) {
        law.note = "requires tan(theta) > 1";
        return law;
    }
    if (!(-1.0 + S * t > 0.0)) {
        law.note = "requires sin^2(v) tan(theta) > 1 so the slope is positive";
        return law;
    }
    law.domain_ok = true;
    law.printed_condition_holds = true;
    law.slope = (-1.0 + S * t) / (1.0 + S * t * t);
    const double l1 = std::cos(theta), l2 = std::sin(theta);
    const double A = l1 * l1 + l2 * l2 * S;
    const double B = 2.0 * l1 * l1;
    const double C = l1 * l1 - l2 * l2 * S;
    auto q = [&](double x) { return A * x * x + B * x + C; };
    law.quadratic_residual = std::abs(q(law.slope));
    const double disc = std::sqrt(std::max(0.0, B * B - 4.0 * A * C));
    law.quadratic_roots = {(-B + disc) / (2.0 * A), (-B - disc) / (2.0 * A)};
    law.validated = law.quadratic_residual <= 1e-10;
    if (!law.validated)
        law.note = "printed slope is not a root of the printed quadratic (roots " +
                   std::to_string(law.quadratic_roots[0]) + ", " +
                   std::to_string(law.quadratic_roots[1]) + ")";
    return law;
}

inline RadiusLaw radius_law_prop1(double theta, double v) {
    RadiusLaw law = try_radius_law_prop1(theta, v);
    if (!law.domain_ok) throw DomainViolation("prop1: " + law.note);
    if (!law.validated)
        throw FormulaInconsistent("prop1 quadratic residual " +
                                  std::to_string(law.quadratic_residual) + "; " + law.note);
    return law;
}

// ---------------------------------------------------------------------------
// Tube parameter curves that are isophotes
// ---------------------------------------------------------------------------

struct TubeIsophoteFamily {
    double v0 = 0.0;
    Vec3 axis = Vec3::UnitZ();
    std::string source;  ///< "general-helix" or "slant-helix"
};

/// The tube angles v0 whose parameter curves are isophotes, with the predicted
/// axis: {pi/2, 3pi/2} with the helix axis when the spine is a general helix,
/// {0, pi} with the slant-helix axis when it is a slant helix, the union for
/// both. Throws NotAHelix otherwise.
inline std::vector<TubeIsophoteFamily> tube_parameter_isophotes(const SpaceCurve& spine,
                                                                const HelixVerdict& verdict,
                                                                int samples = 64) {
    if (verdict.kind == HelixKind::Neither)
        throw NotAHelix("tube parameter isophotes exist only over helical spines");
    const bool general =
        verdict.kind == HelixKind::GeneralHelix || verdict.kind == HelixKind::Both;
    const bool slant = verdict.kind == HelixKind::SlantHelix || verdict.kind == HelixKind::Both;

    std::vector<FrenetData> frames;
    for (double s : spine.sample_params(samples)) frames.push_back(frenet_at(spine, s));

    std::vector<TubeIsophoteFamily> out;
    if (general) {
        // Unit Darboux direction (tau T + kappa b)/sqrt(kappa^2+tau^2) is the
        // fixed axis of a general helix (the plane normal for tau == 0).
        Vec3 axis = Vec3::Zero();
        for (const auto& f : frames)
            axis += (f.tau * f.T + f.kappa * f.b) / std::hypot(f.kappa, f.tau);
        axis.normalize();
        out.push_back({kPi / 2, axis, "general-helix"});
        out.push_back({3 * kPi / 2, axis, "general-helix"});
    }
    if (slant) {
        const double sigma = verdict.sigma.stats.median;
        const double theta = kPi / 2 - std::atan(std::abs(sigma));
        const double st = std::sin(theta), ct = std::cos(theta);
        Vec3 best_axis = Vec3::UnitZ();
        double best_spread = std::numeric_limits<double>::infinity();
        for (int s1 : {+1, -1}) {
            for (int s2 : {+1, -1}) {
                Vec3 mean = Vec3::Zero();
                std::vector<Vec3> ds;
                for (const auto& f : frames) {
                    const double m = std::hypot(f.kappa, f.tau);
                    const Vec3 v = s1 * st * (f.tau * f.T + f.kappa * f.b) / m + s2 * ct * f.n;
                    ds.push_back(v);
                    mean += v;
                }
                mean.normalize();
                double spread = 0.0;
                for (const auto& v : ds) spread = std::max(spread, (v - mean).norm());
                if (spread < best_spread) {
                    best_spread = spread;
                    best_axis = mean;
                }
            }
        }
        out.push_back({0.0, best_axis, "slant-helix"});
        out.push_back({kPi, best_axis, "slant-helix"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Envelope identity checks (Eq. 4.1 and the normal cross-check)
// ---------------------------------------------------------------------------

struct EnvelopeResiduals {
    double max_radius = 0.0;     ///< max | |K - C| - r |
    double max_tangency = 0.0;   ///< max | (K - C) . C' + r r' |
    double max_normal_angle = 0.0;  ///< max angle between the two normal routes (up to sign)
};

inline EnvelopeResiduals canal_envelope_residuals(const CanalSpec& spec,
                                                  const ParamSurface& assembled, int n_random,
                                                  unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> us(spec.s0, spec.s1), uv(0.0, kTwoPi);
    EnvelopeResiduals res;
    for (int i = 0; i < n_random; ++i) {
        const double s = us(rng), v = uv(rng);
        const Vec3 K = canal_point(spec, s, v);
        const Vec3 C = spec.spine.point(s);
        const Vec3 Cp = spec.spine.derivative1(s);
        const double rr = spec.r(s), rp = spec.dr(s);
        res.max_radius = std::max(res.max_radius, std::abs((K - C).norm() - rr));
        res.max_tangency = std::max(res.max_tangency, std::abs((K - C).dot(Cp) + rr * rp));
        const Vec3 n1 = canal_unit_normal(spec, s, v);
        const Vec3 n2 = unit_normal(assembled, v, s);  // assembled order is (angle, arc length)
        res.max_normal_angle = std::max(res.max_normal_angle, axis_angle_between(n1, n2));
    }
    return res;
}

}  // namespace isophote
