#pragma once
#include <optional>
#include <vector>

#include "isophote/curve_on_surface.hpp"
#include "isophote/errors.hpp"
#include "isophote/frenet.hpp"
#include "isophote/numeric.hpp"
#include "isophote/tolerances.hpp"

namespace isophote {

/// Darboux frame {T, B = N x T, N} of a unit-speed surface curve at arc
/// length s, with the frame scalars
///   k_g = <T', B>,  k_n = <T', N>,  tau_g = <B', N>.
/// kappa = |T'| is always recorded; the Frenet-linked fields tau and phi
/// (phi = angle from the binormal b to the surface normal N, i.e.
/// k_g = kappa cos phi, k_n = kappa sin phi) are withheld when kappa is below
/// tolerance, where the Frenet frame is undefined.
struct DarbouxSample {
    double s = 0.0;
    Vec2 uv = Vec2::Zero();
    Vec3 T = Vec3::UnitX();
    Vec3 B = Vec3::UnitY();
    Vec3 N = Vec3::UnitZ();
    double k_g = 0.0;
    double k_n = 0.0;
    double tau_g = 0.0;
    double kappa = 0.0;
    std::optional<double> tau;
    std::optional<double> phi;  ///< unwrapped along the sample sequence
};

struct DarbouxTrace {
    std::vector<DarbouxSample> samples;
    bool closed = false;
    double ds = 0.0;  ///< uniform arc-length spacing
};

inline DarbouxTrace darboux_along(const CurveOnSurface& curve, int n_samples,
                                  const Tolerances& tol = Tolerances::defaults()) {
    if (n_samples < 5) throw TooFewSamples("darboux_along needs >= 5 samples");
    const SpaceCurve& alpha = curve.lifted();
    DarbouxTrace trace;
    trace.closed = curve.is_closed();
    const std::vector<double> ss = alpha.sample_params(n_samples);
    trace.ds = ss[1] - ss[0];
    trace.samples.reserve(ss.size());

    std::vector<double> phis;
    std::vector<size_t> phi_idx;
    for (double s : ss) {
        DarbouxSample d;
        d.s = s;
        d.uv = curve.uv(s);
        const Vec3 a1 = alpha.derivative1(s);
        if (std::abs(a1.norm() - 1.0) > tol.frame_rtol)
            throw NotUnitSpeed("lifted curve speed differs from 1 at s=" + std::to_string(s));
        d.T = a1;
        d.N = unit_normal(curve.surface(), d.uv.x(), d.uv.y(), tol.eps_degenerate);
        d.B = d.N.cross(d.T);
        const Vec3 a2 = alpha.derivative2(s);
        d.k_g = a2.dot(d.B);
        d.k_n = a2.dot(d.N);
        const Vec2 qd = curve.uv_d1(s);
        const Vec3 Ndot = unit_normal_derivative(curve.surface(), d.uv.x(), d.uv.y(), qd.x(),
                                                 qd.y(), tol.eps_degenerate);
        d.tau_g = -Ndot.dot(d.B);  // == <B', N> since <B, N> is constant
        d.kappa = a2.norm();
        if (d.kappa >= tol.eps_degenerate) {
            const Vec3 a3 = alpha.derivative3(s);
            d.tau = a1.cross(a2).dot(a3) / (d.kappa * d.kappa);
            d.phi = std::atan2(d.k_n, d.k_g);
            phi_idx.push_back(trace.samples.size());
            phis.push_back(*d.phi);
        }
        trace.samples.push_back(d);
    }
    const std::vector<double> unwrapped = unwrap_angles(phis);
    for (size_t k = 0; k < phi_idx.size(); ++k) trace.samples[phi_idx[k]].phi = unwrapped[k];
    return trace;
}

/// Eq.-(2.5)-style rotation from the Darboux frame back to the Frenet pair:
/// n = cos(phi) B + sin(phi) N,  b = -sin(phi) B + cos(phi) N.
inline std::pair<Vec3, Vec3> rotate_to_frenet(const DarbouxSample& d) {
    if (!d.phi)
        throw VanishingCurvature("principal normal undefined: kappa below tolerance at s=" +
                                 std::to_string(d.s));
    const double c = std::cos(*d.phi), s = std::sin(*d.phi);
    const Vec3 n = c * d.B + s * d.N;
    const Vec3 b = -s * d.B + c * d.N;
    return {n, b};
}

/// Max residuals of the Darboux frame ODEs over a sample list, with frame
/// derivatives taken by 5-point grid differences:
///   T' = k_g B + k_n N,  B' = -k_g T + tau_g N,  N' = -k_n T - tau_g B.
struct DarbouxResiduals {
    double T = 0.0, B = 0.0, N = 0.0;
    double max() const { return std::max(T, std::max(B, N)); }
};

inline DarbouxResiduals darboux_equation_residuals(const DarbouxTrace& trace) {
    const auto& ss = trace.samples;
    if (ss.size() < 5) throw TooFewSamples("need >= 5 samples for residuals");
    std::vector<Vec3> T(ss.size()), B(ss.size()), N(ss.size());
    for (size_t i = 0; i < ss.size(); ++i) {
        T[i] = ss[i].T;
        B[i] = ss[i].B;
        N[i] = ss[i].N;
    }
    const auto Td = grid_derivative(T, trace.ds, trace.closed);
    const auto Bd = grid_derivative(B, trace.ds, trace.closed);
    const auto Nd = grid_derivative(N, trace.ds, trace.closed);
    DarbouxResiduals r;
    for (size_t i = 0; i < ss.size(); ++i) {
        r.T = std::max(r.T, (Td[i] - (ss[i].k_g * B[i] + ss[i].k_n * N[i])).norm());
        r.B = std::max(r.B, (Bd[i] - (-ss[i].k_g * T[i] + ss[i].tau_g * N[i])).norm());
        r.N = std::max(r.N, (Nd[i] - (-ss[i].k_n * T[i] - ss[i].tau_g * B[i])).norm());
    }
    return r;
}

}  // namespace isophote
