#pragma once
#include <vector>

#include "isophote/darboux.hpp"
#include "isophote/errors.hpp"
#include "isophote/numeric.hpp"
#include "isophote/tolerances.hpp"

namespace isophote {

/// The Gauss-map image N(s) of a surface curve, viewed as a curve on the unit
/// sphere. Its normal curvature is 1 by construction; its signed geodesic
/// curvature is computed from finite differences of the sampled points,
///   kbar_g = <N'', N x N'> / |N'|^3,
/// independently of the Darboux-scalar route, so the two can be cross-checked.
struct GaussMapImage {
    std::vector<Vec3> points;
    std::vector<double> kbar_g;      ///< signed geodesic curvature per sample
    double kbar_g_median = 0.0;
    double kbar_n = 1.0;
    double plane_fit_residual = 0.0;     ///< max distance of points to the LSQ plane
    double kappa_identity_residual = 0.0;  ///< max |kappa^2 - (kbar_g^2 + 1)| (quotient-formula kappa)
};

inline GaussMapImage gauss_map_image(const DarbouxTrace& trace,
                                     const Tolerances& tol = Tolerances::defaults()) {
    const auto& ss = trace.samples;
    if (ss.size() < 6) throw TooFewSamples("gauss_map_image needs >= 6 samples");
    for (const auto& d : ss)
        if (std::hypot(d.k_n, d.tau_g) < tol.eps_degenerate)
            throw DegenerateNormalData("|N'| below tolerance: the spherical image is not regular");

    GaussMapImage img;
    img.points.reserve(ss.size());
    for (const auto& d : ss) img.points.push_back(d.N);

    const auto d1 = grid_derivative(img.points, trace.ds, trace.closed);
    const auto d2 = grid_second_derivative(img.points, trace.ds, trace.closed);
    img.kbar_g.resize(ss.size());
    for (size_t i = 0; i < ss.size(); ++i) {
        const double speed = d1[i].norm();
        const double s3 = speed * speed * speed;
        img.kbar_g[i] = d2[i].dot(img.points[i].cross(d1[i])) / s3;
        const double kappa = d1[i].cross(d2[i]).norm() / s3;
        img.kappa_identity_residual =
            std::max(img.kappa_identity_residual,
                     std::abs(kappa * kappa - (img.kbar_g[i] * img.kbar_g[i] + 1.0)));
    }
    img.kbar_g_median = compute_stats(img.kbar_g).median;
    img.plane_fit_residual = fit_plane(img.points).max_abs_distance;
    return img;
}

}  // namespace isophote
