// Test-only oracles, kept independent of the library's computation paths:
// adaptive Simpson quadrature (the library integrates with composite
// Gauss-Legendre) and frame scalars from raw finite differences of curve
// positions (the library chains closed-form suppliers).
#pragma once
#include <cmath>
#include <functional>

#include "isophote/space_curve.hpp"
#include "isophote/types.hpp"

namespace oracles {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 40) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Curvature and torsion from raw position differences only (no suppliers).
struct FrameScalars {
    double kappa, tau;
};

inline FrameScalars frenet_scalars_fd(const isophote::SpaceCurve& c, double s, double h = 1e-3) {
    using isophote::Vec3;
    auto pos = [&](double t) { return c.point(t); };
    auto stencil1 = [&](double t, double hh) {
        return ((pos(t - 2 * hh) - 8.0 * pos(t - hh) + 8.0 * pos(t + hh) - pos(t + 2 * hh)) /
                (12.0 * hh))
            .eval();
    };
    auto stencil2 = [&](double t, double hh) {
        return ((-pos(t - 2 * hh) + 16.0 * pos(t - hh) - 30.0 * pos(t) + 16.0 * pos(t + hh) -
                 pos(t + 2 * hh)) /
                (12.0 * hh * hh))
            .eval();
    };
    auto stencil3 = [&](double t, double hh) {
        return ((pos(t + 2 * hh) - 2.0 * pos(t + hh) + 2.0 * pos(t - hh) - pos(t - 2 * hh)) /
                (2.0 * hh * hh * hh))
            .eval();
    };
    const Vec3 d1 = stencil1(s, h);
    const Vec3 d2 = stencil2(s, h);
    const Vec3 d3 = stencil3(s, h);
    FrameScalars out;
    out.kappa = d1.cross(d2).norm() / std::pow(d1.norm(), 3);
    out.tau = d1.cross(d2).dot(d3) / d1.cross(d2).squaredNorm();
    return out;
}

}  // namespace oracles
