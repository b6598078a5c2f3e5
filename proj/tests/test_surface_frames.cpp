#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "isophote/catalog.hpp"
#include "isophote/curve_on_surface.hpp"
#include "isophote/darboux.hpp"

using namespace isophote;

TEST(UnitNormal, SphereIsRadial) {
    auto S = catalog::sphere(1.0);
    EXPECT_NEAR((unit_normal(*S, 0.0, 0.0) - Vec3(1, 0, 0)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((unit_normal(*S, kPi / 2, 0.3) -
                 Vec3(0.0, std::cos(0.3), std::sin(0.3))).norm(),
                0.0, 1e-14);
}

TEST(UnitNormal, CylinderIsRadialAxisIndependent) {
    auto S = catalog::cylinder(1.0, -4.0, 4.0);
    EXPECT_NEAR((unit_normal(*S, kPi / 2, 3.0) - Vec3(0, 1, 0)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((unit_normal(*S, kPi / 2, -1.0) - Vec3(0, 1, 0)).norm(), 0.0, 1e-14);
}

TEST(UnitNormal, SpherePoleIsSingular) {
    auto S = catalog::sphere(1.0);
    EXPECT_THROW(unit_normal(*S, 0.0, kPi / 2), SingularPoint);
}

TEST(UnitNormal, TorusOutward) {
    auto S = catalog::torus(2.0, 0.5);
    // outer equator: normal points straight away from the axis
    EXPECT_NEAR((unit_normal(*S, 0.0, 0.0) - Vec3(1, 0, 0)).norm(), 0.0, 1e-14);
    // top circle: normal points up
    EXPECT_NEAR((unit_normal(*S, 1.0, kPi / 2) - Vec3(0, 0, 1)).norm(), 0.0, 1e-13);
}

TEST(UnitNormal, DerivativeMatchesDifferences) {
    auto S = catalog::torus(2.0, 0.5);
    const double u = 0.7, v = 1.1, du = 0.6, dv = -1.3;
    const Vec3 closed = unit_normal_derivative(*S, u, v, du, dv);
    auto along = [&](double t) { return unit_normal(*S, u + du * t, v + dv * t); };
    const Vec3 fd = fd_derivative1(along, 0.0, 1e-4);
    EXPECT_NEAR((closed - fd).norm(), 0.0, 1e-9);
}

TEST(Darboux, SphereEquatorIsGeodesic) {
    auto S = catalog::sphere(1.0);
    const auto eq = CurveOnSurface::iso_v(S, 0.0, 0.0, kTwoPi, /*closed=*/true);
    const auto trace = darboux_along(eq, 64);
    for (const auto& d : trace.samples) {
        EXPECT_NEAR(d.k_g, 0.0, 1e-10);
        EXPECT_NEAR(d.k_n, -1.0, 1e-10);
        EXPECT_NEAR(d.tau_g, 0.0, 1e-10);
    }
}

TEST(Darboux, SphereLatitudeClassicalValues) {
    auto S = catalog::sphere(1.0);
    const double v0 = kPi / 6;
    const auto lat = CurveOnSurface::iso_v(S, v0, 0.0, kTwoPi, /*closed=*/true);
    EXPECT_NEAR(lat.length(), kTwoPi * std::cos(v0), 1e-9);
    const auto trace = darboux_along(lat, 64);
    for (const auto& d : trace.samples) {
        EXPECT_NEAR(d.k_g, std::tan(v0), 1e-9);
        EXPECT_NEAR(d.k_n, -1.0, 1e-9);
        EXPECT_NEAR(d.tau_g, 0.0, 1e-10);
        // brute-force cross-check: project the lifted circle's acceleration
        const Vec3 a2 = lat.lifted().derivative2(d.s);
        EXPECT_NEAR(a2.dot(d.B), d.k_g, 1e-9);
        EXPECT_NEAR(a2.dot(d.N), d.k_n, 1e-9);
    }
}

TEST(Darboux, CylinderRulingIsStraight) {
    auto S = catalog::cylinder(1.0, -2.0, 2.0);
    const auto ruling = CurveOnSurface::iso_u(S, 1.2, -2.0, 2.0);
    const auto trace = darboux_along(ruling, 32);
    for (const auto& d : trace.samples) {
        EXPECT_NEAR(d.k_g, 0.0, 1e-12);
        EXPECT_NEAR(d.k_n, 0.0, 1e-12);
        EXPECT_NEAR(d.tau_g, 0.0, 1e-12);
        EXPECT_LT(d.kappa, 1e-10);
        EXPECT_FALSE(d.phi.has_value());
    }
}

TEST(Darboux, OrthonormalFrameAndCurvatureSplit) {
    auto S = catalog::torus(2.0, 0.5);
    UvPath path;
    path.f = [](double t) { return Vec2(t, 0.8 * std::sin(t) + 1.0); };
    path.d1 = [](double t) { return Vec2(1.0, 0.8 * std::cos(t)); };
    path.d2 = [](double t) { return Vec2(0.0, -0.8 * std::sin(t)); };
    path.t0 = 0.0;
    path.t1 = kTwoPi;
    path.closed = true;
    const auto c = CurveOnSurface::from_uv(S, path);
    const auto trace = darboux_along(c, 256);
    for (const auto& d : trace.samples) {
        EXPECT_NEAR((d.B - d.N.cross(d.T)).norm(), 0.0, 1e-10);
        EXPECT_NEAR(d.T.norm(), 1.0, 1e-10);
        EXPECT_NEAR(d.kappa * d.kappa, d.k_g * d.k_g + d.k_n * d.k_n, 1e-8 * d.kappa * d.kappa);
        ASSERT_TRUE(d.phi.has_value());
        EXPECT_NEAR(d.k_g, d.kappa * std::cos(*d.phi), 1e-9);
        EXPECT_NEAR(d.k_n, d.kappa * std::sin(*d.phi), 1e-9);
    }
    const auto res = darboux_equation_residuals(trace);
    EXPECT_LT(res.max(), 1e-6);
}

TEST(Darboux, TauGEqualsTauMinusPhiPrime) {
    auto S = catalog::torus(2.0, 0.5);
    UvPath path;
    path.f = [](double t) { return Vec2(t, 0.8 * std::sin(t) + 1.0); };
    path.d1 = [](double t) { return Vec2(1.0, 0.8 * std::cos(t)); };
    path.d2 = [](double t) { return Vec2(0.0, -0.8 * std::sin(t)); };
    path.t0 = 0.0;
    path.t1 = kTwoPi;
    path.closed = true;
    const auto c = CurveOnSurface::from_uv(S, path);
    const auto trace = darboux_along(c, 256);
    std::vector<double> phi;
    for (const auto& d : trace.samples) {
        ASSERT_TRUE(d.phi.has_value());
        phi.push_back(*d.phi);
    }
    const auto dphi = grid_derivative(phi, trace.ds, trace.closed);
    for (size_t i = 0; i < trace.samples.size(); ++i) {
        const auto& d = trace.samples[i];
        EXPECT_NEAR(d.tau_g, *d.tau - dphi[i], 1e-6) << "s=" << d.s;
    }
}

TEST(Darboux, SphereCurvesAreLinesOfCurvature) {
    // any curve on a sphere has tau_g == 0
    auto S = catalog::sphere(1.0);
    UvPath path;
    path.f = [](double t) { return Vec2(t, 0.4 * std::sin(2.0 * t)); };
    path.d1 = [](double t) { return Vec2(1.0, 0.8 * std::cos(2.0 * t)); };
    path.d2 = [](double t) { return Vec2(0.0, -1.6 * std::sin(2.0 * t)); };
    path.t0 = 0.0;
    path.t1 = kTwoPi;
    path.closed = true;
    const auto c = CurveOnSurface::from_uv(S, path);
    for (const auto& d : darboux_along(c, 128).samples) EXPECT_NEAR(d.tau_g, 0.0, 1e-8);
}

TEST(Darboux, CylinderHelixGeodesicMatchesFrenet) {
    auto S = catalog::cylinder(1.0, -8.0, 8.0);
    UvPath path;  // helix u = t, v = t on the unit cylinder
    path.f = [](double t) { return Vec2(t, t); };
    path.d1 = [](double) { return Vec2(1.0, 1.0); };
    path.d2 = [](double) { return Vec2(0.0, 0.0); };
    path.t0 = 0.0;
    path.t1 = kTwoPi;
    const auto c = CurveOnSurface::from_uv(S, path);
    const auto trace = darboux_along(c, 64);
    for (const auto& d : trace.samples) {
        EXPECT_NEAR(d.k_g, 0.0, 1e-10);  // geodesic
        // Frenet cross-check through the rotation by phi
        const auto [n, b] = rotate_to_frenet(d);
        const FrenetData f = frenet_at(c.lifted(), d.s);
        EXPECT_NEAR((n - f.n).norm(), 0.0, 1e-7);
        EXPECT_NEAR((b - f.b).norm(), 0.0, 1e-7);
    }
}

TEST(RotateToFrenet, ClosedFormCases) {
    DarbouxSample d;
    d.T = Vec3::UnitX();
    d.B = Vec3::UnitY();
    d.N = Vec3::UnitZ();
    d.kappa = 2.0;
    // geodesic: k_g = 0, k_n = kappa > 0 -> phi = pi/2 -> n = N, b = -B
    d.k_g = 0.0;
    d.k_n = d.kappa;
    d.phi = std::atan2(d.k_n, d.k_g);
    {
        const auto [n, b] = rotate_to_frenet(d);
        EXPECT_NEAR((n - d.N).norm(), 0.0, 1e-15);
        EXPECT_NEAR((b + d.B).norm(), 0.0, 1e-15);
    }
    // asymptotic: k_n = 0, k_g = kappa > 0 -> phi = 0 -> n = B, b = N
    d.k_g = d.kappa;
    d.k_n = 0.0;
    d.phi = std::atan2(d.k_n, d.k_g);
    {
        const auto [n, b] = rotate_to_frenet(d);
        EXPECT_NEAR((n - d.B).norm(), 0.0, 1e-15);
        EXPECT_NEAR((b - d.N).norm(), 0.0, 1e-15);
    }
    d.phi.reset();
    EXPECT_THROW(rotate_to_frenet(d), VanishingCurvature);
}

TEST(Darboux, RejectsNonUnitSpeedLift) {
    auto S = catalog::sphere(1.0);
    // a lift that skips arc-length reparametrization
    SpaceCurve raw([S](double t) { return S->eval(t, 0.4 * std::sin(t)); }, 0.0, kTwoPi, true);
    auto c = CurveOnSurface::from_exact_lift(
        S, raw, [](double t) { return Vec2(t, 0.4 * std::sin(t)); },
        [](double t) { return Vec2(1.0, 0.4 * std::cos(t)); },
        [](double t) { return Vec2(0.0, -0.4 * std::sin(t)); });
    EXPECT_THROW(darboux_along(c, 32), NotUnitSpeed);
}

TEST(CurveOnSurface, PolylineRoundTripOnCylinder) {
    auto S = catalog::cylinder(1.0, -2.0, 2.0);
    // straight ruling as a polyline: stays exactly straight through the spline
    std::vector<Vec2> pts;
    for (int i = 0; i <= 40; ++i) pts.push_back(Vec2(0.9, -1.5 + 3.0 * i / 40.0));
    const auto c = CurveOnSurface::from_polyline(S, pts, /*closed=*/false);
    EXPECT_NEAR(c.length(), 3.0, 1e-9);
    for (const auto& d : darboux_along(c, 16).samples) {
        EXPECT_NEAR(d.k_g, 0.0, 1e-9);
        EXPECT_NEAR(d.k_n, 0.0, 1e-9);
    }
}

TEST(CurveOnSurface, PolylineClosedLatitude) {
    auto S = catalog::sphere(1.0);
    const double v0 = kPi / 6;
    std::vector<Vec2> pts;
    const int n = 256;
    for (int i = 0; i < n; ++i) pts.push_back(Vec2(kTwoPi * i / n, v0));
    const auto c = CurveOnSurface::from_polyline(S, pts, /*closed=*/true);
    EXPECT_TRUE(c.is_closed());
    EXPECT_NEAR(c.length(), kTwoPi * std::cos(v0), 1e-6);
    const auto trace = darboux_along(c, 64);
    for (const auto& d : trace.samples) {
        EXPECT_NEAR(d.k_g, std::tan(v0), 1e-7);
        EXPECT_NEAR(d.k_n, -1.0, 1e-7);
        EXPECT_NEAR(d.tau_g, 0.0, 1e-7);
    }
}
