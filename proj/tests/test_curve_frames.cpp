#include <gtest/gtest.h>

#include <cmath>

#include "isophote/arclength.hpp"
#include "isophote/catalog.hpp"
#include "isophote/frenet.hpp"
#include "oracles.hpp"

using namespace isophote;

namespace {

SpaceCurve double_speed_circle() {
    // unit circle traced at speed 2
    SpaceCurve c([](double t) { return Vec3(std::cos(2 * t), std::sin(2 * t), 0.0); }, 0.0, kPi);
    c.with_d1([](double t) { return Vec3(-2 * std::sin(2 * t), 2 * std::cos(2 * t), 0.0); })
        .with_closed(true);
    return c;
}

}  // namespace

TEST(Reparametrize, ConstantSpeedCircle) {
    const SpaceCurve c = reparametrize_arclength(double_speed_circle(), 1e-10);
    EXPECT_TRUE(c.is_unit_speed());
    EXPECT_NEAR(c.param_span(), kTwoPi, 1e-10);
    EXPECT_NEAR(unit_speed_residual(c), 0.0, 1e-10);
    // point at arc length pi/2 is a quarter of the circle
    EXPECT_NEAR((c.point(kPi / 2) - Vec3(0, 1, 0)).norm(), 0.0, 1e-9);
}

TEST(Reparametrize, UnitSpeedCurveReturnedUnchanged) {
    const CatalogCurve helix = catalog::circular_helix(1.0, 1.0);
    const SpaceCurve r = reparametrize_arclength(helix.curve, 1e-10);
    EXPECT_NEAR(r.param_span(), helix.curve.param_span(), 1e-12);
    for (double s : {0.1, 1.0, 4.0})
        EXPECT_NEAR((r.point(s) - helix.curve.point(s)).norm(), 0.0, 1e-12);
}

TEST(Reparametrize, SlantHelixLengthMatchesSimpsonOracle) {
    // full period [0, 2pi]; speed is 1 everywhere, which the oracle confirms
    const CatalogCurve g = catalog::slant_helix(2.0, 1.0, 0.0, kTwoPi);
    const auto speed = [&](double t) { return g.curve.derivative1(t).norm(); };
    const double oracle = oracles::adaptive_simpson(speed, 0.0, kTwoPi, 1e-12);
    ArcLengthMap map(g.curve, 1e-10);
    EXPECT_NEAR(map.total_length(), oracle, 1e-10);
    EXPECT_NEAR(map.total_length(), kTwoPi, 1e-10);
}

TEST(Reparametrize, Idempotent) {
    const SpaceCurve once = reparametrize_arclength(double_speed_circle(), 1e-10);
    const SpaceCurve twice = reparametrize_arclength(once, 1e-10);
    for (double s : {0.0, 1.0, 3.0, 6.0})
        EXPECT_NEAR((once.point(s) - twice.point(s)).norm(), 0.0, 1e-12);
}

TEST(Reparametrize, SingularSpeedRejected) {
    // cusp at t = 0: speed vanishes
    SpaceCurve cusp([](double t) { return Vec3(t * t, t * t * t, 0.0); }, -1.0, 1.0);
    cusp.with_d1([](double t) { return Vec3(2 * t, 3 * t * t, 0.0); });
    EXPECT_THROW(ArcLengthMap(cusp, 1e-10), SingularSpeed);
}

TEST(Frenet, CircularHelixScalars) {
    // a = b = 1: kappa = a/(a^2+b^2) = 1/2, tau = b/(a^2+b^2) = 1/2
    const CatalogCurve helix = catalog::circular_helix(1.0, 1.0);
    for (double s : {0.0, 1.3, 4.0}) {
        const FrenetData f = frenet_at(helix.curve, s);
        EXPECT_NEAR(f.kappa, 0.5, 1e-12);
        EXPECT_NEAR(f.tau, 0.5, 1e-12);
    }
}

TEST(Frenet, PlanarCircleAtZero) {
    const CatalogCurve c = catalog::circle(1.0);
    const FrenetData f = frenet_at(c.curve, 0.0);
    EXPECT_NEAR((f.T - Vec3(0, 1, 0)).norm(), 0.0, 1e-12);
    EXPECT_NEAR((f.n - Vec3(-1, 0, 0)).norm(), 0.0, 1e-12);
    EXPECT_NEAR(f.kappa, 1.0, 1e-12);
    EXPECT_NEAR(f.tau, 0.0, 1e-12);
}

TEST(Frenet, SlantHelixMatchesClosedFormsAndOracle) {
    const CatalogCurve g = catalog::slant_helix(2.0, 1.0, -1.3, 1.3);
    const double m = std::sqrt(3.0);
    for (double s : g.curve.sample_params(40)) {
        const FrenetData f = frenet_at(g.curve, s);
        EXPECT_NEAR(f.kappa, m * std::cos(s), 1e-9) << "s=" << s;
        EXPECT_NEAR(f.tau, m * std::sin(s), 1e-9) << "s=" << s;
        // independent oracle from raw position differences
        const auto fd = oracles::frenet_scalars_fd(g.curve, s);
        EXPECT_NEAR(fd.kappa, f.kappa, 1e-7);
        EXPECT_NEAR(fd.tau, f.tau, 2e-5);
    }
}

TEST(Frenet, OrthonormalityAndSerretResiduals) {
    const CatalogCurve g = catalog::slant_helix(2.0, 1.0);
    const SpaceCurve& c = g.curve;
    const double h = 1e-4;
    for (double s : c.sample_params(25)) {
        const FrenetData f = frenet_at(c, s);
        EXPECT_NEAR((f.b - f.T.cross(f.n)).norm(), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(f.T.dot(f.n)), 0.0, 1e-10);
        EXPECT_NEAR(f.T.norm(), 1.0, 1e-10);
        if (s - 2 * h < c.s_min() || s + 2 * h > c.s_max()) continue;
        auto frame = [&](double x) { return frenet_at(c, x); };
        auto d5 = [&](auto get) {
            return ((get(frame(s - 2 * h)) - 8.0 * get(frame(s - h)) + 8.0 * get(frame(s + h)) -
                     get(frame(s + 2 * h))) /
                    (12.0 * h))
                .eval();
        };
        const Vec3 Tp = d5([](const FrenetData& x) { return x.T; });
        const Vec3 np = d5([](const FrenetData& x) { return x.n; });
        const Vec3 bp = d5([](const FrenetData& x) { return x.b; });
        EXPECT_NEAR((Tp - f.kappa * f.n).norm(), 0.0, 1e-6);
        EXPECT_NEAR((np - (-f.kappa * f.T + f.tau * f.b)).norm(), 0.0, 1e-6);
        EXPECT_NEAR((bp + f.tau * f.n).norm(), 0.0, 1e-6);
    }
}

TEST(Frenet, VanishingCurvatureRejected) {
    const CatalogCurve l = catalog::line(Vec3(0, 0, 0), Vec3(1, 1, 0), 0.0, 2.0);
    EXPECT_THROW(frenet_at(l.curve, 1.0), VanishingCurvature);
}

TEST(Frenet, FiniteDifferenceFallbackAgreesWithSuppliers) {
    const CatalogCurve g = catalog::slant_helix(2.0, 1.0);
    // same mapping without any derivative suppliers
    SpaceCurve bare([c = g.curve](double s) { return c.point(s); }, g.curve.s_min(),
                    g.curve.s_max(), true);
    for (double s : {-0.9, -0.2, 0.4, 1.0}) {
        EXPECT_NEAR((bare.derivative1(s) - g.curve.derivative1(s)).norm(), 0.0, 1e-9);
        EXPECT_NEAR((bare.derivative2(s) - g.curve.derivative2(s)).norm(), 0.0, 1e-6);
        EXPECT_NEAR((bare.derivative3(s) - g.curve.derivative3(s)).norm(), 0.0, 1e-4);
    }
}

TEST(ClassifyHelix, CircularHelixIsBoth) {
    const CatalogCurve helix = catalog::circular_helix(1.0, 1.0);
    const HelixVerdict v = classify_helix(helix.curve, 100);
    EXPECT_EQ(v.kind, HelixKind::Both);
    EXPECT_NEAR(v.tau_over_kappa.stats.median, 1.0, 1e-10);
    EXPECT_NEAR(v.sigma.stats.median, 0.0, 1e-8);
    EXPECT_FALSE(v.degenerate_planar);
}

TEST(ClassifyHelix, SlantHelixOnly) {
    const CatalogCurve g = catalog::slant_helix(2.0, 1.0, -1.3, 1.3);
    const HelixVerdict v = classify_helix(g.curve, 200);
    EXPECT_EQ(v.kind, HelixKind::SlantHelix);
    // sigma = b / sqrt(a^2 - b^2) = 1/sqrt(3)
    EXPECT_NEAR(std::abs(v.sigma.stats.median), 1.0 / std::sqrt(3.0), 1e-7);
    EXPECT_LE(v.sigma.spread, 1e-6);
    // tau/kappa = tan(s) is far from constant on this range
    EXPECT_GT(v.tau_over_kappa.spread, 0.1);
}

TEST(ClassifyHelix, PlanarCircleIsDegenerateGeneralHelix) {
    const CatalogCurve c = catalog::circle(2.0);
    const HelixVerdict v = classify_helix(c.curve, 64);
    EXPECT_EQ(v.kind, HelixKind::GeneralHelix);
    EXPECT_TRUE(v.degenerate_planar);
}

TEST(ClassifyHelix, ErrorPaths) {
    const CatalogCurve helix = catalog::circular_helix(1.0, 1.0);
    EXPECT_THROW(classify_helix(helix.curve, 7), TooFewSamples);
    const CatalogCurve l = catalog::line(Vec3::Zero(), Vec3::UnitZ(), 0.0, 1.0);
    EXPECT_THROW(classify_helix(l.curve, 16), VanishingCurvature);
}
