#pragma once
#include <cmath>
#include <memory>
#include <string>

#include "isophote/errors.hpp"
#include "isophote/frenet.hpp"
#include "isophote/param_surface.hpp"
#include "isophote/space_curve.hpp"

namespace isophote {

/// A space curve bundled with closed-form curvature/torsion suppliers when the
/// construction provides them (needed for ruled-surface frames).
struct CatalogCurve {
    SpaceCurve curve;
    std::function<double(double)> kappa, tau;    // optional
    std::function<double(double)> dkappa, dtau;  // optional

    bool has_scalar_forms() const { return kappa && tau && dkappa && dtau; }
};

namespace catalog {

/// Unit-speed circle of radius R in the z = 0 plane, s in [0, 2 pi R].
inline CatalogCurve circle(double R) {
    if (!(R > 0)) throw ParameterOutOfRange("circle: radius must be positive");
    CatalogCurve c;
    c.curve = SpaceCurve([R](double s) { return Vec3(R * std::cos(s / R), R * std::sin(s / R), 0.0); },
                         0.0, kTwoPi * R, /*unit_speed=*/true);
    c.curve
        .with_d1([R](double s) { return Vec3(-std::sin(s / R), std::cos(s / R), 0.0); })
        .with_d2([R](double s) { return Vec3(-std::cos(s / R) / R, -std::sin(s / R) / R, 0.0); })
        .with_d3([R](double s) { return Vec3(std::sin(s / R) / (R * R), -std::cos(s / R) / (R * R), 0.0); })
        .with_closed(true);
    c.kappa = [R](double) { return 1.0 / R; };
    c.tau = [](double) { return 0.0; };
    c.dkappa = [](double) { return 0.0; };
    c.dtau = [](double) { return 0.0; };
    return c;
}

/// Unit-speed circular helix (a cos(s/c), a sin(s/c), b s/c), c = sqrt(a^2+b^2),
/// covering `turns` full revolutions. kappa = a/c^2, tau = b/c^2, axis +z.
inline CatalogCurve circular_helix(double a, double b, double turns = 1.0) {
    if (!(a > 0)) throw ParameterOutOfRange("circular_helix: a must be positive");
    if (!(turns > 0)) throw ParameterOutOfRange("circular_helix: turns must be positive");
    const double c0 = std::hypot(a, b);
    CatalogCurve c;
    c.curve = SpaceCurve(
        [a, b, c0](double s) {
            return Vec3(a * std::cos(s / c0), a * std::sin(s / c0), b * s / c0);
        },
        0.0, kTwoPi * c0 * turns, /*unit_speed=*/true);
    c.curve
        .with_d1([a, b, c0](double s) {
            return Vec3(-a * std::sin(s / c0) / c0, a * std::cos(s / c0) / c0, b / c0);
        })
        .with_d2([a, c0](double s) {
            const double w = 1.0 / (c0 * c0);
            return Vec3(-a * std::cos(s / c0) * w, -a * std::sin(s / c0) * w, 0.0);
        })
        .with_d3([a, c0](double s) {
            const double w = 1.0 / (c0 * c0 * c0);
            return Vec3(a * std::sin(s / c0) * w, -a * std::cos(s / c0) * w, 0.0);
        });
    c.kappa = [a, c0](double) { return a / (c0 * c0); };
    c.tau = [b, c0](double) { return b / (c0 * c0); };
    c.dkappa = [](double) { return 0.0; };
    c.dtau = [](double) { return 0.0; };
    return c;
}

/// Unit-speed slant helix with kappa(s) = m cos(b s), tau(s) = m sin(b s),
/// m = sqrt(a^2 - b^2) (a > b > 0). The principal normal keeps a constant
/// angle with a fixed axis; sigma = b / m. The default parameter range stays
/// inside one branch of kappa > 0.
inline CatalogCurve slant_helix(double a, double b, double s0, double s1) {
    if (!(a > b && b > 0)) throw ParameterOutOfRange("slant_helix: need a > b > 0");
    if (!(s0 < s1)) throw ParameterOutOfRange("slant_helix: empty parameter range");
    const double A = (a * a - b * b) / (2.0 * a);
    const double p = a + b, m = a - b;
    const double B0 = std::sqrt(a * a - b * b) / (a * b);
    CatalogCurve c;
    c.curve = SpaceCurve(
        [=](double t) {
            return Vec3(-A * (std::cos(p * t) / (p * p) + std::cos(m * t) / (m * m)),
                        -A * (std::sin(p * t) / (p * p) + std::sin(m * t) / (m * m)),
                        -B0 * std::cos(b * t));
        },
        s0, s1, /*unit_speed=*/true);
    c.curve
        .with_d1([=](double t) {
            return Vec3(A * (std::sin(p * t) / p + std::sin(m * t) / m),
                        -A * (std::cos(p * t) / p + std::cos(m * t) / m), B0 * b * std::sin(b * t));
        })
        .with_d2([=](double t) {
            return Vec3(A * (std::cos(p * t) + std::cos(m * t)),
                        A * (std::sin(p * t) + std::sin(m * t)), B0 * b * b * std::cos(b * t));
        })
        .with_d3([=](double t) {
            return Vec3(-A * (p * std::sin(p * t) + m * std::sin(m * t)),
                        A * (p * std::cos(p * t) + m * std::cos(m * t)),
                        -B0 * b * b * b * std::sin(b * t));
        });
    const double mm = std::sqrt(a * a - b * b);
    c.kappa = [mm, b](double t) { return mm * std::cos(b * t); };
    c.tau = [mm, b](double t) { return mm * std::sin(b * t); };
    c.dkappa = [mm, b](double t) { return -mm * b * std::sin(b * t); };
    c.dtau = [mm, b](double t) { return mm * b * std::cos(b * t); };
    return c;
}

inline CatalogCurve slant_helix(double a, double b) {
    const double half = 0.85 * kPi / (2.0 * b);  // stay clear of the kappa = 0 ends
    return slant_helix(a, b, -half, half);
}

/// Straight line p + s*dir (dir normalized); kappa == 0 everywhere.
inline CatalogCurve line(const Vec3& p, const Vec3& dir, double s0, double s1) {
    if (dir.norm() < 1e-12) throw ParameterOutOfRange("line: zero direction");
    const Vec3 d = dir.normalized();
    CatalogCurve c;
    c.curve = SpaceCurve([p, d](double s) { return (p + s * d).eval(); }, s0, s1, true);
    c.curve.with_d1([d](double) { return d; })
        .with_d2([](double) { return Vec3::Zero(); })
        .with_d3([](double) { return Vec3::Zero(); });
    c.kappa = [](double) { return 0.0; };
    c.tau = [](double) { return 0.0; };
    c.dkappa = [](double) { return 0.0; };
    c.dtau = [](double) { return 0.0; };
    return c;
}

// ---------------------------------------------------------------------------
// Surfaces. Parameter order is chosen so S_u x S_v points outward where
// "outward" means something (sphere, cylinder, torus).
// ---------------------------------------------------------------------------

/// Sphere of radius R: S(u,v) = R (cos u cos v, sin u cos v, sin v);
/// u in [0, 2 pi) periodic, v in [-pi/2, pi/2]; the poles are singular rows.
inline std::shared_ptr<ParamSurface> sphere(double R = 1.0) {
    if (!(R > 0)) throw ParameterOutOfRange("sphere: radius must be positive");
    auto s = std::make_shared<ParamSurface>(
        [R](double u, double v) {
            return Vec3(R * std::cos(u) * std::cos(v), R * std::sin(u) * std::cos(v),
                        R * std::sin(v));
        },
        0.0, kTwoPi, -kPi / 2, kPi / 2);
    s->with_su([R](double u, double v) {
         return Vec3(-R * std::sin(u) * std::cos(v), R * std::cos(u) * std::cos(v), 0.0);
     })
        .with_sv([R](double u, double v) {
            return Vec3(-R * std::cos(u) * std::sin(v), -R * std::sin(u) * std::sin(v),
                        R * std::cos(v));
        })
        .with_suu([R](double u, double v) {
            return Vec3(-R * std::cos(u) * std::cos(v), -R * std::sin(u) * std::cos(v), 0.0);
        })
        .with_suv([R](double u, double v) {
            return Vec3(R * std::sin(u) * std::sin(v), -R * std::cos(u) * std::sin(v), 0.0);
        })
        .with_svv([R](double u, double v) {
            return Vec3(-R * std::cos(u) * std::cos(v), -R * std::sin(u) * std::cos(v),
                        -R * std::sin(v));
        })
        .with_periodic(true, false);
    return s;
}

/// Cylinder of radius R about the z axis: (R cos u, R sin u, v).
inline std::shared_ptr<ParamSurface> cylinder(double R = 1.0, double v0 = -2.0, double v1 = 2.0) {
    if (!(R > 0)) throw ParameterOutOfRange("cylinder: radius must be positive");
    if (!(v0 < v1)) throw ParameterOutOfRange("cylinder: empty height range");
    auto s = std::make_shared<ParamSurface>(
        [R](double u, double v) { return Vec3(R * std::cos(u), R * std::sin(u), v); }, 0.0, kTwoPi,
        v0, v1);
    s->with_su([R](double u, double) { return Vec3(-R * std::sin(u), R * std::cos(u), 0.0); })
        .with_sv([](double, double) { return Vec3(0.0, 0.0, 1.0); })
        .with_suu([R](double u, double) { return Vec3(-R * std::cos(u), -R * std::sin(u), 0.0); })
        .with_suv([](double, double) { return Vec3::Zero(); })
        .with_svv([](double, double) { return Vec3::Zero(); })
        .with_periodic(true, false);
    return s;
}

/// Torus with major radius R and minor radius r (R > r > 0):
/// ((R + r cos v) cos u, (R + r cos v) sin u, r sin v), both directions periodic.
inline std::shared_ptr<ParamSurface> torus(double R = 2.0, double r = 0.5) {
    if (!(R > r && r > 0)) throw ParameterOutOfRange("torus: need R > r > 0");
    auto s = std::make_shared<ParamSurface>(
        [R, r](double u, double v) {
            const double w = R + r * std::cos(v);
            return Vec3(w * std::cos(u), w * std::sin(u), r * std::sin(v));
        },
        0.0, kTwoPi, 0.0, kTwoPi);
    s->with_su([R, r](double u, double v) {
         const double w = R + r * std::cos(v);
         return Vec3(-w * std::sin(u), w * std::cos(u), 0.0);
     })
        .with_sv([r](double u, double v) {
            return Vec3(-r * std::sin(v) * std::cos(u), -r * std::sin(v) * std::sin(u),
                        r * std::cos(v));
        })
        .with_suu([R, r](double u, double v) {
            const double w = R + r * std::cos(v);
            return Vec3(-w * std::cos(u), -w * std::sin(u), 0.0);
        })
        .with_suv([r](double u, double v) {
            return Vec3(r * std::sin(v) * std::sin(u), -r * std::sin(v) * std::cos(u), 0.0);
        })
        .with_svv([r](double u, double v) {
            return Vec3(-r * std::cos(v) * std::cos(u), -r * std::cos(v) * std::sin(u),
                        -r * std::sin(v));
        })
        .with_periodic(true, true);
    return s;
}

/// Quadric graph z = (ax u^2 + by v^2) / 2 over a rectangle.
inline std::shared_ptr<ParamSurface> graph(double ax = 1.0, double by = -1.0, double u0 = -1.0,
                                           double u1 = 1.0, double v0 = -1.0, double v1 = 1.0) {
    if (!(u0 < u1 && v0 < v1)) throw ParameterOutOfRange("graph: empty domain");
    auto s = std::make_shared<ParamSurface>(
        [ax, by](double u, double v) {
            return Vec3(u, v, 0.5 * (ax * u * u + by * v * v));
        },
        u0, u1, v0, v1);
    s->with_su([ax](double u, double) { return Vec3(1.0, 0.0, ax * u); })
        .with_sv([by](double, double v) { return Vec3(0.0, 1.0, by * v); })
        .with_suu([ax](double, double) { return Vec3(0.0, 0.0, ax); })
        .with_suv([](double, double) { return Vec3::Zero(); })
        .with_svv([by](double, double) { return Vec3(0.0, 0.0, by); });
    return s;
}

/// Ruled surface gamma(u) + v * D(u) where D is the unit Darboux direction
/// (tau T + kappa b)/sqrt(kappa^2 + tau^2). The base curve is a geodesic of
/// this surface along v = 0. Needs the curve's scalar forms (or falls back to
/// finite differences of frenet data for kappa', tau').
inline std::shared_ptr<ParamSurface> rectifying_developable(const CatalogCurve& cc, double w0,
                                                            double w1) {
    if (!(w0 < w1)) throw ParameterOutOfRange("rectifying_developable: empty ruling range");
    if (!cc.curve.is_unit_speed())
        throw NotUnitSpeed("rectifying_developable: base curve must be unit speed");
    auto gamma = std::make_shared<SpaceCurve>(cc.curve);
    auto kap = cc.kappa, tau = cc.tau, dkap = cc.dkappa, dtau = cc.dtau;
    if (!cc.has_scalar_forms()) {
        kap = [gamma](double t) { return gamma->derivative2(t).norm(); };
        tau = [gamma](double t) {
            const Vec3 d1 = gamma->derivative1(t), d2 = gamma->derivative2(t);
            return d1.cross(d2).dot(gamma->derivative3(t)) / d2.squaredNorm();
        };
        dkap = [kap](double t) {
            return fd_derivative1(kap, t, default_fd_step(1.0)); };
        dtau = [tau](double t) {
            return fd_derivative1(tau, t, default_fd_step(1.0)); };
    }
    auto frame = [gamma, kap](double t) {
        const Vec3 T = gamma->derivative1(t);
        const Vec3 n = (gamma->derivative2(t) / kap(t)).eval();
        return std::make_tuple(T, n, T.cross(n).eval());
    };
    auto dir = [frame, kap, tau](double t) {
        const auto [T, n, b] = frame(t);
        const double k = kap(t), ta = tau(t);
        return ((ta * T + k * b) / std::hypot(k, ta)).eval();
    };
    auto dir_d1 = [frame, kap, tau, dkap, dtau](double t) {
        const auto [T, n, b] = frame(t);
        const double k = kap(t), ta = tau(t);
        const double num = k * dtau(t) - dkap(t) * ta;
        const double m = k * k + ta * ta;
        return (num * (k * T - ta * b) / (m * std::sqrt(m))).eval();
    };

    auto s = std::make_shared<ParamSurface>(
        [gamma, dir](double u, double v) { return (gamma->point(u) + v * dir(u)).eval(); },
        cc.curve.s_min(), cc.curve.s_max(), w0, w1);
    s->with_su([gamma, dir_d1](double u, double v) {
         return (gamma->derivative1(u) + v * dir_d1(u)).eval();
     })
        .with_sv([dir](double u, double) { return dir(u); })
        .with_suv([dir_d1](double u, double) { return dir_d1(u); })
        .with_svv([](double, double) { return Vec3::Zero(); });
    // S_uu falls back to differences of the closed-form S_u.
    return s;
}

}  // namespace catalog
}  // namespace isophote
