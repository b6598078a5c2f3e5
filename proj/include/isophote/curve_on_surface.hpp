#pragma once
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "isophote/arclength.hpp"
#include "isophote/errors.hpp"
#include "isophote/param_surface.hpp"
#include "isophote/space_curve.hpp"

namespace isophote {

/// A parameter-space path t -> (u, v) with optional closed-form derivatives.
struct UvPath {
    std::function<Vec2(double)> f;
    std::function<Vec2(double)> d1;  // optional
    std::function<Vec2(double)> d2;  // optional
    double t0 = 0.0, t1 = 1.0;
    bool closed = false;
};

/// A curve lying on a parametric surface, arc-length parametrized. Keeps both
/// the (u,v) path and the lifted space curve consistent under one parameter s.
class CurveOnSurface {
public:
    const ParamSurface& surface() const { return *surface_; }
    const SpaceCurve& lifted() const { return lifted_; }
    double s_min() const { return lifted_.s_min(); }
    double s_max() const { return lifted_.s_max(); }
    double length() const { return lifted_.param_span(); }
    bool is_closed() const { return lifted_.is_closed(); }

    Vec2 uv(double s) const { return uv_(s); }
    Vec2 uv_d1(double s) const { return uv_d1_(s); }
    Vec2 uv_d2(double s) const { return uv_d2_(s); }

    /// Builds the curve from a parameter-space path. The lift is
    /// reparametrized by arc length unless already unit speed.
    static CurveOnSurface from_uv(std::shared_ptr<const ParamSurface> surface, UvPath path,
                                  double quad_tol = 1e-10) {
        CurveOnSurface c;
        c.surface_ = std::move(surface);
        const ParamSurface* S = c.surface_.get();

        auto path_d1 = path.d1 ? path.d1 : [f = path.f](double t) {
            return fd_derivative1(f, t, default_fd_step(1.0));
        };
        auto path_d2 = path.d2 ? path.d2 : [d1 = path_d1](double t) {
            return fd_derivative1(d1, t, default_fd_step(1.0));
        };

        auto eval_t = [S, f = path.f](double t) {
            const Vec2 q = f(t);
            return S->eval(q.x(), q.y());
        };
        auto d1_t = [S, f = path.f, pd1 = path_d1](double t) {
            const Vec2 q = f(t), qd = pd1(t);
            return (S->du(q.x(), q.y()) * qd.x() + S->dv(q.x(), q.y()) * qd.y()).eval();
        };
        auto d2_t = [S, f = path.f, pd1 = path_d1, pd2 = path_d2](double t) {
            const Vec2 q = f(t), qd = pd1(t), qdd = pd2(t);
            return (S->duu(q.x(), q.y()) * qd.x() * qd.x() +
                    S->duv(q.x(), q.y()) * 2.0 * qd.x() * qd.y() +
                    S->dvv(q.x(), q.y()) * qd.y() * qd.y() + S->du(q.x(), q.y()) * qdd.x() +
                    S->dv(q.x(), q.y()) * qdd.y())
                .eval();
        };

        SpaceCurve lift_t(eval_t, path.t0, path.t1);
        lift_t.with_d1(d1_t).with_d2(d2_t).with_closed(path.closed);

        auto map = std::make_shared<ArcLengthMap>(lift_t, quad_tol);
        c.lifted_ = reparametrize_via(lift_t, map);
        c.uv_ = [f = path.f, map](double s) { return f(map->t_of_s(s)); };
        c.uv_d1_ = [d1 = path_d1, lift = lift_t, map](double s) {
            const double t = map->t_of_s(s);
            return (d1(t) / lift.derivative1(t).norm()).eval();
        };
        c.uv_d2_ = [d1 = path_d1, d2 = path_d2, lift = lift_t, map](double s) {
            const double t = map->t_of_s(s);
            const Vec3 g1 = lift.derivative1(t);
            const double v = g1.norm();
            const double tp = 1.0 / v;
            const double ts = -g1.dot(lift.derivative2(t)) / (v * v * v * v);
            return (d2(t) * tp * tp + d1(t) * ts).eval();
        };
        return c;
    }

    /// Constant-u parameter curve (v varies).
    static CurveOnSurface iso_u(std::shared_ptr<const ParamSurface> surface, double u0, double t0,
                                double t1, bool closed = false, double quad_tol = 1e-10) {
        UvPath p;
        p.f = [u0](double t) { return Vec2(u0, t); };
        p.d1 = [](double) { return Vec2(0.0, 1.0); };
        p.d2 = [](double) { return Vec2(0.0, 0.0); };
        p.t0 = t0;
        p.t1 = t1;
        p.closed = closed;
        return from_uv(std::move(surface), p, quad_tol);
    }

    /// Constant-v parameter curve (u varies).
    static CurveOnSurface iso_v(std::shared_ptr<const ParamSurface> surface, double v0, double t0,
                                double t1, bool closed = false, double quad_tol = 1e-10) {
        UvPath p;
        p.f = [v0](double t) { return Vec2(t, v0); };
        p.d1 = [](double) { return Vec2(1.0, 0.0); };
        p.d2 = [](double) { return Vec2(0.0, 0.0); };
        p.t0 = t0;
        p.t1 = t1;
        p.closed = closed;
        return from_uv(std::move(surface), p, quad_tol);
    }

    /// Fits chord-parametrized cubic splines through a traced (u,v) polyline
    /// (periodic splines when closed), lifts, and reparametrizes by arc
    /// length. Wrapping across periodic surface directions is unwrapped into a
    /// continuous path plus a linear winding ramp, so straight iso-lines stay
    /// exactly straight.
    static CurveOnSurface from_polyline(std::shared_ptr<const ParamSurface> surface,
                                        std::vector<Vec2> pts, bool closed,
                                        double quad_tol = 1e-10) {
        if (pts.size() < 4) throw TooFewSamples("from_polyline needs >= 4 points");
        const ParamSurface& S = *surface;

        // Unwrap periodic jumps into a continuous path.
        const double uspan = S.u_max() - S.u_min(), vspan = S.v_max() - S.v_min();
        for (size_t i = 1; i < pts.size(); ++i) {
            if (S.u_periodic()) {
                const double k = std::round((pts[i - 1].x() - pts[i].x()) / uspan);
                pts[i].x() += k * uspan;
            }
            if (S.v_periodic()) {
                const double k = std::round((pts[i - 1].y() - pts[i].y()) / vspan);
                pts[i].y() += k * vspan;
            }
        }

        // Chord-length parameters of the lifted points.
        std::vector<double> t;
        t.reserve(pts.size() + 1);
        t.push_back(0.0);
        Vec3 prev = S.eval(pts[0].x(), pts[0].y());
        for (size_t i = 1; i < pts.size(); ++i) {
            const Vec3 p = S.eval(pts[i].x(), pts[i].y());
            const double d = (p - prev).norm();
            t.push_back(t.back() + std::max(d, 1e-15));
            prev = p;
        }

        double period = 0.0;
        double wind_u = 0.0, wind_v = 0.0;
        if (closed) {
            // Closing chord and winding numbers for the periodic components.
            Vec2 first_unwrapped = pts.front();
            if (S.u_periodic())
                wind_u = std::round((pts.back().x() - pts.front().x()) / uspan);
            if (S.v_periodic())
                wind_v = std::round((pts.back().y() - pts.front().y()) / vspan);
            first_unwrapped.x() += wind_u * uspan;
            first_unwrapped.y() += wind_v * vspan;
            const Vec3 p0 = S.eval(first_unwrapped.x(), first_unwrapped.y());
            t.push_back(t.back() + std::max((p0 - prev).norm(), 1e-15));
            period = t.back();
        }

        auto make_component = [&](auto get, double wind, double span) {
            std::vector<double> y(pts.size());
            const double total = closed ? period : t[pts.size() - 1];
            const double ramp = closed ? wind * span / total : 0.0;
            for (size_t i = 0; i < pts.size(); ++i) y[i] = get(pts[i]) - ramp * t[i];
            std::vector<double> x(t.begin(), t.begin() + pts.size() + (closed ? 1 : 0));
            return std::make_pair(CubicSpline(std::move(x), std::move(y), closed), ramp);
        };
        auto [su, ru] = make_component([](const Vec2& p) { return p.x(); }, wind_u, uspan);
        auto [sv, rv] = make_component([](const Vec2& p) { return p.y(); }, wind_v, vspan);

        UvPath path;
        path.f = [su = su, sv = sv, ru, rv](double tt) {
            return Vec2(su.eval(tt) + ru * tt, sv.eval(tt) + rv * tt);
        };
        path.d1 = [su = su, sv = sv, ru, rv](double tt) {
            return Vec2(su.derivative(tt) + ru, sv.derivative(tt) + rv);
        };
        path.d2 = [su = su, sv = sv](double tt) {
            return Vec2(su.second_derivative(tt), sv.second_derivative(tt));
        };
        path.t0 = 0.0;
        path.t1 = closed ? period : t[pts.size() - 1];
        path.closed = closed;
        return from_uv(std::move(surface), path, quad_tol);
    }

    /// For curves whose lift is known in closed form (already unit speed):
    /// trusts the provided space curve and the s -> (u,v) maps.
    static CurveOnSurface from_exact_lift(std::shared_ptr<const ParamSurface> surface,
                                          SpaceCurve lifted, std::function<Vec2(double)> uv,
                                          std::function<Vec2(double)> uv_d1,
                                          std::function<Vec2(double)> uv_d2) {
        if (!lifted.is_unit_speed()) throw NotUnitSpeed("from_exact_lift expects a unit-speed lift");
        CurveOnSurface c;
        c.surface_ = std::move(surface);
        c.lifted_ = std::move(lifted);
        c.uv_ = std::move(uv);
        c.uv_d1_ = std::move(uv_d1);
        c.uv_d2_ = std::move(uv_d2);
        return c;
    }

private:
    static SpaceCurve reparametrize_via(const SpaceCurve& curve,
                                        std::shared_ptr<ArcLengthMap> map) {
        auto src = std::make_shared<SpaceCurve>(curve);
        auto eval = [map, src](double s) { return src->point(map->t_of_s(s)); };
        auto d1 = [map, src](double s) {
            const double t = map->t_of_s(s);
            const Vec3 g1 = src->derivative1(t);
            return (g1 / g1.norm()).eval();
        };
        auto d2 = [map, src](double s) {
            const double t = map->t_of_s(s);
            const Vec3 g1 = src->derivative1(t), g2 = src->derivative2(t);
            const double v = g1.norm();
            const double tp = 1.0 / v;
            const double ts = -g1.dot(g2) / (v * v * v * v);
            return (g2 * tp * tp + g1 * ts).eval();
        };
        auto d3 = [map, src](double s) {
            const double t = map->t_of_s(s);
            const Vec3 g1 = src->derivative1(t), g2 = src->derivative2(t), g3 = src->derivative3(t);
            const double v = g1.norm();
            const double w = g1.dot(g2);
            const double wp = g2.squaredNorm() + g1.dot(g3);
            const double tp = 1.0 / v;
            const double ts = -w / std::pow(v, 4);
            const double tq = (-wp / std::pow(v, 4) + 4.0 * w * w / std::pow(v, 6)) * tp;
            return (g3 * tp * tp * tp + 3.0 * g2 * tp * ts + g1 * tq).eval();
        };
        SpaceCurve out(eval, 0.0, map->total_length(), /*unit_speed=*/true);
        out.with_d1(d1).with_d2(d2).with_d3(d3).with_closed(curve.is_closed());
        return out;
    }

    std::shared_ptr<const ParamSurface> surface_;
    SpaceCurve lifted_;
    std::function<Vec2(double)> uv_, uv_d1_, uv_d2_;
};

}  // namespace isophote
