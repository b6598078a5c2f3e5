#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "isophote/errors.hpp"
#include "isophote/numeric.hpp"
#include "isophote/types.hpp"

namespace isophote {

/// A twice-differentiable parametric surface over a rectangle, with optional
/// periodicity per direction. First partials fall back to finite differences
/// of eval, second partials to finite differences of the first partials.
class ParamSurface {
public:
    using Fn = std::function<Vec3(double, double)>;

    ParamSurface() = default;
    ParamSurface(Fn eval, double u0, double u1, double v0, double v1)
        : eval_(std::move(eval)), u0_(u0), u1_(u1), v0_(v0), v1_(v1) {}

    ParamSurface& with_su(Fn f) { su_ = std::move(f); return *this; }
    ParamSurface& with_sv(Fn f) { sv_ = std::move(f); return *this; }
    ParamSurface& with_suu(Fn f) { suu_ = std::move(f); return *this; }
    ParamSurface& with_suv(Fn f) { suv_ = std::move(f); return *this; }
    ParamSurface& with_svv(Fn f) { svv_ = std::move(f); return *this; }
    ParamSurface& with_periodic(bool u, bool v) { u_periodic_ = u; v_periodic_ = v; return *this; }

    Vec3 eval(double u, double v) const { return eval_(u, v); }

    Vec3 du(double u, double v) const {
        if (su_) return su_(u, v);
        return fd_derivative1([&](double x) { return eval_(x, v); }, u, step(u, v));
    }
    Vec3 dv(double u, double v) const {
        if (sv_) return sv_(u, v);
        return fd_derivative1([&](double x) { return eval_(u, x); }, v, step(u, v));
    }
    Vec3 duu(double u, double v) const {
        if (suu_) return suu_(u, v);
        if (su_) return fd_derivative1([&](double x) { return su_(x, v); }, u, step(u, v));
        return fd_derivative2([&](double x) { return eval_(x, v); }, u, step(u, v));
    }
    Vec3 duv(double u, double v) const {
        if (suv_) return suv_(u, v);
        if (su_) return fd_derivative1([&](double x) { return su_(u, x); }, v, step(u, v));
        return fd_derivative1([&](double x) { return dv(x, v); }, u, step(u, v));
    }
    Vec3 dvv(double u, double v) const {
        if (svv_) return svv_(u, v);
        if (sv_) return fd_derivative1([&](double x) { return sv_(u, x); }, v, step(u, v));
        return fd_derivative2([&](double x) { return eval_(u, x); }, v, step(u, v));
    }

    double u_min() const { return u0_; }
    double u_max() const { return u1_; }
    double v_min() const { return v0_; }
    double v_max() const { return v1_; }
    bool u_periodic() const { return u_periodic_; }
    bool v_periodic() const { return v_periodic_; }

    /// Wraps periodic coordinates into the domain rectangle; clamps nothing.
    std::pair<double, double> wrap(double u, double v) const {
        if (u_periodic_) {
            const double span = u1_ - u0_;
            u = u0_ + std::fmod(u - u0_, span);
            if (u < u0_) u += span;
        }
        if (v_periodic_) {
            const double span = v1_ - v0_;
            v = v0_ + std::fmod(v - v0_, span);
            if (v < v0_) v += span;
        }
        return {u, v};
    }

private:
    double step(double u, double v) const {
        return default_fd_step(std::max(1.0, eval_(u, v).norm()));
    }

    Fn eval_, su_, sv_, suu_, suv_, svv_;
    double u0_ = 0.0, u1_ = 1.0, v0_ = 0.0, v1_ = 1.0;
    bool u_periodic_ = false, v_periodic_ = false;
};

/// N = (S_u x S_v) / |S_u x S_v|. Orientation is fixed by the parameter order.
inline Vec3 unit_normal(const ParamSurface& s, double u, double v, double eps_degenerate = 1e-9) {
    const Vec3 c = s.du(u, v).cross(s.dv(u, v));
    const double n = c.norm();
    if (n < eps_degenerate)
        throw SingularPoint("surface is singular at (u,v)=(" + std::to_string(u) + "," +
                            std::to_string(v) + ")");
    return c / n;
}

/// Directional derivative of the unit normal along (du_ds, dv_ds) in parameter
/// space, via the chain rule on the cross-product normal.
inline Vec3 unit_normal_derivative(const ParamSurface& s, double u, double v, double du_ds,
                                   double dv_ds, double eps_degenerate = 1e-9) {
    const Vec3 su = s.du(u, v), sv = s.dv(u, v);
    const Vec3 c = su.cross(sv);
    const double n = c.norm();
    if (n < eps_degenerate) throw SingularPoint("surface is singular along the curve");
    const Vec3 cu = s.duu(u, v).cross(sv) + su.cross(s.duv(u, v));
    const Vec3 cv = s.duv(u, v).cross(sv) + su.cross(s.dvv(u, v));
    const Vec3 cdot = cu * du_ds + cv * dv_ds;
    const Vec3 N = c / n;
    return (cdot - N * N.dot(cdot)) / n;
}

struct SingularCell {
    int i = 0, j = 0;  ///< cell indices in a (nu x nv) scan
    double u = 0.0, v = 0.0;
};

/// Scans an nu x nv grid of cells for corners where |S_u x S_v| < eps.
inline std::vector<SingularCell> scan_singular_cells(const ParamSurface& s, int nu, int nv,
                                                     double eps_degenerate = 1e-9) {
    std::vector<SingularCell> out;
    for (int j = 0; j <= nv; ++j) {
        for (int i = 0; i <= nu; ++i) {
            const double u = s.u_min() + (s.u_max() - s.u_min()) * i / nu;
            const double v = s.v_min() + (s.v_max() - s.v_min()) * j / nv;
            if (s.du(u, v).cross(s.dv(u, v)).norm() < eps_degenerate)
                out.push_back({i, j, u, v});
        }
    }
    return out;
}

}  // namespace isophote
