#pragma once
#include <cmath>
#include <memory>
#include <vector>

#include "isophote/errors.hpp"
#include "isophote/numeric.hpp"
#include "isophote/space_curve.hpp"

namespace isophote {

/// Bijection between a curve's native parameter t and arc length s, built from
/// a cumulative Gauss-Legendre table. A monotone cubic interpolant of the
/// table provides the initial guess for t(s); a Newton polish against the
/// exact partial-panel quadrature brings the map to quadrature accuracy.
class ArcLengthMap {
public:
    ArcLengthMap(const SpaceCurve& curve, double quad_tol = 1e-10, int initial_panels = 256)
        : curve_(curve) {
        build(quad_tol, std::max(8, initial_panels));
    }

    double total_length() const { return cumulative_.back(); }
    double t_min() const { return nodes_.front(); }
    double t_max() const { return nodes_.back(); }

    /// Arc length from t_min to t (exact panel quadrature on the tail).
    double s_of_t(double t) const {
        t = std::clamp(t, nodes_.front(), nodes_.back());
        const size_t i = locate(t);
        return cumulative_[i] +
               gauss_legendre5([this](double x) { return speed_at(x); }, nodes_[i], t);
    }

    /// Inverse map: the parameter at arc length s in [0, total_length].
    double t_of_s(double s) const {
        s = std::clamp(s, 0.0, total_length());
        double t = inverse_.eval(s);
        // Newton iterations on s_of_t(t) - s = 0; the speed is the derivative.
        for (int it = 0; it < 8; ++it) {
            const double f = s_of_t(t) - s;
            const double v = speed_at(std::clamp(t, nodes_.front(), nodes_.back()));
            const double step = f / v;
            t -= step;
            t = std::clamp(t, nodes_.front(), nodes_.back());
            if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(t))) break;
        }
        return t;
    }

    double speed_at(double t) const {
        const double v = curve_.derivative1(t).norm();
        if (v < eps_speed_) throw SingularSpeed("speed below tolerance at t=" + std::to_string(t));
        return v;
    }

private:
    void build(double quad_tol, int panels) {
        double prev_total = -1.0;
        for (; panels <= 1 << 15; panels *= 2) {
            tabulate(panels);
            if (prev_total >= 0.0 && std::abs(total_length() - prev_total) <= quad_tol) break;
            prev_total = total_length();
        }
        std::vector<double> s = cumulative_, t = nodes_;
        inverse_ = MonotoneCubic(std::move(s), std::move(t));
    }

    void tabulate(int panels) {
        nodes_.resize(panels + 1);
        cumulative_.resize(panels + 1);
        const double a = curve_.s_min(), b = curve_.s_max();
        double acc = 0.0;
        nodes_[0] = a;
        cumulative_[0] = 0.0;
        speed_at(a);  // table nodes count as quadrature nodes for the speed check
        for (int i = 0; i < panels; ++i) {
            const double t0 = a + (b - a) * i / panels;
            const double t1 = a + (b - a) * (i + 1) / panels;
            speed_at(t1);
            acc += gauss_legendre5([this](double x) { return speed_at(x); }, t0, t1);
            nodes_[i + 1] = t1;
            cumulative_[i + 1] = acc;
        }
    }

    size_t locate(double t) const {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
        long idx = std::distance(nodes_.begin(), it) - 1;
        idx = std::clamp<long>(idx, 0, static_cast<long>(nodes_.size()) - 2);
        return static_cast<size_t>(idx);
    }

    SpaceCurve curve_;
    std::vector<double> nodes_, cumulative_;
    MonotoneCubic inverse_;
    double eps_speed_ = 1e-9;
};

/// Reparametrizes a curve by arc length. Already-unit-speed curves are
/// returned as-is. Derivatives of the result chain through the exact speed of
/// the source curve, so closed-form accuracy survives the reparametrization.
inline SpaceCurve reparametrize_arclength(const SpaceCurve& curve, double quad_tol = 1e-10) {
    if (curve.is_unit_speed()) return curve;
    auto map = std::make_shared<ArcLengthMap>(curve, quad_tol);
    auto src = std::make_shared<SpaceCurve>(curve);

    auto eval = [map, src](double s) { return src->point(map->t_of_s(s)); };
    auto d1 = [map, src](double s) {
        const double t = map->t_of_s(s);
        return (src->derivative1(t) / src->derivative1(t).norm()).eval();
    };
    auto d2 = [map, src](double s) {
        const double t = map->t_of_s(s);
        const Vec3 g1 = src->derivative1(t), g2 = src->derivative2(t);
        const double v = g1.norm();
        const double tp = 1.0 / v;                        // t'(s)
        const double ts = -g1.dot(g2) / (v * v * v * v);  // t''(s)
        return (g2 * tp * tp + g1 * ts).eval();
    };
    auto d3 = [map, src](double s) {
        const double t = map->t_of_s(s);
        const Vec3 g1 = src->derivative1(t), g2 = src->derivative2(t), g3 = src->derivative3(t);
        const double v = g1.norm();
        const double w = g1.dot(g2);
        const double wp = g2.squaredNorm() + g1.dot(g3);  // dw/dt
        const double tp = 1.0 / v;
        const double ts = -w / std::pow(v, 4);
        // t'''(s) = d/dt(t''(s)) * t'(s)
        const double ts_dt = -wp / std::pow(v, 4) + 4.0 * w * w / std::pow(v, 6);
        const double tq = ts_dt * tp;
        return (g3 * tp * tp * tp + 3.0 * g2 * tp * ts + g1 * tq).eval();
    };

    SpaceCurve out(eval, 0.0, map->total_length(), /*unit_speed=*/true);
    out.with_d1(d1).with_d2(d2).with_d3(d3).with_closed(curve.is_closed());
    return out;
}

}  // namespace isophote
