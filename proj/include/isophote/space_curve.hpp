#pragma once
#include <functional>
#include <memory>
#include <utility>

#include "isophote/errors.hpp"
#include "isophote/numeric.hpp"
#include "isophote/types.hpp"

namespace isophote {

/// A thrice-differentiable space curve. Closed-form derivative suppliers are
/// optional; missing orders fall back to 5-point central differences with a
/// Richardson step, applied to the highest-order supplier available (so a
/// missing third derivative is one difference of the second, not three of the
/// position).
class SpaceCurve {
public:
    using PointFn = std::function<Vec3(double)>;

    SpaceCurve() = default;
    SpaceCurve(PointFn eval, double s_min, double s_max, bool unit_speed = false)
        : eval_(std::move(eval)), s_min_(s_min), s_max_(s_max), unit_speed_(unit_speed) {}

    SpaceCurve& with_d1(PointFn f) { d1_ = std::move(f); return *this; }
    SpaceCurve& with_d2(PointFn f) { d2_ = std::move(f); return *this; }
    SpaceCurve& with_d3(PointFn f) { d3_ = std::move(f); return *this; }
    SpaceCurve& with_closed(bool closed) { closed_ = closed; return *this; }

    Vec3 point(double s) const { return eval_(s); }

    Vec3 derivative1(double s) const {
        if (d1_) return d1_(s);
        return fd_derivative1(eval_, s, fd_step(s, 1));
    }

    Vec3 derivative2(double s) const {
        if (d2_) return d2_(s);
        if (d1_) return fd_derivative1(d1_, s, fd_step(s, 1));
        return fd_derivative2(eval_, s, fd_step(s, 2));
    }

    Vec3 derivative3(double s) const {
        if (d3_) return d3_(s);
        if (d2_) return fd_derivative1(d2_, s, fd_step(s, 1));
        if (d1_) return fd_derivative2(d1_, s, fd_step(s, 2));
        return fd_derivative3(eval_, s, fd_step(s, 3));
    }

    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    double param_span() const { return s_max_ - s_min_; }
    bool is_unit_speed() const { return unit_speed_; }
    bool is_closed() const { return closed_; }

    bool has_d1() const { return static_cast<bool>(d1_); }
    bool has_d2() const { return static_cast<bool>(d2_); }
    bool has_d3() const { return static_cast<bool>(d3_); }

    double speed(double s) const { return derivative1(s).norm(); }

    /// Uniform parameter samples over [s_min, s_max] (inclusive for open
    /// curves; for closed curves the endpoint duplicate is dropped).
    std::vector<double> sample_params(int n) const {
        if (n < 2) throw TooFewSamples("need at least 2 samples");
        std::vector<double> s(n);
        const double div = closed_ ? static_cast<double>(n) : static_cast<double>(n - 1);
        for (int i = 0; i < n; ++i) s[i] = s_min_ + param_span() * static_cast<double>(i) / div;
        return s;
    }

private:
    // Base step per the differentiation policy; higher orders widen it so the
    // stencil's rounding error (eps / h^order) stays below truncation.
    double fd_step(double s, int order) const {
        const double h = default_fd_step(std::max(1.0, eval_(s).norm()));
        if (order == 2) return 10.0 * h;
        if (order >= 3) return 50.0 * h;
        return h;
    }

    PointFn eval_, d1_, d2_, d3_;
    double s_min_ = 0.0, s_max_ = 1.0;
    bool unit_speed_ = false;
    bool closed_ = false;
};

/// Max deviation of the speed from 1 over n probe points.
inline double unit_speed_residual(const SpaceCurve& c, int n = 64) {
    double worst = 0.0;
    for (double s : c.sample_params(n)) worst = std::max(worst, std::abs(c.speed(s) - 1.0));
    return worst;
}

}  // namespace isophote
