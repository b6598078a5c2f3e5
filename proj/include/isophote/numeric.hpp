#pragma once
#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

#include "isophote/errors.hpp"
#include "isophote/types.hpp"

namespace isophote {

// ---------------------------------------------------------------------------
// Sample statistics and the constancy test
// ---------------------------------------------------------------------------

struct Stats {
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
};

inline Stats compute_stats(std::vector<double> values) {
    if (values.empty()) return {};
    std::sort(values.begin(), values.end());
    Stats s;
    s.min = values.front();
    s.max = values.back();
    const size_t n = values.size();
    s.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return s;
}

struct ConstancyResult {
    Stats stats;
    double spread = 0.0;     ///< max - min
    double threshold = 0.0;  ///< atol + rtol * max(1, |median|)
    bool constant = false;
};

/// f is "constant" over the samples iff (max f - min f) <= atol + rtol * max(1, |median f|).
inline ConstancyResult constancy_test(const std::vector<double>& f, double atol = 1e-6,
                                      double rtol = 1e-6) {
    ConstancyResult r;
    r.stats = compute_stats(f);
    r.spread = r.stats.max - r.stats.min;
    r.threshold = atol + rtol * std::max(1.0, std::abs(r.stats.median));
    r.constant = !f.empty() && r.spread <= r.threshold;
    return r;
}

// ---------------------------------------------------------------------------
// Derivatives of uniformly sampled sequences (4th order)
// ---------------------------------------------------------------------------

/// First derivative of a uniformly spaced sample sequence. Interior points use
/// the 5-point central stencil; the two points at each open end use one-sided
/// 5-point stencils of the same order. With periodic=true the stencil wraps
/// (the sequence is one period, y[n] == y[0] NOT included).
template <class T>
std::vector<T> grid_derivative(const std::vector<T>& y, double h, bool periodic = false) {
    const int n = static_cast<int>(y.size());
    if (n < 5) throw TooFewSamples("grid_derivative needs at least 5 samples");
    std::vector<T> d(y.size(), y.front());
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    const double c = 1.0 / (12.0 * h);
    for (int i = 0; i < n; ++i) {
        if (periodic) {
            d[i] = (y[wrap(i - 2)] - 8.0 * y[wrap(i - 1)] + 8.0 * y[wrap(i + 1)] - y[wrap(i + 2)]) * c;
        } else if (i >= 2 && i <= n - 3) {
            d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) * c;
        } else if (i == 0) {
            d[i] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) * c;
        } else if (i == 1) {
            d[i] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) * c;
        } else if (i == n - 2) {
            d[i] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) * c;
        } else {  // i == n - 1
            d[i] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) * c;
        }
    }
    return d;
}

/// Second derivative of a uniformly spaced sequence, 4th order (5-point
/// central stencil inside, 6-point one-sided stencils at open ends).
template <class T>
std::vector<T> grid_second_derivative(const std::vector<T>& y, double h, bool periodic = false) {
    const int n = static_cast<int>(y.size());
    if (n < 6) throw TooFewSamples("grid_second_derivative needs at least 6 samples");
    std::vector<T> d(y.size(), y.front());
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    const double c = 1.0 / (12.0 * h * h);
    for (int i = 0; i < n; ++i) {
        if (periodic || (i >= 2 && i <= n - 3)) {
            auto at = [&](int k) { return periodic ? y[wrap(i + k)] : y[i + k]; };
            d[i] = (-at(-2) + 16.0 * at(-1) - 30.0 * at(0) + 16.0 * at(1) - at(2)) * c;
        } else if (i == 0) {
            d[i] = (45.0 * y[0] - 154.0 * y[1] + 214.0 * y[2] - 156.0 * y[3] + 61.0 * y[4] -
                    10.0 * y[5]) * c;
        } else if (i == 1) {
            d[i] = (10.0 * y[0] - 15.0 * y[1] - 4.0 * y[2] + 14.0 * y[3] - 6.0 * y[4] + y[5]) * c;
        } else if (i == n - 2) {
            d[i] = (10.0 * y[n - 1] - 15.0 * y[n - 2] - 4.0 * y[n - 3] + 14.0 * y[n - 4] -
                    6.0 * y[n - 5] + y[n - 6]) * c;
        } else {  // i == n - 1
            d[i] = (45.0 * y[n - 1] - 154.0 * y[n - 2] + 214.0 * y[n - 3] - 156.0 * y[n - 4] +
                    61.0 * y[n - 5] - 10.0 * y[n - 6]) * c;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Pointwise finite differences (5-point central + one Richardson step)
// ---------------------------------------------------------------------------

/// Step used when a curve or surface has no closed-form derivative supplier.
inline double default_fd_step(double local_scale) {
    return std::max(1e-5, 1e-4 * std::abs(local_scale));
}

namespace detail {

// Accumulate into a concrete value: with Eigen return types a lazily built
// expression would reference dead temporaries.
template <class F>
auto central5_d1(const F& f, double t, double h) {
    using R = std::decay_t<decltype(f(t))>;
    R acc = f(t - 2 * h);
    acc -= 8.0 * f(t - h);
    acc += 8.0 * f(t + h);
    acc -= f(t + 2 * h);
    acc *= 1.0 / (12.0 * h);
    return acc;
}

template <class F>
auto central5_d2(const F& f, double t, double h) {
    using R = std::decay_t<decltype(f(t))>;
    R acc = f(t - 2 * h);
    acc *= -1.0;
    acc += 16.0 * f(t - h);
    acc -= 30.0 * f(t);
    acc += 16.0 * f(t + h);
    acc -= f(t + 2 * h);
    acc *= 1.0 / (12.0 * h * h);
    return acc;
}

template <class F>
auto central5_d3(const F& f, double t, double h) {
    using R = std::decay_t<decltype(f(t))>;
    R acc = f(t + 2 * h);
    acc -= 2.0 * f(t + h);
    acc += 2.0 * f(t - h);
    acc -= f(t - 2 * h);
    acc *= 1.0 / (2.0 * h * h * h);
    return acc;
}

}  // namespace detail

/// 5-point first derivative (O(h^4)) with one Richardson step -> O(h^6).
template <class F>
auto fd_derivative1(const F& f, double t, double h) {
    auto fine = detail::central5_d1(f, t, 0.5 * h);
    fine *= 16.0;
    fine -= detail::central5_d1(f, t, h);
    fine *= 1.0 / 15.0;
    return fine;
}

template <class F>
auto fd_derivative2(const F& f, double t, double h) {
    auto fine = detail::central5_d2(f, t, 0.5 * h);
    fine *= 16.0;
    fine -= detail::central5_d2(f, t, h);
    fine *= 1.0 / 15.0;
    return fine;
}

template <class F>
auto fd_derivative3(const F& f, double t, double h) {
    auto fine = detail::central5_d3(f, t, 0.5 * h);
    fine *= 4.0;
    fine -= detail::central5_d3(f, t, h);
    fine *= 1.0 / 3.0;
    return fine;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// 5-node Gauss-Legendre on [a, b].
template <class F>
double gauss_legendre5(const F& f, double a, double b) {
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += ws[i] * f(mid + half * xs[i]);
    return acc * half;
}

template <class F>
double integrate_composite(const F& f, double a, double b, int panels) {
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) acc += gauss_legendre5(f, a + i * h, a + (i + 1) * h);
    return acc;
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation (Fritsch-Carlson)
// ---------------------------------------------------------------------------

/// Shape-preserving cubic through strictly monotone data; used for inverting
/// cumulative arc-length tables. Queries clamp to the table range.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw TooFewSamples("MonotoneCubic needs >= 2 nodes");
        std::vector<double> delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            const double dx = x_[i + 1] - x_[i];
            if (!(dx > 0)) throw DomainViolation("MonotoneCubic: abscissae must increase");
            delta[i] = (y_[i + 1] - y_[i]) / dx;
        }
        m_.assign(n, 0.0);
        m_[0] = delta[0];
        m_[n - 1] = delta[n - 2];
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                // harmonic mean weighting keeps the interpolant monotone
                const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        // Fritsch-Carlson limiter
        for (size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                m_[i] = m_[i + 1] = 0.0;
                continue;
            }
            const double alpha = m_[i] / delta[i];
            const double beta = m_[i + 1] / delta[i];
            const double r = alpha * alpha + beta * beta;
            if (r > 9.0) {
                const double tau = 3.0 / std::sqrt(r);
                m_[i] = tau * alpha * delta[i];
                m_[i + 1] = tau * beta * delta[i];
            }
        }
    }

    double eval(double x) const {
        const size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double t = std::clamp((x - x_[i]) / h, 0.0, 1.0);
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    size_t locate(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        long idx = std::distance(x_.begin(), it) - 1;
        idx = std::clamp<long>(idx, 0, static_cast<long>(x_.size()) - 2);
        return static_cast<size_t>(idx);
    }

    std::vector<double> x_, y_, m_;
};

// ---------------------------------------------------------------------------
// Cubic spline (natural or periodic end conditions)
// ---------------------------------------------------------------------------

/// C2 interpolating cubic spline, natural or periodic.
///
/// Natural: x and y have equal length n >= 3.
/// Periodic: y holds one period (n values) and x holds n+1 abscissae, the last
/// one being x[0] + period; the spline closes the loop C2-continuously.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y, bool periodic)
        : x_(std::move(x)), y_(std::move(y)), periodic_(periodic) {
        const size_t n = y_.size();
        if (n < 3) throw TooFewSamples("CubicSpline needs >= 3 nodes");
        if (x_.size() != n + (periodic_ ? 1 : 0))
            throw DomainViolation("CubicSpline: abscissae count mismatch");
        for (size_t i = 0; i + 1 < x_.size(); ++i)
            if (!(x_[i + 1] > x_[i])) throw DomainViolation("CubicSpline: abscissae must increase");
        if (periodic_) {
            last_h_ = x_[n] - x_[n - 1];
            x_.pop_back();
            solve_periodic();
        } else {
            solve_natural();
        }
    }

    double eval(double x) const {
        const auto [i, t] = segment(x);
        const double h = hseg(i);
        const double a = y_at(i), b = d1_[i], c = m_[i] / 2.0, d = (m_next(i) - m_[i]) / (6.0 * h);
        return a + t * (b + t * (c + t * d));
    }

    double derivative(double x) const {
        const auto [i, t] = segment(x);
        const double h = hseg(i);
        const double b = d1_[i], c = m_[i] / 2.0, d = (m_next(i) - m_[i]) / (6.0 * h);
        return b + t * (2.0 * c + t * 3.0 * d);
    }

    double second_derivative(double x) const {
        const auto [i, t] = segment(x);
        const double h = hseg(i);
        return m_[i] + t * (m_next(i) - m_[i]) / h;
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return periodic_ ? x_.back() + last_h_ : x_.back(); }

private:
    double y_at(size_t i) const { return y_[i % y_.size()]; }
    double m_next(size_t i) const { return m_[(i + 1) % m_.size()]; }
    double hseg(size_t i) const {
        if (i + 1 < x_.size()) return x_[i + 1] - x_[i];
        return last_h_;  // closing segment of a periodic spline
    }

    std::pair<size_t, double> segment(double x) const {
        const double x0 = x_.front();
        double span = x_back() - x0;
        double xx = x;
        if (periodic_) {
            xx = std::fmod(x - x0, span);
            if (xx < 0) xx += span;
            xx += x0;
        } else {
            xx = std::clamp(x, x_.front(), x_.back());
        }
        auto it = std::upper_bound(x_.begin(), x_.end(), xx);
        long idx = std::distance(x_.begin(), it) - 1;
        const long last = static_cast<long>(x_.size()) - (periodic_ ? 1 : 2);
        idx = std::clamp<long>(idx, 0, last);
        return {static_cast<size_t>(idx), xx - x_[idx]};
    }

    void solve_natural() {
        const size_t n = x_.size();
        std::vector<double> h(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
        // Thomas algorithm for the second-derivative system, natural BCs m0 = mn = 0
        std::vector<double> a(n, 0), b(n, 0), c(n, 0), r(n, 0);
        b[0] = b[n - 1] = 1.0;
        for (size_t i = 1; i + 1 < n; ++i) {
            a[i] = h[i - 1];
            b[i] = 2.0 * (h[i - 1] + h[i]);
            c[i] = h[i];
            r[i] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
        }
        for (size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_.assign(n, 0.0);
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (long i = static_cast<long>(n) - 2; i >= 0; --i)
            m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
        finish_first_derivatives(h);
        last_h_ = 0.0;
    }

    void solve_periodic() {
        const size_t n = x_.size();  // unknown second derivatives m_0..m_{n-1}; m_n == m_0
        std::vector<double> h(n);
        for (size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
        h[n - 1] = last_h_;  // closing interval back to the first node
        auto yd = [&](size_t i) { return y_[(i + 1) % n] - y_[i]; };
        std::vector<double> b(n), r(n);
        std::vector<double> sub(n), sup(n);
        for (size_t i = 0; i < n; ++i) {
            const double hm = h[(i + n - 1) % n];
            const double hi = h[i];
            sub[i] = hm;
            b[i] = 2.0 * (hm + hi);
            sup[i] = hi;
            r[i] = 6.0 * (yd(i) / hi - yd((i + n - 1) % n) / hm);
        }
        m_ = solve_cyclic_tridiagonal(sub, b, sup, r);
        std::vector<double> hh(h.begin(), h.end());
        finish_first_derivatives(hh);
    }

    // Sherman-Morrison on top of the Thomas algorithm.
    static std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                                        std::vector<double> b,
                                                        const std::vector<double>& c,
                                                        std::vector<double> r) {
        const size_t n = b.size();
        const double alpha = a[0];     // corner (0, n-1)
        const double beta = c[n - 1];  // corner (n-1, 0)
        const double gamma = -b[0];
        b[0] -= gamma;
        b[n - 1] -= alpha * beta / gamma;
        auto thomas = [&](std::vector<double> rhs) {
            std::vector<double> bb = b;
            for (size_t i = 1; i < n; ++i) {
                const double w = a[i] / bb[i - 1];
                bb[i] -= w * c[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            std::vector<double> x(n);
            x[n - 1] = rhs[n - 1] / bb[n - 1];
            for (long i = static_cast<long>(n) - 2; i >= 0; --i)
                x[i] = (rhs[i] - c[i] * x[i + 1]) / bb[i];
            return x;
        };
        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = beta;
        const auto x = thomas(r);
        const auto z = thomas(u);
        const double factor = (x[0] + alpha * x[n - 1] / gamma) /
                              (1.0 + z[0] + alpha * z[n - 1] / gamma);
        std::vector<double> out(n);
        for (size_t i = 0; i < n; ++i) out[i] = x[i] - factor * z[i];
        return out;
    }

    void finish_first_derivatives(const std::vector<double>& h) {
        const size_t segs = periodic_ ? x_.size() : x_.size() - 1;
        d1_.assign(segs, 0.0);
        for (size_t i = 0; i < segs; ++i) {
            const double hi = h[i];
            const double dy = y_at(i + 1) - y_at(i);
            d1_[i] = dy / hi - hi * (2.0 * m_[i] + m_next(i)) / 6.0;
        }
    }

    std::vector<double> x_, y_;
    std::vector<double> m_;   // second derivatives at nodes
    std::vector<double> d1_;  // first derivatives at segment starts
    bool periodic_ = false;
    double last_h_ = 0.0;
};

// ---------------------------------------------------------------------------
// Angles and geometry helpers
// ---------------------------------------------------------------------------

/// Nearest-branch continuation: shifts each angle by a multiple of 2*pi so the
/// sequence has no jumps larger than pi.
inline std::vector<double> unwrap_angles(std::vector<double> phi) {
    for (size_t i = 1; i < phi.size(); ++i) {
        const double k = std::round((phi[i - 1] - phi[i]) / kTwoPi);
        phi[i] += k * kTwoPi;
    }
    return phi;
}

struct PlaneFit {
    Vec3 centroid = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    double max_abs_distance = 0.0;  ///< max |<p - centroid, normal>| over the points
};

/// Least-squares plane through a point set (smallest covariance eigenvector).
inline PlaneFit fit_plane(const std::vector<Vec3>& pts) {
    PlaneFit fit;
    if (pts.size() < 3) throw TooFewSamples("fit_plane needs >= 3 points");
    for (const auto& p : pts) fit.centroid += p;
    fit.centroid /= static_cast<double>(pts.size());
    Mat3 cov = Mat3::Zero();
    for (const auto& p : pts) {
        const Vec3 q = p - fit.centroid;
        cov += q * q.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    fit.normal = es.eigenvectors().col(0).normalized();
    for (const auto& p : pts)
        fit.max_abs_distance = std::max(fit.max_abs_distance, std::abs((p - fit.centroid).dot(fit.normal)));
    return fit;
}

}  // namespace isophote
