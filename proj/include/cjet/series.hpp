#pragma once

// Truncated univariate power series with real coefficients.
//
// A TruncatedSeries of order n stores c[0..n] with c[i] = f^(i)(0)/i!, i.e.
// exactly the "k-th order information" of a smooth function at 0.  Every
// binary operation truncates to the smaller operand order, so no result ever
// claims more precision than its inputs carry.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cjet/error.hpp"

namespace cjet {

class TruncatedSeries {
public:
    static constexpr int kMaxOrder = 16;

    /// Zero series of the given order.
    explicit TruncatedSeries(int order = 0) : order_(checked_order(order)) {}

    explicit TruncatedSeries(std::span<const double> coeffs)
        : order_(checked_order(static_cast<int>(coeffs.size()) - 1)) {
        std::copy(coeffs.begin(), coeffs.end(), c_.begin());
        check_finite();
    }

    TruncatedSeries(std::initializer_list<double> coeffs)
        : TruncatedSeries(std::span<const double>(coeffs.begin(), coeffs.size())) {}

    static TruncatedSeries constant(double value, int order) {
        TruncatedSeries s(order);
        s.c_[0] = value;
        s.check_finite();
        return s;
    }

    /// The series of the identity function t.
    static TruncatedSeries variable(int order) {
        TruncatedSeries s(order);
        if (order >= 1) s.c_[1] = 1.0;
        return s;
    }

    int order() const noexcept { return order_; }
    double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    std::span<const double> coeffs() const noexcept {
        return {c_.data(), static_cast<std::size_t>(order_ + 1)};
    }
    std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + order_ + 1}; }

    /// Horner evaluation of the polynomial part.
    double eval(double t) const noexcept {
        double acc = 0.0;
        for (int i = order_; i >= 0; --i) acc = acc * t + c_[static_cast<std::size_t>(i)];
        return acc;
    }

    TruncatedSeries truncated(int order) const {
        if (order > order_)
            fail(ErrorKind::OrderExceeded, "cannot truncate order " + std::to_string(order_) +
                                               " series to order " + std::to_string(order));
        TruncatedSeries s(order);
        std::copy(c_.begin(), c_.begin() + order + 1, s.c_.begin());
        return s;
    }

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

private:
    friend class SeriesBuilder;

    static int checked_order(int order) {
        if (order < 0) fail(ErrorKind::InvalidArgument, "series order must be non-negative");
        if (order > kMaxOrder)
            fail(ErrorKind::OrderExceeded,
                 "series order " + std::to_string(order) + " exceeds maximum " + std::to_string(kMaxOrder));
        return order;
    }

    void check_finite() const {
        for (int i = 0; i <= order_; ++i)
            if (!std::isfinite(c_[static_cast<std::size_t>(i)]))
                fail(ErrorKind::NonFinite, "series coefficient " + std::to_string(i) + " is not finite");
    }

    int order_;
    std::array<double, kMaxOrder + 1> c_{};
};

/// Mutable scratch space used by the algorithms below; produces an immutable
/// TruncatedSeries (finite-checked) on completion.
class SeriesBuilder {
public:
    explicit SeriesBuilder(int order) : s_(order) {}
    double& operator[](int i) noexcept { return s_.c_[static_cast<std::size_t>(i)]; }
    int order() const noexcept { return s_.order_; }
    TruncatedSeries build() const {
        s_.check_finite();
        return s_;
    }

private:
    TruncatedSeries s_;
};

inline TruncatedSeries operator+(const TruncatedSeries& f, const TruncatedSeries& g) {
    const int n = std::min(f.order(), g.order());
    SeriesBuilder r(n);
    for (int i = 0; i <= n; ++i) r[i] = f[i] + g[i];
    return r.build();
}

inline TruncatedSeries operator-(const TruncatedSeries& f, const TruncatedSeries& g) {
    const int n = std::min(f.order(), g.order());
    SeriesBuilder r(n);
    for (int i = 0; i <= n; ++i) r[i] = f[i] - g[i];
    return r.build();
}

inline TruncatedSeries operator-(const TruncatedSeries& f) {
    SeriesBuilder r(f.order());
    for (int i = 0; i <= f.order(); ++i) r[i] = -f[i];
    return r.build();
}

inline TruncatedSeries operator*(double a, const TruncatedSeries& f) {
    SeriesBuilder r(f.order());
    for (int i = 0; i <= f.order(); ++i) r[i] = a * f[i];
    return r.build();
}

inline TruncatedSeries operator*(const TruncatedSeries& f, double a) { return a * f; }

inline TruncatedSeries operator+(const TruncatedSeries& f, double a) {
    SeriesBuilder r(f.order());
    for (int i = 0; i <= f.order(); ++i) r[i] = f[i];
    r[0] += a;
    return r.build();
}

/// Cauchy product truncated to min(order_f, order_g).
inline TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g) {
    const int n = std::min(f.order(), g.order());
    SeriesBuilder r(n);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += f[i] * g[k - i];
        r[k] = acc;
    }
    return r.build();
}

inline TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g) { return series_mul(f, g); }

/// f^(num/den) for f(0) > 0, to order f.order().
///
/// Uses the power recurrence obtained from f * g' = (num/den) * f' * g, which
/// determines every coefficient of g = f^(num/den) from the lower ones.
inline TruncatedSeries series_rational_power(const TruncatedSeries& f, int num, int den) {
    if (den <= 0) fail(ErrorKind::InvalidArgument, "rational power denominator must be positive");
    if (!(f[0] > 0.0))
        fail(ErrorKind::NonpositiveLeadingCoefficient, "rational power needs f(0) > 0, got " + std::to_string(f[0]));
    const double alpha = static_cast<double>(num) / static_cast<double>(den);
    const int n = f.order();
    SeriesBuilder g(n);
    g[0] = std::pow(f[0], alpha);
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += (alpha * j - (k - j)) * f[j] * g[k - j];
        g[k] = acc / (k * f[0]);
    }
    return g.build();
}

/// 1/f for f(0) != 0.
inline TruncatedSeries series_reciprocal(const TruncatedSeries& f) {
    if (f[0] == 0.0) fail(ErrorKind::NotInvertible, "reciprocal of a series with zero constant term");
    const int n = f.order();
    SeriesBuilder g(n);
    g[0] = 1.0 / f[0];
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += f[j] * g[k - j];
        g[k] = -acc / f[0];
    }
    return g.build();
}

inline TruncatedSeries operator/(const TruncatedSeries& f, const TruncatedSeries& g) {
    return series_mul(f, series_reciprocal(g));
}

/// f(g(t)) for g(0) = 0, truncated to min order.
inline TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g) {
    if (g[0] != 0.0)
        fail(ErrorKind::NonzeroInnerConstant, "inner series must vanish at 0, got " + std::to_string(g[0]));
    const int n = std::min(f.order(), g.order());
    const TruncatedSeries inner = g.truncated(n);
    TruncatedSeries acc = TruncatedSeries::constant(f[n], n);
    for (int i = n - 1; i >= 0; --i) acc = series_mul(acc, inner) + f[i];
    return acc;
}

/// Compositional inverse: g with f(g(t)) = t + O(t^(n+1)).
inline TruncatedSeries series_invert(const TruncatedSeries& f) {
    if (f[0] != 0.0) fail(ErrorKind::NotInvertible, "series must vanish at 0 to be inverted");
    if (f.order() < 1 || f[1] == 0.0) fail(ErrorKind::NotInvertible, "series has zero linear term");
    const int n = f.order();
    const TruncatedSeries id = TruncatedSeries::variable(n);
    TruncatedSeries g = (1.0 / f[1]) * id;
    // Each correction fixes at least one further coefficient.
    for (int it = 1; it < n; ++it) g = g - (1.0 / f[1]) * (series_compose(f, g) - id);
    return g;
}

/// Termwise derivative; the order drops by one (an order-0 series maps to zero).
inline TruncatedSeries series_derive(const TruncatedSeries& f) {
    if (f.order() == 0) return TruncatedSeries(0);
    SeriesBuilder r(f.order() - 1);
    for (int i = 1; i <= f.order(); ++i) r[i - 1] = i * f[i];
    return r.build();
}

/// Antiderivative vanishing at 0; the order grows by one, capped at kMaxOrder.
inline TruncatedSeries series_integrate(const TruncatedSeries& f) {
    const int n = std::min(f.order() + 1, TruncatedSeries::kMaxOrder);
    SeriesBuilder r(n);
    for (int i = 1; i <= n; ++i) r[i] = f[i - 1] / i;
    return r.build();
}

/// (f(0), f'(0), f''(0)/2!, ..., f^(k)(0)/k!).
inline std::vector<double> coef(const TruncatedSeries& f, int k) {
    if (k < 0) fail(ErrorKind::InvalidArgument, "coef order must be non-negative");
    if (k > f.order())
        fail(ErrorKind::OrderExceeded,
             "requested order " + std::to_string(k) + " from a series of order " + std::to_string(f.order()));
    return {f.coeffs().begin(), f.coeffs().begin() + k + 1};
}

} // namespace cjet
