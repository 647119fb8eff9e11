#pragma once

// Forward model for locally parameterized space curves
//
//   gamma(t) = (t, sum_{i>=2} a_i t^i / i!, sum_{i>=3} b_i t^i / i!)
//
// under orthogonal projection.  Curvature jets are taken with respect to the
// arclength of the projected curve, in the plane xi^perp oriented so that
// {X, Y, xi} is a positive basis, with the curve orientation inherited from t.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <numbers>
#include <vector>

#include "cjet/error.hpp"
#include "cjet/series.hpp"

namespace cjet {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& u, const Vec3& v) noexcept { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

inline Vec3 cross(const Vec3& u, const Vec3& v) noexcept {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

/// Taylor data of a space curve in its adapted frame.
class CurveJet {
public:
    /// `a` holds (a_2, ..., a_k) and `b` holds (b_3, ..., b_k); both must end at the same k >= 3.
    CurveJet(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_.size() < 2 || b_.size() + 1 != a_.size())
            fail(ErrorKind::InvalidArgument, "curve jet needs (a_2..a_k) and (b_3..b_k) with k >= 3, got " +
                                                 std::to_string(a_.size()) + " a-values and " +
                                                 std::to_string(b_.size()) + " b-values");
        if (order() > TruncatedSeries::kMaxOrder)
            fail(ErrorKind::OrderExceeded, "curve jet order exceeds " + std::to_string(TruncatedSeries::kMaxOrder));
        for (double v : a_)
            if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite a coefficient");
        for (double v : b_)
            if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite b coefficient");
    }

    /// Explicit zero padding of shorter coefficient lists up to `order`.
    static CurveJet padded(std::vector<double> a, std::vector<double> b, int order) {
        if (order < 3) fail(ErrorKind::InvalidArgument, "curve jet order must be at least 3");
        const auto na = static_cast<std::size_t>(order - 1);
        const auto nb = static_cast<std::size_t>(order - 2);
        if (a.size() > na || b.size() > nb)
            fail(ErrorKind::InvalidArgument, "more coefficients than the requested padding order");
        a.resize(na, 0.0);
        b.resize(nb, 0.0);
        return CurveJet(std::move(a), std::move(b));
    }

    int order() const noexcept { return static_cast<int>(a_.size()) + 1; }

    /// a_i for 2 <= i <= order.
    double a(int i) const {
        if (i < 2 || i > order()) fail(ErrorKind::OrderExceeded, "a_" + std::to_string(i) + " not in jet");
        return a_[static_cast<std::size_t>(i - 2)];
    }
    /// b_i for 3 <= i <= order.
    double b(int i) const {
        if (i < 3 || i > order()) fail(ErrorKind::OrderExceeded, "b_" + std::to_string(i) + " not in jet");
        return b_[static_cast<std::size_t>(i - 3)];
    }
    const std::vector<double>& a_values() const noexcept { return a_; }
    const std::vector<double>& b_values() const noexcept { return b_; }

    /// Component series of gamma, each of order `order()`.
    std::array<TruncatedSeries, 3> components() const {
        const int k = order();
        SeriesBuilder x(k), y(k), z(k);
        x[1] = 1.0;
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) {
            fact *= i;
            y[i] = a(i) / fact;
            if (i >= 3) z[i] = b(i) / fact;
        }
        return {x.build(), y.build(), z.build()};
    }

    Vec3 point(double t) const {
        const auto c = components();
        return {c[0].eval(t), c[1].eval(t), c[2].eval(t)};
    }

private:
    std::vector<double> a_;
    std::vector<double> b_;
};

/// Direction xi(theta) = (cos theta, sin theta, 0) inside the osculating plane.
class OsculatingDirection {
public:
    explicit OsculatingDirection(double theta) : theta_(theta) {
        if (!(theta > 0.0 && theta < std::numbers::pi))
            fail(ErrorKind::InvalidArgument, "osculating direction angle must lie in (0, pi), got " +
                                                 std::to_string(theta));
    }
    double theta() const noexcept { return theta_; }
    Vec3 vector() const noexcept { return {std::cos(theta_), std::sin(theta_), 0.0}; }

private:
    double theta_;
};

/// xi = (sin t1 cos t2, sin t1 sin t2, cos t1).
struct GeneralDirection {
    double theta1 = 0.0;
    double theta2 = 0.0;

    Vec3 vector() const noexcept {
        return {std::sin(theta1) * std::cos(theta2), std::sin(theta1) * std::sin(theta2), std::cos(theta1)};
    }
};

/// Arclength Taylor coefficients (kappa(0), dkappa/ds(0), kappa''(0)/2!, ...).
class CurvatureJet {
public:
    explicit CurvatureJet(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) fail(ErrorKind::InvalidArgument, "curvature jet needs at least one value");
        for (double v : values_)
            if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite curvature jet entry");
    }
    int order() const noexcept { return static_cast<int>(values_.size()) - 1; }
    double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Derivative d^j kappa / ds^j (0) rather than the Taylor coefficient.
    double derivative(int j) const {
        double f = 1.0;
        for (int i = 2; i <= j; ++i) f *= i;
        return (*this)[j] * f;
    }

private:
    std::vector<double> values_;
};

/// Positively oriented orthonormal basis {X, Y} of xi^perp, i.e. X x Y = xi.
inline std::array<Vec3, 2> plane_basis(const Vec3& xi) {
    const double n = std::sqrt(dot(xi, xi));
    if (!(n > 0.0)) fail(ErrorKind::InvalidArgument, "projection direction must be non-zero");
    const Vec3 u{xi[0] / n, xi[1] / n, xi[2] / n};
    const Vec3 helper = std::abs(u[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    Vec3 x = cross(helper, u);
    const double xn = std::sqrt(dot(x, x));
    x = {x[0] / xn, x[1] / xn, x[2] / xn};
    return {x, cross(u, x)};
}

/// Curvature jet (to order n, w.r.t. arclength oriented by t) of the plane
/// curve (x(t), y(t)).  Needs both component series to order n + 2.
inline CurvatureJet plane_curve_curvature_jet(const TruncatedSeries& x, const TruncatedSeries& y, int n) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "jet order must be non-negative");
    const int m = std::min(x.order(), y.order());
    if (n + 2 > m)
        fail(ErrorKind::OrderExceeded, "curvature jet of order " + std::to_string(n) + " needs a curve of order " +
                                           std::to_string(n + 2) + ", have " + std::to_string(m));
    const TruncatedSeries xp = series_derive(x.truncated(n + 2));
    const TruncatedSeries yp = series_derive(y.truncated(n + 2));
    const TruncatedSeries xpp = series_derive(xp);
    const TruncatedSeries ypp = series_derive(yp);
    const TruncatedSeries speed2 = xp * xp + yp * yp;
    if (!(speed2[0] > 0.0)) fail(ErrorKind::NotRegular, "projected curve is singular at the base point");
    const TruncatedSeries kappa_t = (xp * ypp - yp * xpp) * series_rational_power(speed2.truncated(n), -3, 2);
    const TruncatedSeries arclength = series_integrate(series_rational_power(speed2, 1, 2));
    const TruncatedSeries t_of_s = series_invert(arclength.truncated(n + 1));
    const TruncatedSeries kappa_s = series_compose(kappa_t, t_of_s);
    return CurvatureJet(kappa_s.truncated(n).to_vector());
}

/// Curvature jet of pi_xi(gamma) for an arbitrary projection direction.
inline CurvatureJet project_curve(const CurveJet& curve, const Vec3& xi, int n) {
    if (n + 2 > curve.order())
        fail(ErrorKind::OrderExceeded, "projection jet of order " + std::to_string(n) + " needs curve order " +
                                           std::to_string(n + 2) + ", have " + std::to_string(curve.order()));
    const auto [bx, by] = plane_basis(xi);
    const auto g = curve.components();
    const TruncatedSeries x = bx[0] * g[0] + bx[1] * g[1] + bx[2] * g[2];
    const TruncatedSeries y = by[0] * g[0] + by[1] * g[1] + by[2] * g[2];
    return plane_curve_curvature_jet(x, y, n);
}

/// Arclength curvature jet of the projection along a direction in the osculating plane.
inline CurvatureJet project_osculating(const CurveJet& curve, const OsculatingDirection& dir, int n) {
    const double c = std::cos(dir.theta()), s = std::sin(dir.theta());
    if (n + 2 > curve.order())
        fail(ErrorKind::OrderExceeded, "projection jet of order " + std::to_string(n) + " needs curve order " +
                                           std::to_string(n + 2) + ", have " + std::to_string(curve.order()));
    // X = (-sin, cos, 0), Y = (0, 0, 1) gives X x Y = xi(theta).
    const auto g = curve.components();
    const TruncatedSeries x = (-s) * g[0] + c * g[1];
    return plane_curve_curvature_jet(x, g[2], n);
}

/// Closed-form order-3 jet of the osculating projection.
inline CurvatureJet closed_form_kappa3(const CurveJet& curve, const OsculatingDirection& dir) {
    if (curve.order() < 5) fail(ErrorKind::OrderExceeded, "closed-form order-3 jet needs a curve of order 5");
    const double c = std::cos(dir.theta()), s = std::sin(dir.theta());
    const double a2 = curve.a(2), a3 = curve.a(3);
    const double b3 = curve.b(3), b4 = curve.b(4), b5 = curve.b(5);
    const double s2 = s * s, s3 = s2 * s, s5 = s3 * s2, s7 = s5 * s2;
    return CurvatureJet({0.0, -b3 / s3, -(b4 * s + 6.0 * a2 * b3 * c) / (2.0 * s5),
                         -(45.0 * a2 * a2 * b3 * c * c + b5 * s2 + 10.0 * (a3 * b3 + a2 * b4) * s * c) / (6.0 * s7)});
}

/// mu = det(c'', c''') / |c''|^(5/2) at an A-type singular point.
inline double cuspidal_curvature(const Vec2& c2, const Vec2& c3) {
    const double norm = std::hypot(c2[0], c2[1]);
    if (norm == 0.0) fail(ErrorKind::NotAType, "second derivative vanishes; the singular point is not A-type");
    return (c2[0] * c3[1] - c2[1] * c3[0]) / std::pow(norm, 2.5);
}

/// Cuspidal curvature of the projection along the tangent line, b_3 / a_2^(3/2).
inline double cuspidal_curvature(const CurveJet& curve) {
    return cuspidal_curvature(Vec2{curve.a(2), 0.0}, Vec2{curve.a(3), curve.b(3)});
}

/// Order-1 jet of the projection along a direction transverse to the
/// tangent, in the adapted frame where the tangent projection is known.
inline CurvatureJet project_tangential_secondary(const CurveJet& curve, const GeneralDirection& dir) {
    const double c1 = std::cos(dir.theta1), s1 = std::sin(dir.theta1);
    const double c2 = std::cos(dir.theta2), s2 = std::sin(dir.theta2);
    if (std::abs(c1) < 1e-12) fail(ErrorKind::TangentDirection, "cos(theta1) vanishes");
    const double a2 = curve.a(2), a3 = curve.a(3), b3 = curve.b(3);
    const double d = c1 * c1 * c2 * c2 + s2 * s2;
    const double q = -b3 * c1 * c1 * c2 * c2 * s1 * s2 - b3 * s1 * s2 * s2 * s2 +
                     c1 * c1 * c1 * c2 * (a3 * c2 - 3.0 * a2 * a2 * s2) + c1 * s2 * (3.0 * a2 * a2 * c2 + a3 * s2);
    return CurvatureJet({a2 * c1 / std::pow(d, 1.5), q / (d * d * d)});
}

} // namespace cjet
