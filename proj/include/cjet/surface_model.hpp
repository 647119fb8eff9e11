#pragma once

// Forward model for Monge-form surfaces f(u, v) = (u, v, h(u, v)) with
//
//   h = a20 u^2 / 2 + a02 v^2 / 2 + sum_{i+j>=3} a_ij u^i v^j / (i! j!)
//
// projected along a tangent direction xi(theta) = (cos theta, sin theta, 0).
// The contour lives in xi^perp with the positive basis X = (-sin, cos, 0),
// Y = (0, 0, 1); contour curvature is oriented along +X.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <unsupported/Eigen/Polynomials>

#include "cjet/curve_model.hpp"
#include "cjet/error.hpp"
#include "cjet/numeric_oracle.hpp"
#include "cjet/series.hpp"

namespace cjet {

struct MongeTerm {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

class SurfaceJet {
public:
    /// Quadratic surface.
    SurfaceJet(double a20, double a02) : SurfaceJet(2, {{2, 0, a20}, {0, 2, a02}}) {}

    /// Cubic surface; `a3` = (a30, a21, a12, a03).
    SurfaceJet(double a20, double a02, const std::array<double, 4>& a3)
        : SurfaceJet(3, {{2, 0, a20}, {0, 2, a02}, {3, 0, a3[0]}, {2, 1, a3[1]}, {1, 2, a3[2]}, {0, 3, a3[3]}}) {}

    /// General jet of the given order; unspecified coefficients are zero.
    SurfaceJet(int order, const std::vector<MongeTerm>& terms) : order_(order) {
        if (order < 2) fail(ErrorKind::InvalidArgument, "surface jet order must be at least 2");
        if (order > TruncatedSeries::kMaxOrder - 1)
            fail(ErrorKind::OrderExceeded, "surface jet order too large for the series engine");
        coeffs_.assign(static_cast<std::size_t>((order + 1) * (order + 2) / 2), 0.0);
        for (const auto& t : terms) {
            if (t.i < 0 || t.j < 0 || t.i + t.j < 2 || (t.i == 1 && t.j == 1))
                fail(ErrorKind::InvalidArgument, "Monge form has no a" + std::to_string(t.i) + std::to_string(t.j) +
                                                     " term");
            if (t.i + t.j > order)
                fail(ErrorKind::InvalidArgument, "term a" + std::to_string(t.i) + std::to_string(t.j) +
                                                     " exceeds jet order " + std::to_string(order));
            if (!std::isfinite(t.value)) fail(ErrorKind::NonFinite, "non-finite surface coefficient");
            coeffs_[index(t.i, t.j)] = t.value;
        }
    }

    int order() const noexcept { return order_; }

    /// a_ij; zero for terms absent from the Monge form or beyond the order.
    double coeff(int i, int j) const noexcept {
        if (i < 0 || j < 0 || i + j > order_) return 0.0;
        return coeffs_[index(i, j)];
    }
    double a20() const noexcept { return coeff(2, 0); }
    double a02() const noexcept { return coeff(0, 2); }
    std::array<double, 4> a3() const noexcept { return {coeff(3, 0), coeff(2, 1), coeff(1, 2), coeff(0, 3)}; }

    double mean_curvature() const noexcept { return 0.5 * (a20() + a02()); }
    double gaussian_curvature() const noexcept { return a20() * a02(); }

    /// a20 * a02 != 0, a20 > a02, a20 > 0.
    bool is_strictly_normalized() const noexcept {
        return a20() * a02() != 0.0 && a20() > a02() && a20() > 0.0;
    }
    void require_strict() const {
        if (!is_strictly_normalized())
            fail(ErrorKind::InvalidArgument, "surface violates a20*a02 != 0, a20 > a02, a20 > 0");
    }

    /// d^(du+dv) h / du^du dv^dv at (u, v).
    double partial(int du, int dv, double u, double v) const noexcept {
        double acc = 0.0;
        for (int d = 2; d <= order_; ++d)
            for (int i = 0; i <= d; ++i) {
                const int j = d - i;
                if (i < du || j < dv) continue;
                const double c = coeffs_[index(i, j)];
                if (c == 0.0) continue;
                acc += c * std::pow(u, i - du) / factorial(i - du) * std::pow(v, j - dv) / factorial(j - dv);
            }
        return acc;
    }
    double height(double u, double v) const noexcept { return partial(0, 0, u, v); }

private:
    static std::size_t index(int i, int j) noexcept {
        const int d = i + j;
        return static_cast<std::size_t>(d * (d + 1) / 2 + j);
    }
    static double factorial(int n) noexcept {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    }

    int order_;
    std::vector<double> coeffs_;
};

struct ContourObservation {
    double theta = 0.0;
    double k0 = 0.0;
    std::optional<double> k1;
};

/// Normal curvature in direction theta, a20 cos^2 + a02 sin^2.
inline double p_of_theta(const SurfaceJet& s, double theta) noexcept {
    const double c = std::cos(theta), sn = std::sin(theta);
    return s.a20() * c * c + s.a02() * sn * sn;
}

/// Cubic form controlling the first arclength derivative of contour curvature.
inline double q_of_theta(const SurfaceJet& s, double theta) noexcept {
    const double c = std::cos(theta), sn = std::sin(theta);
    const double a20 = s.a20(), a02 = s.a02();
    const auto [a30, a21, a12, a03] = s.a3();
    return a03 * a20 * a20 * a20 * c * c * c - 3.0 * a02 * a12 * a20 * a20 * c * c * sn +
           3.0 * a02 * a02 * a20 * a21 * c * sn * sn - a02 * a02 * a02 * a30 * sn * sn * sn;
}

namespace detail {

inline double second_order_scale(const SurfaceJet& s) noexcept {
    return std::max({std::abs(s.a20()), std::abs(s.a02()), 1e-300});
}

inline void require_contour_chart(const SurfaceJet& s, double theta) {
    if (std::abs(s.a02() * std::sin(theta)) <= 1e-12 * second_order_scale(s))
        fail(ErrorKind::DegenerateParametrization, "a02 sin(theta) vanishes; the contour generator is not a graph over u");
}

inline void require_non_asymptotic(const SurfaceJet& s, double theta) {
    if (std::abs(p_of_theta(s, theta)) <= 1e-12 * second_order_scale(s))
        fail(ErrorKind::AsymptoticDirection, "theta is an asymptotic direction (p(theta) = 0)");
}

/// u^p as a series of order n.
inline TruncatedSeries monomial(int p, int n) {
    SeriesBuilder b(n);
    if (p <= n) b[p] = 1.0;
    return b.build();
}

/// g(u, v(u)) for the polynomial g = d^(du,dv) h, as a series in u.
inline TruncatedSeries partial_along(const SurfaceJet& s, int du, int dv, const TruncatedSeries& v) {
    const int n = v.order();
    TruncatedSeries acc(n);
    std::vector<TruncatedSeries> vpow{TruncatedSeries::constant(1.0, n)};
    for (int d = 2; d <= s.order(); ++d)
        for (int i = du; i <= d; ++i) {
            const int j = d - i;
            if (j < dv) continue;
            const double c = s.coeff(i, j);
            if (c == 0.0) continue;
            while (static_cast<int>(vpow.size()) <= j - dv) vpow.push_back(series_mul(vpow.back(), v));
            double fi = 1.0, fj = 1.0;
            for (int k = 2; k <= i - du; ++k) fi *= k;
            for (int k = 2; k <= j - dv; ++k) fj *= k;
            acc = acc + (c / (fi * fj)) * series_mul(monomial(i - du, n), vpow[static_cast<std::size_t>(j - dv)]);
        }
    return acc;
}

} // namespace detail

/// v = c(u) solving cos(theta) h_u + sin(theta) h_v = 0 near 0, as a series of the given order.
inline TruncatedSeries contour_generator_series(const SurfaceJet& s, double theta, int order) {
    detail::require_contour_chart(s, theta);
    if (order < 1) fail(ErrorKind::InvalidArgument, "contour generator series needs order >= 1");
    const double c = std::cos(theta), sn = std::sin(theta);
    const double fv = s.a02() * sn;
    TruncatedSeries v((order));
    // Constant-slope iteration; each pass fixes one more coefficient.
    for (int it = 0; it < order; ++it) {
        const TruncatedSeries residual = c * detail::partial_along(s, 1, 0, v) + sn * detail::partial_along(s, 0, 1, v);
        v = v - (1.0 / fv) * residual;
    }
    return v;
}

/// Closed-form contour curvature and its first arclength derivative.
inline ContourObservation contour_curvature_jet(const SurfaceJet& s, double theta) {
    detail::require_non_asymptotic(s, theta);
    detail::require_contour_chart(s, theta);
    const double p = p_of_theta(s, theta);
    ContourObservation obs;
    obs.theta = theta;
    obs.k0 = s.gaussian_curvature() / p;
    if (s.order() >= 3) obs.k1 = q_of_theta(s, theta) / (p * p * p);
    return obs;
}

/// Contour curvature jet to order n computed through the series engine:
/// contour generator, projection, arclength reparametrization and
/// reorientation along +X.
inline CurvatureJet contour_curvature_series(const SurfaceJet& s, double theta, int n) {
    detail::require_non_asymptotic(s, theta);
    const TruncatedSeries cgen = contour_generator_series(s, theta, n + 2);
    const double c = std::cos(theta), sn = std::sin(theta);
    const TruncatedSeries u = TruncatedSeries::variable(n + 2);
    const TruncatedSeries x = (-sn) * u + c * cgen;
    const TruncatedSeries y = detail::partial_along(s, 0, 0, cgen);
    const CurvatureJet along_t = plane_curve_curvature_jet(x, y, n);
    // Reversing the parameter flips curvature and every even-order arclength coefficient.
    if (x[1] > 0.0) return along_t;
    std::vector<double> out = along_t.values();
    for (std::size_t j = 0; j < out.size(); j += 2) out[j] = -out[j];
    return CurvatureJet(std::move(out));
}

/// Directions in (0, pi) whose contour has a vertex at the base point.
struct VertexDirections {
    bool all = false;
    std::vector<double> thetas;
};

inline VertexDirections find_vertex_directions(const SurfaceJet& s) {
    const double a20 = s.a20(), a02 = s.a02();
    if (a20 * a02 == 0.0) fail(ErrorKind::InvalidArgument, "vertex directions need a20 * a02 != 0");
    const auto [a30, a21, a12, a03] = s.a3();
    // q(theta) / cos^3 = c0 + c1 t + c2 t^2 + c3 t^3 with t = tan(theta).
    std::array<double, 4> poly{a03 * a20 * a20 * a20, -3.0 * a02 * a12 * a20 * a20, 3.0 * a02 * a02 * a20 * a21,
                               -a02 * a02 * a02 * a30};
    double scale = 0.0;
    for (double v : poly) scale = std::max(scale, std::abs(v));
    VertexDirections out;
    if (scale == 0.0) {
        out.all = true;
        return out;
    }
    const double zero_tol = 1e-13 * scale;
    int degree = 3;
    while (degree > 0 && std::abs(poly[static_cast<std::size_t>(degree)]) <= zero_tol) --degree;
    std::vector<double> candidates;
    if (degree < 3) candidates.push_back(std::numbers::pi / 2);  // root at t = infinity
    if (degree >= 1) {
        Eigen::VectorXd coeffs(degree + 1);
        for (int i = 0; i <= degree; ++i) coeffs[i] = poly[static_cast<std::size_t>(i)];
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        for (const auto& root : solver.roots()) {
            if (std::abs(root.imag()) > 1e-7 * std::max(1.0, std::abs(root.real()))) continue;
            double theta = std::atan(root.real());
            if (theta <= 0.0) theta += std::numbers::pi;
            // Polish on q itself, which stays well conditioned near pi/2.
            for (int it = 0; it < 3; ++it) {
                const double h = 1e-7;
                const double qv = q_of_theta(s, theta);
                const double dq = (q_of_theta(s, theta + h) - q_of_theta(s, theta - h)) / (2 * h);
                if (dq == 0.0) break;
                theta -= qv / dq;
            }
            candidates.push_back(theta);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    for (double th : candidates) {
        if (!(th > 0.0 && th < std::numbers::pi)) continue;
        if (std::abs(p_of_theta(s, th)) <= 1e-12 * detail::second_order_scale(s)) continue;
        if (!out.thetas.empty() && std::abs(out.thetas.back() - th) < 1e-9) continue;
        out.thetas.push_back(th);
    }
    return out;
}

struct ContourOracleOptions {
    double spacing = 0.0;  // 0 selects a spacing from the local geometry
    int half_count = oracle_defaults::kHalfCount;
    double residual_tolerance = 1e-12;
};

namespace detail {

/// Newton refinement of cos h_u + sin h_v = 0 in v at fixed u.
inline double refine_contour_point(const SurfaceJet& s, double theta, double u, double v_guess, double tol) {
    const double c = std::cos(theta), sn = std::sin(theta);
    double v = v_guess;
    for (int it = 0; it < 50; ++it) {
        const double f = c * s.partial(1, 0, u, v) + sn * s.partial(0, 1, u, v);
        const double fv = c * s.partial(1, 1, u, v) + sn * s.partial(0, 2, u, v);
        if (std::abs(f) <= tol * second_order_scale(s)) return v;
        if (fv == 0.0 || !std::isfinite(fv)) break;
        v -= f / fv;
    }
    const double f = c * s.partial(1, 0, u, v) + sn * s.partial(0, 1, u, v);
    if (std::abs(f) <= tol * second_order_scale(s)) return v;
    fail(ErrorKind::RootRefinementFailed, "contour generator refinement did not converge at u = " + std::to_string(u));
}

inline double default_contour_spacing(const SurfaceJet& s, double theta) {
    double third = 0.0;
    for (int d = 3; d <= s.order(); ++d)
        for (int i = 0; i <= d; ++i) third = std::max(third, std::abs(s.coeff(i, d - i)));
    const double chart = std::abs(s.a02() * std::sin(theta));
    const double asym = std::abs(p_of_theta(s, theta));
    // The generator moves |slope| in v per unit u, and the contour |speed| in arclength.
    const double slope = std::abs(s.a20() * std::cos(theta)) / chart;
    const double speed = asym / chart;
    const double reach = std::min({1.0, chart / ((third + 1e-300) * (1.0 + slope)),
                                   asym / (third + second_order_scale(s))});
    return 2e-3 * std::max(reach, 1e-3) / std::max(1.0, speed);
}

} // namespace detail

/// Samples of the contour in the (X, Y) frame, oriented along +X.
inline PlaneCurveSamples sample_contour(const SurfaceJet& s, double theta, const ContourOracleOptions& opt = {}) {
    detail::require_non_asymptotic(s, theta);
    detail::require_contour_chart(s, theta);
    const double h = opt.spacing > 0.0 ? opt.spacing : detail::default_contour_spacing(s, theta);
    const double c = std::cos(theta), sn = std::sin(theta);
    const TruncatedSeries guess = contour_generator_series(s, theta, 4);
    const double slope = -s.a20() * c / (s.a02() * sn);
    // Orientation along +X: x'(0) = -sin + cos c'(0).
    const double dir = (-sn + c * slope) > 0.0 ? 1.0 : -1.0;
    PlaneCurveSamples out;
    out.spacing = h;
    for (int i = -opt.half_count; i <= opt.half_count; ++i) {
        const double u = dir * i * h;
        const double v = detail::refine_contour_point(s, theta, u, guess.eval(u), opt.residual_tolerance);
        out.points.push_back({-sn * u + c * v, s.height(u, v)});
    }
    return out;
}

/// Finite-difference estimate of (k0, k1) from a root-refined contour.
inline ContourObservation numeric_contour_oracle(const SurfaceJet& s, double theta, const ContourOracleOptions& opt = {}) {
    const PlaneCurveSamples samples = sample_contour(s, theta, opt);
    ContourObservation obs;
    obs.theta = theta;
    obs.k0 = numeric_curvature_oracle(samples, 0);
    obs.k1 = numeric_curvature_oracle(samples, 1);
    return obs;
}

} // namespace cjet
