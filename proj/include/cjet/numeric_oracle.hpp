#pragma once

// Finite-difference curvature estimates for sampled plane curves.
//
// These deliberately avoid the series machinery: derivatives of the sampled
// coordinates come from 11-point central stencils, curvature and speed are
// formed pointwise, and their t-derivatives are differentiated once more
// (with one Richardson step) before the chain rule converts them to
// arclength derivatives.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cjet/curve_model.hpp"
#include "cjet/error.hpp"

namespace cjet {

/// Uniform samples c(i * spacing), i = -half..half, of a plane curve.
struct PlaneCurveSamples {
    double spacing = 0.0;
    std::vector<Vec2> points;

    int half_count() const noexcept { return (static_cast<int>(points.size()) - 1) / 2; }
    const Vec2& at(int i) const { return points.at(static_cast<std::size_t>(i + half_count())); }
};

namespace oracle_defaults {
inline constexpr int kStencilHalf = 5;
inline constexpr double kSpacing = 1e-3;
inline constexpr int kHalfCount = 20;
} // namespace oracle_defaults

template <class Curve>
PlaneCurveSamples sample_plane_curve(Curve&& curve, double spacing = oracle_defaults::kSpacing,
                                     int half_count = oracle_defaults::kHalfCount) {
    PlaneCurveSamples out;
    out.spacing = spacing;
    out.points.reserve(static_cast<std::size_t>(2 * half_count + 1));
    for (int i = -half_count; i <= half_count; ++i) out.points.push_back(curve(i * spacing));
    return out;
}

namespace detail {

/// Fornberg's recursion for finite-difference weights of derivatives
/// 0..max_deriv at `x0` from the given nodes.  w[m][j] weights node j for
/// the m-th derivative.
inline std::vector<std::vector<double>> fd_weights(std::span<const double> nodes, double x0, int max_deriv) {
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> c(static_cast<std::size_t>(max_deriv + 1),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[static_cast<std::size_t>(i)] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

/// Central weights on the integer offsets -half..half for derivatives 0..4.
inline const std::vector<std::vector<double>>& central_weights() {
    static const std::vector<std::vector<double>> w = [] {
        std::vector<double> nodes;
        for (int i = -oracle_defaults::kStencilHalf; i <= oracle_defaults::kStencilHalf; ++i) nodes.push_back(i);
        return fd_weights(nodes, 0.0, 4);
    }();
    return w;
}

/// m-th derivative at index `center` of uniformly spaced values, stride in samples.
inline double central_derivative(std::span<const double> values, int center, int m, double spacing, int stride) {
    const auto& w = central_weights()[static_cast<std::size_t>(m)];
    double acc = 0.0;
    for (int k = -oracle_defaults::kStencilHalf; k <= oracle_defaults::kStencilHalf; ++k)
        acc += w[static_cast<std::size_t>(k + oracle_defaults::kStencilHalf)] *
               values[static_cast<std::size_t>(center + k * stride)];
    return acc / std::pow(spacing * stride, m);
}

/// Accuracy order of the 11-point central stencil for the m-th derivative.
inline int central_accuracy(int m) { return 2 * oracle_defaults::kStencilHalf + 2 - 2 * ((m + 1) / 2); }

/// One Richardson step combining step h and 2h estimates.
inline double richardson_derivative(std::span<const double> values, int center, int m, double spacing) {
    const double fine = central_derivative(values, center, m, spacing, 1);
    const double coarse = central_derivative(values, center, m, spacing, 2);
    const double factor = std::pow(2.0, central_accuracy(m));
    return (factor * fine - coarse) / (factor - 1.0);
}

struct OracleDerivatives {
    std::array<double, 4> kappa{};  // kappa and its first three t-derivatives
    std::array<double, 3> speed{};  // |c'| and its first two t-derivatives
};

inline OracleDerivatives oracle_derivatives(const PlaneCurveSamples& samples) {
    constexpr int half = oracle_defaults::kStencilHalf;
    if (!(samples.spacing > 0.0) || !std::isfinite(samples.spacing))
        fail(ErrorKind::DegenerateGrid, "grid spacing must be positive and finite");
    if (samples.points.size() % 2 == 0)
        fail(ErrorKind::DegenerateGrid, "grid must have an odd number of samples centred on the base point");
    const int n = samples.half_count();
    if (n < 3 * half)
        fail(ErrorKind::DegenerateGrid, "grid needs at least " + std::to_string(3 * half) +
                                            " samples on each side, have " + std::to_string(n));
    for (const auto& p : samples.points)
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) fail(ErrorKind::DegenerateGrid, "non-finite sample");

    std::vector<double> xs, ys;
    for (const auto& p : samples.points) {
        xs.push_back(p[0]);
        ys.push_back(p[1]);
    }
    // Pointwise curvature and speed on the inner 2 * (2 * half) + 1 nodes.
    const int inner = 2 * half;
    std::vector<double> kappa, speed;
    for (int i = -inner; i <= inner; ++i) {
        const int idx = i + n;
        const double x1 = central_derivative(xs, idx, 1, samples.spacing, 1);
        const double y1 = central_derivative(ys, idx, 1, samples.spacing, 1);
        const double x2 = central_derivative(xs, idx, 2, samples.spacing, 1);
        const double y2 = central_derivative(ys, idx, 2, samples.spacing, 1);
        const double v = std::hypot(x1, y1);
        if (!(v > 0.0)) fail(ErrorKind::DegenerateGrid, "sampled curve is singular near the base point");
        kappa.push_back((x1 * y2 - y1 * x2) / (v * v * v));
        speed.push_back(v);
    }
    OracleDerivatives d;
    d.kappa[0] = kappa[static_cast<std::size_t>(inner)];
    d.speed[0] = speed[static_cast<std::size_t>(inner)];
    for (int m = 1; m <= 3; ++m) d.kappa[static_cast<std::size_t>(m)] = richardson_derivative(kappa, inner, m, samples.spacing);
    for (int m = 1; m <= 2; ++m) d.speed[static_cast<std::size_t>(m)] = richardson_derivative(speed, inner, m, samples.spacing);
    return d;
}

} // namespace detail

/// d^j kappa / ds^j at the centre sample, for 0 <= j <= 3.
inline double numeric_curvature_oracle(const PlaneCurveSamples& samples, int j) {
    if (j < 0 || j > 3) fail(ErrorKind::InvalidArgument, "oracle supports derivative orders 0..3");
    const auto d = detail::oracle_derivatives(samples);
    const double k0 = d.kappa[0], k1 = d.kappa[1], k2 = d.kappa[2], k3 = d.kappa[3];
    const double v = d.speed[0], v1 = d.speed[1], v2 = d.speed[2];
    switch (j) {
    case 0: return k0;
    case 1: return k1 / v;
    case 2: return k2 / (v * v) - k1 * v1 / (v * v * v);
    default:
        return k3 / (v * v * v) - 3.0 * k2 * v1 / std::pow(v, 4) - k1 * v2 / std::pow(v, 4) +
               3.0 * k1 * v1 * v1 / std::pow(v, 5);
    }
}

/// Taylor coefficients (kappa, dkappa/ds, ..., d^n kappa/ds^n / n!) for n <= 3.
inline CurvatureJet numeric_curvature_jet(const PlaneCurveSamples& samples, int n) {
    if (n < 0 || n > 3) fail(ErrorKind::InvalidArgument, "oracle supports jet orders 0..3");
    std::vector<double> out;
    double fact = 1.0;
    for (int j = 0; j <= n; ++j) {
        if (j > 1) fact *= j;
        out.push_back(numeric_curvature_oracle(samples, j) / fact);
    }
    return CurvatureJet(std::move(out));
}

/// Cuspidal curvature of a sampled curve with an A-type singularity at the centre.
inline double numeric_cuspidal_curvature(const PlaneCurveSamples& samples) {
    if (!(samples.spacing > 0.0) || samples.points.size() % 2 == 0 ||
        samples.half_count() < 2 * oracle_defaults::kStencilHalf)
        fail(ErrorKind::DegenerateGrid, "grid too small for the cuspidal estimate");
    std::vector<double> xs, ys;
    for (const auto& p : samples.points) {
        xs.push_back(p[0]);
        ys.push_back(p[1]);
    }
    const int c = samples.half_count();
    const Vec2 c2{detail::richardson_derivative(xs, c, 2, samples.spacing),
                  detail::richardson_derivative(ys, c, 2, samples.spacing)};
    const Vec2 c3{detail::richardson_derivative(xs, c, 3, samples.spacing),
                  detail::richardson_derivative(ys, c, 3, samples.spacing)};
    return cuspidal_curvature(c2, c3);
}

} // namespace cjet
