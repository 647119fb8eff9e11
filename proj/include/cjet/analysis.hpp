#pragma once

// Two-view ambiguity of second-order recovery and contour-conjugate directions.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cjet/error.hpp"
#include "cjet/surface_model.hpp"

namespace cjet {

/// The conic P(M, G) = 0 of surfaces compatible with two contour curvatures
/// observed delta = theta_i - theta_j apart.
class AmbiguityCurve {
public:
    AmbiguityCurve(double k1, double k2, double delta) : k1_(k1), k2_(k2), delta_(delta) {
        if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(delta))
            fail(ErrorKind::NonFinite, "non-finite ambiguity curve input");
        c2_ = std::cos(delta) * std::cos(delta);
        s2_ = std::sin(delta) * std::sin(delta);
    }

    double k1() const noexcept { return k1_; }
    double k2() const noexcept { return k2_; }
    double delta() const noexcept { return delta_; }
    double Mij() const noexcept { return 0.5 * (k1_ + k2_); }
    double Gij() const noexcept { return k1_ * k2_; }

    /// Symmetric quadratic-part matrix acting on (G, M).
    std::array<std::array<double, 2>, 2> Q() const noexcept {
        const double m = Mij(), g = Gij();
        const double off = -g * m * s2_;
        return {{{m * m - g * c2_, off}, {off, g * g * s2_ * s2_}}};
    }
    /// Coefficient of the linear G term.
    double linear_coefficient() const noexcept { return Gij() * Gij() * c2_ * s2_; }

    double det_Q() const noexcept {
        const auto q = Q();
        return q[0][0] * q[1][1] - q[0][1] * q[1][0];
    }

private:
    double k1_, k2_, delta_;
    double c2_ = 0.0, s2_ = 0.0;
};

inline double evaluate_P(const AmbiguityCurve& c, double M, double G) {
    const auto q = c.Q();
    return q[0][0] * G * G + 2.0 * q[0][1] * G * M + q[1][1] * M * M + c.linear_coefficient() * G;
}

enum class CurveClass { Hyperbola, Ellipse, Degenerate };

inline std::string_view to_string(CurveClass c) noexcept {
    switch (c) {
    case CurveClass::Hyperbola: return "Hyperbola";
    case CurveClass::Ellipse: return "Ellipse";
    case CurveClass::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

/// det Q = -G_ij^3 cos^2 sin^4; the conic is a hyperbola when that is negative.
inline CurveClass classify_curve(const AmbiguityCurve& c) {
    const double cs = std::cos(c.delta()) * std::sin(c.delta());
    if (c.k1() == 0.0 || c.k2() == 0.0 || std::abs(cs) <= 1e-12) return CurveClass::Degenerate;
    const double g = c.Gij();
    const double det = -g * g * g * cs * cs * std::sin(c.delta()) * std::sin(c.delta());
    return det < 0.0 ? CurveClass::Hyperbola : CurveClass::Ellipse;
}

/// Real G with P(M, G) = 0, in descending order.
inline std::vector<double> g_on_curve(const AmbiguityCurve& c, double M) {
    const auto q = c.Q();
    const double A = q[0][0];
    const double B = 2.0 * q[0][1] * M + c.linear_coefficient();
    const double C = q[1][1] * M * M;
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C), 1e-300});
    std::vector<double> roots;
    if (std::abs(A) <= 1e-14 * scale) {
        if (std::abs(B) > 1e-14 * scale) roots.push_back(-C / B);
        return roots;
    }
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
        if (disc < -1e-12 * B * B) return roots;
        disc = 0.0;
    }
    // Cancellation-free pair of roots.
    const double qq = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    if (qq == 0.0) {
        roots.push_back(0.0);
        roots.push_back(0.0);
    } else {
        roots.push_back(qq / A);
        roots.push_back(C / qq);
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

struct AmbiguousSurface {
    double M = 0.0;
    double G = 0.0;
    SurfaceJet surface{1.0, 0.0};
    /// Directions in (0, pi) whose contours have curvatures (k1, k2).
    std::array<double, 2> thetas{};
    /// theta1 - theta2 equals delta_sign * delta modulo pi.
    int delta_sign = 1;
};

namespace detail {

inline double wrap_direction(double t) {
    t = std::fmod(t, std::numbers::pi);
    if (t <= 0.0) t += std::numbers::pi;
    return t;
}

/// Directions in (0, pi) along which the quadratic surface has contour curvature k.
inline std::vector<double> directions_with_curvature(double a20, double a02, double k) {
    const double G = a20 * a02, M = 0.5 * (a20 + a02);
    std::vector<double> out;
    if (k == 0.0 || a20 == a02) return out;
    double c = (-2.0 * G + 2.0 * M * k) / ((a02 - a20) * k);
    if (std::abs(c) > 1.0 + 1e-9) return out;
    c = std::clamp(c, -1.0, 1.0);
    const double half = 0.5 * std::acos(c);
    out.push_back(wrap_direction(half));
    out.push_back(wrap_direction(std::numbers::pi - half));
    return out;
}

inline std::optional<AmbiguousSurface> realize(const AmbiguityCurve& c, double M, double G) {
    if (G == 0.0) return std::nullopt;
    const double disc = M * M - G;
    if (disc < -1e-12 * std::max(M * M, std::abs(G))) return std::nullopt;
    const double r = std::sqrt(std::max(disc, 0.0));
    AmbiguousSurface out;
    out.M = M;
    out.G = G;
    out.surface = SurfaceJet(M + r, M - r);
    const double a20 = M + r, a02 = M - r;
    const auto t1s = directions_with_curvature(a20, a02, c.k1());
    const auto t2s = directions_with_curvature(a20, a02, c.k2());
    const double pi = std::numbers::pi;
    for (int sign : {1, -1})
        for (double t1 : t1s)
            for (double t2 : t2s) {
                const double gap = std::remainder(t1 - t2 - sign * c.delta(), pi);
                if (std::abs(gap) > 1e-8) continue;
                try {
                    const double k1 = contour_curvature_jet(out.surface, t1).k0;
                    const double k2 = contour_curvature_jet(out.surface, t2).k0;
                    const double tol = 1e-8 * std::max({1.0, std::abs(c.k1()), std::abs(c.k2())});
                    if (std::abs(k1 - c.k1()) > tol || std::abs(k2 - c.k2()) > tol) continue;
                } catch (const Error&) {
                    continue;
                }
                out.thetas = {t1, t2};
                out.delta_sign = sign;
                return out;
            }
    return std::nullopt;
}

} // namespace detail

/// Two quadratic surfaces, with mean curvatures M1 and M2, that show the
/// same pair of contour curvatures.
inline std::array<AmbiguousSurface, 2> indistinguishable_pair(const AmbiguityCurve& c, double M1, double M2) {
    if (c.k1() == 0.0 || c.k2() == 0.0) fail(ErrorKind::InvalidArgument, "contour curvatures must be non-zero");
    if (std::abs(std::sin(c.delta())) <= 1e-12)
        fail(ErrorKind::InvalidArgument, "directions must differ modulo pi");
    std::array<AmbiguousSurface, 2> out;
    const std::array<double, 2> targets{M1, M2};
    for (std::size_t i = 0; i < 2; ++i) {
        const double M = targets[i];
        if (!std::isfinite(M)) fail(ErrorKind::NonFinite, "non-finite mean curvature target");
        const auto gs = g_on_curve(c, M);
        bool any_real = false;
        std::optional<AmbiguousSurface> found;
        for (double G : gs) {
            if (G == 0.0 || M * M - G < -1e-12 * std::max(M * M, std::abs(G))) continue;
            any_real = true;
            if ((found = detail::realize(c, M, G))) break;
        }
        if (!any_real)
            fail(ErrorKind::NoRealPoint, "no surface with real principal curvatures on the conic at M = " +
                                             std::to_string(M));
        if (!found)
            fail(ErrorKind::BranchSearchFailed, "no direction pair reproduces the curvatures at M = " +
                                                    std::to_string(M));
        out[i] = *found;
    }
    return out;
}

enum class ConjugateKind { AllDirections, TwoSolutions, NoSolution };

inline std::string_view to_string(ConjugateKind k) noexcept {
    switch (k) {
    case ConjugateKind::AllDirections: return "AllDirections";
    case ConjugateKind::TwoSolutions: return "TwoSolutions";
    case ConjugateKind::NoSolution: return "NoSolution";
    }
    return "Unknown";
}

struct ConjugateResult {
    ConjugateKind kind = ConjugateKind::NoSolution;
    /// theta2 and pi - theta2; these coincide modulo pi when theta1 is principal.
    std::vector<double> thetas;
};

inline ConjugateResult contour_conjugate_directions(double a20, double a02, double theta1) {
    if (!std::isfinite(a20) || !std::isfinite(a02) || !std::isfinite(theta1))
        fail(ErrorKind::NonFinite, "non-finite conjugate input");
    if (a20 == 0.0 && a02 == 0.0) fail(ErrorKind::FlatUmbilic, "a20 = a02 = 0");
    ConjugateResult out;
    if (a20 == a02) {
        out.kind = ConjugateKind::AllDirections;
        return out;
    }
    if (!(a20 * a02 > 0.0)) {
        out.kind = ConjugateKind::NoSolution;
        return out;
    }
    // a20 cos^2 t2 sin^2 t1 = a02 sin^2 t2 cos^2 t1.
    const double t2 = std::atan2(std::sqrt(std::abs(a20)) * std::abs(std::cos(theta1)),
                                 std::sqrt(std::abs(a02)) * std::abs(std::sin(theta1)));
    out.kind = ConjugateKind::TwoSolutions;
    out.thetas = {t2, std::numbers::pi - t2};
    return out;
}

} // namespace cjet
