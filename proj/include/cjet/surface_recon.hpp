#pragma once

// Recovery of Monge coefficients from contour curvatures.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cjet/error.hpp"
#include "cjet/surface_model.hpp"

namespace cjet {

/// Three contour curvatures with the pairwise differences
/// (theta1 - theta2, theta2 - theta3, theta3 - theta1).
struct TripleMeasurement {
    std::array<double, 3> k{};
    std::array<double, 3> deltas{};
};

struct SecondOrderResult {
    double M = 0.0;
    double G = 0.0;
    double a20 = 0.0;
    double a02 = 0.0;
    std::array<double, 3> thetas{};
    /// max |theta_i - theta_j - delta_ij| of the selected branch.
    double branch_mismatch = 0.0;
    /// |det W| / (product of row norms).
    double condition = 0.0;
    /// Relative disagreement between the (W, b) solution and the L/P/V form.
    double lpv_discrepancy = 0.0;
};

namespace detail {

struct PairTerms {
    double Mij, Gij, c2, s2;
};

inline std::array<PairTerms, 3> pair_terms(const std::array<double, 3>& k, const std::array<double, 3>& deltas) {
    std::array<PairTerms, 3> out{};
    for (int r = 0; r < 3; ++r) {
        const double ki = k[static_cast<std::size_t>(r)], kj = k[static_cast<std::size_t>((r + 1) % 3)];
        const double c = std::cos(deltas[static_cast<std::size_t>(r)]);
        const double s = std::sin(deltas[static_cast<std::size_t>(r)]);
        out[static_cast<std::size_t>(r)] = {0.5 * (ki + kj), ki * kj, c * c, s * s};
    }
    return out;
}

inline void validate_deltas(const std::array<double, 3>& deltas) {
    for (double d : deltas) {
        if (!std::isfinite(d)) fail(ErrorKind::NonFinite, "non-finite angle difference");
        if (std::abs(std::sin(d)) <= 1e-12)
            fail(ErrorKind::DegenerateConfiguration, "two directions coincide modulo pi");
    }
    if (std::abs(deltas[0] + deltas[1] + deltas[2]) > 1e-12 * std::max(1.0, std::abs(deltas[0]) + std::abs(deltas[1])))
        fail(ErrorKind::InvalidArgument, "angle differences must sum to zero");
}

inline double row_norm_product(const Eigen::Matrix3d& m) {
    return m.row(0).norm() * m.row(1).norm() * m.row(2).norm();
}

} // namespace detail

/// True when sin 2t1 + sin 2t2 + sin 2t3 is away from zero.
inline bool check_admissible_triple(const std::array<double, 3>& thetas) {
    double s = 0.0;
    for (double t : thetas) s += std::sin(2.0 * t);
    return std::abs(s) > 1e-12;
}

/// (M, G) from the corrected L/P/V expressions; used as a cross-check.
inline std::array<double, 2> second_order_lpv(const TripleMeasurement& m) {
    const auto terms = detail::pair_terms(m.k, m.deltas);
    Eigen::Matrix3d L, P, V;
    for (int r = 0; r < 3; ++r) {
        const auto& t = terms[static_cast<std::size_t>(r)];
        const double x1 = t.Mij / t.Gij;
        const double x2 = (t.Mij * t.Mij - t.Gij * t.c2) / (t.Gij * t.Gij * t.s2);
        L.row(r) << x1, t.c2, t.s2;
        P.row(r) << x2, t.c2, t.s2;
        V.row(r) << x1, x2, t.s2;
    }
    const double dv = V.determinant();
    if (dv == 0.0) fail(ErrorKind::DegenerateConfiguration, "det V vanishes");
    return {-P.determinant() / (2.0 * dv), -L.determinant() / dv};
}

/// M, G, principal coefficients and absolute directions from three contour curvatures.
inline SecondOrderResult recover_second_order(const TripleMeasurement& m) {
    for (double k : m.k) {
        if (!std::isfinite(k)) fail(ErrorKind::NonFinite, "non-finite contour curvature");
        if (k == 0.0) fail(ErrorKind::DegenerateConfiguration, "contour curvature vanishes");
    }
    detail::validate_deltas(m.deltas);
    const auto terms = detail::pair_terms(m.k, m.deltas);

    // W (G^2, GM, M^2)^T = -G b; dividing by G gives a linear system in (G, M, M^2/G).
    Eigen::Matrix3d W;
    Eigen::Vector3d b;
    for (int r = 0; r < 3; ++r) {
        const auto& t = terms[static_cast<std::size_t>(r)];
        W.row(r) << t.Mij * t.Mij - t.Gij * t.c2, -2.0 * t.Gij * t.Mij * t.s2, t.Gij * t.Gij * t.s2 * t.s2;
        b[r] = t.Gij * t.Gij * t.c2 * t.s2;
    }
    const double det_w = W.determinant();
    const double norms = detail::row_norm_product(W);
    if (!(std::abs(det_w) >= 1e-10 * norms) || norms == 0.0)
        fail(ErrorKind::DegenerateConfiguration, "det W vanishes (umbilic data or sin 2theta sum near zero)");
    Eigen::Matrix3d W1 = W, W2 = W;
    W1.col(0) = b;
    W2.col(1) = b;

    SecondOrderResult out;
    out.condition = std::abs(det_w) / norms;
    out.G = -W1.determinant() / det_w;
    out.M = -W2.determinant() / det_w;

    const double disc = out.M * out.M - out.G;
    const double disc_tol = 1e-12 * std::max(out.M * out.M, std::abs(out.G));
    if (disc < -disc_tol) fail(ErrorKind::NoRealRoots, "M^2 < G: no real principal curvatures");
    const double root = std::sqrt(std::max(disc, 0.0));
    out.a20 = out.M + root;
    out.a02 = out.M - root;
    if (out.a20 - out.a02 <= 1e-12 * std::max(std::abs(out.a20), std::abs(out.a02)))
        fail(ErrorKind::DegenerateConfiguration, "recovered surface is umbilic; directions are undetermined");

    try {
        const auto lpv = second_order_lpv(m);
        out.lpv_discrepancy = std::max(std::abs(lpv[0] - out.M) / std::max(std::abs(out.M), 1e-300),
                                       std::abs(lpv[1] - out.G) / std::max(std::abs(out.G), 1e-300));
    } catch (const Error&) {
        out.lpv_discrepancy = std::numeric_limits<double>::infinity();
    }

    // cos 2 theta_i from k_i, then choose the branch matching the differences.
    std::array<std::array<double, 2>, 3> cand{};
    for (int i = 0; i < 3; ++i) {
        const double k = m.k[static_cast<std::size_t>(i)];
        double c = (-2.0 * out.G + 2.0 * out.M * k) / ((out.a02 - out.a20) * k);
        if (std::abs(c) > 1.0 + 1e-8)
            fail(ErrorKind::InconsistentMeasurement, "cos 2theta_" + std::to_string(i + 1) + " = " +
                                                         std::to_string(c) + " is outside [-1, 1]");
        c = std::clamp(c, -1.0, 1.0);
        const double half = 0.5 * std::acos(c);
        // Endpoints of (0, pi) are nudged inward; they only arise at principal directions.
        cand[static_cast<std::size_t>(i)] = {std::max(half, 0.0), std::numbers::pi - half};
    }
    // Directions are lines, so differences are matched modulo pi.  Among
    // equally good branches prefer one needing no wrap, then the smallest theta1.
    double best = std::numeric_limits<double>::infinity();
    bool best_wraps = true;
    for (int mask = 0; mask < 8; ++mask) {
        std::array<double, 3> th{};
        for (int i = 0; i < 3; ++i) th[static_cast<std::size_t>(i)] = cand[static_cast<std::size_t>(i)][(mask >> i) & 1];
        double mismatch = 0.0;
        bool wraps = false;
        for (int r = 0; r < 3; ++r) {
            const double d = th[static_cast<std::size_t>(r)] - th[static_cast<std::size_t>((r + 1) % 3)];
            const double gap = d - m.deltas[static_cast<std::size_t>(r)];
            const double wrapped = std::remainder(gap, std::numbers::pi);
            mismatch = std::max(mismatch, std::abs(wrapped));
            wraps = wraps || std::abs(gap - wrapped) > 1.0;
        }
        bool better = mismatch < best - 1e-8;
        if (!better && std::abs(mismatch - best) <= 1e-8)
            better = wraps != best_wraps ? !wraps : th[0] < out.thetas[0];
        if (better) {
            best = std::min(best, mismatch);
            best_wraps = wraps;
            out.thetas = th;
            out.branch_mismatch = mismatch;
        }
    }
    if (out.branch_mismatch > 1e-6)
        fail(ErrorKind::InconsistentMeasurement, "no choice of directions reproduces the angle differences");
    return out;
}

struct DegeneratePair {
    SurfaceJet f1;
    SurfaceJet f2;
    std::array<double, 3> thetas1;
    std::array<double, 3> thetas2;
    double a = 0.0;  // f2 = (u, v, a u^2 + 2 v^2)
};

/// Two different surfaces whose contours have the same curvatures on a
/// triple violating the sin 2theta condition.  The first direction of each
/// triple is the u-axis, which the contour chart excludes; its curvature is
/// the limit a02 of k(theta) as theta -> 0.
inline DegeneratePair degenerate_pair_demo() {
    constexpr double pi = std::numbers::pi;
    const SurfaceJet f1(2.0, 4.0);
    const double target = contour_curvature_jet(f1, pi / 6).k0;
    auto gap = [&](double a) { return contour_curvature_jet(SurfaceJet(2.0 * a, 4.0), pi / 4).k0 - target; };
    double lo = 1.0, hi = 2.0;
    if (!(gap(lo) < 0.0 && gap(hi) > 0.0)) fail(ErrorKind::BranchSearchFailed, "demo bracket lost");
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    return {f1, SurfaceJet(2.0 * a, 4.0), {0.0, pi / 6, 5 * pi / 6}, {0.0, pi / 4, 3 * pi / 4}, a};
}

/// (a30, a21, a12, a03) from four directions with known dk/ds.
inline std::array<double, 4> recover_third_order(double a20, double a02, const std::array<ContourObservation, 4>& obs) {
    if (!std::isfinite(a20) || !std::isfinite(a02)) fail(ErrorKind::NonFinite, "non-finite second-order input");
    if (a20 * a02 == 0.0) fail(ErrorKind::DegenerateConfiguration, "third-order recovery needs a20 * a02 != 0");
    const SurfaceJet s2(a20, a02);
    Eigen::Matrix4d A;
    Eigen::Vector4d d;
    for (int i = 0; i < 4; ++i) {
        const auto& o = obs[static_cast<std::size_t>(i)];
        if (!o.k1) fail(ErrorKind::InvalidArgument, "observation " + std::to_string(i + 1) + " lacks dk/ds");
        if (!std::isfinite(o.theta) || !std::isfinite(*o.k1)) fail(ErrorKind::NonFinite, "non-finite observation");
        for (int j = 0; j < i; ++j)
            if (std::abs(std::sin(o.theta - obs[static_cast<std::size_t>(j)].theta)) <= 1e-12)
                fail(ErrorKind::DegenerateConfiguration, "repeated direction");
        const double p = p_of_theta(s2, o.theta);
        if (std::abs(p) <= 1e-12 * std::max(std::abs(a20), std::abs(a02)))
            fail(ErrorKind::AsymptoticDirection, "observation " + std::to_string(i + 1) + " is asymptotic");
        const double c = std::cos(o.theta), s = std::sin(o.theta);
        A.row(i) << -a02 * a02 * a02 * s * s * s, 3.0 * a20 * a02 * a02 * s * s * c, -3.0 * a20 * a20 * a02 * s * c * c,
            a20 * a20 * a20 * c * c * c;
        d[i] = p * p * p * *o.k1;
    }
    const double det = A.determinant();
    const double norms = A.row(0).norm() * A.row(1).norm() * A.row(2).norm() * A.row(3).norm();
    if (!(std::abs(det) >= 1e-10 * norms) || norms == 0.0)
        fail(ErrorKind::DegenerateConfiguration, "det A vanishes");
    std::array<double, 4> out{};
    for (int j = 0; j < 4; ++j) {
        Eigen::Matrix4d Aj = A;
        Aj.col(j) = d;
        out[static_cast<std::size_t>(j)] = Aj.determinant() / det;
    }
    return out;
}

inline std::array<double, 4> recover_third_order(const SecondOrderResult& s2, const std::array<ContourObservation, 4>& obs) {
    return recover_third_order(s2.a20, s2.a02, obs);
}

struct NormalCurvatureResult {
    double M = 0.0;
    double G = 0.0;
    /// |det V^n| / (product of row norms).
    double condition = 0.0;
};

/// (M, G) from three normal curvatures and the pairwise direction differences.
inline NormalCurvatureResult recover_from_normal_curvatures(const std::array<double, 3>& kn,
                                                            const std::array<double, 3>& deltas) {
    for (double k : kn)
        if (!std::isfinite(k)) fail(ErrorKind::NonFinite, "non-finite normal curvature");
    detail::validate_deltas(deltas);
    const auto terms = detail::pair_terms(kn, deltas);
    Eigen::Matrix3d Vn, Ln, Pn;
    for (int r = 0; r < 3; ++r) {
        const auto& t = terms[static_cast<std::size_t>(r)];
        const double x5 = t.Mij;
        const double x6 = (t.Mij * t.Mij - t.Gij * t.c2) / t.s2;
        Vn.row(r) << x5, t.c2, t.s2;
        Ln.row(r) << x6, x5, t.s2;
        Pn.row(r) << x6, t.c2, t.s2;
    }
    const double dv = Vn.determinant();
    const double norms = detail::row_norm_product(Vn);
    if (!(std::abs(dv) >= 1e-10 * norms) || norms == 0.0)
        fail(ErrorKind::DegenerateConfiguration, "det V^n vanishes");
    return {Pn.determinant() / (2.0 * dv), Ln.determinant() / dv, std::abs(dv) / norms};
}

} // namespace cjet
