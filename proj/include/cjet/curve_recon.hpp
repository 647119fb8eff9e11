#pragma once

// Recovery of a space-curve jet from projected curvature jets.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cjet/curve_model.hpp"
#include "cjet/error.hpp"

namespace cjet {

/// Two osculating-plane views with known relative angle phi = theta2 - theta1.
struct OsculatingMeasurementPair {
    CurvatureJet jet1;
    CurvatureJet jet2;
    double phi = 0.0;
    int n = 3;
};

struct ReconstructionReport {
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::vector<double> a;          // a_2 .. a_(n-2)
    std::vector<double> b;          // b_3 .. b_n
    std::vector<double> residuals;  // relative; jet1 entries 1..n-2 then jet2 entries 1..n-2
    std::vector<double> condition;  // per level 4..n: |det| / (row norm product)

    double max_residual() const noexcept {
        double r = 0.0;
        for (double v : residuals) r = std::max(r, v);
        return r;
    }
    /// Jet of order n with the unrecoverable a_(n-1), a_n set to zero.
    CurveJet curve() const { return CurveJet::padded(a, b, static_cast<int>(b.size()) + 2); }
};

namespace detail {

inline void validate_pair(const OsculatingMeasurementPair& m) {
    if (!std::isfinite(m.phi)) fail(ErrorKind::NonFinite, "phi is not finite");
    if (!(std::abs(m.phi) < std::numbers::pi))
        fail(ErrorKind::InvalidArgument, "phi must lie in (-pi, pi)");
    if (std::abs(std::sin(m.phi)) <= 1e-12) fail(ErrorKind::CollinearDirections, "sin(phi) vanishes");
    if (m.jet1.order() < 1 || m.jet2.order() < 1)
        fail(ErrorKind::OrderExceeded, "measurement jets need at least the first derivative");
    const double tol = 1e-12 * std::max(std::abs(m.jet1[1]), std::abs(m.jet2[1]));
    if (std::abs(m.jet1[1]) <= tol || std::abs(m.jet2[1]) <= tol)
        fail(ErrorKind::DegenerateMeasurement, "first arclength derivative of a projected curvature vanishes");
}

} // namespace detail

/// theta1 in (0, pi) and theta2 = theta1 + phi from the ratio of first derivatives.
inline std::pair<double, double> recover_viewing_angles(const OsculatingMeasurementPair& m) {
    detail::validate_pair(m);
    const double r = m.jet1[1] / m.jet2[1];
    if (!(r > 0.0))
        fail(ErrorKind::InconsistentMeasurement, "first derivatives of the two views differ in sign");
    const double cot1 = (std::cbrt(r) - std::cos(m.phi)) / std::sin(m.phi);
    const double theta1 = std::numbers::pi / 2 - std::atan(cot1);
    const double theta2 = theta1 + m.phi;
    if (!(theta2 > 0.0 && theta2 < std::numbers::pi))
        fail(ErrorKind::InconsistentMeasurement, "recovered theta2 = " + std::to_string(theta2) + " leaves (0, pi)");
    return {theta1, theta2};
}

inline double recover_b3(const OsculatingMeasurementPair& m) {
    detail::validate_pair(m);
    const double k1 = std::cbrt(m.jet1[1]), k2 = std::cbrt(m.jet2[1]);
    const double s = std::sin(m.phi);
    const double denom = k1 * k1 - 2.0 * std::cos(m.phi) * k1 * k2 + k2 * k2;
    const double magnitude = std::pow(s * s * k1 * k1 * k2 * k2 / denom, 1.5);
    return m.jet1[1] > 0.0 ? -magnitude : magnitude;
}

/// a_2..a_(n-2) and b_3..b_n from two osculating views.
inline ReconstructionReport recover_curve(const OsculatingMeasurementPair& m) {
    if (m.n < 3) fail(ErrorKind::InvalidArgument, "reconstruction order must be at least 3");
    if (m.n > TruncatedSeries::kMaxOrder)
        fail(ErrorKind::OrderExceeded, "reconstruction order exceeds " + std::to_string(TruncatedSeries::kMaxOrder));
    if (m.jet1.order() < m.n - 2 || m.jet2.order() < m.n - 2)
        fail(ErrorKind::OrderExceeded, "order-" + std::to_string(m.n) + " reconstruction needs jets of order " +
                                           std::to_string(m.n - 2));
    ReconstructionReport rep;
    std::tie(rep.theta1, rep.theta2) = recover_viewing_angles(m);
    rep.b.push_back(recover_b3(m));
    const OsculatingDirection d1(rep.theta1), d2(rep.theta2);

    for (int level = 4; level <= m.n; ++level) {
        const int entry = level - 2;
        // Unknowns (a_(level-2), b_level); every other coefficient fixed.
        auto probe = [&](double a_new, double b_new) {
            std::vector<double> a = rep.a, b = rep.b;
            a.push_back(a_new);
            b.push_back(b_new);
            const CurveJet c = CurveJet::padded(a, b, level);
            return std::pair{project_osculating(c, d1, entry)[entry], project_osculating(c, d2, entry)[entry]};
        };
        const auto [c1, c2] = probe(0.0, 0.0);
        const auto [a1, a2] = probe(1.0, 0.0);
        const auto [b1, b2] = probe(0.0, 1.0);
        const double m11 = a1 - c1, m12 = b1 - c1, m21 = a2 - c2, m22 = b2 - c2;
        const double r1 = m.jet1[entry] - c1, r2 = m.jet2[entry] - c2;
        const double det = m11 * m22 - m12 * m21;
        const double norms = std::hypot(m11, m12) * std::hypot(m21, m22);
        if (!(std::abs(det) >= 1e-12 * norms) || norms == 0.0)
            fail(ErrorKind::IllConditioned, "level " + std::to_string(level) + " system is singular");
        rep.condition.push_back(std::abs(det) / norms);
        rep.a.push_back((r1 * m22 - m12 * r2) / det);
        rep.b.push_back((m11 * r2 - r1 * m21) / det);
    }

    const CurveJet c = rep.curve();
    const CurvatureJet f1 = project_osculating(c, d1, m.n - 2);
    const CurvatureJet f2 = project_osculating(c, d2, m.n - 2);
    // Each entry is compared against the larger of the two measured values at that order.
    for (const auto& [fit, meas] : {std::pair{&f1, &m.jet1}, std::pair{&f2, &m.jet2}})
        for (int i = 1; i <= m.n - 2; ++i) {
            const double scale = std::max({std::abs(m.jet1[i]), std::abs(m.jet2[i]), 1e-300});
            rep.residuals.push_back(std::abs((*fit)[i] - (*meas)[i]) / scale);
        }
    return rep;
}

struct TangentialRecovery {
    double a2 = 0.0;
    double b3 = 0.0;
    double a3 = 0.0;
};

/// (a2, b3, a3) from the cuspidal curvature of the tangent view and the
/// order-1 jet of one further view.
inline TangentialRecovery recover_curve_tangential(double mu, const CurvatureJet& jet, const GeneralDirection& dir) {
    if (!std::isfinite(mu) || !std::isfinite(dir.theta1) || !std::isfinite(dir.theta2))
        fail(ErrorKind::NonFinite, "non-finite tangential input");
    if (jet.order() < 1) fail(ErrorKind::OrderExceeded, "tangential recovery needs an order-1 jet");
    const double c1 = std::cos(dir.theta1), s1 = std::sin(dir.theta1);
    const double c2 = std::cos(dir.theta2), s2 = std::sin(dir.theta2);
    if (std::abs(c1) < 1e-12) fail(ErrorKind::TangentDirection, "cos(theta1) vanishes");
    if (jet[0] == 0.0) fail(ErrorKind::ZeroCurvatureMeasurement, "projected curvature vanishes");
    const double d = c1 * c1 * c2 * c2 + s2 * s2;
    TangentialRecovery out;
    out.a2 = jet[0] * std::pow(d, 1.5) / c1;
    // mu = det(c'', c''') / |c''|^(5/2) with c'' = (a2, 0), c''' = (a3, b3).
    out.b3 = mu * std::copysign(std::pow(std::abs(out.a2), 1.5), out.a2);
    const double a2sq = out.a2 * out.a2;
    const double q0 = -out.b3 * c1 * c1 * c2 * c2 * s1 * s2 - out.b3 * s1 * s2 * s2 * s2 -
                      3.0 * a2sq * c1 * c1 * c1 * c2 * s2 + 3.0 * a2sq * c1 * s2 * c2;
    out.a3 = (jet[1] * d * d * d - q0) / (c1 * d);
    return out;
}

} // namespace cjet
