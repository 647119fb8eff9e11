#include "test_support.hpp"

using namespace cjet;
using cjet_test::expect_error;
using cjet_test::pi;

namespace {

OsculatingMeasurementPair measure(const CurveJet& c, double t1, double t2, int n) {
    return {project_osculating(c, OsculatingDirection(t1), n - 2), project_osculating(c, OsculatingDirection(t2), n - 2),
            t2 - t1, n};
}

OsculatingMeasurementPair first_derivatives(double d1, double d2, double phi) {
    return {CurvatureJet({0.0, d1}), CurvatureJet({0.0, d2}), phi, 3};
}

} // namespace

TEST(RecoverViewingAngles, Examples) {
    const auto [t1, t2] = recover_viewing_angles(first_derivatives(-8.0 / (3.0 * std::sqrt(3.0)), -1.0, pi / 6));
    EXPECT_NEAR(t1, pi / 3, 1e-14);
    EXPECT_NEAR(t2, pi / 2, 1e-14);

    const double th = 0.8;
    const auto [m1, m2] = recover_viewing_angles(first_derivatives(-0.7, -0.7, pi - 2 * th));
    EXPECT_NEAR(m1, th, 1e-14);
    EXPECT_NEAR(m2, pi - th, 1e-14);

    for (double phi : {1e-3, 0.05, -0.02}) {
        const auto [h1, h2] = recover_viewing_angles(first_derivatives(2.0, 2.0, phi));
        EXPECT_NEAR(h1, (pi - phi) / 2, 1e-12);
        EXPECT_NEAR(h2 - h1, phi, 1e-15);
    }
}

TEST(RecoverViewingAngles, Errors) {
    expect_error([] { recover_viewing_angles(first_derivatives(0.0, -1.0, 0.5)); }, ErrorKind::DegenerateMeasurement);
    expect_error([] { recover_viewing_angles(first_derivatives(-1.0, -1.0, 0.0)); }, ErrorKind::CollinearDirections);
    expect_error([] { recover_viewing_angles(first_derivatives(-1.0, -1.0, pi)); }, ErrorKind::InvalidArgument);
    expect_error([] { recover_viewing_angles(first_derivatives(-1.0, 1.0, 0.5)); }, ErrorKind::InconsistentMeasurement);
}

TEST(RecoverB3, Examples) {
    EXPECT_NEAR(recover_b3(first_derivatives(-8.0 / (3.0 * std::sqrt(3.0)), -1.0, pi / 6)), 1.0, 1e-14);

    const CurveJet c = CurveJet::padded({0.7}, {-2.0}, 3);
    EXPECT_NEAR(recover_b3(measure(c, 0.9, 2.1, 3)), -2.0, 1e-9);

    const double d = 3.5, kt = std::cbrt(d);
    EXPECT_NEAR(std::abs(recover_b3(first_derivatives(d, d, pi / 2))), std::pow(kt * kt / 2.0, 1.5), 1e-13);
}

TEST(RecoverCurve, FifthOrderExample) {
    const CurveJet c = CurveJet::padded({1.0, 0.5}, {1.0, -0.3, 0.7}, 5);
    const auto r = recover_curve(measure(c, pi / 3, pi / 2, 5));
    EXPECT_NEAR(r.theta1, pi / 3, 1e-12);
    EXPECT_NEAR(r.theta2, pi / 2, 1e-12);
    ASSERT_EQ(r.a.size(), 2u);
    ASSERT_EQ(r.b.size(), 3u);
    EXPECT_NEAR(r.a[0], 1.0, 1e-8);
    EXPECT_NEAR(r.a[1], 0.5, 1e-8);
    EXPECT_NEAR(r.b[0], 1.0, 1e-8);
    EXPECT_NEAR(r.b[1], -0.3, 1e-8);
    EXPECT_NEAR(r.b[2], 0.7, 1e-8);
    EXPECT_LT(r.max_residual(), 1e-8);
}

TEST(RecoverCurve, PerpendicularViewKillsMixedTerm) {
    const CurveJet c = CurveJet::padded({1.0, 0.5}, {1.0, 0.0}, 4);
    EXPECT_NEAR(project_osculating(c, OsculatingDirection(pi / 2), 2)[2], 0.0, 1e-15);
}

TEST(RecoverCurve, ZeroTorsionIsDegenerate) {
    const CurveJet c = CurveJet::padded({1.0, 0.5}, {0.0, 0.4}, 5);
    expect_error([&] { recover_curve(measure(c, pi / 3, pi / 2, 5)); }, ErrorKind::DegenerateMeasurement);
}

TEST(RecoverCurve, RequiresJetOrder) {
    const CurveJet c = CurveJet::padded({1.0}, {1.0}, 6);
    auto m = measure(c, 0.7, 1.9, 5);
    m.n = 6;
    expect_error([&] { recover_curve(m); }, ErrorKind::OrderExceeded);
}

TEST(RecoverCurve, RoundTrip) {
    // Angles stay 0.3 from the ends with |sin phi| >= 0.2: closer to grazing
    // views the round trip loses digits to rounding of the measurements.
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; checked < 500; ++trial) {
        const int n = 4 + trial % 5;
        const CurveJet c = cjet_test::random_curve(rng, n);
        const double t1 = rng.uniform(0.3, pi - 0.3), t2 = rng.uniform(0.3, pi - 0.3);
        if (std::abs(std::sin(t2 - t1)) < 0.2) continue;
        ++checked;
        const auto m = measure(c, t1, t2, n);
        const auto r = recover_curve(m);
        EXPECT_NEAR(r.theta1, t1, 1e-8);
        EXPECT_NEAR(r.theta2, t2, 1e-8);
        EXPECT_GT(r.theta1, 0.0);
        EXPECT_LT(r.theta1, pi);
        EXPECT_NEAR(r.b[0], c.b(3), 1e-8);
        for (int i = 2; i <= n - 2; ++i) EXPECT_LE(cjet_test::rel_diff(r.a[i - 2], c.a(i)), 1e-6) << "a" << i;
        for (int i = 4; i <= n; ++i) EXPECT_LE(cjet_test::rel_diff(r.b[i - 3], c.b(i)), 1e-6) << "b" << i;
        EXPECT_LT(r.max_residual(), 1e-8);
        EXPECT_EQ(r.b[0] > 0.0, m.jet1[1] < 0.0);
    }
}

TEST(RecoverB3, SignLaw) {
    Rng rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        const CurveJet c = cjet_test::random_curve(rng, 3);
        const double t1 = rng.uniform(0.2, pi - 0.2), t2 = rng.uniform(0.2, pi - 0.2);
        if (std::abs(std::sin(t2 - t1)) < 0.1) continue;
        const auto m = measure(c, t1, t2, 3);
        const double b3 = recover_b3(m);
        EXPECT_EQ(b3 > 0.0, m.jet1[1] < 0.0);
    }
}

TEST(RecoverCurveTangential, Examples) {
    const auto r = recover_curve_tangential(1.0, CurvatureJet({1.0, 0.0}), GeneralDirection{0.0, 0.8});
    EXPECT_NEAR(r.a2, 1.0, 1e-15);
    EXPECT_NEAR(r.b3, 1.0, 1e-15);
    EXPECT_NEAR(r.a3, 0.0, 1e-15);

    const CurveJet c = CurveJet::padded({2.0, -1.0}, {1.0}, 4);
    const GeneralDirection d{pi / 4, pi / 6};
    const auto t = recover_curve_tangential(cuspidal_curvature(c), project_tangential_secondary(c, d), d);
    EXPECT_NEAR(t.a2, 2.0, 1e-9);
    EXPECT_NEAR(t.b3, 1.0, 1e-9);
    EXPECT_NEAR(t.a3, -1.0, 1e-9);

    // D = 1/2 here, so a2 = kappa * D^(3/2) / cos(theta1) = kappa / 2.
    const auto z = recover_curve_tangential(0.0, CurvatureJet({2.0, 0.0}), GeneralDirection{pi / 4, 0.0});
    EXPECT_NEAR(z.a2, 1.0, 1e-14);
    EXPECT_EQ(z.b3, 0.0);
    const auto w = recover_curve_tangential(0.0, CurvatureJet({std::sqrt(2.0), 0.0}), GeneralDirection{pi / 4, 0.0});
    EXPECT_NEAR(w.a2, 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(project_tangential_secondary(CurveJet::padded({1.0}, {}, 3), GeneralDirection{pi / 4, 0.0})[0], 2.0,
                1e-14);
}

TEST(RecoverCurveTangential, RoundTrip) {
    Rng rng(33);
    int checked = 0;
    while (checked < 1000) {
        const CurveJet c = cjet_test::random_curve(rng, 4);
        const GeneralDirection d{rng.uniform(0.0, pi), rng.uniform(-pi, pi)};
        if (std::abs(std::cos(d.theta1)) < 0.1) continue;
        ++checked;
        const auto r = recover_curve_tangential(cuspidal_curvature(c), project_tangential_secondary(c, d), d);
        EXPECT_NEAR(r.a2, c.a(2), 1e-9);
        EXPECT_NEAR(r.b3, c.b(3), 1e-9);
        EXPECT_NEAR(r.a3, c.a(3), 1e-9);
    }
}

TEST(RecoverCurveTangential, Errors) {
    expect_error([] { recover_curve_tangential(1.0, CurvatureJet({1.0, 0.0}), GeneralDirection{pi / 2, 0.1}); },
                 ErrorKind::TangentDirection);
    expect_error([] { recover_curve_tangential(1.0, CurvatureJet({0.0, 0.5}), GeneralDirection{0.3, 0.1}); },
                 ErrorKind::ZeroCurvatureMeasurement);
}
