#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cjet/cjet.hpp"

using namespace cjet;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

/// Running worst-case record for one criterion.
struct Check {
    bool ok = true;
    std::ostringstream note;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) note << what;
        ok = ok && cond;
    }
    void within(double err, double tol, const std::string& what) {
        if (!(err <= tol)) expect(false, what + " error " + fmt(err) + " > " + fmt(tol));
    }
    template <class F>
    void raises(F&& f, ErrorKind kind, const std::string& what) {
        try {
            f();
            expect(false, what + " did not raise " + std::string(to_string(kind)));
        } catch (const Error& e) {
            expect(e.kind() == kind, what + " raised " + std::string(to_string(e.kind())));
        }
    }
    static std::string fmt(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return buf;
    }
};

CurveJet random_curve(Rng& rng, int k) {
    std::vector<double> a, b;
    for (int i = 2; i <= k; ++i) a.push_back(rng.uniform(-2.0, 2.0));
    for (int i = 3; i <= k; ++i) b.push_back(rng.uniform(-2.0, 2.0));
    a[0] = rng.uniform_away_from_zero(-2.0, 2.0, 0.1);
    b[0] = rng.uniform_away_from_zero(-2.0, 2.0, 0.1);
    return CurveJet(a, b);
}

SurfaceJet random_strict_surface(Rng& rng) {
    for (;;) {
        const double x = rng.uniform(-2.0, 2.0), y = rng.uniform(-2.0, 2.0);
        const double a20 = std::max(x, y), a02 = std::min(x, y);
        if (a20 <= 0.0 || std::abs(a20 * a02) < 0.1 || a20 - a02 < 0.05) continue;
        return SurfaceJet(a20, a02,
                          {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                           rng.uniform(-2.0, 2.0)});
    }
}

TripleMeasurement measure(const SurfaceJet& s, const std::array<double, 3>& th) {
    TripleMeasurement m;
    for (std::size_t i = 0; i < 3; ++i) m.k[i] = contour_curvature_jet(s, th[i]).k0;
    m.deltas = {th[0] - th[1], th[1] - th[2], th[2] - th[0]};
    return m;
}

std::string ac1(Check& c) {
    Rng rng(1001);
    double worst_cf = 0.0, worst_or = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const CurveJet curve = random_curve(rng, 5);
        const double th = rng.uniform(0.1, pi - 0.1);
        const auto s = project_osculating(curve, OsculatingDirection(th), 3);
        const auto f = closed_form_kappa3(curve, OsculatingDirection(th));
        const double spacing = 1e-3 * std::min(1.0, 4 * std::sin(th));
        const auto samples = sample_plane_curve(
            [&](double t) {
                const auto p = curve.point(t);
                return Vec2{-std::sin(th) * p[0] + std::cos(th) * p[1], p[2]};
            },
            spacing);
        const auto o = numeric_curvature_jet(samples, 3);
        for (int i = 0; i <= 3; ++i) {
            worst_cf = std::max(worst_cf, rel(s[i], f[i]));
            worst_or = std::max(worst_or, rel(s[i], o[i]));
        }
    }
    c.within(worst_cf, 1e-10, "closed form");
    c.within(worst_or, 1e-5, "oracle");
    return "1000 curves, closed form " + Check::fmt(worst_cf) + ", oracle " + Check::fmt(worst_or);
}

std::string ac2(Check& c) {
    Rng rng(1002);
    double worst_angle = 0.0, worst_coef = 0.0;
    for (int n = 4; n <= 8; ++n) {
        for (int checked = 0; checked < 200;) {
            const CurveJet curve = random_curve(rng, n);
            const double t1 = rng.uniform(0.3, pi - 0.3), t2 = rng.uniform(0.3, pi - 0.3);
            if (std::abs(std::sin(t2 - t1)) < 0.2) continue;
            ++checked;
            const OsculatingMeasurementPair m{project_osculating(curve, OsculatingDirection(t1), n - 2),
                                              project_osculating(curve, OsculatingDirection(t2), n - 2), t2 - t1, n};
            const auto r = recover_curve(m);
            worst_angle = std::max({worst_angle, std::abs(r.theta1 - t1), std::abs(r.theta2 - t2),
                                    std::abs(r.b[0] - curve.b(3))});
            for (int i = 2; i <= n - 2; ++i) worst_coef = std::max(worst_coef, rel(r.a[i - 2], curve.a(i)));
            for (int i = 4; i <= n; ++i) worst_coef = std::max(worst_coef, rel(r.b[i - 3], curve.b(i)));
        }
    }
    c.within(worst_angle, 1e-8, "angles and b3");
    c.within(worst_coef, 1e-6, "coefficients");

    const CurveJet unit = CurveJet::padded({1.0}, {1.0}, 3);
    const auto r = recover_curve({project_osculating(unit, OsculatingDirection(pi / 3), 1),
                                  project_osculating(unit, OsculatingDirection(pi / 2), 1), pi / 6, 3});
    c.within(std::abs(r.theta1 - pi / 3), 1e-10, "derived instance theta1");
    c.within(std::abs(r.b[0] - 1.0), 1e-10, "derived instance b3");
    return "n = 4..8, 1000 pairs, angles/b3 " + Check::fmt(worst_angle) + ", coefficients " + Check::fmt(worst_coef);
}

std::string ac3(Check& c) {
    Rng rng(1003);
    double worst = 0.0;
    for (int checked = 0; checked < 1000;) {
        const CurveJet curve = random_curve(rng, 4);
        const GeneralDirection d{rng.uniform(0.0, pi), rng.uniform(-pi, pi)};
        if (std::abs(std::cos(d.theta1)) < 0.1) continue;
        ++checked;
        const auto r = recover_curve_tangential(cuspidal_curvature(curve), project_tangential_secondary(curve, d), d);
        worst = std::max({worst, std::abs(r.a2 - curve.a(2)), std::abs(r.b3 - curve.b(3)), std::abs(r.a3 - curve.a(3))});
    }
    c.within(worst, 1e-9, "(a2, b3, a3)");
    return "1000 instances, worst " + Check::fmt(worst);
}

std::string ac4(Check& c) {
    Rng rng(1004);
    double worst_kp = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const SurfaceJet s = random_strict_surface(rng);
        const double th = rng.uniform(0.01, pi - 0.01);
        if (std::abs(p_of_theta(s, th)) < 1e-3) continue;
        const double k = contour_curvature_jet(s, th).k0;
        worst_kp = std::max(worst_kp, std::abs(k * p_of_theta(s, th) - s.gaussian_curvature()) / std::max(1.0, std::abs(k)));
    }
    c.within(worst_kp, 1e-12, "k p = G");
    const SurfaceJet f1(2.0, 4.0);
    const double limit = contour_curvature_jet(f1, 1e-8).k0;
    c.within(std::abs(limit - 4.0), 1e-10, "f1 limit");

    double worst_or = 0.0;
    for (int checked = 0; checked < 500;) {
        const SurfaceJet s = random_strict_surface(rng);
        const double th = rng.uniform(0.1, pi - 0.1);
        if (std::abs(p_of_theta(s, th)) < 0.05) continue;
        ++checked;
        const auto a = contour_curvature_jet(s, th);
        const auto o = numeric_contour_oracle(s, th);
        worst_or = std::max({worst_or, rel(o.k0, a.k0), rel(*o.k1, *a.k1)});
    }
    c.within(worst_or, 1e-6, "oracle");
    return "k p = G " + Check::fmt(worst_kp) + ", f1 k(1e-8) = " + Check::fmt(limit) + ", oracle on 500 surfaces " +
           Check::fmt(worst_or);
}

std::string ac5(Check& c) {
    Rng rng(1005);
    double worst = 0.0;
    for (int checked = 0; checked < 1000;) {
        const SurfaceJet s = random_strict_surface(rng);
        const std::array<double, 3> th{rng.uniform(0.05, pi - 0.05), rng.uniform(0.05, pi - 0.05),
                                       rng.uniform(0.05, pi - 0.05)};
        bool ok = std::abs(std::sin(2 * th[0]) + std::sin(2 * th[1]) + std::sin(2 * th[2])) >= 0.05;
        for (std::size_t i = 0; i < 3; ++i) {
            ok = ok && std::abs(p_of_theta(s, th[i])) >= 0.05 * s.a20();
            ok = ok && std::abs(std::sin(th[i] - th[(i + 1) % 3])) >= 0.05;
        }
        if (!ok) continue;
        ++checked;
        const auto r = recover_second_order(measure(s, th));
        worst = std::max({worst, rel(r.M, s.mean_curvature()), rel(r.G, s.gaussian_curvature())});
        for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(r.thetas[i] - th[i]));
    }
    c.within(worst, 1e-8, "(M, G, thetas)");
    c.raises([] { recover_second_order({{1.5, 1.5, 1.5}, {-0.4, -0.7, 1.1}}); }, ErrorKind::DegenerateConfiguration,
             "umbilic triple");
    c.raises([] { recover_second_order(measure(SurfaceJet(2.0, 1.0), {pi / 2, pi / 6, 5 * pi / 6})); },
             ErrorKind::DegenerateConfiguration, "sin 2theta triple");

    const auto d = degenerate_pair_demo();
    c.within(std::abs(d.a - 4.0 / 3.0), 1e-12, "demo a");
    c.expect(d.f1.a20() != d.f2.a20(), "demo surfaces coincide");
    double gap = std::abs(contour_curvature_jet(d.f1, 1e-9).k0 - contour_curvature_jet(d.f2, 1e-9).k0);
    for (std::size_t i = 1; i < 3; ++i)
        gap = std::max(gap, std::abs(contour_curvature_jet(d.f1, d.thetas1[i]).k0 -
                                     contour_curvature_jet(d.f2, d.thetas2[i]).k0));
    c.within(gap, 1e-8, "demo triple curvatures");
    return "1000 triples, worst " + Check::fmt(worst) + "; degenerate triples rejected; demo a = " + Check::fmt(d.a);
}

std::string ac6(Check& c) {
    Rng rng(1006);
    double worst = 0.0;
    for (int checked = 0; checked < 1000;) {
        const SurfaceJet s = random_strict_surface(rng);
        std::array<double, 4> th;
        for (double& t : th) t = rng.uniform(0.05, pi - 0.05);
        bool ok = true;
        for (std::size_t i = 0; i < 4; ++i) {
            ok = ok && std::abs(p_of_theta(s, th[i])) >= 0.05 * s.a20();
            for (std::size_t j = i + 1; j < 4; ++j) ok = ok && std::abs(std::sin(th[i] - th[j])) >= 0.05;
        }
        if (!ok) continue;
        ++checked;
        std::array<ContourObservation, 4> obs;
        for (std::size_t i = 0; i < 4; ++i) obs[i] = contour_curvature_jet(s, th[i]);
        const auto a = recover_third_order(s.a20(), s.a02(), obs);
        for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, rel(a[i], s.a3()[i]));
    }
    c.within(worst, 1e-7, "cubic coefficients");
    return "1000 surfaces, worst " + Check::fmt(worst);
}

std::string ac7(Check& c) {
    const double r3 = std::sqrt(3.0);
    const AmbiguityCurve curve(1.0, 2.0, pi / 6);
    const double p1 = std::abs(evaluate_P(curve, 3.0 - r3, 1.0)), p2 = std::abs(evaluate_P(curve, -6.0, -1.0));
    c.within(p1, 1e-10, "P(3 - sqrt 3, 1)");
    c.within(p2, 1e-10, "P(-6, -1)");

    int grid = 0;
    for (double k1 : {-2.0, -0.5, 0.3, 1.7})
        for (double k2 : {-1.5, -0.2, 0.4, 2.5})
            for (int d = 1; d < 24; ++d) {
                const double delta = d * pi / 24 - pi / 2;
                const bool degenerate = std::abs(std::cos(delta) * std::sin(delta)) <= 1e-12;
                const CurveClass want = degenerate ? CurveClass::Degenerate
                                        : k1 * k2 > 0 ? CurveClass::Hyperbola
                                                      : CurveClass::Ellipse;
                c.expect(classify_curve(AmbiguityCurve(k1, k2, delta)) == want, "classification grid");
                ++grid;
            }

    const auto pair = indistinguishable_pair(curve, 3.0 - r3, -6.0);
    double worst = 0.0;
    for (const auto& s : pair)
        worst = std::max({worst, std::abs(contour_curvature_jet(s.surface, s.thetas[0]).k0 - 1.0),
                          std::abs(contour_curvature_jet(s.surface, s.thetas[1]).k0 - 2.0)});
    c.within(worst, 1e-8, "pair curvatures");
    c.within(std::abs(pair[0].surface.a20() - (3.0 - r3 + std::sqrt(11.0 - 6.0 * r3))), 1e-10, "first a20");
    c.within(std::abs(pair[1].surface.a20() - (-6.0 + std::sqrt(37.0))), 1e-10, "second a20");
    return "|P| " + Check::fmt(std::max(p1, p2)) + ", " + std::to_string(grid) + " grid classes, pair curvature error " +
           Check::fmt(worst);
}

std::string ac8(Check& c) {
    const auto r = contour_conjugate_directions(1.0, 2.0, pi / 4);
    c.expect(r.kind == ConjugateKind::TwoSolutions && r.thetas.size() == 2, "expected two solutions");
    double worst = 0.0;
    const SurfaceJet s(1.0, 2.0);
    for (double t : r.thetas)
        worst = std::max(worst, std::abs(contour_curvature_jet(s, pi / 4).k0 * contour_curvature_jet(s, t).k0 - 2.0));
    c.within(worst, 1e-10, "product");
    c.expect(contour_conjugate_directions(1.0, -1.0, 0.7).kind == ConjugateKind::NoSolution, "K < 0 not NoSolution");
    c.expect(contour_conjugate_directions(3.0, 3.0, 0.7).kind == ConjugateKind::AllDirections,
             "umbilic not AllDirections");
    return "theta2 = " + Check::fmt(r.thetas.empty() ? 0.0 : r.thetas[0]) + ", product error " + Check::fmt(worst);
}

std::string ac9(Check& c) {
    Rng rng(1009);
    double worst = 0.0;
    for (int checked = 0; checked < 1000;) {
        const SurfaceJet s = random_strict_surface(rng);
        const std::array<double, 3> th{rng.uniform(0.05, pi - 0.05), rng.uniform(0.05, pi - 0.05),
                                       rng.uniform(0.05, pi - 0.05)};
        bool ok = std::abs(std::sin(2 * th[0]) + std::sin(2 * th[1]) + std::sin(2 * th[2])) >= 0.05;
        for (std::size_t i = 0; i < 3; ++i) ok = ok && std::abs(std::sin(th[i] - th[(i + 1) % 3])) >= 0.05;
        if (!ok) continue;
        ++checked;
        std::array<double, 3> kn{};
        for (std::size_t i = 0; i < 3; ++i)
            kn[i] = s.a20() * std::cos(th[i]) * std::cos(th[i]) + s.a02() * std::sin(th[i]) * std::sin(th[i]);
        const auto r = recover_from_normal_curvatures(kn, {th[0] - th[1], th[1] - th[2], th[2] - th[0]});
        worst = std::max({worst, rel(r.M, s.mean_curvature()), rel(r.G, s.gaussian_curvature())});
    }
    c.within(worst, 1e-8, "(M, G)");
    return "1000 triples, worst " + Check::fmt(worst);
}

struct CliResult {
    int code;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

CliResult cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = std::string("\"") + CJET_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                            (dir / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

json strip_timing(json j) {
    if (j.contains("reports"))
        for (auto& r : j["reports"]) r.erase("timing");
    j.erase("timing");
    return j;
}

std::string ac10(Check& c) {
    const fs::path dir = fs::temp_directory_path() / ("cjet_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string scenarios = CJET_SCENARIO_DIR;
    int compared = 0;
    for (const char* name : {"oracle-check.json", "batch.json", "forward-surface.json", "recon-curve.json"}) {
        const std::string arg = "run \"" + scenarios + "/" + name + "\"";
        const auto a = cli(arg, dir), b = cli(arg, dir);
        c.expect(a.code == 0 && b.code == 0, std::string(name) + " failed");
        if (a.code != 0 || b.code != 0) continue;
        c.expect(strip_timing(json::parse(a.out)).dump() == strip_timing(json::parse(b.out)).dump(),
                 std::string(name) + " differs between runs");
        ++compared;
    }
    const auto bad = cli("run \"" + scenarios + "/invalid-schema.json\"", dir);
    c.expect(bad.code == 1, "schema error exit " + std::to_string(bad.code));
    c.expect(bad.out.empty(), "schema error wrote to stdout");
    fs::remove_all(dir);
    return std::to_string(compared) + " scenarios byte-identical modulo timing; schema error exit " +
           std::to_string(bad.code) + " with " + std::to_string(bad.out.size()) + " bytes of output";
}

} // namespace

int main() {
    const std::vector<std::function<std::string(Check&)>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        std::string summary;
        try {
            summary = criteria[i](c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const std::string detail = c.ok ? summary : c.note.str();
        std::cout << "AC" << i + 1 << (c.ok ? " PASS: " : " FAIL: ") << detail << '\n';
        failures += c.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
