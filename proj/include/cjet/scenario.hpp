#pragma once

// JSON scenarios: validation, dispatch and reports for the command-line tool.
//
// A scenario is {"version": 1, "kind": K, "payload": {...}, "seed": N}; a
// batch is {"version": 1, "scenarios": [scenario, ...]}.  Every payload is
// parsed into typed inputs before anything is computed, so schema problems
// surface before any output is produced.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cjet/analysis.hpp"
#include "cjet/curve_recon.hpp"
#include "cjet/numeric_oracle.hpp"
#include "cjet/random.hpp"
#include "cjet/surface_recon.hpp"

namespace cjet::scenario {

using json = nlohmann::ordered_json;

inline constexpr int kVersion = 1;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    bool degrees = false;
    std::optional<int> order;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    int jobs = 1;
};

inline const std::vector<std::string>& kinds() {
    static const std::vector<std::string> k{"forward-curve",   "recon-curve",     "recon-curve-tangential",
                                            "forward-surface", "recon-surface-2", "recon-surface-3",
                                            "conjugate",       "ambiguity",       "normal-recon",
                                            "oracle-check",    "plot-contour"};
    return k;
}

/// Keys whose numeric values (or arrays of numbers) are angles.
inline bool is_angle_key(const std::string& key) {
    static const std::set<std::string> keys{"theta",  "thetas", "theta1", "theta2",
                                            "phi",    "delta",  "deltas", "vertex_directions"};
    return keys.count(key) > 0;
}

/// Multiply every angle-valued entry by `factor`, recursively.
inline void scale_angles(json& j, double factor) {
    if (j.is_object()) {
        for (auto& [key, value] : j.items()) {
            if (is_angle_key(key)) {
                if (value.is_number()) value = value.get<double>() * factor;
                else if (value.is_array())
                    for (auto& v : value)
                        if (v.is_number()) v = v.get<double>() * factor;
            } else {
                scale_angles(value, factor);
            }
        }
    } else if (j.is_array()) {
        for (auto& v : j) scale_angles(v, factor);
    }
}

namespace detail {

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_ + ": expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& at(const std::string& key) {
        if (!has(key)) throw SchemaError(where(key) + ": required key missing");
        return j_.at(key);
    }

    double number(const std::string& key) { return to_number(at(key), where(key)); }

    std::optional<double> opt_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    std::vector<double> numbers(const std::string& key, std::size_t min_size, std::size_t max_size) {
        const json& a = at(key);
        if (!a.is_array()) throw SchemaError(where(key) + ": expected an array of numbers");
        if (a.size() < min_size || a.size() > max_size)
            throw SchemaError(where(key) + ": expected " +
                              (min_size == max_size ? std::to_string(min_size)
                                                    : std::to_string(min_size) + ".." + std::to_string(max_size)) +
                              " entries, got " + std::to_string(a.size()));
        std::vector<double> out;
        for (std::size_t i = 0; i < a.size(); ++i) out.push_back(to_number(a[i], where(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    template <std::size_t N>
    std::array<double, N> fixed(const std::string& key) {
        const auto v = numbers(key, N, N);
        std::array<double, N> out{};
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }

    long long integer(const std::string& key, long long lo, long long hi) {
        const json& v = at(key);
        if (!v.is_number_integer()) throw SchemaError(where(key) + ": expected an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi)
            throw SchemaError(where(key) + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    std::optional<long long> opt_integer(const std::string& key, long long lo, long long hi) {
        if (!has(key)) return std::nullopt;
        return integer(key, lo, hi);
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw SchemaError(where(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::vector<std::string>& allowed) {
        const json& v = at(key);
        if (!v.is_string()) throw SchemaError(where(key) + ": expected a string");
        const std::string s = v.get<std::string>();
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw SchemaError(where(key) + ": '" + s + "' is not one of " + list);
        }
        return s;
    }

    std::string where(const std::string& key) const { return path_ + "." + key; }

    /// Reject keys that were never asked about.
    void done() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw SchemaError(path_ + ": unknown key '" + key + "'");
    }

private:
    static double to_number(const json& v, const std::string& where) {
        if (!v.is_number()) throw SchemaError(where + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError(where + ": must be finite");
        return x;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline SurfaceJet read_surface(const json& j, const std::string& path) {
    Reader r(j, path);
    const double a20 = r.number("a20"), a02 = r.number("a02");
    std::vector<MongeTerm> terms{{2, 0, a20}, {0, 2, a02}};
    int order = 2;
    if (r.has("a3")) {
        const auto a3 = r.fixed<4>("a3");
        terms.push_back({3, 0, a3[0]});
        terms.push_back({2, 1, a3[1]});
        terms.push_back({1, 2, a3[2]});
        terms.push_back({0, 3, a3[3]});
        order = 3;
    }
    if (r.has("terms")) {
        const json& arr = r.at("terms");
        if (!arr.is_array()) throw SchemaError(r.where("terms") + ": expected an array");
        for (std::size_t n = 0; n < arr.size(); ++n) {
            Reader t(arr[n], r.where("terms") + "[" + std::to_string(n) + "]");
            const int i = static_cast<int>(t.integer("i", 0, TruncatedSeries::kMaxOrder));
            const int jj = static_cast<int>(t.integer("j", 0, TruncatedSeries::kMaxOrder));
            const double v = t.number("value");
            t.done();
            if (i + jj < 3)
                throw SchemaError(t.where("i") + ": extra terms must have degree >= 3; use a20/a02 for degree 2");
            terms.push_back({i, jj, v});
            order = std::max(order, i + jj);
        }
    }
    if (auto o = r.opt_integer("order", 2, TruncatedSeries::kMaxOrder - 1)) {
        if (*o < order) throw SchemaError(r.where("order") + ": smaller than the degree of the supplied terms");
        order = static_cast<int>(*o);
    }
    const bool strict = r.boolean("strict", false);
    r.done();
    try {
        SurfaceJet s(order, terms);
        if (strict) s.require_strict();
        return s;
    } catch (const Error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline json surface_json(const SurfaceJet& s) {
    json j;
    j["order"] = s.order();
    j["a20"] = s.a20();
    j["a02"] = s.a02();
    if (s.order() >= 3) j["a3"] = s.a3();
    return j;
}

inline double rel_err(double got, double want, double scale = 0.0) {
    return std::abs(got - want) / std::max({std::abs(want), scale, 1e-300});
}

} // namespace detail

/// Outputs of one computation; the report adds the envelope.
struct Result {
    json outputs = json::object();
    json residuals = json::object();
    json warnings = json::array();
};

/// A validated scenario, ready to run.
struct Prepared {
    std::string kind;
    json inputs;
    std::function<Result()> compute;
};

namespace detail {

inline std::function<Result()> prepare_forward_curve(const json& p, const RunOptions& opt) {
    Reader r(p, "payload");
    const bool pad = r.boolean("pad", false);
    auto a = r.numbers("a", pad ? 1 : 2, TruncatedSeries::kMaxOrder - 1);
    auto b = r.numbers("b", pad ? 0 : 1, TruncatedSeries::kMaxOrder - 2);
    const auto thetas = r.numbers("thetas", 1, 1000);
    auto n = r.opt_integer("order", 0, TruncatedSeries::kMaxOrder - 2);
    r.done();
    if (opt.order) n = *opt.order;
    for (double t : thetas)
        if (!(t > 0.0 && t < std::numbers::pi)) throw SchemaError("payload.thetas: angles must lie in (0, pi)");
    if (!pad && b.size() + 1 != a.size())
        throw SchemaError("payload: a must hold a_2..a_k and b must hold b_3..b_k for the same k");
    const int given = std::max(static_cast<int>(a.size()) + 1, static_cast<int>(b.size()) + 2);
    const int order = n ? static_cast<int>(*n) : std::min(3, given - 2);
    if (pad) {
        const int k = std::max(given, order + 2);
        if (k > TruncatedSeries::kMaxOrder) throw SchemaError("payload.order: too large");
        a.resize(static_cast<std::size_t>(k - 1), 0.0);
        b.resize(static_cast<std::size_t>(k - 2), 0.0);
    } else if (order + 2 > given) {
        throw SchemaError("payload: jet order " + std::to_string(order) + " needs curve order " +
                          std::to_string(order + 2) + " (set \"pad\": true to zero-pad)");
    }
    return [a, b, thetas, order]() {
        const CurveJet curve(a, b);
        Result res;
        res.outputs["order"] = order;
        json projections = json::array();
        double closed_gap = 0.0;
        bool have_closed = false;
        for (double t : thetas) {
            const OsculatingDirection d(t);
            const CurvatureJet jet = project_osculating(curve, d, order);
            json item;
            item["theta"] = t;
            item["jet"] = jet.values();
            if (curve.order() >= 5) {
                const CurvatureJet cf = closed_form_kappa3(curve, d);
                item["closed_form"] = cf.values();
                for (int i = 0; i <= std::min(order, 3); ++i)
                    closed_gap = std::max(closed_gap, rel_err(jet[i], cf[i], 1.0));
                have_closed = true;
            }
            projections.push_back(item);
        }
        res.outputs["projections"] = projections;
        if (curve.a(2) != 0.0) res.outputs["cuspidal_curvature"] = cuspidal_curvature(curve);
        if (have_closed) res.residuals["closed_form_max_rel"] = closed_gap;
        if (curve.b(3) == 0.0)
            res.warnings.push_back("b3 = 0: the first arclength derivatives vanish, so two-view reconstruction "
                                   "hypotheses fail");
        if (curve.a(2) == 0.0) res.warnings.push_back("a2 = 0: the curve has zero curvature at the base point");
        return res;
    };
}

inline std::function<Result()> prepare_recon_curve(const json& p, const RunOptions& opt) {
    Reader r(p, "payload");
    const auto j1 = r.numbers("jet1", 2, TruncatedSeries::kMaxOrder);
    const auto j2 = r.numbers("jet2", 2, TruncatedSeries::kMaxOrder);
    const double phi = r.number("phi");
    auto n = r.opt_integer("n", 3, TruncatedSeries::kMaxOrder);
    r.done();
    if (opt.order) n = *opt.order;
    const int order = n ? static_cast<int>(*n) : static_cast<int>(std::min(j1.size(), j2.size())) + 1;
    if (order - 2 > static_cast<int>(std::min(j1.size(), j2.size())) - 1)
        throw SchemaError("payload: order-" + std::to_string(order) + " reconstruction needs jets with " +
                          std::to_string(order - 1) + " entries");
    const double tol = opt.tolerance.value_or(1e-8);
    return [j1, j2, phi, order, tol]() {
        const OsculatingMeasurementPair m{CurvatureJet(j1), CurvatureJet(j2), phi, order};
        const auto rep = recover_curve(m);
        Result res;
        res.outputs["n"] = order;
        res.outputs["theta1"] = rep.theta1;
        res.outputs["theta2"] = rep.theta2;
        res.outputs["a"] = rep.a;
        res.outputs["b"] = rep.b;
        res.outputs["condition"] = rep.condition;
        res.residuals["back_substitution"] = rep.residuals;
        res.residuals["max"] = rep.max_residual();
        if (rep.max_residual() > tol)
            res.warnings.push_back("back-substitution residual exceeds the tolerance");
        for (std::size_t i = 0; i < rep.condition.size(); ++i)
            if (rep.condition[i] < 1e-6)
                res.warnings.push_back("level " + std::to_string(i + 4) + " system is nearly singular");
        if (std::abs(j1[0]) > 1e-12 || std::abs(j2[0]) > 1e-12)
            res.warnings.push_back("osculating projections should have zero curvature at the base point");
        return res;
    };
}

inline std::function<Result()> prepare_recon_tangential(const json& p, const RunOptions&) {
    Reader r(p, "payload");
    const double mu = r.number("mu");
    const auto jet = r.numbers("jet", 2, 2);
    const GeneralDirection dir{r.number("theta1"), r.number("theta2")};
    r.done();
    return [mu, jet, dir]() {
        const auto rec = recover_curve_tangential(mu, CurvatureJet(jet), dir);
        Result res;
        res.outputs["a2"] = rec.a2;
        res.outputs["b3"] = rec.b3;
        res.outputs["a3"] = rec.a3;
        const CurveJet c({rec.a2, rec.a3}, {rec.b3});
        const CurvatureJet fwd = project_tangential_secondary(c, dir);
        res.residuals["kappa"] = rel_err(fwd[0], jet[0]);
        res.residuals["dkappa_ds"] = rel_err(fwd[1], jet[1], std::abs(jet[0]));
        res.residuals["mu"] = rel_err(cuspidal_curvature(c), mu, 1.0);
        return res;
    };
}

inline std::function<Result()> prepare_forward_surface(const json& p, const RunOptions& opt) {
    Reader r(p, "payload");
    const SurfaceJet s = read_surface(r.at("surface"), "payload.surface");
    const auto thetas = r.numbers("thetas", 1, 1000);
    const bool oracle = r.boolean("oracle", false);
    r.done();
    const double tol = opt.tolerance.value_or(1e-6);
    return [s, thetas, oracle, tol]() {
        Result res;
        res.outputs["M"] = s.mean_curvature();
        res.outputs["G"] = s.gaussian_curvature();
        json contours = json::array();
        double worst = 0.0;
        for (double t : thetas) {
            const auto obs = contour_curvature_jet(s, t);
            json item;
            item["theta"] = t;
            item["p"] = p_of_theta(s, t);
            item["k0"] = obs.k0;
            if (obs.k1) item["k1"] = *obs.k1;
            if (oracle) {
                const auto num = numeric_contour_oracle(s, t);
                item["oracle"] = {{"k0", num.k0}, {"k1", *num.k1}};
                const double scale = std::abs(obs.k0);
                worst = std::max(worst, rel_err(num.k0, obs.k0));
                if (obs.k1) worst = std::max(worst, rel_err(*num.k1, *obs.k1, scale));
            }
            contours.push_back(item);
        }
        res.outputs["contours"] = contours;
        if (s.order() >= 3 && s.gaussian_curvature() != 0.0) {
            const auto v = find_vertex_directions(s);
            if (v.all) res.outputs["vertex_directions"] = "all";
            else res.outputs["vertex_directions"] = v.thetas;
        }
        if (oracle) {
            res.residuals["oracle_max_rel"] = worst;
            if (worst > tol) res.warnings.push_back("numeric oracle disagrees beyond the tolerance");
        }
        return res;
    };
}

inline std::function<Result()> prepare_recon_surface_2(const json& p, const RunOptions&) {
    Reader r(p, "payload");
    const TripleMeasurement m{r.fixed<3>("k"), r.fixed<3>("deltas")};
    r.done();
    return [m]() {
        const auto rec = recover_second_order(m);
        Result res;
        res.outputs["M"] = rec.M;
        res.outputs["G"] = rec.G;
        res.outputs["a20"] = rec.a20;
        res.outputs["a02"] = rec.a02;
        res.outputs["thetas"] = rec.thetas;
        res.outputs["condition"] = rec.condition;
        const SurfaceJet s(rec.a20, rec.a02);
        double fwd = 0.0;
        for (int i = 0; i < 3; ++i)
            fwd = std::max(fwd, rel_err(contour_curvature_jet(s, rec.thetas[static_cast<std::size_t>(i)]).k0,
                                        m.k[static_cast<std::size_t>(i)]));
        res.residuals["forward_k"] = fwd;
        res.residuals["branch_mismatch"] = rec.branch_mismatch;
        res.residuals["lpv_discrepancy"] = rec.lpv_discrepancy;
        if (rec.condition < 1e-6) res.warnings.push_back("nearly degenerate direction triple");
        if (rec.lpv_discrepancy > 1e-8) res.warnings.push_back("L/P/V cross-check disagrees with the W solution");
        return res;
    };
}

inline std::function<Result()> prepare_recon_surface_3(const json& p, const RunOptions&) {
    Reader r(p, "payload");
    const double a20 = r.number("a20"), a02 = r.number("a02");
    const json& arr = r.at("observations");
    if (!arr.is_array() || arr.size() != 4) throw SchemaError("payload.observations: expected 4 observations");
    std::array<ContourObservation, 4> obs{};
    for (std::size_t i = 0; i < 4; ++i) {
        Reader o(arr[i], "payload.observations[" + std::to_string(i) + "]");
        obs[i].theta = o.number("theta");
        obs[i].k1 = o.number("k1");
        if (auto k0 = o.opt_number("k0")) obs[i].k0 = *k0;
        o.done();
    }
    r.done();
    return [a20, a02, obs]() {
        const auto a3 = recover_third_order(a20, a02, obs);
        Result res;
        res.outputs["a3"] = a3;
        res.outputs["a30"] = a3[0];
        res.outputs["a21"] = a3[1];
        res.outputs["a12"] = a3[2];
        res.outputs["a03"] = a3[3];
        const SurfaceJet s(a20, a02, a3);
        double fwd = 0.0;
        for (const auto& o : obs)
            fwd = std::max(fwd, rel_err(*contour_curvature_jet(s, o.theta).k1, *o.k1, 1.0));
        res.residuals["forward_k1"] = fwd;
        return res;
    };
}

inline std::function<Result()> prepare_conjugate(const json& p, const RunOptions&) {
    Reader r(p, "payload");
    const double a20 = r.number("a20"), a02 = r.number("a02"), theta1 = r.number("theta1");
    r.done();
    return [a20, a02, theta1]() {
        const auto c = contour_conjugate_directions(a20, a02, theta1);
        Result res;
        res.outputs["result"] = std::string(to_string(c.kind));
        res.outputs["thetas"] = c.thetas;
        if (c.kind == ConjugateKind::TwoSolutions) {
            const SurfaceJet s(a20, a02);
            json products = json::array();
            double worst = 0.0;
            for (double t : c.thetas) {
                try {
                    const double prod = contour_curvature_jet(s, theta1).k0 * contour_curvature_jet(s, t).k0;
                    products.push_back(prod);
                    worst = std::max(worst, rel_err(prod, a20 * a02));
                } catch (const Error& e) {
                    res.warnings.push_back(std::string("product not evaluated: ") + e.what());
                }
            }
            res.outputs["products"] = products;
            res.residuals["product_vs_G"] = worst;
        }
        return res;
    };
}

inline std::function<Result()> prepare_ambiguity(const json& p, const RunOptions&) {
    Reader r(p, "payload");
    const auto k = r.fixed<2>("k");
    const double delta = r.number("delta");
    std::optional<std::array<double, 2>> targets;
    if (r.has("M")) targets = r.fixed<2>("M");
    std::vector<std::array<double, 2>> probes;
    if (r.has("probe")) {
        const json& arr = r.at("probe");
        if (!arr.is_array()) throw SchemaError("payload.probe: expected an array of [M, G] pairs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_array() || arr[i].size() != 2 || !arr[i][0].is_number() || !arr[i][1].is_number())
                throw SchemaError("payload.probe[" + std::to_string(i) + "]: expected [M, G]");
            probes.push_back({arr[i][0].get<double>(), arr[i][1].get<double>()});
        }
    }
    r.done();
    return [k, delta, targets, probes]() {
        const AmbiguityCurve c(k[0], k[1], delta);
        Result res;
        res.outputs["Mij"] = c.Mij();
        res.outputs["Gij"] = c.Gij();
        res.outputs["class"] = std::string(to_string(classify_curve(c)));
        res.outputs["det_Q"] = c.det_Q();
        if (!probes.empty()) {
            json vals = json::array();
            for (const auto& pr : probes) vals.push_back(evaluate_P(c, pr[0], pr[1]));
            res.outputs["P"] = vals;
        }
        if (targets) {
            const auto pair = indistinguishable_pair(c, (*targets)[0], (*targets)[1]);
            json surfaces = json::array();
            double worst = 0.0;
            for (const auto& s : pair) {
                json item;
                item["M"] = s.M;
                item["G"] = s.G;
                item["a20"] = s.surface.a20();
                item["a02"] = s.surface.a02();
                item["thetas"] = s.thetas;
                item["delta_sign"] = s.delta_sign;
                surfaces.push_back(item);
                worst = std::max({worst, rel_err(contour_curvature_jet(s.surface, s.thetas[0]).k0, k[0]),
                                  rel_err(contour_curvature_jet(s.surface, s.thetas[1]).k0, k[1])});
            }
            res.outputs["pair"] = surfaces;
            res.residuals["forward_k"] = worst;
        }
        return res;
    };
}

inline std::function<Result()> prepare_normal_recon(const json& p, const RunOptions&) {
    Reader r(p, "payload");
    const auto kn = r.fixed<3>("kn");
    const auto deltas = r.fixed<3>("deltas");
    r.done();
    return [kn, deltas]() {
        const auto rec = recover_from_normal_curvatures(kn, deltas);
        Result res;
        res.outputs["M"] = rec.M;
        res.outputs["G"] = rec.G;
        res.outputs["condition"] = rec.condition;
        return res;
    };
}

inline json oracle_curve_case(const CurveJet& c, double theta, int n) {
    const CurvatureJet series = project_osculating(c, OsculatingDirection(theta), n);
    const double cx = std::cos(theta), sx = std::sin(theta);
    // Narrow grids near the ends of (0, pi), where the projection is strongly curved.
    const double h = oracle_defaults::kSpacing * std::min(1.0, 4.0 * sx);
    const auto samples = sample_plane_curve(
        [&](double t) {
            const Vec3 p = c.point(t);
            return Vec2{-sx * p[0] + cx * p[1], p[2]};
        },
        h);
    const CurvatureJet numeric = numeric_curvature_jet(samples, n);
    double scale = 0.0;
    for (double v : series.values()) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) worst = std::max(worst, rel_err(numeric[i], series[i], scale));
    json item;
    item["theta"] = theta;
    item["series"] = series.values();
    item["oracle"] = numeric.values();
    item["rel_error"] = worst;
    return item;
}

inline json oracle_surface_case(const SurfaceJet& s, double theta) {
    const auto exact = contour_curvature_jet(s, theta);
    const auto num = numeric_contour_oracle(s, theta);
    json item;
    item["theta"] = theta;
    item["series"] = {exact.k0, exact.k1.value_or(0.0)};
    item["oracle"] = {num.k0, *num.k1};
    const double scale = std::max(std::abs(exact.k0), std::abs(exact.k1.value_or(0.0)));
    item["rel_error"] = std::max(rel_err(num.k0, exact.k0, scale), rel_err(*num.k1, exact.k1.value_or(0.0), scale));
    return item;
}

inline std::function<Result()> prepare_oracle_check(const json& p, const RunOptions& opt, std::uint64_t seed) {
    Reader r(p, "payload");
    const std::string target = r.string("target", {"curve", "surface"});
    const auto count = r.opt_integer("count", 1, 100000);
    std::optional<CurveJet> curve;
    std::optional<SurfaceJet> surface;
    std::vector<double> thetas;
    if (!count) {
        thetas = r.numbers("thetas", 1, 1000);
        if (target == "curve") {
            const auto a = r.numbers("a", 2, TruncatedSeries::kMaxOrder - 1);
            const auto b = r.numbers("b", 1, TruncatedSeries::kMaxOrder - 2);
            if (b.size() + 1 != a.size()) throw SchemaError("payload: a and b must end at the same order");
            if (a.size() < 4) throw SchemaError("payload: oracle comparison needs a curve of order >= 5");
            curve = CurveJet(a, b);
        } else {
            surface = read_surface(r.at("surface"), "payload.surface");
        }
    }
    r.done();
    const double tol = opt.tolerance.value_or(target == "curve" ? 1e-5 : 1e-6);
    return [target, count, curve, surface, thetas, tol, seed]() {
        Result res;
        json cases = json::array();
        double worst = 0.0;
        auto add = [&](json item) {
            worst = std::max(worst, item["rel_error"].get<double>());
            cases.push_back(std::move(item));
        };
        if (count) {
            Rng rng(seed);
            for (long long i = 0; i < *count; ++i) {
                if (target == "curve") {
                    std::vector<double> a{rng.uniform_away_from_zero(-2, 2, 0.1)}, b{rng.uniform_away_from_zero(-2, 2, 0.1)};
                    for (int j = 3; j <= 5; ++j) a.push_back(rng.uniform(-2, 2));
                    for (int j = 4; j <= 5; ++j) b.push_back(rng.uniform(-2, 2));
                    const CurveJet c(a, b);
                    add(oracle_curve_case(c, rng.uniform(0.1, std::numbers::pi - 0.1), 3));
                } else {
                    for (;;) {
                        const double x = rng.uniform(-2, 2), y = rng.uniform(-2, 2);
                        const SurfaceJet s(x, y, {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                                                  rng.uniform(-2, 2)});
                        const double t = rng.uniform(0.1, std::numbers::pi - 0.1);
                        if (std::abs(x * y) < 0.1) continue;
                        if (std::abs(p_of_theta(s, t)) < 0.05) continue;
                        add(oracle_surface_case(s, t));
                        break;
                    }
                }
            }
        } else {
            for (double t : thetas) add(curve ? oracle_curve_case(*curve, t, 3) : oracle_surface_case(*surface, t));
        }
        res.outputs["target"] = target;
        res.outputs["cases"] = cases;
        res.outputs["passed"] = worst <= tol;
        res.residuals["max_rel_error"] = worst;
        res.residuals["tolerance"] = tol;
        if (worst > tol) res.warnings.push_back("oracle disagreement exceeds the tolerance");
        return res;
    };
}

} // namespace detail

/// Validate one scenario object (or a bare payload when `kind_hint` is given).
inline Prepared prepare(const json& scenario, const RunOptions& opt, const std::string& kind_hint = "") {
    detail::Reader top(scenario, "scenario");
    if (auto v = top.opt_integer("version", 0, 1000); v && *v != kVersion)
        throw SchemaError("scenario.version: unsupported version " + std::to_string(*v));
    std::string kind = kind_hint;
    if (top.has("kind")) {
        kind = top.string("kind", kinds());
        if (!kind_hint.empty() && kind != kind_hint)
            throw SchemaError("scenario.kind: file declares '" + kind + "' but the command is '" + kind_hint + "'");
    }
    if (kind.empty()) throw SchemaError("scenario.kind: required key missing");
    std::uint64_t seed = 0;
    if (auto s = top.opt_integer("seed", 0, std::numeric_limits<long long>::max())) seed = static_cast<std::uint64_t>(*s);
    if (opt.seed) seed = *opt.seed;
    json payload = top.at("payload");
    top.done();
    const json inputs = payload;
    if (opt.degrees) scale_angles(payload, std::numbers::pi / 180.0);

    Prepared out;
    out.kind = kind;
    out.inputs = inputs;
    if (kind == "forward-curve") out.compute = detail::prepare_forward_curve(payload, opt);
    else if (kind == "recon-curve") out.compute = detail::prepare_recon_curve(payload, opt);
    else if (kind == "recon-curve-tangential") out.compute = detail::prepare_recon_tangential(payload, opt);
    else if (kind == "forward-surface") out.compute = detail::prepare_forward_surface(payload, opt);
    else if (kind == "recon-surface-2") out.compute = detail::prepare_recon_surface_2(payload, opt);
    else if (kind == "recon-surface-3") out.compute = detail::prepare_recon_surface_3(payload, opt);
    else if (kind == "conjugate") out.compute = detail::prepare_conjugate(payload, opt);
    else if (kind == "ambiguity") out.compute = detail::prepare_ambiguity(payload, opt);
    else if (kind == "normal-recon") out.compute = detail::prepare_normal_recon(payload, opt);
    else if (kind == "oracle-check") out.compute = detail::prepare_oracle_check(payload, opt, seed);
    else throw SchemaError("scenario.kind: '" + kind + "' cannot be run as a scenario");
    return out;
}

inline json error_record(std::string_view kind, const std::string& message) {
    json e;
    e["kind"] = std::string(kind);
    e["message"] = message;
    return json{{"error", e}};
}

/// Outcome of running one prepared scenario.
struct Outcome {
    json report;
    std::optional<Error> error;
};

inline Outcome execute(const Prepared& p, const RunOptions& opt) {
    Outcome out;
    out.report["version"] = kVersion;
    out.report["kind"] = p.kind;
    out.report["inputs"] = p.inputs;
    const auto start = std::chrono::steady_clock::now();
    try {
        Result r = p.compute();
        if (opt.degrees) scale_angles(r.outputs, 180.0 / std::numbers::pi);
        out.report["outputs"] = std::move(r.outputs);
        out.report["residuals"] = std::move(r.residuals);
        out.report["warnings"] = std::move(r.warnings);
    } catch (const Error& e) {
        out.error = e;
        out.report["error"] = error_record(to_string(e.kind()), e.what())["error"];
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.report["timing"] = {{"elapsed_ms", ms}};
    return out;
}

/// Run prepared scenarios on up to `jobs` threads; outcomes keep input order.
inline std::vector<Outcome> execute_all(const std::vector<Prepared>& items, const RunOptions& opt) {
    std::vector<Outcome> out(items.size());
    const int jobs = std::clamp(opt.jobs, 1, static_cast<int>(std::max<std::size_t>(items.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < items.size(); i = next++) out[i] = execute(items[i], opt);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

/// Split a document into scenario objects; a batch is {"version", "scenarios": [...]}.
inline std::vector<json> split_document(const json& doc, bool& is_batch) {
    if (!doc.is_object()) throw SchemaError("document: expected a JSON object");
    is_batch = doc.contains("scenarios");
    // Every document carries a version; scenarios inside a batch may omit theirs.
    if (!doc.contains("version")) throw SchemaError("document.version: required key missing");
    if (!is_batch) return {doc};
    detail::Reader r(doc, "document");
    if (const auto v = r.integer("version", 0, 1000); v != kVersion)
        throw SchemaError("document.version: unsupported version " + std::to_string(v));
    const json& arr = r.at("scenarios");
    r.done();
    if (!arr.is_array() || arr.empty()) throw SchemaError("document.scenarios: expected a non-empty array");
    return std::vector<json>(arr.begin(), arr.end());
}

} // namespace cjet::scenario
