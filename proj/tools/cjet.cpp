// cjet: forward and inverse contour-curvature computations from JSON scenarios.
//
// Exit status: 0 on success, 1 on usage, I/O or schema errors, 2 when the
// geometry is degenerate or inconsistent.  Failures print a JSON error record
// on stderr and nothing on stdout.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cjet/plot.hpp"
#include "cjet/scenario.hpp"

namespace sc = cjet::scenario;
using sc::json;

namespace {

struct Exit {
    int code;
};

[[noreturn]] void die(int code, std::string_view kind, const std::string& message) {
    std::cerr << sc::error_record(kind, message).dump() << '\n';
    throw Exit{code};
}

int exit_code_for(const cjet::Error& e) { return cjet::is_input_error(e.kind()) ? 1 : 2; }

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) die(1, "IoError", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) die(1, "IoError", "cannot write " + path);
    out << text;
    if (!out.flush()) die(1, "IoError", "write to " + path + " failed");
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        die(1, "ParseError", e.what());
    }
}

/// plot-contour has side outputs, so it bypasses the scenario runner.
std::string plot_contour(const json& doc, const sc::RunOptions& opt, const std::string& svg, const std::string& csv) {
    if (svg.empty() && csv.empty()) die(1, "UsageError", "plot-contour needs --svg and/or --csv");
    json payload;
    cjet::SurfaceJet surface(1.0, 1.0);
    double theta = 0.0, half_width = 0.0;
    int half_count = 200;
    try {
        sc::detail::Reader top(doc, "scenario");
        if (top.integer("version", 0, 1000) != sc::kVersion)
            die(1, "SchemaError", "scenario.version: unsupported version");
        if (top.has("kind")) top.string("kind", {"plot-contour"});
        top.has("seed");
        payload = top.at("payload");
        top.done();
        json scaled = payload;
        if (opt.degrees) sc::scale_angles(scaled, std::numbers::pi / 180.0);
        sc::detail::Reader r(scaled, "payload");
        surface = sc::detail::read_surface(r.at("surface"), "payload.surface");
        theta = r.number("theta");
        if (auto w = r.opt_number("half_width")) half_width = *w;
        if (auto n = r.opt_integer("samples", 1, 100000)) half_count = static_cast<int>(*n);
        r.done();
    } catch (const sc::SchemaError& e) {
        die(1, "SchemaError", e.what());
    }
    cjet::ContourTrace trace;
    try {
        trace = cjet::trace_contour(surface, theta, half_width, half_count);
    } catch (const cjet::Error& e) {
        die(exit_code_for(e), cjet::to_string(e.kind()), e.what());
    }
    std::ostringstream csv_text, svg_text;
    cjet::write_contour_csv(csv_text, trace);
    cjet::write_contour_svg(svg_text, trace);
    if (!csv.empty()) write_file(csv, csv_text.str());
    if (!svg.empty()) write_file(svg, svg_text.str());

    json report;
    report["version"] = sc::kVersion;
    report["kind"] = "plot-contour";
    report["inputs"] = payload;
    json out;
    out["samples"] = trace.samples.size();
    out["s_range"] = {trace.samples.front().s, trace.samples.back().s};
    out["kappa_at_base"] = trace.base().kappa;
    if (!csv.empty()) out["csv"] = csv;
    if (!svg.empty()) out["svg"] = svg;
    report["outputs"] = out;
    report["residuals"] = {{"kappa_vs_closed_form",
                            std::abs(trace.base().kappa - cjet::contour_curvature_jet(surface, theta).k0)}};
    report["warnings"] = json::array();
    report["timing"] = {{"elapsed_ms", 0.0}};
    return report.dump(2) + "\n";
}

struct RunOutput {
    std::string text;
    int code = 0;
};

RunOutput run(const std::string& command, const std::string& file, const sc::RunOptions& opt,
                const std::string& svg, const std::string& csv) {
    const json doc = parse_document(read_input(file));
    const bool plot = command == "plot-contour" ||
                      (command == "run" && doc.is_object() && doc.value("kind", json()) == "plot-contour");
    if (plot) return {plot_contour(doc, opt, svg, csv)};

    bool batch = false;
    std::vector<sc::Prepared> prepared;
    try {
        const std::string hint = command == "run" ? "" : command;
        for (const json& s : sc::split_document(doc, batch)) prepared.push_back(sc::prepare(s, opt, hint));
    } catch (const sc::SchemaError& e) {
        die(1, "SchemaError", e.what());
    } catch (const cjet::Error& e) {
        die(exit_code_for(e), cjet::to_string(e.kind()), e.what());
    }

    auto outcomes = sc::execute_all(prepared, opt);
    if (!batch) {
        const auto& o = outcomes.front();
        if (o.error) die(exit_code_for(*o.error), cjet::to_string(o.error->kind()), o.error->what());
        return {o.report.dump(2) + "\n"};
    }
    json reports = json::array();
    int worst = 0;
    for (auto& o : outcomes) {
        if (o.error) worst = std::max(worst, exit_code_for(*o.error) == 1 ? 1 : 2);
        reports.push_back(std::move(o.report));
    }
    json out;
    out["version"] = sc::kVersion;
    out["reports"] = std::move(reports);
    // A batch report is written even when items fail; the status flags the failures.
    return {out.dump(2) + "\n", worst};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contour-curvature jets: forward models and reconstruction"};
    app.require_subcommand(1);
    app.fallthrough();

    sc::RunOptions opt;
    std::string out_path, svg_path, csv_path;
    std::optional<int> order;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    app.add_option("--out", out_path, "Write the report to this path instead of stdout");
    app.add_option("--svg", svg_path, "SVG output path (plot-contour)");
    app.add_option("--csv", csv_path, "CSV output path (plot-contour)");
    app.add_option("--order", order, "Jet order for curve forward runs and reconstruction")->check(CLI::Range(0, 16));
    app.add_option("--seed", seed, "Seed for randomized oracle checks");
    app.add_option("--jobs", opt.jobs, "Worker threads for batch files")->check(CLI::Range(1, 256));
    app.add_flag("--degrees", opt.degrees, "Read and write angles in degrees");
    app.add_option("--tolerance", tolerance, "Agreement tolerance for oracle checks and residual warnings")
        ->check(CLI::PositiveNumber);

    std::string file;
    std::string command;
    std::vector<std::string> commands = sc::kinds();
    commands.push_back("run");
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name, name == "run" ? "Run a scenario or batch file of any kind"
                                                           : "Run a scenario file of kind " + name);
        sub->add_option("file", file, "Scenario JSON path, or - for stdin")->required();
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << sc::error_record("UsageError", e.what()).dump() << '\n';
        return 1;
    }
    opt.order = order;
    opt.seed = seed;
    opt.tolerance = tolerance;

    try {
        const RunOutput r = run(command, file, opt, svg_path, csv_path);
        if (out_path.empty()) std::cout << r.text;
        else write_file(out_path, r.text);
        return r.code;
    } catch (const Exit& e) {
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << sc::error_record("InternalError", e.what()).dump() << '\n';
        return 2;
    }
}
