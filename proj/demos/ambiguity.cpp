// Two surfaces on the ambiguity curve of k = (1, 2), delta = pi/6.
// Writes pair_<i>.csv and pair_<i>.svg into the directory given as argv[1].
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "cjet/cjet.hpp"

int main(int argc, char** argv) {
    using namespace cjet;
    const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
    const AmbiguityCurve c(1.0, 2.0, std::numbers::pi / 6);
    std::printf("curve: %s, M12 = %g, G12 = %g\n", std::string(to_string(classify_curve(c))).c_str(), c.Mij(), c.Gij());
    try {
        const auto pair = indistinguishable_pair(c, 3.0 - std::sqrt(3.0), -6.0);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& s = pair[i];
            std::printf("surface %zu: a20 = %.15g, a02 = %.15g, M = %.15g, G = %.15g\n", i + 1, s.surface.a20(),
                        s.surface.a02(), s.M, s.G);
            std::printf("  thetas = (%.12f, %.12f), delta sign %+d\n", s.thetas[0], s.thetas[1], s.delta_sign);
            for (std::size_t j = 0; j < 2; ++j) {
                const auto trace = trace_contour(s.surface, s.thetas[j]);
                const std::string stem = "pair_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
                std::ofstream csv(dir / (stem + ".csv")), svg(dir / (stem + ".svg"));
                write_contour_csv(csv, trace);
                write_contour_svg(svg, trace);
                std::printf("  %s: kappa(0) = %.12f\n", stem.c_str(), trace.base().kappa);
            }
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "%s: %s\n", std::string(to_string(e.kind())).c_str(), e.what());
        return 2;
    }
}
