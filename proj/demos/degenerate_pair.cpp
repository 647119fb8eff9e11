// Two quadratic surfaces whose contours share curvatures on a triple of
// directions that violates the sin 2theta condition.
#include <cstdio>

#include "cjet/cjet.hpp"

int main() {
    using namespace cjet;
    const auto d = degenerate_pair_demo();
    std::printf("f1 = (u, v, %g u^2/2 + %g v^2/2)\n", d.f1.a20(), d.f1.a02());
    std::printf("f2 = (u, v, %.15g u^2/2 + %g v^2/2), a = %.15g\n", d.f2.a20(), d.f2.a02(), d.a);
    std::printf("%-10s %-18s %-10s %-18s\n", "theta1", "k(f1)", "theta2", "k(f2)");
    for (std::size_t i = 0; i < 3; ++i) {
        // The u-axis lies outside the contour chart; report its limit.
        const double t1 = d.thetas1[i] == 0.0 ? 1e-9 : d.thetas1[i];
        const double t2 = d.thetas2[i] == 0.0 ? 1e-9 : d.thetas2[i];
        std::printf("%-10.6f %-18.12f %-10.6f %-18.12f\n", d.thetas1[i], contour_curvature_jet(d.f1, t1).k0,
                    d.thetas2[i], contour_curvature_jet(d.f2, t2).k0);
    }
    std::printf("admissible: %s / %s\n", check_admissible_triple(d.thetas1) ? "yes" : "no",
                check_admissible_triple(d.thetas2) ? "yes" : "no");
    std::printf("M: %g vs %.15g, G: %g vs %.15g\n", d.f1.mean_curvature(), d.f2.mean_curvature(),
                d.f1.gaussian_curvature(), d.f2.gaussian_curvature());
}
