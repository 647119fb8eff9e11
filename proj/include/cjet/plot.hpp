#pragma once

// Dense contour traces for CSV and SVG output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "cjet/surface_model.hpp"

namespace cjet {

struct ContourSample {
    double s = 0.0;  // signed arclength from the base point
    double x = 0.0;
    double y = 0.0;
    double kappa = 0.0;
};

struct ContourTrace {
    double theta = 0.0;
    std::vector<ContourSample> samples;  // ordered by s; the base point has s = 0

    const ContourSample& base() const {
        for (const auto& p : samples)
            if (p.s == 0.0) return p;
        fail(ErrorKind::InvalidArgument, "trace has no base point");
    }
};

namespace detail {

struct ContourLocal {
    double x, y, dx, dy, kappa;
};

/// Position, velocity and curvature of the contour at parameter u, with v on the generator.
inline ContourLocal contour_local(const SurfaceJet& s, double theta, double u, double v) {
    const double c = std::cos(theta), sn = std::sin(theta);
    auto h = [&](int i, int j) { return s.partial(i, j, u, v); };
    const double Fu = c * h(2, 0) + sn * h(1, 1);
    const double Fv = c * h(1, 1) + sn * h(0, 2);
    const double Fuu = c * h(3, 0) + sn * h(2, 1);
    const double Fuv = c * h(2, 1) + sn * h(1, 2);
    const double Fvv = c * h(1, 2) + sn * h(0, 3);
    if (Fv == 0.0) fail(ErrorKind::DegenerateParametrization, "contour generator turns vertical");
    const double v1 = -Fu / Fv;
    const double v2 = -(Fuu + 2.0 * Fuv * v1 + Fvv * v1 * v1) / Fv;
    const double dx = -sn + c * v1;
    const double dy = h(1, 0) + h(0, 1) * v1;
    const double ddx = c * v2;
    const double ddy = h(2, 0) + 2.0 * h(1, 1) * v1 + h(0, 2) * v1 * v1 + h(0, 1) * v2;
    const double speed = std::hypot(dx, dy);
    return {-sn * u + c * v, s.height(u, v), dx, dy, (dx * ddy - dy * ddx) / (speed * speed * speed)};
}

} // namespace detail

/// Trace the contour over |u| <= half_width, oriented along +X at the base
/// point.  The trace stops early where the generator cannot be followed.
inline ContourTrace trace_contour(const SurfaceJet& s, double theta, double half_width = 0.0, int half_count = 200) {
    detail::require_non_asymptotic(s, theta);
    detail::require_contour_chart(s, theta);
    if (half_count < 1) fail(ErrorKind::InvalidArgument, "trace needs at least one step per side");
    if (!(half_width > 0.0)) {
        double scale = detail::second_order_scale(s);
        for (int d = 3; d <= s.order(); ++d)
            for (int i = 0; i <= d; ++i) scale = std::max(scale, std::abs(s.coeff(i, d - i)));
        half_width = 1.0 / scale;
    }
    const double c = std::cos(theta), sn = std::sin(theta);
    const double dir = (-sn - c * s.a20() * c / (s.a02() * sn)) > 0.0 ? 1.0 : -1.0;
    const double du = half_width / half_count;

    ContourTrace trace;
    trace.theta = theta;
    std::vector<ContourSample> sides[2];
    for (int side = 0; side < 2; ++side) {
        const double step = (side == 0 ? 1.0 : -1.0) * dir * du;
        double v = 0.0, u = 0.0, arc = 0.0;
        auto prev = detail::contour_local(s, theta, 0.0, 0.0);
        if (side == 0) sides[0].push_back({0.0, prev.x, prev.y, prev.kappa * dir});
        for (int i = 1; i <= half_count; ++i) {
            const double u_next = u + step;
            try {
                // Euler predictor along the generator's tangent.
                const double slope = -(c * s.partial(2, 0, u, v) + sn * s.partial(1, 1, u, v)) /
                                     (c * s.partial(1, 1, u, v) + sn * s.partial(0, 2, u, v));
                const double guess = v + step * slope;
                const double v_next = detail::refine_contour_point(s, theta, u_next, guess, 1e-12);
                const auto cur = detail::contour_local(s, theta, u_next, v_next);
                if (!std::isfinite(cur.kappa) || std::abs(v_next - guess) > std::abs(step) * (1.0 + std::abs(slope)))
                    break;
                arc += 0.5 * (std::hypot(prev.dx, prev.dy) + std::hypot(cur.dx, cur.dy)) * std::abs(step);
                const double sign = side == 0 ? 1.0 : -1.0;
                sides[side].push_back({sign * arc, cur.x, cur.y, cur.kappa * dir});
                u = u_next;
                v = v_next;
                prev = cur;
            } catch (const Error&) {
                break;
            }
        }
    }
    trace.samples.assign(sides[1].rbegin(), sides[1].rend());
    trace.samples.insert(trace.samples.end(), sides[0].begin(), sides[0].end());
    return trace;
}

inline void write_contour_csv(std::ostream& os, const ContourTrace& trace) {
    os << "s,x,y,kappa\n";
    char buf[128];
    for (const auto& p : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.s, p.x, p.y, p.kappa);
        os << buf;
    }
}

/// 800x600 SVG with the contour as a polyline and the base point marked.
inline void write_contour_svg(std::ostream& os, const ContourTrace& trace) {
    constexpr double width = 800, height = 600, margin = 40;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& p : trace.samples) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = std::min((width - 2 * margin) / std::max(xmax - xmin, span * 1e-3),
                                  (height - 2 * margin) / std::max(ymax - ymin, span * 1e-3));
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    auto px = [&](double x) { return width / 2 + (x - cx) * scale; };
    auto py = [&](double y) { return height / 2 - (y - cy) * scale; };
    char buf[160];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", px(trace.samples[i].x), py(trace.samples[i].y));
        os << buf;
    }
    os << "\"/>\n";
    const auto& b = trace.base();
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"red\"/>\n", px(b.x), py(b.y));
    os << buf << "</svg>\n";
}

} // namespace cjet
