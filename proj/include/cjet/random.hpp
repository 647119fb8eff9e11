#pragma once

// Portable pseudo-random draws.  The standard distributions are
// implementation-defined, so uniform reals are built from raw engine bits to
// keep seeded runs identical across standard libraries.

#include <cstdint>
#include <random>

namespace cjet {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform in [lo, hi] with |x| >= floor.
    double uniform_away_from_zero(double lo, double hi, double floor) {
        for (;;) {
            const double x = uniform(lo, hi);
            if (x >= floor || x <= -floor) return x;
        }
    }

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace cjet
