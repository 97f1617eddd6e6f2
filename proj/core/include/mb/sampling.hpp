#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "mb/triangle.hpp"

namespace mb {

// Seeded, implementation-pinned randomness for parameter sweeps: mt19937_64
// with an explicit 53-bit uniform so that a (seed, draw sequence) pair gives
// identical parameters on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

private:
    std::mt19937_64 gen_;
};

// Lambda tuples whose pairwise sums stay safely positive, so a separating
// contour always exists.
std::array<Complex, 4> sample_barnes_lambda(Rng& rng);

// Uniqueness tuples: sum(alpha) = d exactly (in double arithmetic), indices
// bounded away from the d/2 + n ladder, d in [3, 4.4].
TriangleSpec sample_uniqueness_alpha(Rng& rng);

// (x, y) for triangle/star evaluations, in [0.2, 1.3]^2.
std::pair<double, double> sample_xy(Rng& rng);

// (x, y) inside the Lambda^2 > 0 region (the component around the origin).
std::pair<double, double> sample_ud_point(Rng& rng);

// Generic positive indices for the orthogonality kernel.
TriangleSpec sample_orthogonality_alpha(Rng& rng);

// A reduced-kernel configuration with a feasible straight contour: the
// constraint geometry forces sum(alpha) slightly below d/2 and (Re u, Re v)
// slightly below (-alpha1, -alpha2), all within the eps window.
struct R2Case {
    TriangleSpec alpha;
    Complex u;
    Complex v;
    double eps = 0.0;
};

R2Case sample_r2_case(Rng& rng);

} // namespace mb
