#include "mb/sampling.hpp"

#include <cmath>

namespace mb {

std::array<Complex, 4> sample_barnes_lambda(Rng& rng) {
    std::array<Complex, 4> lam;
    for (auto& l : lam) l = Complex(rng.uniform(0.3, 0.9), rng.uniform(-0.3, 0.3));
    return lam;
}

TriangleSpec sample_uniqueness_alpha(Rng& rng) {
    double d = rng.uniform(3.0, 4.4);
    double a1 = d * rng.uniform(0.28, 0.36);
    double a2 = d * rng.uniform(0.28, 0.36);
    double a3 = d - a1 - a2; // exact double arithmetic keeps sum == d
    return TriangleSpec{Complex(a1), Complex(a2), Complex(a3), d};
}

std::pair<double, double> sample_xy(Rng& rng) {
    return {rng.uniform(0.2, 1.3), rng.uniform(0.2, 1.3)};
}

std::pair<double, double> sample_ud_point(Rng& rng) {
    double sx = rng.uniform(0.12, 0.75);
    double sy = rng.uniform(0.1, 1.0) * (1.0 - sx) * 0.95;
    return {sx * sx, sy * sy};
}

TriangleSpec sample_orthogonality_alpha(Rng& rng) {
    return TriangleSpec{Complex(rng.uniform(0.45, 0.85)), Complex(rng.uniform(0.45, 0.85)),
                        Complex(rng.uniform(0.45, 0.85)), 4.0};
}

R2Case sample_r2_case(Rng& rng) {
    R2Case c;
    double d = rng.uniform(3.0, 5.0);
    c.eps = rng.uniform(0.25, 0.5);
    double r = rng.uniform(0.3, 0.7);
    double target = 0.5 * d - c.eps * r; // sum(alpha)
    double w1 = rng.uniform(0.8, 1.2), w2 = rng.uniform(0.8, 1.2), w3 = rng.uniform(0.8, 1.2);
    double wsum = w1 + w2 + w3;
    double a1 = target * w1 / wsum;
    double a2 = target * w2 / wsum;
    double a3 = target - a1 - a2;
    c.alpha = TriangleSpec{Complex(a1), Complex(a2), Complex(a3), d};
    double rho1 = c.eps * rng.uniform(0.15, 0.3);
    double rho2 = c.eps * rng.uniform(0.15, 0.3);
    c.u = Complex(-a1 - rho1, 0.0);
    c.v = Complex(-a2 - rho2, 0.0);
    return c;
}

} // namespace mb
