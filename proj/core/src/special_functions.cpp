#include "mb/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleTol = 1e-12;

// Lanczos g = 7, 9 terms. Relative accuracy ~1e-14 over Re z >= 1/2.
constexpr int kLanczosG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551354,
    12.507343278686904814458936853,
    -0.13857109526572011689554707,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7,
};

Complex lanczos_log_gamma(Complex z) {
    // Valid for Re z >= 1/2. The series S stays in the right half plane
    // there, so the principal log of S tracks the principal log Gamma.
    Complex zm1 = z - 1.0;
    Complex s = kLanczos[0];
    for (int i = 1; i < static_cast<int>(kLanczos.size()); ++i) {
        s += kLanczos[i] / (zm1 + static_cast<double>(i));
    }
    Complex t = zm1 + (kLanczosG + 0.5);
    return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(s);
}

// log(sin(pi z)) continuous in the closed upper half plane, matching the real
// value on (0, 1). Written via log1p(-e^{2 pi i z}) so no branch jumps occur
// as Re z crosses integers.
Complex log_sin_pi_upper(Complex z) {
    const Complex i(0.0, 1.0);
    Complex w = std::exp(2.0 * kPi * i * z);
    // 1 - w lies in the right half plane for Im z > 0.
    Complex log1mw = std::log(1.0 - w);
    return i * kPi * 0.5 - std::log(Complex(2.0)) - i * kPi * z + log1mw;
}

} // namespace

double distance_to_nonpositive_integer(Complex z) {
    double re = z.real();
    double im = z.imag();
    if (re > 0.5) return std::abs(z); // nearest candidate is 0
    double n = std::round(re);
    if (n > 0.0) n = 0.0;
    return std::hypot(re - n, im);
}

Complex log_gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma: non-finite argument");
    if (distance_to_nonpositive_integer(z) < kPoleTol)
        throw PoleError("log_gamma: argument at a non-positive integer pole");

    if (z.real() >= 0.5) return lanczos_log_gamma(z);

    // Reflection. Work in the upper half plane and conjugate back so the
    // branch-tracked log(sin) applies.
    bool conj = z.imag() < 0.0;
    Complex zz = conj ? std::conj(z) : z;
    Complex r = std::log(Complex(kPi)) - log_sin_pi_upper(zz) - lanczos_log_gamma(1.0 - zz);
    return conj ? std::conj(r) : r;
}

Complex gamma(Complex z) {
    Complex lg = log_gamma(z);
    if (lg.real() > 709.0) throw RangeError("gamma: magnitude overflows double range");
    return std::exp(lg);
}

namespace detail {

namespace {

// zeta(2)..zeta(10) to full double precision; larger arguments converge in a
// few series terms.
constexpr std::array<double, 9> kZetaSmall = {
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381916,
    1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
    1.0040773561979443394, 1.0020083928260822144, 1.0009945751278180853,
};

double zeta_pos(int s) {
    // s >= 2
    if (s <= 10) return kZetaSmall[s - 2];
    double sum = 0.0;
    for (int j = 1; j <= 25; ++j) sum += std::pow(j, -s);
    return sum;
}

std::vector<double> build_bernoulli_table() {
    // B_0..B_128. Even entries from zeta(2m) (stable); odd entries zero except
    // B_1 = -1/2.
    std::vector<double> b(129, 0.0);
    b[0] = 1.0;
    b[1] = -0.5;
    double fact = 2.0; // (2m)!
    for (int m = 1; 2 * m < static_cast<int>(b.size()); ++m) {
        int n = 2 * m;
        if (m > 1) fact *= static_cast<double>(n - 1) * n;
        double sign = (m % 2 == 1) ? 1.0 : -1.0;
        b[n] = sign * 2.0 * fact * zeta_pos(n) / std::pow(2.0 * kPi, n);
    }
    return b;
}

const std::vector<double>& bernoulli_table() {
    static const std::vector<double> table = build_bernoulli_table();
    return table;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

// Bernoulli polynomial B_n(x) for small n.
Complex bernoulli_poly(int n, Complex x) {
    Complex sum = 0.0;
    Complex xp = 1.0;
    // sum_{k=0..n} C(n,k) B_{n-k} x^k
    for (int k = 0; k <= n; ++k) {
        sum += binomial(n, k) * bernoulli_table()[n - k] * xp;
        xp *= x;
    }
    return sum;
}

bool on_cut(Complex z) { return z.imag() == 0.0 && z.real() > 1.0; }

} // namespace

double bernoulli(int n) { return bernoulli_table().at(n); }

Complex polylog_series(int j, Complex z) {
    // sum_{k>=1} z^k / k^j, |z| < 1.
    Complex term = z;
    Complex sum = z;
    for (int k = 2; k < 200000; ++k) {
        term *= z;
        Complex add = term / std::pow(static_cast<double>(k), j);
        sum += add;
        if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

Complex polylog_log_series(int j, Complex z) {
    // Li_j(z) = sum_{k>=0, k != j-1} zeta(j-k) mu^k / k!
    //           + mu^{j-1}/(j-1)! (H_{j-1} - log(-mu)),     mu = log z,
    // valid for |mu| < 2 pi. Handles the unit-circle neighbourhood.
    Complex mu = std::log(z);
    Complex muk = 1.0; // mu^k / k!
    Complex sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
        if (k != j - 1) {
            double zk = zeta_int(j - k);
            if (zk != 0.0) {
                Complex add = zk * muk;
                sum += add;
                if (k > j + 4 && std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
            }
        }
        muk *= mu / static_cast<double>(k + 1);
    }
    double harmonic = 0.0;
    for (int i = 1; i <= j - 1; ++i) harmonic += 1.0 / i;
    Complex mup = 1.0;
    double fct = 1.0;
    for (int i = 1; i <= j - 1; ++i) {
        mup *= mu;
        fct *= i;
    }
    if (j >= 2 && mu == Complex(0.0)) return sum; // z = 1, \zeta(j) term only
    sum += mup / fct * (harmonic - std::log(-mu));
    return sum;
}

Complex polylog_inversion(int j, Complex z) {
    // Li_j(z) = -(-1)^j Li_j(1/z) - (2 pi i)^j / j! B_j(1/2 + log(-z)/(2 pi i)),
    // z off [0, inf).
    const Complex twopii(0.0, 2.0 * kPi);
    Complex inv = 1.0 / z;
    Complex li_inv = std::abs(inv) <= 0.5 ? polylog_series(j, inv)
                                          : polylog_log_series(j, inv);
    double fct = 1.0;
    for (int i = 2; i <= j; ++i) fct *= i;
    Complex bp = bernoulli_poly(j, 0.5 + std::log(-z) / twopii);
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return -sign * li_inv - std::pow(twopii, j) / fct * bp;
}

} // namespace detail

double zeta_int(int s) {
    if (s == 1) throw DomainError("zeta_int: pole at s = 1");
    if (s >= 2) return detail::zeta_pos(s);
    if (s == 0) return -0.5;
    int m = -s;
    if (m % 2 == 0) return 0.0; // negative even integers
    return -detail::bernoulli_table().at(m + 1) / (m + 1);
}

Complex polylog(int j, Complex z) {
    if (j < 1 || j > 8) throw UnsupportedOrder("polylog: order must be in 1..8");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("polylog: non-finite argument");
    if (detail::on_cut(z)) throw DomainError("polylog: argument on the cut [1, inf)");
    if (z == Complex(1.0)) {
        if (j == 1) throw DomainError("polylog: Li_1 diverges at z = 1");
        return zeta_int(j);
    }
    if (j == 1) return -std::log(1.0 - z);

    double r = std::abs(z);
    if (r <= 0.5) return detail::polylog_series(j, z);
    if (r >= 2.0) return detail::polylog_inversion(j, z);
    return detail::polylog_log_series(j, z);
}

} // namespace mb
