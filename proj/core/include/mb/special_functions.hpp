#pragma once

#include <complex>

#include "mb/errors.hpp"

namespace mb {

using Complex = std::complex<double>;

// Complex-valued special functions used by the contour-integral machinery.
// All functions are pure and safe for concurrent calls.

// Principal branch of log Gamma (continuous on C cut along the negative real
// axis, real on the positive axis). Lanczos approximation for Re z >= 1/2,
// branch-tracked reflection otherwise. Accurate to >= 12 significant digits
// for |z| <= 50, |Im z| <= 200.
//
// Throws PoleError when z is within 1e-12 of a non-positive integer.
Complex log_gamma(Complex z);

// Gamma(z) = exp(log_gamma(z)). Throws PoleError at poles and RangeError when
// the magnitude overflows double range.
Complex gamma(Complex z);

// Polylogarithm Li_j(z) of integer order 1 <= j <= 8, principal branch.
// Direct series for small |z|, a Bernoulli-polynomial inversion formula
// mapping z -> 1/z for large |z|, and an expansion in log z near the unit
// circle. z = 1 is allowed for j >= 2 (returns zeta(j)).
//
// Throws DomainError for z on the cut [1, inf) (except z = 1, j >= 2) and
// UnsupportedOrder for j outside 1..8.
Complex polylog(int j, Complex z);

// Distance from z to the nearest non-positive integer; used for pole checks.
double distance_to_nonpositive_integer(Complex z);

// Riemann zeta at integer s != 1. Exact 0 at negative even integers,
// Bernoulli values at negative odd integers.
double zeta_int(int s);

namespace detail {

// The individual polylog evaluation routes, exposed for consistency tests.
// polylog_series requires |z| < 1; polylog_log_series requires |log z| < 2*pi;
// polylog_inversion evaluates Li_j(1/z) by whichever of the two applies.
Complex polylog_series(int j, Complex z);
Complex polylog_log_series(int j, Complex z);
Complex polylog_inversion(int j, Complex z);

// Bernoulli number B_n (n >= 0) as a double.
double bernoulli(int n);

} // namespace detail

} // namespace mb
