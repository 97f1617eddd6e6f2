#pragma once

#include <string>

#include "mb/gamma_algebra.hpp"

namespace mb {

// Textual forms with exact round-trip (shortest digits that reparse to the
// same doubles). Grammar, by example:
//
//   complex   1.5      -0.25      1.5+0.5i      -0.3-0.1i
//   affine    -z2 -z3 +1.5        +u +v -0.3+0.2i       0.5
//   product   Gamma(-z2)^2 * Gamma(+z2 +z3 +1)^2
//             -2.5 * Gamma(+u +1.5) * Gamma(+0.5)^-1
//   integral  MB[z2 @ -0.5, z3 @ ?] x^(+z2) * y^(+z3) * Gamma(-z2) * ...
//
// A leading complex term in a product is the prefactor (printed only when it
// differs from 1). `?` marks an unset contour component.

std::string to_string(Complex c);
std::string to_string(const AffineExponent& a);
std::string to_string(const GammaProduct& p);
std::string to_string(const MBIntegral& m);

Complex parse_complex(const std::string& text);
AffineExponent parse_affine(const std::string& text);
GammaProduct parse_gamma_product(const std::string& text);
MBIntegral parse_mb_integral(const std::string& text);

// Canonical form with constants rounded to `digits` significant figures, for
// string comparisons of symbolic results whose constants were reached by
// different floating-point routes (the canonicalizer merges at 1e-12).
std::string canonical_digest(const GammaProduct& p, int digits = 12);

} // namespace mb
