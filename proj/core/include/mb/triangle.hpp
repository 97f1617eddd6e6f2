#pragma once

#include <array>

#include "mb/gamma_algebra.hpp"

namespace mb {

// Constructors for the one-loop massless triangle objects: the Gamma-kernel
// D of its Mellin-Barnes representation, the dimensionless triangle integral
// J(nu1,nu2,nu3; d) as a function of the momentum ratios x, y, the ladder
// functions Phi^(n), the orthogonality weight, and the reduced kernel f(u,v).

// Propagator indices (also reused for the position-space exponents alpha) and
// the space-time dimension.
struct TriangleSpec {
    Complex nu1{1.0, 0.0};
    Complex nu2{1.0, 0.0};
    Complex nu3{1.0, 0.0};
    double d = 4.0;

    Complex sum() const { return nu1 + nu2 + nu3; }
};

// Argument of Phi^(n): dimensionless ratios in the region where
// Lambda^2 = (1-x-y)^2 - 4xy is positive.
struct UDPoint {
    int n = 1;
    double x = 0.0;
    double y = 0.0;
};

// Canonical contour variable names.
const VarId& var_z2();
const VarId& var_z3();
const VarId& var_u();
const VarId& var_v();

// The D kernel with fully affine slots: first two arguments are the transform
// variables, the last three the propagator indices. Slots may contain contour
// variables or plain constants, which is how the kernel appears both as an
// integrand and as a closed-form value.
GammaProduct d_kernel(const AffineExponent& t1, const AffineExponent& t2,
                      const AffineExponent& n1, const AffineExponent& n2,
                      const AffineExponent& n3, double d);

// D^{(z2,z3)}[nu1,nu2,nu3]: six numerator factors over four denominator
// factors, canonical. Throws ConstructionPole when a denominator Gamma(nu_i)
// sits on a pole or Gamma(d - sum nu) on a strictly negative one; the
// Gamma(0) boundary case is a valid symbolic object (residue collapse).
GammaProduct build_D(const TriangleSpec& spec);

// The dimensionless triangle integral: integrand build_D, monomials x^{z2}
// y^{z3}, max-slack contour. With require_contour the solve failure is
// thrown as Infeasible; otherwise the integral is returned for symbolic use
// with contour_valid = false.
MBIntegral build_J(const TriangleSpec& spec, bool require_contour = true);

// Phi^(n)(x, y) from its polylogarithm closed form. Real result; imaginary
// residue above 1e-10 relative throws ImaginaryLeak. Throws DomainError when
// Lambda^2 <= 0 or the point is otherwise outside the supported region.
double ud_phi(const UDPoint& p);

// Orthogonality weight Delta^{(alpha)}(z2,z3).
GammaProduct build_weight(const TriangleSpec& alpha);

// The reduced kernel f(u,v) as a double MB integral over (z2, z3) at fixed
// complex (u, v): weight times two D kernels, all cancellations performed.
// With eps = 0 this is the bare (pinched) object; eps > 0 applies the
// regularization consistent with f_closed (shift of the Gamma(z2+z3+d/2-a3)
// factor and of the constant Gamma(sum alpha - d/2) denominator).
MBIntegral build_f_integral(const TriangleSpec& alpha, Complex u, Complex v, double eps = 0.0,
                            bool require_contour = false);

// Closed form of f(u,v) as a Gamma string; u and v may be variables or
// constants. eps = 0 keeps the bare Gamma(0) denominator for symbolic use.
GammaProduct f_closed_product(const TriangleSpec& alpha, const AffineExponent& u,
                              const AffineExponent& v, Complex eps);

// Numeric regularized closed form; requires eps > 0.
Complex f_closed(const TriangleSpec& alpha, Complex u, Complex v, double eps);

// Both sides of the d = 4 loop-reduction identity: the double-integral side
// and the three closed-form bracket terms (1/(eps eps') scales folded into
// the prefactors). One-index D^{(a,b)}[nu] is read as D^{(a,b)}[1,1,nu].
struct R1Sides {
    MBIntegral lhs;
    std::array<GammaProduct, 3> rhs_terms;
};

R1Sides build_R1_sides(Complex eps1, Complex eps2, Complex eps3, Complex u, Complex v,
                       bool require_contour = true);

} // namespace mb
