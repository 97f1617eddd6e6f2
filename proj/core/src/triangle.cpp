#include "mb/triangle.hpp"

#include <cmath>

#include "mb/serialization.hpp"
#include "mb/special_functions.hpp"

namespace mb {

namespace {

AffineExponent c(Complex value) { return AffineExponent(value); }

bool near_nonpositive_integer(Complex z, double tol = 1e-12) {
    return distance_to_nonpositive_integer(z) < tol;
}

bool near_negative_integer(Complex z, double tol = 1e-12) {
    if (std::abs(z) < tol) return false;
    return distance_to_nonpositive_integer(z) < tol;
}

} // namespace

const VarId& var_z2() {
    static const VarId v{"z2"};
    return v;
}
const VarId& var_z3() {
    static const VarId v{"z3"};
    return v;
}
const VarId& var_u() {
    static const VarId v{"u"};
    return v;
}
const VarId& var_v() {
    static const VarId v{"v"};
    return v;
}

GammaProduct d_kernel(const AffineExponent& t1, const AffineExponent& t2,
                      const AffineExponent& n1, const AffineExponent& n2,
                      const AffineExponent& n3, double d) {
    const Complex half_d(0.5 * d);
    GammaProduct p;
    p.times_gamma(-t1);
    p.times_gamma(-t2);
    p.times_gamma(-t1 - n2 - n3 + half_d);
    p.times_gamma(-t2 - n1 - n3 + half_d);
    p.times_gamma(t1 + t2 + n3);
    p.times_gamma(n1 + n2 + n3 - half_d + t1 + t2);
    p.times_gamma(n1, -1);
    p.times_gamma(n2, -1);
    p.times_gamma(n3, -1);
    p.times_gamma((c(d) - n1 - n2 - n3), -1);
    return p;
}

GammaProduct build_D(const TriangleSpec& spec) {
    for (Complex nu : {spec.nu1, spec.nu2, spec.nu3}) {
        if (near_nonpositive_integer(nu))
            throw ConstructionPole("build_D: Gamma(nu) in the denominator sits on a pole (nu = " +
                                   to_string(nu) + ")");
    }
    Complex tail = Complex(spec.d) - spec.sum();
    if (near_negative_integer(tail))
        throw ConstructionPole("build_D: Gamma(d - sum nu) sits on a negative-integer pole (argument " +
                               to_string(tail) + ")");
    return d_kernel(AffineExponent::variable(var_z2()), AffineExponent::variable(var_z3()),
                    c(spec.nu1), c(spec.nu2), c(spec.nu3), spec.d);
}

MBIntegral build_J(const TriangleSpec& spec, bool require_contour) {
    MBIntegral m;
    m.integrand = build_D(spec);
    m.monomials = {{"x", AffineExponent::variable(var_z2())},
                   {"y", AffineExponent::variable(var_z3())}};
    m.vars = {var_z2(), var_z3()};
    ContourSolve s = solve_contour(m);
    if (s.feasible) {
        m.contour = s.contour;
        m.contour_valid = true;
    } else if (require_contour) {
        std::string msg = "build_J: no feasible contour; binding constraints:";
        for (const auto& a : s.active) msg += " [" + a + "]";
        throw Infeasible(msg, s.active);
    }
    return m;
}

double ud_phi(const UDPoint& p) {
    if (p.n < 1 || p.n > 4) throw DomainError("ud_phi: n must be in 1..4");
    if (!(p.x > 0.0) || !(p.y > 0.0)) throw DomainError("ud_phi: x and y must be positive");
    double x = p.x, y = p.y;
    double lam2 = (1.0 - x - y) * (1.0 - x - y) - 4.0 * x * y;
    if (!(lam2 > 0.0)) throw DomainError("ud_phi: Lambda^2 <= 0 at (x, y)");

    // The y-large component of the region puts a polylog argument on the cut;
    // the function is symmetric, so evaluate the mirrored point there.
    if (std::sqrt(y) >= 1.0 + std::sqrt(x)) std::swap(x, y);

    double lam = std::sqrt(lam2);
    double rho = 2.0 / (1.0 - x - y + lam);
    Complex za(-1.0 / (rho * x), 0.0);
    Complex zb(-rho * y, 0.0);
    double lnyx = std::log(y / x);

    int n = p.n;
    double nfact = 1.0;
    for (int i = 2; i <= n; ++i) nfact *= i;

    Complex sum(0.0);
    for (int j = n; j <= 2 * n; ++j) {
        double jfact = 1.0;
        for (int i = 2; i <= j; ++i) jfact *= i;
        double dfact1 = 1.0;
        for (int i = 2; i <= j - n; ++i) dfact1 *= i;
        double dfact2 = 1.0;
        for (int i = 2; i <= 2 * n - j; ++i) dfact2 *= i;
        double coeff = (j % 2 == 0 ? 1.0 : -1.0) * jfact / (dfact1 * dfact2);
        coeff *= std::pow(lnyx, 2 * n - j);
        sum += coeff * (polylog(j, za) - polylog(j, zb));
    }
    Complex phi = -sum / (nfact * lam);
    if (std::abs(phi.imag()) > 1e-10 * std::max(1.0, std::abs(phi.real())))
        throw ImaginaryLeak("ud_phi: imaginary residue " + std::to_string(phi.imag()));
    return phi.real();
}

GammaProduct build_weight(const TriangleSpec& alpha) {
    const Complex half_d(0.5 * alpha.d);
    const Complex sum = alpha.sum();
    AffineExponent z2 = AffineExponent::variable(var_z2());
    AffineExponent z3 = AffineExponent::variable(var_z3());
    GammaProduct p;
    p.times_gamma(c(sum) - z2 - z3 - half_d);
    p.times_gamma(z2 + half_d);
    p.times_gamma(z3 + half_d);
    p.times_gamma(c(Complex(alpha.d) - sum) + z2 + z3, -1);
    p.times_gamma(-z2, -1);
    p.times_gamma(-z3, -1);
    return p;
}

MBIntegral build_f_integral(const TriangleSpec& alpha, Complex u, Complex v, double eps,
                            bool require_contour) {
    const Complex half_d(0.5 * alpha.d);
    const Complex sum = alpha.sum();
    AffineExponent z2 = AffineExponent::variable(var_z2());
    AffineExponent z3 = AffineExponent::variable(var_z3());

    GammaProduct prefactor;
    prefactor.times_gamma(c(half_d - alpha.nu1));
    prefactor.times_gamma(c(half_d - alpha.nu2));
    prefactor.times_gamma(c(half_d - alpha.nu3));
    prefactor.times_gamma(c(alpha.nu1), -1);
    prefactor.times_gamma(c(alpha.nu2), -1);
    prefactor.times_gamma(c(alpha.nu3), -1);

    GammaProduct d1 = d_kernel(z2, z3, c(half_d - alpha.nu1), c(half_d - alpha.nu2),
                               c(half_d - alpha.nu3), alpha.d);
    GammaProduct d2 = d_kernel(c(u), c(v), z2 + half_d, z3 + half_d,
                               c(sum) - z2 - z3 - half_d, alpha.d);
    GammaProduct weight = build_weight(alpha);

    GammaProduct integrand = multiply(multiply(prefactor, weight), multiply(d1, d2));

    if (eps != 0.0) {
        // Regularization consistent with f_closed: shift Gamma(z2+z3+d/2-a3)
        // and the constant denominator Gamma(sum alpha - d/2), which turns the
        // Barnes-reduced value into the f_closed string with Gamma(eps) below
        // and Gamma(u+v+a1+a2+eps) above, exactly.
        AffineExponent target_mixed = z2 + z3 + (half_d - alpha.nu3);
        AffineExponent target_const = c(sum - half_d);
        std::vector<GammaFactor> fs = integrand.factors();
        bool shifted_mixed = false, shifted_const = false;
        for (auto& f : fs) {
            if (!shifted_mixed && f.power > 0 && f.argument.same_argument(target_mixed)) {
                f.argument = f.argument + Complex(eps);
                shifted_mixed = true;
            } else if (!shifted_const && f.power < 0 && f.argument.same_argument(target_const)) {
                f.argument = f.argument + Complex(eps);
                shifted_const = true;
            }
        }
        if (!shifted_mixed || !shifted_const)
            throw DomainError("build_f_integral: regularization targets not found in the reduced kernel");
        integrand = GammaProduct(integrand.prefactor(), std::move(fs));
    }

    MBIntegral m;
    m.integrand = std::move(integrand);
    m.vars = {var_z2(), var_z3()};
    ContourSolve s = solve_contour(m);
    if (s.feasible) {
        m.contour = s.contour;
        m.contour_valid = true;
    } else if (require_contour) {
        std::string msg = "build_f_integral: no feasible contour; binding constraints:";
        for (const auto& a : s.active) msg += " [" + a + "]";
        throw Infeasible(msg, s.active);
    }
    return m;
}

GammaProduct f_closed_product(const TriangleSpec& alpha, const AffineExponent& u,
                              const AffineExponent& v, Complex eps) {
    const Complex sum = alpha.sum();
    GammaProduct p;
    p.times_gamma(c(sum) + u + v);
    p.times_gamma(-u);
    p.times_gamma(-v);
    p.times_gamma(-u - alpha.nu1);
    p.times_gamma(-v - alpha.nu2);
    p.times_gamma(u + v + (alpha.nu1 + alpha.nu2 + eps));
    p.times_gamma(c(alpha.nu1), -1);
    p.times_gamma(c(alpha.nu2), -1);
    p.times_gamma(c(alpha.nu3), -1);
    p.times_gamma(c(eps), -1);
    return p;
}

Complex f_closed(const TriangleSpec& alpha, Complex u, Complex v, double eps) {
    if (!(eps > 0.0)) throw DomainError("f_closed: eps must be positive for numeric use");
    GammaProduct p = f_closed_product(alpha, c(u), c(v), Complex(eps));
    return p.value({});
}

R1Sides build_R1_sides(Complex eps1, Complex eps2, Complex eps3, Complex u, Complex v,
                       bool require_contour) {
    if (std::abs(eps1 + eps2 + eps3) > 1e-14)
        throw ConstraintViolated("build_R1_sides: eps1 + eps2 + eps3 must vanish");
    const double d = 4.0;
    AffineExponent z2 = AffineExponent::variable(var_z2());
    AffineExponent z3 = AffineExponent::variable(var_z3());

    GammaProduct outer = d_kernel(c(u), c(v), -z3 + (Complex(1.0) + eps1),
                                  -z2 + (Complex(1.0) + eps2), c(Complex(1.0) + eps3), d);
    GammaProduct inner = d_kernel(z2, z3, c(Complex(1.0) + eps2), c(Complex(1.0) + eps1),
                                  c(Complex(1.0) + eps3), d);

    R1Sides sides;
    sides.lhs.integrand = multiply(outer, inner);
    sides.lhs.vars = {var_z2(), var_z3()};
    ContourSolve s = solve_contour(sides.lhs);
    if (s.feasible) {
        sides.lhs.contour = s.contour;
        sides.lhs.contour_valid = true;
    } else if (require_contour) {
        std::string msg = "build_R1_sides: no feasible contour; binding constraints:";
        for (const auto& a : s.active) msg += " [" + a + "]";
        throw Infeasible(msg, s.active);
    }

    // One-index bracket terms under the D^{(a,b)}[nu] == D^{(a,b)}[1,1,nu] reading.
    const Complex one(1.0);
    GammaProduct t1 = d_kernel(c(u), c(v - eps2), c(one), c(one), c(one - eps1), d);
    GammaProduct t2 = d_kernel(c(u), c(v), c(one), c(one), c(one + eps3), d);
    GammaProduct t3 = d_kernel(c(u - eps1), c(v), c(one), c(one), c(one - eps2), d);
    sides.rhs_terms[0] = multiply(GammaProduct(1.0 / (eps2 * eps3)), t1);
    sides.rhs_terms[1] = multiply(GammaProduct(1.0 / (eps1 * eps2)), t2);
    sides.rhs_terms[2] = multiply(GammaProduct(1.0 / (eps1 * eps3)), t3);
    return sides;
}

} // namespace mb
