#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mb/errors.hpp"
#include "mb/special_functions.hpp"

namespace mb {

// Symbolic layer: products of Gamma factors whose arguments are affine in a
// handful of contour variables, with numeric complex parameters folded into
// the affine constants. Everything is an immutable value; operations return
// new objects.

struct VarId {
    std::string name;

    friend auto operator<=>(const VarId&, const VarId&) = default;
};

using Assignment = std::map<VarId, Complex>;
using Contour = std::map<VarId, double>;

// constant + sum_i coeff_i * var_i with integer coefficients. By default only
// coefficients of magnitude 1 are accepted (every Gamma argument in this
// problem family has that form); general integers must be requested
// explicitly via allow_general_coefficients.
class AffineExponent {
public:
    AffineExponent() = default;
    explicit AffineExponent(Complex constant) : constant_(constant) {}
    AffineExponent(Complex constant, std::map<VarId, int> coeffs,
                   bool allow_general_coefficients = false);

    static AffineExponent variable(const VarId& v, int coeff = 1);

    Complex constant() const { return constant_; }
    const std::map<VarId, int>& coefficients() const { return coeffs_; }

    int coefficient(const VarId& v) const;
    bool depends_on(const VarId& v) const { return coeffs_.count(v) > 0; }
    bool is_constant() const { return coeffs_.empty(); }

    AffineExponent operator+(const AffineExponent& o) const;
    AffineExponent operator-(const AffineExponent& o) const;
    AffineExponent operator-() const;
    AffineExponent operator+(Complex c) const;
    AffineExponent operator-(Complex c) const;

    // Replace var by an affine expression and fold.
    AffineExponent substituted(const VarId& var, const AffineExponent& value) const;

    Complex evaluate(const Assignment& values) const;
    // Evaluate with only real parts supplied (contour evaluation helper).
    double real_at(const Contour& c) const;

    // Exact structural equality of coefficients and tolerant (1e-12) equality
    // of constants; the canonicalizer merges factors under this predicate.
    bool same_argument(const AffineExponent& o) const;

    // Deterministic ordering: coefficient vector over the name-sorted union of
    // variables, then Re, then Im of the constant.
    static int compare(const AffineExponent& a, const AffineExponent& b);

private:
    Complex constant_{0.0, 0.0};
    std::map<VarId, int> coeffs_;
};

struct GammaFactor {
    AffineExponent argument;
    int power = 1; // negative = denominator

    friend bool operator==(const GammaFactor& a, const GammaFactor& b) {
        return a.power == b.power && a.argument.same_argument(b.argument) &&
               AffineExponent::compare(a.argument, b.argument) == 0;
    }
};

// Canonical product of Gamma factors with a scalar prefactor: factors sorted
// deterministically, no two factors share an argument, no zero powers.
class GammaProduct {
public:
    GammaProduct() = default;
    explicit GammaProduct(Complex prefactor) : prefactor_(prefactor) {}
    GammaProduct(Complex prefactor, std::vector<GammaFactor> factors);

    Complex prefactor() const { return prefactor_; }
    const std::vector<GammaFactor>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    GammaProduct& times_gamma(const AffineExponent& argument, int power = 1);
    GammaProduct inverse() const;

    bool depends_on(const VarId& v) const;

    // log of the numeric value at the assignment. A numerator factor at a
    // pole throws PoleError; a denominator factor at a pole yields -inf
    // (the product vanishes).
    Complex log_value(const Assignment& values) const;
    Complex value(const Assignment& values) const;

    friend bool operator==(const GammaProduct& a, const GammaProduct& b);

private:
    void canonicalize();

    Complex prefactor_{1.0, 0.0};
    std::vector<GammaFactor> factors_;
};

GammaProduct multiply(const GammaProduct& a, const GammaProduct& b);
GammaProduct substitute(const GammaProduct& p, const VarId& var, const AffineExponent& value);

// x^(affine exponent); base values are supplied at evaluation and must be
// real and positive.
struct MonomialFactor {
    std::string base;
    AffineExponent exponent;
};

using MonomialValues = std::map<std::string, double>;

enum class Normalization {
    // (1/2pi i) per integration fold, stored explicitly: the source formulas
    // leave it implicit.
    TwoPiIPerFold,
};

struct MBIntegral {
    GammaProduct integrand;
    std::vector<MonomialFactor> monomials;
    std::vector<VarId> vars;
    Contour contour;
    bool contour_valid = false;
    Normalization normalization = Normalization::TwoPiIPerFold;
};

// Pole families of a product in one variable: "left" poles var = -base - n
// from coefficient +1 numerator factors, "right" poles var = base + n from
// coefficient -1 factors (n >= 0). Bases may still contain other variables.
struct PoleFamilies {
    std::vector<AffineExponent> left;  // var = -base - n
    std::vector<AffineExponent> right; // var = base + n
};

PoleFamilies poles_in(const GammaProduct& p, const VarId& var);

// Max-slack straight-contour solve, see contour.cpp.
struct ContourSolve {
    bool feasible = false;
    Contour contour;
    double min_slack = 0.0;
    // Serialized arguments of the constraints active at the optimum; on an
    // infeasible solve these witness the pinched subset.
    std::vector<std::string> active;
};

ContourSolve solve_contour(const MBIntegral& m, double margin = 1e-3);

// Returns the max-slack contour or throws Infeasible with the violated
// inequality subset. Margin delta = 1e-3 keeps quadrature away from poles.
Contour feasible_contour(const MBIntegral& m, double margin = 1e-3);

// Validate an explicit contour: every numerator Gamma argument must have
// positive real part at the contour point.
bool contour_is_valid(const MBIntegral& m, const Contour& c);

// First Barnes lemma as a rewrite: the integrand's dependence on var must be
// exactly Gamma(l1+var) Gamma(l2+var) Gamma(l3-var) Gamma(l4-var). Returns
// the reduced integral with var eliminated and the Barnes Gamma string
// multiplied into the remainder.
MBIntegral apply_barnes_first(const MBIntegral& m, const VarId& var);

// Iterated residues at designated simple poles, with the Gamma(0)-collapse
// rule: a denominator factor with (numerically) zero constant argument is
// cancelled against the unique numerator factor vanishing at the designated
// point before residues are taken.
struct ResidueResult {
    GammaProduct gammas;
    std::vector<MonomialFactor> monomials; // constant exponents
};

ResidueResult take_residues(const MBIntegral& m, const std::map<VarId, AffineExponent>& points);

} // namespace mb
