#include "mb/gamma_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mb/serialization.hpp"

namespace mb {

namespace {

constexpr double kConstTol = 1e-12;

bool complex_close(Complex a, Complex b) {
    return std::abs(a - b) <= kConstTol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

} // namespace

AffineExponent::AffineExponent(Complex constant, std::map<VarId, int> coeffs,
                               bool allow_general_coefficients)
    : constant_(constant), coeffs_(std::move(coeffs)) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == 0) {
            it = coeffs_.erase(it);
            continue;
        }
        if (!allow_general_coefficients && std::abs(it->second) != 1) {
            throw MixedCoefficient("AffineExponent: coefficient " + std::to_string(it->second) +
                                   " on " + it->first.name +
                                   " (only +/-1 accepted without the general-coefficient escape hatch)");
        }
        ++it;
    }
}

AffineExponent AffineExponent::variable(const VarId& v, int coeff) {
    return AffineExponent(Complex(0.0), {{v, coeff}});
}

int AffineExponent::coefficient(const VarId& v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0 : it->second;
}

AffineExponent AffineExponent::operator+(const AffineExponent& o) const {
    AffineExponent r;
    r.constant_ = constant_ + o.constant_;
    r.coeffs_ = coeffs_;
    for (const auto& [v, k] : o.coeffs_) {
        int nk = r.coefficient(v) + k;
        if (nk == 0)
            r.coeffs_.erase(v);
        else
            r.coeffs_[v] = nk;
    }
    return r;
}

AffineExponent AffineExponent::operator-() const {
    AffineExponent r;
    r.constant_ = -constant_;
    for (const auto& [v, k] : coeffs_) r.coeffs_[v] = -k;
    return r;
}

AffineExponent AffineExponent::operator-(const AffineExponent& o) const { return *this + (-o); }

AffineExponent AffineExponent::operator+(Complex c) const {
    AffineExponent r = *this;
    r.constant_ += c;
    return r;
}

AffineExponent AffineExponent::operator-(Complex c) const { return *this + (-c); }

AffineExponent AffineExponent::substituted(const VarId& var, const AffineExponent& value) const {
    auto it = coeffs_.find(var);
    if (it == coeffs_.end()) return *this;
    int k = it->second;
    AffineExponent r;
    r.constant_ = constant_;
    r.coeffs_ = coeffs_;
    r.coeffs_.erase(var);
    r.constant_ += static_cast<double>(k) * value.constant_;
    for (const auto& [v, kv] : value.coeffs_) {
        int nk = r.coefficient(v) + k * kv;
        if (nk == 0)
            r.coeffs_.erase(v);
        else
            r.coeffs_[v] = nk;
    }
    return r;
}

Complex AffineExponent::evaluate(const Assignment& values) const {
    Complex r = constant_;
    for (const auto& [v, k] : coeffs_) {
        auto it = values.find(v);
        if (it == values.end())
            throw DomainError("AffineExponent::evaluate: no value for variable " + v.name);
        r += static_cast<double>(k) * it->second;
    }
    return r;
}

double AffineExponent::real_at(const Contour& c) const {
    double r = constant_.real();
    for (const auto& [v, k] : coeffs_) {
        auto it = c.find(v);
        if (it == c.end())
            throw DomainError("AffineExponent::real_at: no contour for variable " + v.name);
        r += static_cast<double>(k) * it->second;
    }
    return r;
}

bool AffineExponent::same_argument(const AffineExponent& o) const {
    return coeffs_ == o.coeffs_ && complex_close(constant_, o.constant_);
}

int AffineExponent::compare(const AffineExponent& a, const AffineExponent& b) {
    // Coefficient vector over the name-sorted union of variables, then
    // constant. Exact doubles: ordering is deterministic.
    std::set<VarId> vars;
    for (const auto& [v, k] : a.coeffs_) vars.insert(v);
    for (const auto& [v, k] : b.coeffs_) vars.insert(v);
    for (const auto& v : vars) {
        int ka = a.coefficient(v), kb = b.coefficient(v);
        if (ka != kb) return ka < kb ? -1 : 1;
    }
    if (a.constant_.real() != b.constant_.real())
        return a.constant_.real() < b.constant_.real() ? -1 : 1;
    if (a.constant_.imag() != b.constant_.imag())
        return a.constant_.imag() < b.constant_.imag() ? -1 : 1;
    return 0;
}

GammaProduct::GammaProduct(Complex prefactor, std::vector<GammaFactor> factors)
    : prefactor_(prefactor), factors_(std::move(factors)) {
    canonicalize();
}

GammaProduct& GammaProduct::times_gamma(const AffineExponent& argument, int power) {
    factors_.push_back({argument, power});
    canonicalize();
    return *this;
}

GammaProduct GammaProduct::inverse() const {
    GammaProduct r;
    r.prefactor_ = 1.0 / prefactor_;
    r.factors_ = factors_;
    for (auto& f : r.factors_) f.power = -f.power;
    return r;
}

bool GammaProduct::depends_on(const VarId& v) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const GammaFactor& f) { return f.argument.depends_on(v); });
}

void GammaProduct::canonicalize() {
    std::stable_sort(factors_.begin(), factors_.end(), [](const GammaFactor& a, const GammaFactor& b) {
        return AffineExponent::compare(a.argument, b.argument) < 0;
    });
    std::vector<GammaFactor> merged;
    for (const auto& f : factors_) {
        if (f.power == 0) continue;
        if (!merged.empty() && merged.back().argument.same_argument(f.argument)) {
            merged.back().power += f.power;
            if (merged.back().power == 0) merged.pop_back();
        } else {
            merged.push_back(f);
        }
    }
    factors_ = std::move(merged);
}

Complex GammaProduct::log_value(const Assignment& values) const {
    if (prefactor_ == Complex(0.0))
        return Complex(-std::numeric_limits<double>::infinity(), 0.0);
    Complex lg = std::log(prefactor_);
    for (const auto& f : factors_) {
        Complex arg = f.argument.evaluate(values);
        if (distance_to_nonpositive_integer(arg) < 1e-12) {
            if (f.power > 0)
                throw PoleError("GammaProduct::log_value: numerator Gamma at a pole (argument " +
                                to_string(f.argument) + ")");
            // Denominator pole: 1/Gamma vanishes.
            return Complex(-std::numeric_limits<double>::infinity(), 0.0);
        }
        lg += static_cast<double>(f.power) * log_gamma(arg);
    }
    return lg;
}

Complex GammaProduct::value(const Assignment& values) const {
    Complex lg = log_value(values);
    if (lg.real() == -std::numeric_limits<double>::infinity()) return Complex(0.0);
    if (lg.real() > 709.0) throw RangeError("GammaProduct::value: overflow");
    return std::exp(lg);
}

bool operator==(const GammaProduct& a, const GammaProduct& b) {
    if (!complex_close(a.prefactor_, b.prefactor_)) return false;
    if (a.factors_.size() != b.factors_.size()) return false;
    for (size_t i = 0; i < a.factors_.size(); ++i) {
        if (!(a.factors_[i] == b.factors_[i])) return false;
    }
    return true;
}

GammaProduct multiply(const GammaProduct& a, const GammaProduct& b) {
    std::vector<GammaFactor> fs = a.factors();
    fs.insert(fs.end(), b.factors().begin(), b.factors().end());
    return GammaProduct(a.prefactor() * b.prefactor(), std::move(fs));
}

GammaProduct substitute(const GammaProduct& p, const VarId& var, const AffineExponent& value) {
    std::vector<GammaFactor> fs;
    fs.reserve(p.factors().size());
    for (const auto& f : p.factors()) fs.push_back({f.argument.substituted(var, value), f.power});
    return GammaProduct(p.prefactor(), std::move(fs));
}

PoleFamilies poles_in(const GammaProduct& p, const VarId& var) {
    PoleFamilies r;
    for (const auto& f : p.factors()) {
        int k = f.argument.coefficient(var);
        if (k == 0 || f.power <= 0) continue;
        if (std::abs(k) != 1)
            throw MixedCoefficient("poles_in: variable " + var.name + " appears with coefficient " +
                                   std::to_string(k));
        // Gamma(base + var): poles at var = -base - n  ("left" family).
        // Gamma(base - var): poles at var =  base + n  ("right" family).
        AffineExponent rest = f.argument.substituted(var, AffineExponent(Complex(0.0)));
        for (int copy = 0; copy < f.power; ++copy) {
            if (k == 1)
                r.left.push_back(-rest);
            else
                r.right.push_back(rest);
        }
    }
    return r;
}

MBIntegral apply_barnes_first(const MBIntegral& m, const VarId& var) {
    for (const auto& mono : m.monomials) {
        if (mono.exponent.depends_on(var))
            throw PatternMismatch("apply_barnes_first: monomial " + mono.base +
                                  " depends on the integration variable " + var.name);
    }
    std::vector<AffineExponent> plus, minus;
    std::vector<GammaFactor> rest;
    for (const auto& f : m.integrand.factors()) {
        int k = f.argument.coefficient(var);
        if (k == 0) {
            rest.push_back(f);
            continue;
        }
        if (f.power < 1)
            throw PatternMismatch("apply_barnes_first: denominator factor depends on " + var.name);
        AffineExponent lam = f.argument.substituted(var, AffineExponent(Complex(0.0)));
        for (int copy = 0; copy < f.power; ++copy) {
            if (k == 1)
                plus.push_back(lam);
            else if (k == -1)
                minus.push_back(lam);
            else
                throw PatternMismatch("apply_barnes_first: coefficient of " + var.name + " is not +/-1");
        }
    }
    if (plus.size() != 2 || minus.size() != 2)
        throw PatternMismatch("apply_barnes_first: need exactly Gamma(l1+z)Gamma(l2+z)Gamma(l3-z)Gamma(l4-z) in " +
                              var.name);

    GammaProduct out(m.integrand.prefactor(), std::move(rest));
    out.times_gamma(plus[0] + minus[0]);
    out.times_gamma(plus[0] + minus[1]);
    out.times_gamma(plus[1] + minus[0]);
    out.times_gamma(plus[1] + minus[1]);
    out.times_gamma(plus[0] + plus[1] + minus[0] + minus[1], -1);

    MBIntegral r;
    r.integrand = std::move(out);
    r.monomials = m.monomials;
    for (const auto& v : m.vars)
        if (!(v == var)) r.vars.push_back(v);
    for (const auto& [v, c] : m.contour)
        if (!(v == var)) r.contour[v] = c;
    r.contour_valid = false;
    return r;
}

namespace {

// One round of iterated simple residues; throws on collisions and missing poles.
ResidueResult iterate_residues(const GammaProduct& product, const std::vector<MonomialFactor>& monomials,
                               const std::vector<VarId>& vars,
                               const std::map<VarId, AffineExponent>& points) {
    GammaProduct p = product;
    std::vector<MonomialFactor> monos = monomials;
    for (const auto& var : vars) {
        auto pit = points.find(var);
        if (pit == points.end())
            throw DomainError("take_residues: no designated pole for variable " + var.name);
        const AffineExponent& point = pit->second;

        // Locate the unique numerator factor with a pole at var = point.
        int pole_index = -1;
        int pole_n = 0;
        for (size_t i = 0; i < p.factors().size(); ++i) {
            const auto& f = p.factors()[i];
            int k = f.argument.coefficient(var);
            if (k == 0 || f.power <= 0) continue;
            if (std::abs(k) != 1)
                throw MixedCoefficient("take_residues: coefficient of " + var.name + " is not +/-1");
            AffineExponent at_point = f.argument.substituted(var, point);
            if (!at_point.is_constant()) continue; // symbolic in later variables
            Complex c = at_point.constant();
            if (distance_to_nonpositive_integer(c) < 1e-9) {
                if (f.power > 1)
                    throw NotASimplePole("take_residues: factor Gamma(" + to_string(f.argument) +
                                         ")^" + std::to_string(f.power) + " gives a higher-order pole");
                if (pole_index >= 0)
                    throw MultiplePoleCollision("take_residues: two numerator factors share the pole at " +
                                                var.name + " = " + to_string(point));
                pole_index = static_cast<int>(i);
                pole_n = static_cast<int>(std::lround(-c.real()));
            }
        }
        if (pole_index < 0)
            throw NotASimplePole("take_residues: designated point is not a pole of any numerator factor in " +
                                 var.name);

        // Res Gamma(s) at s = -n is (-1)^n / n!. For Gamma(base + var) the
        // contour closes left and the residue enters with +; for
        // Gamma(base - var) the substitution flips the sign once and closing
        // right flips it again. Net factor (-1)^n / n! in both cases.
        double resfac = (pole_n % 2 == 0) ? 1.0 : -1.0;
        for (int i = 2; i <= pole_n; ++i) resfac /= i;

        std::vector<GammaFactor> fs;
        for (size_t i = 0; i < p.factors().size(); ++i) {
            GammaFactor f = p.factors()[i];
            if (static_cast<int>(i) == pole_index) f.power -= 1;
            if (f.power != 0) fs.push_back({f.argument.substituted(var, point), f.power});
        }
        p = GammaProduct(p.prefactor() * resfac, std::move(fs));
        for (auto& mono : monos) mono.exponent = mono.exponent.substituted(var, point);
    }
    return ResidueResult{std::move(p), std::move(monos)};
}

} // namespace

ResidueResult take_residues(const MBIntegral& m, const std::map<VarId, AffineExponent>& points) {
    const GammaProduct& p = m.integrand;

    // Gamma(0)-collapse: a denominator Gamma with vanishing constant argument
    // must be cancelled against the numerator factor that degenerates to
    // Gamma(0) at the designated point. Several numerator arguments vanish
    // there (the n = 0 pole factors do too); the compensator is the candidate
    // whose removal leaves exactly one simple pole per variable.
    int zero_denominator = -1;
    for (size_t i = 0; i < p.factors().size(); ++i) {
        const auto& f = p.factors()[i];
        if (f.power < 0 && f.argument.is_constant() && std::abs(f.argument.constant()) < 1e-9) {
            zero_denominator = static_cast<int>(i);
            break;
        }
    }
    if (zero_denominator < 0) return iterate_residues(p, m.monomials, m.vars, points);

    std::vector<int> candidates;
    for (size_t i = 0; i < p.factors().size(); ++i) {
        const auto& f = p.factors()[i];
        if (f.power <= 0) continue;
        AffineExponent at_point = f.argument;
        for (const auto& [v, pt] : points) at_point = at_point.substituted(v, pt);
        if (at_point.is_constant() && std::abs(at_point.constant()) < 1e-9)
            candidates.push_back(static_cast<int>(i));
    }
    if (candidates.empty())
        throw NotASimplePole("take_residues: Gamma(0) denominator with no compensating numerator factor");

    bool found = false;
    ResidueResult result;
    for (int cand : candidates) {
        std::vector<GammaFactor> fs;
        for (size_t i = 0; i < p.factors().size(); ++i) {
            GammaFactor f = p.factors()[i];
            if (static_cast<int>(i) == zero_denominator) f.power += 1;
            if (static_cast<int>(i) == cand) f.power -= 1;
            if (f.power != 0) fs.push_back(f);
        }
        try {
            ResidueResult r =
                iterate_residues(GammaProduct(p.prefactor(), std::move(fs)), m.monomials, m.vars, points);
            if (found) {
                // Exchangeable pairings at n = 0 poles reach the same residue;
                // anything else is a genuine collision.
                bool same = r.gammas == result.gammas && r.monomials.size() == result.monomials.size();
                for (size_t i = 0; same && i < r.monomials.size(); ++i)
                    same = r.monomials[i].base == result.monomials[i].base &&
                           r.monomials[i].exponent.same_argument(result.monomials[i].exponent);
                if (!same)
                    throw MultiplePoleCollision(
                        "take_residues: compensator choice for the Gamma(0) denominator is ambiguous");
            } else {
                result = std::move(r);
                found = true;
            }
        } catch (const NotASimplePole&) {
            // wrong candidate: a variable lost its designated pole
        }
    }
    if (!found)
        throw NotASimplePole("take_residues: no compensator choice leaves one simple pole per variable");
    return result;
}

} // namespace mb
