#include "mb/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace mb {

namespace {

std::string format_double(double v) {
    if (v == 0.0) return "0"; // normalizes -0
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, size_t& pos) {
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc())
        throw ParseError("expected a number at '" + std::string(s.substr(pos)) + "'");
    pos += static_cast<size_t>(res.ptr - begin);
    return v;
}

void skip_spaces(std::string_view s, size_t& pos) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

std::string parse_ident(std::string_view s, size_t& pos) {
    size_t start = pos;
    if (pos >= s.size() || !is_ident_start(s[pos]))
        throw ParseError("expected an identifier at '" + std::string(s.substr(pos)) + "'");
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    return std::string(s.substr(start, pos - start));
}

// Complex token: re or re+im'i' / re-im'i', no inner spaces.
Complex parse_complex_token(std::string_view s, size_t& pos) {
    double re = parse_double(s, pos);
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        size_t save = pos;
        double im = parse_double(s, pos);
        if (pos < s.size() && s[pos] == 'i') {
            ++pos;
            return Complex(re, im);
        }
        pos = save;
    }
    if (pos < s.size() && s[pos] == 'i') { // pure imaginary written 0+..i normally; accept re='im' i
        ++pos;
        return Complex(0.0, re);
    }
    return Complex(re, 0.0);
}

void expect(std::string_view s, size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c)
        throw ParseError(std::string("expected '") + c + "' at '" + std::string(s.substr(pos)) + "'");
    ++pos;
}

bool looks_like_var_term(std::string_view s, size_t pos) {
    // sign, optional integer multiplier + '*', identifier
    if (pos >= s.size() || (s[pos] != '+' && s[pos] != '-')) return false;
    ++pos;
    if (pos < s.size() && is_ident_start(s[pos])) return true;
    size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        ++pos;
        ++digits;
    }
    return digits > 0 && pos < s.size() && s[pos] == '*';
}

AffineExponent parse_affine_at(std::string_view s, size_t& pos) {
    std::map<VarId, int> coeffs;
    Complex constant(0.0);
    bool have_constant = false;
    bool any = false;
    while (true) {
        skip_spaces(s, pos);
        if (pos >= s.size() || s[pos] == ')' || s[pos] == ']' || s[pos] == ',') break;
        if (looks_like_var_term(s, pos)) {
            int sign = s[pos] == '-' ? -1 : 1;
            ++pos;
            int mult = 1;
            if (!is_ident_start(s[pos])) {
                size_t mpos = pos;
                mult = static_cast<int>(parse_double(s, mpos));
                pos = mpos;
                expect(s, pos, '*');
            }
            std::string name = parse_ident(s, pos);
            coeffs[VarId{name}] += sign * mult;
        } else {
            if (have_constant) throw ParseError("two constant terms in affine expression");
            constant = parse_complex_token(s, pos);
            have_constant = true;
        }
        any = true;
    }
    if (!any) throw ParseError("empty affine expression");
    return AffineExponent(constant, std::move(coeffs), /*allow_general_coefficients=*/true);
}

std::string format_affine(const AffineExponent& a) {
    std::string out;
    for (const auto& [v, k] : a.coefficients()) {
        if (!out.empty()) out += ' ';
        out += k < 0 ? '-' : '+';
        int mag = std::abs(k);
        if (mag != 1) out += std::to_string(mag) + "*";
        out += v.name;
    }
    Complex c = a.constant();
    bool zero_const = c.real() == 0.0 && c.imag() == 0.0;
    if (out.empty() || !zero_const) {
        if (!out.empty()) out += ' ';
        out += to_string(c);
    }
    return out;
}

GammaProduct parse_product_at(std::string_view s, size_t& pos) {
    Complex prefactor(1.0);
    std::vector<GammaFactor> factors;
    bool first = true;
    while (true) {
        skip_spaces(s, pos);
        if (pos >= s.size()) break;
        if (!first) {
            expect(s, pos, '*');
            skip_spaces(s, pos);
        }
        if (s.compare(pos, 6, "Gamma(") == 0) {
            pos += 6;
            AffineExponent arg = parse_affine_at(s, pos);
            expect(s, pos, ')');
            int power = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                size_t p2 = pos;
                power = static_cast<int>(parse_double(s, p2));
                pos = p2;
            }
            factors.push_back({arg, power});
        } else {
            if (!first) throw ParseError("prefactor must be the leading term of a product");
            prefactor = parse_complex_token(s, pos);
        }
        first = false;
        skip_spaces(s, pos);
        if (pos >= s.size() || s[pos] != '*') break;
    }
    return GammaProduct(prefactor, std::move(factors));
}

} // namespace

std::string to_string(Complex c) {
    if (c.imag() == 0.0) return format_double(c.real());
    std::string out = format_double(c.real());
    out += c.imag() < 0.0 ? '-' : '+';
    out += format_double(std::abs(c.imag()));
    out += 'i';
    return out;
}

std::string to_string(const AffineExponent& a) { return format_affine(a); }

std::string to_string(const GammaProduct& p) {
    std::string out;
    bool unit_prefactor = p.prefactor() == Complex(1.0);
    if (!unit_prefactor || p.factors().empty()) out = to_string(p.prefactor());
    for (const auto& f : p.factors()) {
        if (!out.empty()) out += " * ";
        out += "Gamma(" + format_affine(f.argument) + ")";
        if (f.power != 1) out += "^" + std::to_string(f.power);
    }
    return out;
}

std::string to_string(const MBIntegral& m) {
    std::string out = "MB[";
    bool first = true;
    for (const auto& v : m.vars) {
        if (!first) out += ", ";
        first = false;
        out += v.name + " @ ";
        auto it = m.contour.find(v);
        out += it == m.contour.end() ? "?" : format_double(it->second);
    }
    out += "] ";
    for (const auto& mono : m.monomials) out += mono.base + "^(" + format_affine(mono.exponent) + ") * ";
    out += to_string(m.integrand);
    return out;
}

std::string canonical_digest(const GammaProduct& p, int digits) {
    auto round_c = [digits](Complex z) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", digits, z.real());
        std::string out(buf);
        double im = z.imag();
        if (std::abs(im) >= std::pow(10.0, -digits) * std::max(1.0, std::abs(z.real()))) {
            std::snprintf(buf, sizeof(buf), "%+.*g", digits, im);
            out += buf;
            out += 'i';
        }
        return out;
    };
    std::string out;
    if (!(p.prefactor() == Complex(1.0)) || p.factors().empty()) out = round_c(p.prefactor());
    for (const auto& f : p.factors()) {
        if (!out.empty()) out += " * ";
        out += "Gamma(";
        std::string terms;
        for (const auto& [v, k] : f.argument.coefficients()) {
            if (!terms.empty()) terms += ' ';
            terms += k < 0 ? '-' : '+';
            if (std::abs(k) != 1) terms += std::to_string(std::abs(k)) + "*";
            terms += v.name;
        }
        Complex c = f.argument.constant();
        bool tiny = std::abs(c) < std::pow(10.0, -digits);
        if (terms.empty() || !tiny) {
            if (!terms.empty()) terms += ' ';
            terms += round_c(c);
        }
        out += terms + ")";
        if (f.power != 1) out += "^" + std::to_string(f.power);
    }
    return out;
}

Complex parse_complex(const std::string& text) {
    size_t pos = 0;
    Complex c = parse_complex_token(text, pos);
    skip_spaces(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters in complex literal: '" + text + "'");
    return c;
}

AffineExponent parse_affine(const std::string& text) {
    size_t pos = 0;
    AffineExponent a = parse_affine_at(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters in affine expression: '" + text + "'");
    return a;
}

GammaProduct parse_gamma_product(const std::string& text) {
    size_t pos = 0;
    GammaProduct p = parse_product_at(text, pos);
    skip_spaces(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters in product: '" + text + "'");
    return p;
}

MBIntegral parse_mb_integral(const std::string& text) {
    std::string_view s(text);
    size_t pos = 0;
    if (s.compare(pos, 3, "MB[") != 0) throw ParseError("integral must start with 'MB['");
    pos += 3;
    MBIntegral m;
    while (true) {
        skip_spaces(s, pos);
        if (pos < s.size() && s[pos] == ']') {
            ++pos;
            break;
        }
        std::string name = parse_ident(s, pos);
        skip_spaces(s, pos);
        expect(s, pos, '@');
        skip_spaces(s, pos);
        VarId v{name};
        m.vars.push_back(v);
        if (pos < s.size() && s[pos] == '?') {
            ++pos;
        } else {
            m.contour[v] = parse_double(s, pos);
        }
        skip_spaces(s, pos);
        if (pos < s.size() && s[pos] == ',') ++pos;
    }
    skip_spaces(s, pos);
    // Monomials: ident '^(' affine ') * ' ... until the product part.
    while (pos < s.size() && is_ident_start(s[pos]) && s.compare(pos, 6, "Gamma(") != 0) {
        std::string base = parse_ident(s, pos);
        expect(s, pos, '^');
        expect(s, pos, '(');
        AffineExponent e = parse_affine_at(s, pos);
        expect(s, pos, ')');
        m.monomials.push_back({base, e});
        skip_spaces(s, pos);
        expect(s, pos, '*');
        skip_spaces(s, pos);
    }
    m.integrand = parse_product_at(s, pos);
    if (m.contour.size() == m.vars.size() && !m.vars.empty())
        m.contour_valid = contour_is_valid(m, m.contour);
    return m;
}

} // namespace mb
