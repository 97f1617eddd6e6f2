#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mb/gamma_algebra.hpp"
#include "mb/serialization.hpp"

namespace mb {

namespace {

constexpr double kBox = 50.0; // desk-scale bound on contour offsets

struct Constraint {
    // sum_i a_i c_i + b >= slack
    std::array<double, 2> a{0.0, 0.0};
    double b = 0.0;
    int factor_index = -1; // -1 for box constraints
    std::string label;
};

// Solve max m s.t. A c + b >= m for k = 1, 2 by vertex enumeration, with the
// lexicographically smallest c among near-optimal vertices.
struct LPResult {
    bool ok = false;
    std::array<double, 2> c{0.0, 0.0};
    double m = -std::numeric_limits<double>::infinity();
};

LPResult solve_maximin_1d(const std::vector<Constraint>& cs) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& c : cs) {
        // a c + b >= m: for a=+1 lower wall at -b, for a=-1 upper wall at b.
        if (c.a[0] > 0)
            lo = std::max(lo, -c.b);
        else if (c.a[0] < 0)
            hi = std::min(hi, c.b);
    }
    LPResult r;
    r.ok = true;
    r.c[0] = 0.5 * (lo + hi);
    r.m = 0.5 * (hi - lo);
    return r;
}

LPResult solve_maximin_2d(const std::vector<Constraint>& cs) {
    const size_t n = cs.size();
    LPResult best;
    std::vector<LPResult> candidates;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                // Active: a.c + b = m for all three -> linear system in (c1, c2, m).
                double M[3][4] = {
                    {cs[i].a[0], cs[i].a[1], -1.0, -cs[i].b},
                    {cs[j].a[0], cs[j].a[1], -1.0, -cs[j].b},
                    {cs[k].a[0], cs[k].a[1], -1.0, -cs[k].b},
                };
                // Gaussian elimination with partial pivoting.
                bool singular = false;
                for (int col = 0; col < 3 && !singular; ++col) {
                    int piv = col;
                    for (int row = col + 1; row < 3; ++row)
                        if (std::abs(M[row][col]) > std::abs(M[piv][col])) piv = row;
                    if (std::abs(M[piv][col]) < 1e-12) {
                        singular = true;
                        break;
                    }
                    std::swap(M[piv], M[col]);
                    for (int row = 0; row < 3; ++row) {
                        if (row == col) continue;
                        double f = M[row][col] / M[col][col];
                        for (int c2 = col; c2 < 4; ++c2) M[row][c2] -= f * M[col][c2];
                    }
                }
                if (singular) continue;
                double c1 = M[0][3] / M[0][0];
                double c2 = M[1][3] / M[1][1];
                double m = M[2][3] / M[2][2];
                bool feas = true;
                for (const auto& c : cs) {
                    if (c.a[0] * c1 + c.a[1] * c2 + c.b < m - 1e-9) {
                        feas = false;
                        break;
                    }
                }
                if (!feas) continue;
                LPResult r;
                r.ok = true;
                r.c = {c1, c2};
                r.m = m;
                candidates.push_back(r);
                if (r.m > best.m) best = r;
            }
    if (!best.ok) return best;
    // Lexicographically smallest c among (near-)optimal vertices.
    for (const auto& r : candidates) {
        if (r.m < best.m - 1e-12) continue;
        if (r.c[0] < best.c[0] - 1e-12 ||
            (std::abs(r.c[0] - best.c[0]) <= 1e-12 && r.c[1] < best.c[1] - 1e-12))
            best = r;
    }
    return best;
}

} // namespace

ContourSolve solve_contour(const MBIntegral& m, double margin) {
    const size_t k = m.vars.size();
    if (k > 2) throw DomainError("solve_contour: at most 2 integration variables supported");

    ContourSolve out;
    std::vector<Constraint> cs;
    double const_slack = std::numeric_limits<double>::infinity();
    std::vector<std::string> const_violations;

    for (size_t fi = 0; fi < m.integrand.factors().size(); ++fi) {
        const auto& f = m.integrand.factors()[fi];
        if (f.power <= 0) continue; // 1/Gamma is entire
        Constraint c;
        bool depends = false;
        for (size_t vi = 0; vi < k; ++vi) {
            int kk = f.argument.coefficient(m.vars[vi]);
            c.a[vi] = kk;
            if (kk != 0) depends = true;
        }
        double b = f.argument.constant().real();
        for (const auto& [v, kk] : f.argument.coefficients()) {
            // Variables not under integration would indicate a malformed input.
            if (std::find(m.vars.begin(), m.vars.end(), v) == m.vars.end())
                throw DomainError("solve_contour: integrand depends on free variable " + v.name);
            (void)kk;
        }
        c.b = b;
        c.factor_index = static_cast<int>(fi);
        c.label = "Re(" + to_string(f.argument) + ") > 0";
        if (!depends) {
            // Constant numerator Gamma: its real part is fixed; it cannot be
            // helped by the contour but still gates validity.
            const_slack = std::min(const_slack, b);
            if (b < margin) const_violations.push_back(c.label);
            continue;
        }
        cs.push_back(std::move(c));
    }

    // Desk-scale box, so the maximin problem is always bounded.
    for (size_t vi = 0; vi < k; ++vi) {
        Constraint lo, hi;
        lo.a[vi] = 1.0;
        lo.b = kBox;
        lo.label = m.vars[vi].name + " > -box";
        hi.a[vi] = -1.0;
        hi.b = kBox;
        hi.label = m.vars[vi].name + " < box";
        cs.push_back(lo);
        cs.push_back(hi);
    }

    LPResult lp;
    if (k == 0) {
        lp.ok = true;
        lp.m = std::numeric_limits<double>::infinity();
    } else if (k == 1) {
        lp = solve_maximin_1d(cs);
    } else {
        lp = solve_maximin_2d(cs);
    }

    double slack = std::min(lp.m, const_slack);
    out.min_slack = slack;
    out.feasible = lp.ok && slack >= margin && const_violations.empty();
    for (size_t vi = 0; vi < k; ++vi) out.contour[m.vars[vi]] = lp.c[vi];

    if (!const_violations.empty()) out.active = const_violations;
    // Constraints active at the optimum witness the pinch when infeasible.
    for (const auto& c : cs) {
        if (c.factor_index < 0) continue;
        double s = c.a[0] * lp.c[0] + c.a[1] * lp.c[1] + c.b;
        if (s <= lp.m + 1e-9) out.active.push_back(c.label);
    }
    return out;
}

Contour feasible_contour(const MBIntegral& m, double margin) {
    ContourSolve s = solve_contour(m, margin);
    if (!s.feasible) {
        std::string msg = "no feasible straight contour (max slack " + std::to_string(s.min_slack) +
                          " < margin " + std::to_string(margin) + "); binding constraints:";
        for (const auto& a : s.active) msg += " [" + a + "]";
        throw Infeasible(msg, s.active);
    }
    return s.contour;
}

bool contour_is_valid(const MBIntegral& m, const Contour& c) {
    for (const auto& f : m.integrand.factors()) {
        if (f.power <= 0) continue;
        if (f.argument.real_at(c) <= 0.0) return false;
    }
    return true;
}

} // namespace mb
