#include "mb/mb_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mb/serialization.hpp"

namespace mb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn10 = std::numbers::ln10;

// ---------------------------------------------------------------------------
// Radix-2 FFT for the fold convolution. Sizes are powers of two.

void fft_inplace(std::vector<Complex>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? -1.0 : 1.0);
        Complex wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0);
            for (size_t j = 0; j < len / 2; ++j) {
                Complex u = a[i + j];
                Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

std::vector<Complex> convolve(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const size_t out_n = a.size() + b.size() - 1;
    if (a.size() * b.size() <= 16384) {
        std::vector<Complex> out(out_n, Complex(0.0));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    }
    size_t n = 1;
    while (n < out_n) n <<= 1;
    std::vector<Complex> fa(a.begin(), a.end()), fb(b.begin(), b.end());
    fa.resize(n, Complex(0.0));
    fb.resize(n, Complex(0.0));
    fft_inplace(fa, false);
    fft_inplace(fb, false);
    for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_inplace(fa, true);
    fa.resize(out_n);
    return fa;
}

// ---------------------------------------------------------------------------
// Integrand bookkeeping. Each Gamma factor / monomial term contributes to the
// log-integrand as a function of at most two fold parameters t0, t1 via
// arg = base + i (k0 t0 + k1 t1) with k in {-1, 0, +1} after contour folding.

struct GammaTerm {
    Complex base; // argument at t = 0 on the contour
    int power = 1;
    int k0 = 0, k1 = 0;
};

struct PhaseTerm {
    // exp(w * (i k0 t0 + i k1 t1)) from a monomial x^(affine)
    double lnx = 0.0;
    int k0 = 0, k1 = 0;
};

struct Integrand {
    Complex base_log{0.0, 0.0}; // constant factors, prefactor, monomial constants
    bool identically_zero = false;
    std::vector<GammaTerm> fold[2];   // terms involving exactly one fold
    std::vector<GammaTerm> plus;      // k0 == k1 != 0 (depends on t0 + t1)
    std::vector<GammaTerm> minus;     // k0 == -k1 != 0 (depends on t0 - t1)
    std::vector<PhaseTerm> phases[2]; // monomial phases, per fold
};

Integrand classify(const MBIntegral& m, const MonomialValues& values, const Contour& contour) {
    const size_t nf = m.vars.size();
    Integrand out;
    if (m.integrand.prefactor() == Complex(0.0)) {
        out.identically_zero = true;
        return out;
    }
    out.base_log = std::log(m.integrand.prefactor());

    for (const auto& f : m.integrand.factors()) {
        int k0 = nf > 0 ? f.argument.coefficient(m.vars[0]) : 0;
        int k1 = nf > 1 ? f.argument.coefficient(m.vars[1]) : 0;
        Complex base = f.argument.constant();
        if (k0 != 0) base += static_cast<double>(k0) * contour.at(m.vars[0]);
        if (k1 != 0) base += static_cast<double>(k1) * contour.at(m.vars[1]);
        if (k0 == 0 && k1 == 0) {
            try {
                out.base_log += static_cast<double>(f.power) * log_gamma(base);
            } catch (const PoleError&) {
                if (f.power > 0) throw;
                out.identically_zero = true; // 1/Gamma(pole) = 0
                return out;
            }
            continue;
        }
        GammaTerm t{base, f.power, k0, k1};
        if (k0 != 0 && k1 != 0) {
            if (std::abs(k0) != 1 || std::abs(k1) != 1)
                throw MixedCoefficient("evaluate: contour variable with |coefficient| != 1");
            if (k0 == k1)
                out.plus.push_back(t);
            else
                out.minus.push_back(t);
        } else {
            if (std::abs(k0 + k1) != 1)
                throw MixedCoefficient("evaluate: contour variable with |coefficient| != 1");
            out.fold[k0 != 0 ? 0 : 1].push_back(t);
        }
    }

    for (const auto& mono : m.monomials) {
        auto it = values.find(mono.base);
        if (it == values.end())
            throw DomainError("evaluate: no value supplied for monomial base " + mono.base);
        if (!(it->second > 0.0))
            throw DomainError("evaluate: monomial base " + mono.base + " must be positive");
        double lnx = std::log(it->second);
        Complex e0 = mono.exponent.constant();
        int k0 = nf > 0 ? mono.exponent.coefficient(m.vars[0]) : 0;
        int k1 = nf > 1 ? mono.exponent.coefficient(m.vars[1]) : 0;
        double c0 = k0 != 0 ? contour.at(m.vars[0]) : 0.0;
        double c1 = k1 != 0 ? contour.at(m.vars[1]) : 0.0;
        out.base_log += (e0 + static_cast<double>(k0) * c0 + static_cast<double>(k1) * c1) * lnx;
        if (k0 != 0) out.phases[0].push_back({lnx * k0, 1, 0});
        if (k1 != 0) out.phases[1].push_back({lnx * k1, 0, 1});
    }
    return out;
}

// Log-magnitude of the integrand along one axis (other fold parameter 0),
// used for truncation scans. Gamma poles on the way return +inf, which only
// tightens the scan's peak estimate harmlessly.
double axis_log_magnitude(const Integrand& ig, int fold, double t) {
    double lm = ig.base_log.real();
    auto add = [&](const GammaTerm& g, double tau) {
        Complex arg = g.base + Complex(0.0, tau);
        if (distance_to_nonpositive_integer(arg) < 1e-12)
            lm += g.power > 0 ? 1e6 : -1e6;
        else
            lm += g.power * log_gamma(arg).real();
    };
    for (const auto& g : ig.fold[fold]) add(g, (fold == 0 ? g.k0 : g.k1) * t);
    for (const auto& g : ig.fold[1 - fold]) add(g, 0.0);
    for (const auto& g : ig.plus) add(g, g.k0 * t);
    for (const auto& g : ig.minus) add(g, (fold == 0 ? g.k0 : g.k1) * t);
    return lm;
}

// Spike centres: imaginary offsets where some Gamma argument involving this
// fold becomes real (candidate magnitude peaks).
std::vector<double> spike_centres(const Integrand& ig, int fold) {
    std::vector<double> out{0.0};
    auto consider = [&](const GammaTerm& g) {
        int k = fold == 0 ? g.k0 : g.k1;
        if (k == 0 || g.power <= 0) return;
        out.push_back(-g.base.imag() / k);
    };
    for (const auto& g : ig.fold[fold]) consider(g);
    for (const auto& g : ig.plus) consider(g);
    for (const auto& g : ig.minus) consider(g);
    return out;
}

// Smallest strip half-width around the contour line for this fold: the
// minimum Re of numerator Gamma arguments involving it.
double fold_strip(const Integrand& ig, int fold) {
    double a = 1.0;
    auto consider = [&](const GammaTerm& g) {
        int k = fold == 0 ? g.k0 : g.k1;
        if (k == 0 || g.power <= 0) return;
        a = std::min(a, g.base.real());
    };
    for (const auto& g : ig.fold[fold]) consider(g);
    for (const auto& g : ig.plus) consider(g);
    for (const auto& g : ig.minus) consider(g);
    return std::max(a, 1e-6);
}

struct FoldGrid {
    double lo = 0.0;
    double hi = 0.0;
    size_t n = 0; // nodes: lo + i*h, i = 0..n-1
};

// Find where the axis magnitude drops `decades` below the peak.
std::pair<double, double> truncation_range(const Integrand& ig, int fold, double decades) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double c : spike_centres(ig, fold))
        peak = std::max(peak, axis_log_magnitude(ig, fold, c));
    const double floor_lm = peak - decades * kLn10;

    auto find_edge = [&](double dir) {
        double t = dir;
        for (int i = 0; i < 24 && axis_log_magnitude(ig, fold, t) > floor_lm; ++i) t *= 2.0;
        double inner = t / 2.0, outer = t;
        // The profile may be non-monotonic between spikes; the doubling above
        // overshoots any interior structure by construction of the decay.
        for (int i = 0; i < 40; ++i) {
            double mid = 0.5 * (inner + outer);
            if (axis_log_magnitude(ig, fold, mid) > floor_lm)
                inner = mid;
            else
                outer = mid;
        }
        return outer;
    };
    double lo = find_edge(-1.0);
    double hi = find_edge(1.0);
    for (double c : spike_centres(ig, fold)) {
        lo = std::min(lo, c - 1.0);
        hi = std::max(hi, c + 1.0);
    }
    return {lo, hi};
}

std::vector<Complex> fold_table(const Integrand& ig, int fold, const FoldGrid& g, double h) {
    std::vector<Complex> out(g.n);
    for (size_t i = 0; i < g.n; ++i) {
        double t = g.lo + static_cast<double>(i) * h;
        Complex lg(0.0);
        for (const auto& gt : ig.fold[fold])
            lg += static_cast<double>(gt.power) *
                  log_gamma(gt.base + Complex(0.0, (fold == 0 ? gt.k0 : gt.k1) * t));
        for (const auto& ph : ig.phases[fold]) lg += Complex(0.0, ph.lnx * t);
        Complex w = std::exp(lg);
        if (i == 0 || i + 1 == g.n) w *= 0.5; // trapezoid ends
        out[i] = w;
    }
    return out;
}

std::vector<Complex> diag_table(const std::vector<GammaTerm>& terms, double lo, size_t n, double h,
                                bool difference) {
    std::vector<Complex> out(n);
    for (size_t i = 0; i < n; ++i) {
        double s = lo + static_cast<double>(i) * h;
        Complex lg(0.0);
        for (const auto& gt : terms) {
            // plus terms: arg = base + i k (t0+t1); minus: base + i k0 (t0-t1)
            int k = difference ? gt.k0 : gt.k0;
            lg += static_cast<double>(gt.power) * log_gamma(gt.base + Complex(0.0, k * s));
        }
        out[i] = std::exp(lg);
    }
    return out;
}

struct GridEval {
    Complex sum{0.0, 0.0};
    long nodes = 0;
};

GridEval eval_on_grid(const Integrand& ig, size_t nfolds, const FoldGrid grids[2], double h) {
    GridEval r;
    if (nfolds == 0) {
        r.sum = Complex(1.0);
        r.nodes = 1;
        return r;
    }
    std::vector<Complex> A = fold_table(ig, 0, grids[0], h);
    r.nodes = static_cast<long>(grids[0].n);
    if (nfolds == 1) {
        Complex s(0.0);
        for (const auto& v : A) s += v;
        r.sum = s * h;
        return r;
    }
    std::vector<Complex> B = fold_table(ig, 1, grids[1], h);
    r.nodes += static_cast<long>(grids[1].n);

    const bool has_plus = !ig.plus.empty();
    const bool has_minus = !ig.minus.empty();
    Complex s(0.0);
    if (!has_plus && !has_minus) {
        Complex sa(0.0), sb(0.0);
        for (const auto& v : A) sa += v;
        for (const auto& v : B) sb += v;
        s = sa * sb;
    } else if (has_plus && !has_minus) {
        // sum_{i,j} A_i B_j C(t0_i + t1_j): convolution against the diagonal table.
        std::vector<Complex> D = convolve(A, B);
        std::vector<Complex> C =
            diag_table(ig.plus, grids[0].lo + grids[1].lo, D.size(), h, false);
        for (size_t i = 0; i < D.size(); ++i) s += D[i] * C[i];
        r.nodes += static_cast<long>(D.size());
    } else if (!has_plus && has_minus) {
        std::vector<Complex> Brev(B.rbegin(), B.rend());
        std::vector<Complex> D = convolve(A, Brev);
        // index k corresponds to t0 - t1 = grids0.lo - grids1.hi + k h
        double lo = grids[0].lo - (grids[1].lo + static_cast<double>(grids[1].n - 1) * h);
        std::vector<Complex> C = diag_table(ig.minus, lo, D.size(), h, true);
        for (size_t i = 0; i < D.size(); ++i) s += D[i] * C[i];
        r.nodes += static_cast<long>(D.size());
    } else {
        // Both diagonals present: direct tensor loop with 1-D tables.
        std::vector<Complex> Cp =
            diag_table(ig.plus, grids[0].lo + grids[1].lo, grids[0].n + grids[1].n - 1, h, false);
        double lo_m = grids[0].lo - (grids[1].lo + static_cast<double>(grids[1].n - 1) * h);
        std::vector<Complex> Cm =
            diag_table(ig.minus, lo_m, grids[0].n + grids[1].n - 1, h, true);
        for (size_t i = 0; i < grids[0].n; ++i) {
            Complex row(0.0);
            for (size_t j = 0; j < grids[1].n; ++j)
                row += B[j] * Cp[i + j] * Cm[i + (grids[1].n - 1) - j];
            s += A[i] * row;
        }
        r.nodes += static_cast<long>(grids[0].n * grids[1].n);
    }
    r.sum = s * h * h;
    return r;
}

} // namespace

void QuadratureConfig::validate() const {
    if (target_rel_tol < 1e-12) throw DomainError("QuadratureConfig: target_rel_tol below 1e-12");
    if (initial_nodes_per_fold < 16) throw DomainError("QuadratureConfig: need at least 16 nodes per fold");
    if (max_refinements > 12) throw DomainError("QuadratureConfig: more than 12 refinements");
}

void RegularizationSchedule::validate() const {
    if (epsilons.size() < 3) throw DomainError("RegularizationSchedule: need at least 3 epsilons");
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw DomainError("RegularizationSchedule: epsilons must be positive");
        if (i > 0 && epsilons[i] > 0.7 * epsilons[i - 1])
            throw DomainError("RegularizationSchedule: epsilons must decrease geometrically (ratio <= 0.7)");
    }
    if (extrapolation_order < 1 ||
        extrapolation_order + 1 > static_cast<int>(epsilons.size()))
        throw DomainError("RegularizationSchedule: extrapolation order incompatible with schedule length");
}

std::vector<EvalResult> evaluate_multi(const MBIntegral& m, const std::vector<MonomialValues>& points,
                                       const QuadratureConfig& cfg) {
    cfg.validate();
    const size_t nf = m.vars.size();
    if (nf > 2) throw DomainError("evaluate: integrals with more than 2 folds are unsupported");
    if (points.empty()) return {};

    for (size_t vi = 0; vi < nf; ++vi) {
        if (!m.contour.count(m.vars[vi]))
            throw ContourInvalid("evaluate: no contour component for " + m.vars[vi].name);
    }
    if (nf > 0 && !contour_is_valid(m, m.contour))
        throw ContourInvalid("evaluate: contour crosses a pole-forbidden region (some numerator "
                             "Gamma has non-positive real part)");

    std::vector<EvalResult> results(points.size());

    // Classify once per point (phases differ; Gamma terms coincide). Grids and
    // truncation are shared, taken from the first point's magnitude profile
    // (phases do not affect magnitudes).
    std::vector<Integrand> igs;
    igs.reserve(points.size());
    for (const auto& p : points) igs.push_back(classify(m, p, m.contour));

    bool all_zero = true;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        if (igs[pi].identically_zero) {
            results[pi].converged = true;
            results[pi].value = Complex(0.0);
        } else {
            all_zero = false;
        }
    }
    if (all_zero) return results;

    if (nf == 0) {
        for (size_t pi = 0; pi < points.size(); ++pi) {
            if (igs[pi].identically_zero) continue;
            results[pi].value = std::exp(igs[pi].base_log);
            results[pi].converged = true;
            results[pi].nodes_used = 1;
        }
        return results;
    }

    const double norm = std::pow(2.0 * kPi, -static_cast<double>(nf));

    // Truncation and step from the first non-zero point's profile.
    const Integrand& ig0 = *std::find_if(igs.begin(), igs.end(),
                                         [](const Integrand& g) { return !g.identically_zero; });
    double lo[2] = {0, 0}, hi[2] = {0, 0};
    double strip = 1.0;
    for (size_t f = 0; f < nf; ++f) {
        auto [l, h] = truncation_range(ig0, static_cast<int>(f), cfg.truncation_slack);
        lo[f] = l;
        hi[f] = h;
        strip = std::min(strip, fold_strip(ig0, static_cast<int>(f)));
    }
    // Uniform-grid error for strip-analytic integrands ~ exp(-2 pi a / h).
    double h = 2.0 * kPi * strip / (std::log(1.0 / cfg.target_rel_tol) + 4.0);
    for (size_t f = 0; f < nf; ++f)
        h = std::min(h, (hi[f] - lo[f]) / static_cast<double>(cfg.initial_nodes_per_fold));

    std::vector<Complex> prev(points.size(), Complex(0.0));
    std::vector<int> ok_streak(points.size(), 0);
    long nodes_total = 0;

    for (int refinement = 0; refinement <= cfg.max_refinements; ++refinement) {
        FoldGrid grids[2];
        for (size_t f = 0; f < nf; ++f) {
            grids[f].lo = lo[f];
            grids[f].n = static_cast<size_t>(std::ceil((hi[f] - lo[f]) / h)) + 1;
            grids[f].hi = lo[f] + static_cast<double>(grids[f].n - 1) * h;
        }
        bool all_done = true;
        for (size_t pi = 0; pi < points.size(); ++pi) {
            if (igs[pi].identically_zero) continue;
            GridEval ge = eval_on_grid(igs[pi], nf, grids, h);
            nodes_total += ge.nodes;
            Complex value = std::exp(igs[pi].base_log) * ge.sum * norm;
            EvalResult& r = results[pi];
            double change = std::abs(value - prev[pi]);
            if (refinement > 0) {
                r.refine_history.push_back(change);
                bool small = change <= cfg.target_rel_tol * std::abs(value) ||
                             (std::abs(value) < 1e-14 && change < 1e-14);
                ok_streak[pi] = small ? ok_streak[pi] + 1 : 0;
                r.error_estimate = change;
            }
            r.value = value;
            r.refinements = refinement;
            r.converged = ok_streak[pi] >= 2;
            prev[pi] = value;
            if (!r.converged) all_done = false;
        }
        if (all_done && refinement >= 2) break;
        h *= 0.5;
    }
    for (auto& r : results) r.nodes_used = nodes_total;
    return results;
}

EvalResult evaluate(const MBIntegral& m, const MonomialValues& monomial_values,
                    const QuadratureConfig& cfg) {
    return evaluate_multi(m, {monomial_values}, cfg).at(0);
}

std::pair<Complex, double> extrapolate_to_zero(const std::vector<double>& eps,
                                               const std::vector<Complex>& values, int order) {
    if (eps.size() != values.size() || eps.size() < static_cast<size_t>(order) + 1)
        throw DomainError("extrapolate_to_zero: need at least order+1 samples");

    auto neville_at_zero = [&](size_t first, size_t count) {
        std::vector<Complex> p(values.begin() + first, values.begin() + first + count);
        for (size_t level = 1; level < count; ++level) {
            for (size_t i = 0; i + level < count; ++i) {
                double xi = eps[first + i];
                double xj = eps[first + i + level];
                p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
            }
        }
        return p[0];
    };

    const size_t w = static_cast<size_t>(order) + 1;
    const size_t n = eps.size();
    std::vector<Complex> window_values;
    for (size_t first = 0; first + w <= n; ++first) window_values.push_back(neville_at_zero(first, w));

    Complex result = window_values.back();
    double spread = window_values.size() >= 2
                        ? std::abs(window_values.back() - window_values[window_values.size() - 2])
                        : 0.0;
    if (window_values.size() >= 3) {
        bool growing = true;
        for (size_t i = 1; i + 1 < window_values.size(); ++i) {
            double s0 = std::abs(window_values[i] - window_values[i - 1]);
            double s1 = std::abs(window_values[i + 1] - window_values[i]);
            if (s1 <= s0 * 1.0000001) growing = false;
        }
        if (growing && spread > 1e-12 * (1.0 + std::abs(result)))
            throw ExtrapolationDiverged("extrapolation spread grows as epsilon decreases");
    }
    return {result, spread};
}

EvalResult evaluate_pinched(const MBIntegral& m, const MonomialValues& monomial_values,
                            const QuadratureConfig& cfg, const RegularizationSchedule& sched) {
    cfg.validate();
    sched.validate();

    // Locate the Gamma(A), A ~ 0 denominator.
    int denom_index = -1;
    for (size_t i = 0; i < m.integrand.factors().size(); ++i) {
        const auto& f = m.integrand.factors()[i];
        if (f.power < 0 && f.argument.is_constant() && std::abs(f.argument.constant()) < 1e-9) {
            denom_index = static_cast<int>(i);
            break;
        }
    }
    if (denom_index < 0)
        throw NoPinchDetected("evaluate_pinched: no Gamma(~0) denominator factor in the integrand");

    ContourSolve probe = solve_contour(m);
    if (probe.feasible)
        throw NoPinchDetected("evaluate_pinched: contour is feasible, nothing to regularize");

    // The pinching numerator L: among the binding constraints, the factor
    // whose argument involves the most integration variables.
    int l_index = -1;
    size_t best_vars = 1;
    for (size_t i = 0; i < m.integrand.factors().size(); ++i) {
        const auto& f = m.integrand.factors()[i];
        if (f.power <= 0) continue;
        std::string label = "Re(" + to_string(f.argument) + ") > 0";
        if (std::find(probe.active.begin(), probe.active.end(), label) == probe.active.end()) continue;
        size_t nvars = f.argument.coefficients().size();
        if (nvars > best_vars) {
            best_vars = nvars;
            l_index = static_cast<int>(i);
        } else if (nvars == best_vars && l_index >= 0) {
            throw NoPinchDetected("evaluate_pinched: ambiguous pinching numerator factor");
        }
    }
    if (l_index < 0)
        throw NoPinchDetected("evaluate_pinched: no multi-variable numerator factor among the binding constraints");

    std::vector<double> eps = sched.epsilons;
    std::vector<Complex> values;
    EvalResult out;
    bool all_converged = true;
    for (double e : eps) {
        std::vector<GammaFactor> fs = m.integrand.factors();
        fs[l_index].argument = fs[l_index].argument + Complex(e);
        fs[denom_index].argument = fs[denom_index].argument + Complex(e);
        MBIntegral reg;
        reg.integrand = GammaProduct(m.integrand.prefactor(), std::move(fs));
        reg.monomials = m.monomials;
        reg.vars = m.vars;
        reg.contour = feasible_contour(reg);
        reg.contour_valid = true;
        EvalResult r = evaluate(reg, monomial_values, cfg);
        all_converged = all_converged && r.converged;
        out.nodes_used += r.nodes_used;
        values.push_back(r.value);
    }

    auto [limit, spread] = extrapolate_to_zero(eps, values, sched.extrapolation_order);
    out.value = limit;
    out.error_estimate = spread;
    double rel_floor = std::max(cfg.target_rel_tol, 1e-3);
    out.converged = all_converged && spread <= rel_floor * std::max(std::abs(limit), 1e-14);
    return out;
}

} // namespace mb
