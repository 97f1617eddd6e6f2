#pragma once

#include <vector>

#include "mb/gamma_algebra.hpp"

namespace mb {

struct QuadratureConfig {
    double target_rel_tol = 1e-9;
    int initial_nodes_per_fold = 64;
    int max_refinements = 8;
    double truncation_slack = 16.0; // decades below peak where tails are cut

    void validate() const;
};

// Decreasing positive regulators with polynomial extrapolation to 0.
struct RegularizationSchedule {
    std::vector<double> epsilons{1e-1, 5e-2, 2.5e-2, 1.25e-2};
    int extrapolation_order = 2;

    void validate() const;
};

struct EvalResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0; // absolute
    long nodes_used = 0;
    bool converged = false;
    int refinements = 0;
    std::vector<double> refine_history; // |I_k - I_{k-1}| per refinement
};

// Numerical value of a 0-, 1- or 2-fold MB integral along the stored vertical
// contours, including the 1/(2 pi i) per fold. Integrands are evaluated in
// log space; each fold is a uniform grid truncated where the magnitude has
// fallen `truncation_slack` decades below the peak, refined by node doubling
// until the relative change is below target_rel_tol twice in a row.
//
// Throws ContourInvalid when the stored contour is missing or crosses a pole
// region; NotConverged is not an error (converged = false in the result).
EvalResult evaluate(const MBIntegral& m, const MonomialValues& monomial_values,
                    const QuadratureConfig& cfg);

// Same integral at several monomial assignments, sharing the Gamma tables
// across points. Results are identical to per-point evaluate up to the
// common refinement depth (all points refine together).
std::vector<EvalResult> evaluate_multi(const MBIntegral& m,
                                       const std::vector<MonomialValues>& points,
                                       const QuadratureConfig& cfg);

// Pinch-regularized evaluation of an integral whose integrand carries a
// Gamma(A), A ~ 0 denominator: the pinching numerator factor L (identified
// from the infeasible-contour certificate) and the denominator are shifted by
// each epsilon of the schedule, the contour is re-centred between the
// pinching poles, and the values are extrapolated to epsilon -> 0. The
// extrapolation spread is returned as error_estimate; results count as
// converged when every underlying quadrature converged and the spread is
// below max(target_rel_tol, 1e-3) relative.
EvalResult evaluate_pinched(const MBIntegral& m, const MonomialValues& monomial_values,
                            const QuadratureConfig& cfg, const RegularizationSchedule& sched);

// Neville extrapolation of (eps, value) pairs to eps = 0 using the last
// (order+1) points; spread = |difference from the window shifted one point
// towards larger eps|. Throws ExtrapolationDiverged when the sliding-window
// spreads grow monotonically as eps decreases.
std::pair<Complex, double> extrapolate_to_zero(const std::vector<double>& eps,
                                               const std::vector<Complex>& values, int order);

} // namespace mb
