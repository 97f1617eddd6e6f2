#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "mb/mb_engine.hpp"
#include "mb/triangle.hpp"

namespace mb {

// Executable identity checks. Each check computes both sides of one identity
// and returns a structured report; nothing is asserted in-process.

struct CheckReport {
    std::string identity;
    std::vector<std::pair<std::string, std::string>> params;
    Complex lhs{0.0, 0.0};
    Complex rhs{0.0, 0.0};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> diagnostics;
};

struct CheckOptions {
    QuadratureConfig quad{};
    RegularizationSchedule sched{};
    // Negative = per-check default (barnes1 1e-8, star_triangle 1e-6,
    // fourier_phi1 1e-6, r2_pointwise 1e-5, orthogonality 1e-3, r1 CoV 1e-4).
    double tolerance = -1.0;
    std::uint64_t seed = 0;
};

// First Barnes lemma: contour quadrature against the closed-form rewrite.
CheckReport check_barnes1(const std::array<Complex, 4>& lambda, const CheckOptions& opt = {});

// Star-triangle relation at the uniqueness point sum(alpha) = d. Symbolic
// path: iterated residues reproduce the right-hand Gamma string exactly.
// Numeric path: J evaluated on a circle of complex displacements
// alpha3 -> alpha3 - eps and analytically continued to eps = 0.
CheckReport check_star_triangle(const TriangleSpec& alpha, double x, double y,
                                const CheckOptions& opt = {});
std::vector<CheckReport> check_star_triangle_batch(const TriangleSpec& alpha,
                                                   const std::vector<std::pair<double, double>>& points,
                                                   const CheckOptions& opt = {});

// J(1,1,1; d=4)(x,y) against the n = 1 ladder function.
CheckReport check_fourier_phi1(double x, double y, const CheckOptions& opt = {});

// Orthogonality: pinch-regularized double integral of x^u y^v f(u,v) against
// x^{-a1} y^{-a2}, plus the symbolic residue path (exact canonical equality).
CheckReport check_orthogonality(const TriangleSpec& alpha, double x, double y,
                                const CheckOptions& opt = {});

// Pointwise check of the two-kernel reduction at finite eps: regularized
// double integral against the closed form.
CheckReport check_R2_pointwise(const TriangleSpec& alpha, Complex u, Complex v, double eps,
                               const CheckOptions& opt = {});

// EXPERIMENTAL: constancy of LHS / RHS-bracket over a (u,v) grid under the
// D^{(u,v)}[1,1,nu] reading; reports the fitted factor as lhs/rhs and the
// coefficient of variation as rel_err.
CheckReport check_R1_ratio(const std::array<Complex, 3>& eps_triple,
                           const std::vector<std::pair<Complex, Complex>>& grid,
                           const CheckOptions& opt = {});

// Stable-key-order JSON object (one line) for a report; timing excluded on
// request so repeated runs are byte-identical.
std::string report_to_json(const CheckReport& r, bool include_timing = true);

// CSV row: identity, params hash (FNV-1a of the serialized params), rel_err,
// passed. Header matching the row layout:
std::string report_csv_header();
std::string report_to_csv(const CheckReport& r);

} // namespace mb
