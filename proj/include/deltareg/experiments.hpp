#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "deltareg/regularizer.hpp"
#include "deltareg/spectral.hpp"

namespace deltareg {

enum class ProblemKind { advection, burgers };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::advection;
    double a = -1.0, b = 1.0;
    double t_final = 2.0;
    std::function<double(double)> initial;
    std::function<double(double)> inflow_value;  // of t, at the left boundary
    std::function<double(double)> source;        // stationary; null = zero
    bool quadratic_flux = false;                 // false: F(u) = u, true: F(u) = u^2/2
};

// Canonical problem setups. The source starts as the exact singular
// profile; regularized runs replace it.
//   advection: domain [-1,1], u(x,0) = sin(pi x), inflow sin(pi(-1-t)).
//   burgers:   domain [0,2],  u(x,0) = x,         inflow 0.
ProblemSpec make_problem(ProblemKind kind);

// 3 cos(5 pi x) on |x| <= 3/10 (windowed with the half-value convention at
// the jump points).
double advection_source(double x);

// Burgers source: 3 cos(5 pi x) on |x - 1| <= 3/10. Note this equals the
// advection profile *negated* and shifted by 1, because
// cos(5 pi (x-1)) = -cos(5 pi x): the cosine oscillation keeps its global
// phase and only the window moves. Shifting the signed profile instead
// produces a flow that chokes on the leading negative lobe and develops an
// upstream-moving shock, with no high-order convergence anywhere.
double burgers_source(double x);

// sin(pi(x - t)) + A(x) - A(x - t), where A is the clamped antiderivative
// of the advection source.
double advection_exact(double x, double t);

// Sine-spaced particle positions with values sampled from the problem's
// singular source: advection xi_i = 0.3 sin(pi(-1/2 + i/N_p)); burgers
// shifted by +1; i = 0..N_p.
ParticleField particle_grid(ProblemKind kind, int N_p);

constexpr int default_particle_Np(ProblemKind kind) {
    return kind == ProblemKind::advection ? 2001 : 1999;
}

struct SolveOptions {
    bool use_filter = false;
    int filter_order = 12;
    bool progress = false;  // step diagnostics to stderr
};

// Integrate u_t = -dF(u)/dx + source(x) to t_final; source values at the
// collocation nodes are evaluated once up front. Returns u(., t_final).
Eigen::VectorXd solve(const ProblemSpec& problem, const SpectralOperator& op,
                      const TimeStepper& stepper, const SolveOptions& options = {});

// P = (xi_0 + eps, xi_N - eps) open; R = the two closed bands of width
// 2 eps around xi_0 and xi_N; Q = the rest of [a, b].
struct RegionPartition {
    double xi_first = 0, xi_last = 0, epsilon = 0;
    double a = 0, b = 0;
    char region_of(double x) const;  // 'P', 'R' or 'Q'
};

RegionPartition partition_domain(const ParticleField& field, double epsilon,
                                 double a, double b);

// Discrete weighted-L2 norm (Chebyshev weight) of u_num - u_ref restricted
// to nodes whose region tag appears in `regions` (e.g. "P", "Q", "PQ").
// Gauss-Lobatto quadrature weights pi/N (halved at the endpoints) times
// the domain half-length absorb the singular weight.
double weighted_error(const Eigen::VectorXd& u_num, const Eigen::VectorXd& u_ref,
                      const std::string& regions, const RegionPartition& partition,
                      const SpectralOperator& op);

struct FitResult {
    double order = 0.0;     // negated least-squares slope of log err vs log N
    double residual = 0.0;  // RMS residual of the fit
};

FitResult fit_convergence(const std::vector<int>& N_values,
                          const std::vector<double>& errors);

// Fine-grid solution exposed through barycentric interpolation.
struct Reference {
    SpectralOperator op;
    Eigen::VectorXd values;
    double operator()(double x) const;
};

Reference self_convergence_reference(const ProblemSpec& problem, int N_fine,
                                     const SolveOptions& options = {});

struct StudyConfig {
    ProblemKind kind = ProblemKind::advection;
    int m = 7, k = 4, q = 2;
    double epsilon = -1.0;  // <= 0: computed by optimal_epsilon with constant C
    double C = 0.5;
    std::vector<int> N_values;  // empty: desk default {60, 100, 140, 200}
    int N_ref = 500;            // self-convergence reference resolution
    bool regularized = true;    // false: sample the singular source directly
    std::optional<bool> use_filter;  // default: on for burgers, off for advection
    int filter_order = 12;
    int N_p = -1;  // <= 0: kind default (2001 advection / 1999 burgers)
    bool progress = false;
};

struct ConvergenceReport {
    std::vector<int> N_values;
    std::vector<double> errors_P, errors_Q, errors_PQ, errors_all;
    double order_P = 0, order_Q = 0, order_PQ = 0;
    double residual_P = 0, residual_Q = 0;
    double epsilon = 0;
};

ConvergenceReport run_convergence_study(const StudyConfig& config);

// Max pointwise |S - S_tilde| over a uniform scan of the interior region P.
double max_regularization_error_on_P(ProblemKind kind, int m, int k, int q,
                                     double epsilon, int scan_points = 2001,
                                     int N_p = -1);

}  // namespace deltareg
