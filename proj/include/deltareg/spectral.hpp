#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace deltareg {

// Mapped Chebyshev-Gauss-Lobatto points, ascending, endpoints exactly a, b.
// Throws invalid_domain_error when a == b (or a > b).
std::vector<double> gauss_lobatto_nodes(int N, double a, double b);

// Collocation derivative matrix on the ascending nodes, built from
// barycentric weights with negative-sum diagonal entries, scaled by
// 2/(b - a).
Eigen::MatrixXd differentiation_matrix(int N, double a, double b);

// sigma_j = exp(-alpha (j/N)^p), alpha = -ln(machine epsilon); p even >= 2.
std::vector<double> exponential_filter(int N, int p);

// Dense node-space filter operator: synthesis * diag(sigma) * analysis,
// in the ascending node convention.
Eigen::MatrixXd filter_matrix(int N, int p);

// Nodal values (ascending nodes) -> Chebyshev coefficients, and back.
Eigen::MatrixXd chebyshev_analysis(int N);
Eigen::MatrixXd chebyshev_synthesis(int N);

struct SpectralOperator {
    int N = 0;
    double a = -1.0, b = 1.0;
    std::vector<double> nodes;  // ascending
    Eigen::MatrixXd diff_matrix;
    int filter_order = 12;
    std::vector<double> filter_diag;
    Eigen::MatrixXd filter_mat;
};

SpectralOperator make_operator(int N, double a, double b, int filter_order = 12);

struct TimeStepper {
    // dt as a function of N and the current max wave speed (the advection
    // rule ignores the speed).
    std::function<double(int, double)> dt_rule;
};

TimeStepper advection_stepper();  // dt = 0.5 / N^2
TimeStepper burgers_stepper();    // dt = 0.5 / (N^2 * max(1, max_j |u_j|))

using RhsFn = std::function<void(const Eigen::VectorXd&, double, Eigen::VectorXd&)>;
using InflowFn = std::function<double(double)>;

struct RK3Workspace {
    Eigen::VectorXd u1, u2, L;
};

// One Shu-Osher stage triple:
//   u1 = u + dt L(u)
//   u2 = 3/4 u + 1/4 (u1 + dt L(u1))
//   u  = 1/3 u + 2/3 (u2 + dt L(u2))
// The inflow value (when provided) is imposed strongly at inflow_index
// after each stage, at that stage's time level (t+dt, t+dt/2, t+dt).
// Throws blow_up_error when a stage produces non-finite values.
void tvd_rk3_step(Eigen::VectorXd& u, double t, double dt, const RhsFn& rhs,
                  const InflowFn& inflow, int inflow_index, RK3Workspace& ws);

// Barycentric interpolation on a Chebyshev-Gauss-Lobatto grid (ascending
// nodes as produced by gauss_lobatto_nodes). Exact at the nodes.
double barycentric_interpolate(const std::vector<double>& nodes,
                               const Eigen::VectorXd& values, double x);

}  // namespace deltareg
