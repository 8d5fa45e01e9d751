#pragma once

#include <vector>

#include "deltareg/rational.hpp"

namespace deltareg {

struct KernelSpec {
    int m = 1;  // vanishing moments, m >= 1
    int k = 0;  // smoothness class C^k at the support boundary, k >= 0
};

// P(xi) = (1 - xi^2)^{k+1} * sum_j a_j xi^{2j}, supported on [-1, 1].
// Coefficients are exact rationals; a float mirror is frozen at
// construction time for hot-path evaluation.
struct DeltaKernel {
    KernelSpec spec{1, 0};
    std::vector<rational> even_coeffs;  // a_0 .. a_{floor(m/2)}
    int degree = 0;                     // 2 * (floor(m/2) + k + 1)
    std::vector<double> even_coeffs_f;

    // P(xi); zero outside [-1, 1]. Horner in xi^2 times the weight factor.
    double operator()(double xi) const;
};

struct ConditionReport {
    double mass_residual = 0.0;
    double max_moment_residual = 0.0;      // moment orders 1..m
    double max_derivative_residual = 0.0;  // derivative orders 0..k at xi = +-1
    double worst() const;
};

// mu(n, k) = integral_{-1}^{1} xi^{2n} (1 - xi^2)^{k+1} dxi, exact.
rational weighted_moment(int n, int k);

// Solve the moment system sum_j a_j mu(i+j, k) = delta_{i0},
// i = 0..floor(m/2), in exact rational arithmetic.
DeltaKernel build_kernel(const KernelSpec& spec);

// (1/epsilon) P(x/epsilon) for |x| <= epsilon, else 0.
double evaluate_delta(const DeltaKernel& kernel, double epsilon, double x);

// Floating-point residuals of the defining conditions, computed from the
// rational coefficients. Unit mass and vanishing moments are genuine
// round-off measures; boundary derivatives are evaluated through the
// factored form, where the weight factor's zeros make them structural.
ConditionReport verify_conditions(const DeltaKernel& kernel);

// Coefficients of P expanded in monomials xi^0 .. xi^degree (odd entries 0).
std::vector<rational> expanded_coefficients(const DeltaKernel& kernel);

// Exact dense solver for the small rational systems used here (moment
// system, quadrature exactness system). Throws construction_failure on a
// singular matrix.
std::vector<rational> solve_rational_system(std::vector<std::vector<rational>> A,
                                            std::vector<rational> b);

}  // namespace deltareg
