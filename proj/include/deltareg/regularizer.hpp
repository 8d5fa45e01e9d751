#pragma once

#include <functional>
#include <vector>

#include "deltareg/delta_kernel.hpp"

namespace deltareg {

struct ParticleField {
    std::vector<double> positions;            // strictly increasing
    std::vector<double> values;               // S(xi_i), same length
    std::vector<double> densities;            // optional: empty, or same length, all > 0
    std::function<double(double)> source_fn;  // optional analytic source

    int panel_count() const { return static_cast<int>(positions.size()) - 1; }
    void validate() const;  // throws validation_error on broken invariants
};

// Closed Newton-Cotes panel rule on the reference interval [0, 1] with
// nodes j/q. weights sum to 1 (exact integration of constants).
struct QuadratureRule {
    int q = 1;
    std::vector<rational> weights_exact;
    std::vector<double> weights;
};

enum class RegularizationMode {
    // Each particle interval [xi_i, xi_{i+1}] is subdivided with step
    // h_i = (xi_{i+1} - xi_i)/q and the analytic source is sampled at the
    // sub-nodes. Requires source_fn.
    analytic_subdivision,
    // Only the stored samples are used. Without densities, consecutive
    // groups of q+1 samples form a panel and the weights come from
    // integrating the local Lagrange interpolant (this requires the panel
    // count to be a multiple of q). With densities, each sample
    // contributes S(xi_i)/n(xi_i) directly.
    samples_only,
};

struct RegularizedSource {
    DeltaKernel kernel;
    double epsilon = 0.0;
    const ParticleField* particles = nullptr;  // non-owning
    RegularizationMode mode = RegularizationMode::analytic_subdivision;
};

// Weights for nodes j/q on [0, 1], from the exactness system for monomials
// of degree 0..q. Supported range 1 <= q <= 8 (beyond that closed
// Newton-Cotes weights change sign); outside it throws
// unsupported_rule_error.
QuadratureRule newton_cotes_weights(int q);

// C * (sum_i h_i^{q+2})^{1/(m+q+3)}. Throws invalid_input_error on an
// empty panel list, validation_error on nonpositive entries or C.
double optimal_epsilon(int m, int q, const std::vector<double>& panel_lengths,
                       double C);

// True iff m >= 2, k >= 2 and q <= min(m, k) - 1. Callers that proceed
// with a false result are outside the supported error analysis.
bool validate_exactness_constraint(int m, int k, int q);

// Composite Newton-Cotes approximation of the mollified source at x,
// summing only panels that intersect [x - eps, x + eps]. Panels are never
// extended beyond the particle span, so points within eps of the span
// edges receive a (documented) truncated sum.
double regularize(const RegularizedSource& source, const QuadratureRule& rule,
                  double x);

// Panel-refined Gauss evaluation of the exact mollification integral,
// used as the independent reference for the quadrature-based path. The
// panel count doubles until two consecutive refinement levels agree to
// 1e-13 absolute; exhausting the refinement budget (or a non-finite
// value) throws oracle_failure_error.
double convolve_oracle(const DeltaKernel& kernel,
                       const std::function<double(double)>& source_fn,
                       double epsilon, double x);

// Sub-step lengths h_i = (xi_{i+1} - xi_i)/q, the inputs to optimal_epsilon.
std::vector<double> substep_lengths(const ParticleField& field, int q);

}  // namespace deltareg
