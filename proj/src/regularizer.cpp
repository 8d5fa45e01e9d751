#include "deltareg/regularizer.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

#include "deltareg/errors.hpp"

namespace deltareg {

void ParticleField::validate() const {
    if (positions.size() < 1)
        throw invalid_input_error("particle field: no particles");
    if (values.size() != positions.size())
        throw invalid_input_error("particle field: values/positions length mismatch");
    for (size_t i = 1; i < positions.size(); ++i)
        if (!(positions[i] > positions[i - 1]))
            throw invalid_input_error("particle field: positions must be strictly increasing");
    if (!densities.empty()) {
        if (densities.size() != positions.size())
            throw invalid_input_error("particle field: densities length mismatch");
        for (double d : densities)
            if (!(d > 0.0))
                throw invalid_input_error("particle field: densities must be positive");
    }
}

QuadratureRule newton_cotes_weights(int q) {
    if (q < 1 || q > 8)
        throw unsupported_rule_error(
            "newton_cotes_weights: q must be in [1, 8] (closed rules with "
            "positive-definite behavior)");
    // Exactness system: sum_j alpha_j (j/q)^p = 1/(p+1), p = 0..q.
    const int n = q + 1;
    std::vector<std::vector<rational>> A(n, std::vector<rational>(n));
    std::vector<rational> b(n);
    for (int p = 0; p < n; ++p) {
        b[p] = rational(1, p + 1);
        for (int j = 0; j < n; ++j) {
            rational node(j, q);
            rational power = 1;
            for (int e = 0; e < p; ++e) power *= node;
            A[p][j] = power;
        }
    }
    QuadratureRule rule;
    rule.q = q;
    rule.weights_exact = solve_rational_system(std::move(A), std::move(b));
    rule.weights.resize(rule.weights_exact.size());
    std::transform(rule.weights_exact.begin(), rule.weights_exact.end(),
                   rule.weights.begin(), [](const rational& r) { return to_double(r); });
    return rule;
}

double optimal_epsilon(int m, int q, const std::vector<double>& panel_lengths,
                       double C) {
    if (panel_lengths.empty())
        throw invalid_input_error("optimal_epsilon: empty panel list");
    if (m < 1 || q < 1)
        throw validation_error("optimal_epsilon: m and q must be positive");
    if (!(C > 0.0))
        throw validation_error("optimal_epsilon: C must be positive");
    double sum = 0.0;
    for (double h : panel_lengths) {
        if (!(h > 0.0))
            throw validation_error("optimal_epsilon: panel lengths must be positive");
        sum += std::pow(h, q + 2);
    }
    return C * std::pow(sum, 1.0 / (m + q + 3));
}

bool validate_exactness_constraint(int m, int k, int q) {
    if (m < 2 || k < 2) return false;  // outside the supported hypotheses
    return q <= std::min(m, k) - 1;
}

std::vector<double> substep_lengths(const ParticleField& field, int q) {
    if (q < 1) throw validation_error("substep_lengths: q must be positive");
    std::vector<double> h;
    h.reserve(std::max(field.panel_count(), 0));
    for (int i = 0; i + 1 < static_cast<int>(field.positions.size()); ++i)
        h.push_back((field.positions[i + 1] - field.positions[i]) / q);
    return h;
}

namespace {

// Integrals of the Lagrange basis over a panel of q+1 (possibly nonuniform)
// nodes, in the local coordinate u = (x - t_0)/(t_q - t_0). Returned
// weights are relative to the physical panel length.
std::vector<double> lagrange_panel_weights(const double* t, int q) {
    const double span = t[q] - t[0];
    std::vector<double> u(q + 1);
    for (int j = 0; j <= q; ++j) u[j] = (t[j] - t[0]) / span;

    // master polynomial prod_j (x - u_j), coefficients ascending
    std::vector<double> master(q + 2, 0.0);
    master[0] = 1.0;
    int deg = 0;
    for (int j = 0; j <= q; ++j) {
        for (int i = deg + 1; i >= 1; --i)
            master[i] = master[i - 1] - u[j] * master[i];
        master[0] *= -u[j];
        ++deg;
    }

    std::vector<double> weights(q + 1);
    for (int j = 0; j <= q; ++j) {
        // synthetic division by (x - u_j)
        std::vector<double> basis(q + 1);
        double carry = master[q + 1];
        for (int i = q; i >= 0; --i) {
            basis[i] = carry;
            carry = master[i] + carry * u[j];
        }
        double denom = 0.0, xp = 1.0;
        // denom = prod_{i != j} (u_j - u_i) = basis evaluated at u_j
        for (int i = 0; i <= q; ++i) { denom += basis[i] * xp; xp *= u[j]; }
        double integral = 0.0;
        for (int i = 0; i <= q; ++i) integral += basis[i] / (i + 1);
        weights[j] = integral / denom;
    }
    return weights;
}

}  // namespace

double regularize(const RegularizedSource& source, const QuadratureRule& rule,
                  double x) {
    if (source.particles == nullptr)
        throw invalid_input_error("regularize: missing particle field");
    const ParticleField& field = *source.particles;
    field.validate();
    const double eps = source.epsilon;
    if (!(eps > 0.0))
        throw invalid_scaling_error("regularize: epsilon must be positive");
    const int q = rule.q;
    const auto& pos = field.positions;
    const int n_pts = static_cast<int>(pos.size());
    const double lo = x - eps, hi = x + eps;

    double total = 0.0;

    if (source.mode == RegularizationMode::samples_only && !field.densities.empty()) {
        // Direct weighted summation: each sample carries weight 1/n(xi_i).
        const int first = static_cast<int>(
            std::lower_bound(pos.begin(), pos.end(), lo) - pos.begin());
        for (int i = first; i < n_pts && pos[i] <= hi; ++i)
            total += field.values[i] / field.densities[i] *
                     evaluate_delta(source.kernel, eps, x - pos[i]);
        return total;
    }

    if (source.mode == RegularizationMode::analytic_subdivision) {
        if (!field.source_fn)
            throw validation_error(
                "regularize: analytic-subdivision mode requires a source callable");
        if (n_pts < 2) return 0.0;
        // panels intersecting [x-eps, x+eps]
        int i_lo = static_cast<int>(
            std::lower_bound(pos.begin() + 1, pos.end(), lo) - (pos.begin() + 1));
        for (int i = i_lo; i + 1 < n_pts && pos[i] <= hi; ++i) {
            const double len = pos[i + 1] - pos[i];
            const double h = len / q;
            double panel = 0.0;
            for (int j = 0; j <= q; ++j) {
                const double node = pos[i] + j * h;
                const double d = evaluate_delta(source.kernel, eps, x - node);
                if (d != 0.0) panel += rule.weights[j] * field.source_fn(node) * d;
            }
            total += len * panel;
        }
        return total;
    }

    // samples-only without densities: consecutive groups of q+1 samples
    // form a panel; weights integrate the local Lagrange interpolant.
    const int n_panels = n_pts - 1;
    if (n_panels < 1) return 0.0;
    if (n_panels % q != 0)
        throw validation_error(
            "regularize: samples-only mode needs the panel count to be a "
            "multiple of q (or explicit densities)");
    const int n_groups = n_panels / q;
    int g_lo = static_cast<int>(
        std::lower_bound(pos.begin() + 1, pos.end(), lo) - (pos.begin() + 1)) / q;
    for (int g = g_lo; g < n_groups && pos[g * q] <= hi; ++g) {
        const double* t = pos.data() + g * q;
        const double span = t[q] - t[0];
        std::vector<double> w = lagrange_panel_weights(t, q);
        double panel = 0.0;
        for (int j = 0; j <= q; ++j) {
            const double d = evaluate_delta(source.kernel, eps, x - t[j]);
            if (d != 0.0) panel += w[j] * field.values[g * q + j] * d;
        }
        total += span * panel;
    }
    return total;
}

double convolve_oracle(const DeltaKernel& kernel,
                       const std::function<double(double)>& source_fn,
                       double epsilon, double x) {
    if (!(epsilon > 0.0))
        throw invalid_scaling_error("convolve_oracle: epsilon must be positive");
    if (!source_fn)
        throw invalid_input_error("convolve_oracle: missing source callable");
    auto integrand = [&](double xi) {
        return source_fn(xi) * evaluate_delta(kernel, epsilon, x - xi);
    };
    // panel-refined Gauss: split [x - eps, x + eps] into 2^l panels of
    // 30-point Gauss and refine until consecutive levels agree to 1e-13
    // in absolute terms.
    using gauss30 = boost::math::quadrature::gauss<double, 30>;
    const double lo = x - epsilon, hi = x + epsilon;
    auto panel_sum = [&](int panels) {
        const double width = (hi - lo) / panels;
        double total = 0.0;
        for (int i = 0; i < panels; ++i)
            total += gauss30::integrate(integrand, lo + i * width, lo + (i + 1) * width);
        return total;
    };
    double prev = panel_sum(1);
    for (int panels = 2; panels <= 4096; panels *= 2) {
        const double value = panel_sum(panels);
        if (std::isfinite(value) && std::isfinite(prev) &&
            std::abs(value - prev) <= 1e-13)
            return value;
        prev = value;
    }
    throw oracle_failure_error(
        "convolve_oracle: quadrature refinement missed the 1e-13 tolerance");
}

}  // namespace deltareg
