#include "deltareg/delta_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "deltareg/errors.hpp"

namespace deltareg {

namespace {

rational binomial(int n, int r) {
    rational result = 1;
    for (int i = 0; i < r; ++i) {
        result *= rational(n - i);
        result /= rational(i + 1);
    }
    return result;
}

}  // namespace

rational weighted_moment(int n, int k) {
    if (n < 0 || k < 0) throw validation_error("weighted_moment: n and k must be non-negative");
    // integral of xi^{2n} (1-xi^2)^{k+1} = sum_p C(k+1,p) (-1)^p * 2/(2n+2p+1)
    rational total = 0;
    for (int p = 0; p <= k + 1; ++p) {
        rational term = binomial(k + 1, p) * rational(2, 2 * n + 2 * p + 1);
        if (p % 2) total -= term; else total += term;
    }
    return total;
}

std::vector<rational> solve_rational_system(std::vector<std::vector<rational>> A,
                                            std::vector<rational> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row) {
            if (A[row][col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) throw construction_failure("singular linear system");
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < n; ++row) {
            if (A[row][col] == 0) continue;
            rational factor = A[row][col] / A[col][col];
            for (int j = col; j < n; ++j) A[row][j] -= factor * A[col][j];
            b[row] -= factor * b[col];
        }
    }
    std::vector<rational> x(n);
    for (int row = n - 1; row >= 0; --row) {
        rational acc = b[row];
        for (int j = row + 1; j < n; ++j) acc -= A[row][j] * x[j];
        x[row] = acc / A[row][row];
    }
    return x;
}

DeltaKernel build_kernel(const KernelSpec& spec) {
    if (spec.m < 1) throw validation_error("build_kernel: m must be >= 1");
    if (spec.k < 0) throw validation_error("build_kernel: k must be >= 0");

    const int na = spec.m / 2 + 1;  // unknowns a_0 .. a_{floor(m/2)}
    std::vector<std::vector<rational>> A(na, std::vector<rational>(na));
    std::vector<rational> b(na, rational(0));
    b[0] = 1;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            A[i][j] = weighted_moment(i + j, spec.k);

    DeltaKernel kernel;
    kernel.spec = spec;
    kernel.even_coeffs = solve_rational_system(std::move(A), std::move(b));
    kernel.degree = 2 * (spec.m / 2 + spec.k + 1);
    kernel.even_coeffs_f.resize(kernel.even_coeffs.size());
    std::transform(kernel.even_coeffs.begin(), kernel.even_coeffs.end(),
                   kernel.even_coeffs_f.begin(),
                   [](const rational& r) { return to_double(r); });
    return kernel;
}

double DeltaKernel::operator()(double xi) const {
    const double t = xi * xi;
    if (t > 1.0) return 0.0;
    double even = 0.0;
    for (auto it = even_coeffs_f.rbegin(); it != even_coeffs_f.rend(); ++it)
        even = even * t + *it;
    double weight = 1.0;
    const double base = 1.0 - t;
    for (int p = 0; p < spec.k + 1; ++p) weight *= base;
    return weight * even;
}

double evaluate_delta(const DeltaKernel& kernel, double epsilon, double x) {
    if (!(epsilon > 0.0))
        throw invalid_scaling_error("evaluate_delta: epsilon must be positive");
    if (std::abs(x) > epsilon) return 0.0;
    return kernel(x / epsilon) / epsilon;
}

double ConditionReport::worst() const {
    return std::max({mass_residual, max_moment_residual, max_derivative_residual});
}

namespace {

// r-th derivative of a (small-integer-coefficient) polynomial at x,
// all in double; the coefficient updates are exact for the sizes used here.
double poly_derivative_at(std::vector<double> coeffs, int r, double x) {
    for (int d = 0; d < r; ++d) {
        for (size_t i = 1; i < coeffs.size(); ++i)
            coeffs[i - 1] = coeffs[i] * static_cast<double>(i);
        if (coeffs.empty()) return 0.0;
        coeffs.pop_back();
    }
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

double factorial_ratio_binomial(int n, int r) {
    double result = 1.0;
    for (int i = 0; i < r; ++i) result = result * (n - i) / (i + 1);
    return result;
}

}  // namespace

ConditionReport verify_conditions(const DeltaKernel& kernel) {
    const int m = kernel.spec.m;
    const int k = kernel.spec.k;
    const int na = static_cast<int>(kernel.even_coeffs_f.size());

    ConditionReport report;

    // Mass and vanishing moments, float dot products against the exact
    // weighted moments. Odd moments vanish identically by evenness.
    {
        double mass = 0.0;
        for (int j = 0; j < na; ++j)
            mass += kernel.even_coeffs_f[j] * to_double(weighted_moment(j, k));
        report.mass_residual = std::abs(mass - 1.0);
    }
    for (int i = 2; i <= m; i += 2) {
        double moment = 0.0;
        for (int j = 0; j < na; ++j)
            moment += kernel.even_coeffs_f[j] * to_double(weighted_moment(i / 2 + j, k));
        report.max_moment_residual = std::max(report.max_moment_residual, std::abs(moment));
    }

    // Boundary derivatives through the factored form: Leibniz on
    // w(xi) * E(xi) with w = (1-xi^2)^{k+1}. Every w^{(r)}(+-1) with
    // r <= k is an exact small-integer cancellation, so the structural
    // zeros survive floating evaluation.
    std::vector<double> w_coeffs(2 * (k + 1) + 1, 0.0);
    for (int p = 0; p <= k + 1; ++p)
        w_coeffs[2 * p] = (p % 2 ? -1.0 : 1.0) * factorial_ratio_binomial(k + 1, p);
    std::vector<double> e_coeffs(2 * (na - 1) + 1, 0.0);
    for (int j = 0; j < na; ++j) e_coeffs[2 * j] = kernel.even_coeffs_f[j];

    for (double s : {-1.0, 1.0}) {
        for (int i = 0; i <= k; ++i) {
            double value = 0.0;
            for (int r = 0; r <= i; ++r) {
                const double wr = poly_derivative_at(w_coeffs, r, s);
                if (wr == 0.0) continue;
                value += factorial_ratio_binomial(i, r) * wr *
                         poly_derivative_at(e_coeffs, i - r, s);
            }
            report.max_derivative_residual =
                std::max(report.max_derivative_residual, std::abs(value));
        }
    }
    return report;
}

std::vector<rational> expanded_coefficients(const DeltaKernel& kernel) {
    const int k = kernel.spec.k;
    const int na = static_cast<int>(kernel.even_coeffs.size());
    std::vector<rational> coeffs(kernel.degree + 1, rational(0));
    for (int j = 0; j < na; ++j) {
        for (int p = 0; p <= k + 1; ++p) {
            rational term = binomial(k + 1, p) * kernel.even_coeffs[j];
            if (p % 2) term = -term;
            coeffs[2 * (j + p)] += term;
        }
    }
    return coeffs;
}

}  // namespace deltareg
