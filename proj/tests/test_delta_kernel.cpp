#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <vector>

#include "deltareg/delta_kernel.hpp"
#include "deltareg/errors.hpp"

using namespace deltareg;

namespace {

// integral_{-1}^{1} xi^n P(xi) dxi for even n, exact in rationals
rational full_moment(const DeltaKernel& kernel, int n) {
    const std::vector<rational> coeffs = expanded_coefficients(kernel);
    rational acc = 0;
    for (size_t p = 0; p < coeffs.size(); p += 2)
        acc += coeffs[p] * rational(2, static_cast<int>(n + p + 1));
    return acc;
}

}  // namespace

TEST_SUITE("delta_kernel") {

TEST_CASE("weighted moments are exact rationals") {
    CHECK(weighted_moment(0, 0) == rational(4, 3));
    CHECK(weighted_moment(1, 0) == rational(4, 15));
    CHECK(weighted_moment(0, 1) == rational(16, 15));
    CHECK_THROWS_AS(weighted_moment(-1, 0), validation_error);
    CHECK_THROWS_AS(weighted_moment(0, -1), validation_error);
}

TEST_CASE("low-order kernels match hand-solved coefficients") {
    const DeltaKernel k10 = build_kernel({1, 0});
    REQUIRE(k10.even_coeffs.size() == 1);
    CHECK(k10.even_coeffs[0] == rational(3, 4));
    CHECK(k10.degree == 2);

    const DeltaKernel k20 = build_kernel({2, 0});
    REQUIRE(k20.even_coeffs.size() == 2);
    CHECK(k20.even_coeffs[0] == rational(45, 32));
    CHECK(k20.even_coeffs[1] == rational(-105, 32));
    CHECK(k20.degree == 4);
}

TEST_CASE("leading coefficients of the experiment kernels") {
    CHECK(build_kernel({5, 4}).even_coeffs[0] == rational(96525, 32768));
    CHECK(build_kernel({7, 4}).even_coeffs[0] == rational(3828825, 1048576));
    CHECK(build_kernel({13, 4}).even_coeffs[0] ==
          rational(bigint(6090435351), bigint(1073741824)));
    CHECK(build_kernel({17, 4}).even_coeffs[0] ==
          rational(bigint(3839986024875), bigint(549755813888)));
    CHECK(build_kernel({17, 6}).even_coeffs[0] ==
          rational(bigint(32877594632025), bigint(4398046511104)));
}

TEST_CASE("moment conditions hold exactly and the next moment is known") {
    const DeltaKernel k14 = build_kernel({1, 4});
    CHECK(full_moment(k14, 0) == rational(1));
    CHECK(full_moment(k14, 2) == rational(1, 13));

    const DeltaKernel k34 = build_kernel({3, 4});
    CHECK(full_moment(k34, 0) == rational(1));
    CHECK(full_moment(k34, 2) == rational(0));
    CHECK(full_moment(k34, 4) == rational(-1, 85));

    const DeltaKernel k54 = build_kernel({5, 4});
    CHECK(full_moment(k54, 2) == rational(0));
    CHECK(full_moment(k54, 4) == rational(0));
    CHECK(full_moment(k54, 6) == rational(5, 2261));
}

TEST_CASE("kernel evaluation: symmetry, support, simple values") {
    const DeltaKernel k10 = build_kernel({1, 0});
    CHECK(k10(0.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(k10(1.0) == 0.0);
    CHECK(k10(-1.0) == 0.0);
    CHECK(k10(1.2) == 0.0);
    CHECK(k10(-3.0) == 0.0);

    const DeltaKernel k94 = build_kernel({9, 4});
    for (double xi : {0.13, 0.4, 0.71, 0.985})
        CHECK(k94(xi) == doctest::Approx(k94(-xi)).epsilon(1e-15));

    CHECK(evaluate_delta(k10, 0.5, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(evaluate_delta(k10, 0.5, 0.6) == 0.0);
    CHECK_THROWS_AS(evaluate_delta(k10, 0.0, 0.1), invalid_scaling_error);
    CHECK_THROWS_AS(evaluate_delta(k10, -1.0, 0.1), invalid_scaling_error);
}

TEST_CASE("constructor validates the order parameters") {
    CHECK_THROWS_AS(build_kernel({0, 0}), validation_error);
    CHECK_THROWS_AS(build_kernel({-3, 2}), validation_error);
    CHECK_THROWS_AS(build_kernel({3, -1}), validation_error);
}

TEST_CASE("condition residuals stay at round-off across the tested range") {
    double worst = 0.0;
    for (int m = 1; m <= 17; ++m) {
        for (int k = 0; k <= 6; ++k) {
            const ConditionReport report = verify_conditions(build_kernel({m, k}));
            worst = std::max(worst, report.worst());
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("residuals react to a corrupted coefficient") {
    DeltaKernel kernel = build_kernel({3, 4});
    kernel.even_coeffs_f[0] += 0.1;
    const ConditionReport report = verify_conditions(kernel);
    const double expected = 0.1 * to_double(weighted_moment(0, 4));
    CHECK(report.mass_residual == doctest::Approx(expected).epsilon(1e-10));
    CHECK(report.worst() >= report.mass_residual);
}

TEST_CASE("scaled kernel keeps unit mass for any epsilon") {
    const DeltaKernel kernel = build_kernel({17, 6});
    using gauss64 = boost::math::quadrature::gauss<double, 64>;
    for (double eps : {1.0, 0.1, 0.001}) {
        const double mass = gauss64::integrate(
            [&](double x) { return evaluate_delta(kernel, eps, x); }, -eps, eps);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("expanded coefficients reproduce the factored form") {
    const DeltaKernel kernel = build_kernel({7, 3});
    const std::vector<rational> coeffs = expanded_coefficients(kernel);
    REQUIRE(static_cast<int>(coeffs.size()) == kernel.degree + 1);
    for (size_t p = 1; p < coeffs.size(); p += 2) CHECK(coeffs[p] == rational(0));
    for (double xi : {0.0, 0.31, -0.77, 0.98}) {
        double horner = 0.0;
        for (size_t p = coeffs.size(); p-- > 0;)
            horner = horner * xi + to_double(coeffs[p]);
        CHECK(horner == doctest::Approx(kernel(xi)).epsilon(1e-12));
    }
}

TEST_CASE("kernel equals the reproducing kernel of the weighted space") {
    // independent construction: Gram-Schmidt on {1, t, t^2, ...} (t = xi^2)
    // under <t^a, t^b> = mu(a + b, k), then P's polynomial factor must be
    // sum_i Q_i(0) Q_i / <Q_i, Q_i>.
    for (const KernelSpec spec : {KernelSpec{3, 2}, KernelSpec{5, 4}}) {
        const int half = spec.m / 2;
        const int k = spec.k;
        auto inner = [&](const std::vector<rational>& p, const std::vector<rational>& q) {
            rational acc = 0;
            for (size_t a = 0; a < p.size(); ++a)
                for (size_t b = 0; b < q.size(); ++b)
                    acc += p[a] * q[b] *
                           weighted_moment(static_cast<int>(a + b), k);
            return acc;
        };
        std::vector<std::vector<rational>> basis;
        for (int i = 0; i <= half; ++i) {
            std::vector<rational> qi(i + 1, rational(0));
            qi[i] = 1;  // t^i
            for (int l = 0; l < i; ++l) {
                const rational proj = inner(qi, basis[l]) / inner(basis[l], basis[l]);
                for (size_t c = 0; c < basis[l].size(); ++c)
                    qi[c] -= proj * basis[l][c];
            }
            basis.push_back(qi);
        }
        std::vector<rational> reproducing(half + 1, rational(0));
        for (int i = 0; i <= half; ++i) {
            const rational scale = basis[i][0] / inner(basis[i], basis[i]);
            for (size_t c = 0; c < basis[i].size(); ++c)
                reproducing[c] += scale * basis[i][c];
        }
        const DeltaKernel kernel = build_kernel(spec);
        REQUIRE(kernel.even_coeffs.size() == reproducing.size());
        for (size_t c = 0; c < reproducing.size(); ++c)
            CHECK(kernel.even_coeffs[c] == reproducing[c]);
    }
}

TEST_CASE("rational solver flags singular systems") {
    std::vector<std::vector<rational>> A{{rational(1), rational(1)},
                                         {rational(2), rational(2)}};
    std::vector<rational> b{rational(1), rational(2)};
    CHECK_THROWS_AS(solve_rational_system(A, b), construction_failure);
}

}  // TEST_SUITE
