#include <doctest.h>

#include <cmath>
#include <vector>

#include "deltareg/errors.hpp"
#include "deltareg/experiments.hpp"

using namespace deltareg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("experiments") {

TEST_CASE("singular source profiles: values, window convention, support") {
    CHECK(advection_source(0.0) == 3.0);
    CHECK(advection_source(0.2) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(advection_source(0.5) == 0.0);
    CHECK(advection_source(-0.31) == 0.0);
    // half-value convention exactly at the jump points (cos(±1.5 pi) ~ 0)
    CHECK(std::fabs(advection_source(0.3)) < 1e-14);
    CHECK(std::fabs(advection_source(-0.3)) < 1e-14);

    CHECK(burgers_source(1.0) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(burgers_source(1.2) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::fabs(burgers_source(0.9)) < 1e-13);
    CHECK(std::fabs(burgers_source(0.7)) < 1e-13);
    CHECK(std::fabs(burgers_source(1.3)) < 1e-13);
    CHECK(burgers_source(0.65) == 0.0);
    CHECK(burgers_source(1.35) == 0.0);
    // the window moves but the oscillation keeps its phase
    CHECK(burgers_source(1.1) == doctest::Approx(-advection_source(0.1)).epsilon(1e-14));
}

TEST_CASE("closed-form advection solution") {
    for (double x : {-0.9, -0.3, 0.0, 0.45, 1.0})
        CHECK(advection_exact(x, 0.0) == doctest::Approx(std::sin(kPi * x)).epsilon(1e-14));

    const double amp = 3.0 / (5.0 * kPi);
    CHECK(advection_exact(0.5, 2.0) == doctest::Approx(1.0 - 2.0 * amp).epsilon(1e-14));
    CHECK(advection_exact(-0.5, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(advection_exact(0.0, 1.0) ==
          doctest::Approx(-amp).epsilon(1e-13).scale(1.0));
}

TEST_CASE("particle grids: sizes, endpoints, ordering, sampled values") {
    const ParticleField adv = particle_grid(ProblemKind::advection, 2001);
    REQUIRE(adv.positions.size() == 2002);
    CHECK(adv.positions.front() == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(adv.positions.back() == doctest::Approx(0.3).epsilon(1e-15));
    for (size_t i = 1; i < adv.positions.size(); ++i)
        CHECK(adv.positions[i] > adv.positions[i - 1]);
    for (size_t i = 0; i < adv.positions.size(); i += 97)
        CHECK(adv.values[i] == advection_source(adv.positions[i]));
    CHECK(adv.source_fn != nullptr);

    const ParticleField bur = particle_grid(ProblemKind::burgers, 1999);
    REQUIRE(bur.positions.size() == 2000);
    CHECK(bur.positions.front() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(bur.positions.back() == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(bur.values[1000] == burgers_source(bur.positions[1000]));

    CHECK_THROWS_AS(particle_grid(ProblemKind::advection, 0), validation_error);
}

TEST_CASE("domain partition tags and failure modes") {
    const ParticleField field = particle_grid(ProblemKind::advection, 200);
    const RegionPartition part = partition_domain(field, 0.05, -1.0, 1.0);

    CHECK(part.region_of(0.0) == 'P');
    CHECK(part.region_of(0.3) == 'R');
    CHECK(part.region_of(-0.26) == 'R');
    CHECK(part.region_of(0.9) == 'Q');
    CHECK(part.region_of(-1.0) == 'Q');
    // the interior region is open: its closure boundary belongs to R
    CHECK(part.region_of(-0.25) == 'R');
    CHECK(part.region_of(0.25) == 'R');

    // every point gets exactly one of the three tags, matching the
    // definition recomputed independently
    for (int i = 0; i <= 400; ++i) {
        const double x = -1.0 + 2.0 * i / 400.0;
        const char tag = part.region_of(x);
        const bool in_r = std::fabs(x - part.xi_first) <= 0.05 ||
                          std::fabs(x - part.xi_last) <= 0.05;
        const bool in_p = !in_r && x > part.xi_first + 0.05 && x < part.xi_last - 0.05;
        const char expected = in_r ? 'R' : (in_p ? 'P' : 'Q');
        CHECK(tag == expected);
    }

    CHECK_THROWS_AS(partition_domain(field, 0.3, -1.0, 1.0), empty_p_region_error);
    CHECK_THROWS_AS(partition_domain(field, 0.0, -1.0, 1.0), invalid_scaling_error);
    CHECK_THROWS_AS(partition_domain(field, -0.1, -1.0, 1.0), invalid_scaling_error);
}

TEST_CASE("weighted error norm: exact value, homogeneity, failure modes") {
    const ParticleField field = particle_grid(ProblemKind::advection, 200);
    const RegionPartition part = partition_domain(field, 0.05, -1.0, 1.0);

    const int N = 64;
    const SpectralOperator op = make_operator(N, -1.0, 1.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(N + 1);
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(N + 1);
    // sum of quadrature weights telescopes to pi (b - a)/2 = pi
    CHECK(weighted_error(ones, zeros, "PQR", part, op) ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(weighted_error(ones, ones, "PQR", part, op) == 0.0);

    Eigen::VectorXd bumpy(N + 1);
    for (int i = 0; i <= N; ++i) bumpy[i] = std::sin(3.0 * op.nodes[i]) + 0.2;
    const double full = weighted_error(bumpy, zeros, "PQ", part, op);
    const double half = weighted_error(0.5 * bumpy, zeros, "PQ", part, op);
    CHECK(half == doctest::Approx(0.5 * full).epsilon(1e-14));

    // partial sums over disjoint tags recombine in quadrature
    const double p_only = weighted_error(bumpy, zeros, "P", part, op);
    const double q_only = weighted_error(bumpy, zeros, "Q", part, op);
    const double r_only = weighted_error(bumpy, zeros, "R", part, op);
    const double all = weighted_error(bumpy, zeros, "PQR", part, op);
    CHECK(std::sqrt(p_only * p_only + q_only * q_only + r_only * r_only) ==
          doctest::Approx(all).epsilon(1e-13));

    // N = 8 nodes all miss the thin R bands
    const RegionPartition thin = partition_domain(field, 0.001, -1.0, 1.0);
    const SpectralOperator tiny = make_operator(8, -1.0, 1.0);
    const Eigen::VectorXd small_vec = Eigen::VectorXd::Ones(9);
    CHECK_THROWS_AS(
        weighted_error(small_vec, Eigen::VectorXd::Zero(9), "R", thin, tiny),
        empty_region_error);

    CHECK_THROWS_AS(weighted_error(ones, Eigen::VectorXd::Zero(N), "PQ", part, op),
                    invalid_input_error);
}

TEST_CASE("convergence fit: exact two-point slope, pure power law, validation") {
    const FitResult two = fit_convergence({100, 200}, {1e-2, 1e-3});
    CHECK(two.order == doctest::Approx(std::log(10.0) / std::log(2.0)).epsilon(1e-13));

    std::vector<int> Ns = {50, 100, 200, 400};
    std::vector<double> errs;
    for (int N : Ns) errs.push_back(2.0 * std::pow(N, -5.0));
    const FitResult fit = fit_convergence(Ns, errs);
    CHECK(fit.order == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    CHECK_THROWS_AS(fit_convergence({100}, {1e-2}), invalid_data_error);
    CHECK_THROWS_AS(fit_convergence({100, 200}, {1e-2}), invalid_data_error);
    CHECK_THROWS_AS(fit_convergence({100, 200}, {1e-2, 0.0}), invalid_data_error);
    CHECK_THROWS_AS(fit_convergence({100, 200}, {1e-2, -1e-3}), invalid_data_error);
    CHECK_THROWS_AS(fit_convergence({0, 200}, {1e-2, 1e-3}), invalid_data_error);
    CHECK_THROWS_AS(fit_convergence({100, 100}, {1e-2, 1e-3}), invalid_data_error);
}

TEST_CASE("solver reproduces smooth solutions without a source") {
    ProblemSpec adv = make_problem(ProblemKind::advection);
    adv.source = nullptr;
    const SpectralOperator op = make_operator(32, adv.a, adv.b);
    const Eigen::VectorXd u = solve(adv, op, advection_stepper());
    double err = 0.0;
    for (int i = 0; i <= 32; ++i)
        err = std::max(err, std::fabs(u[i] - std::sin(kPi * (op.nodes[i] - 2.0))));
    CHECK(err < 2e-9);

    // u_t + u u_x = 0 with u(x,0) = x, u(0,t) = 0 rarefies to x/(1+t)
    ProblemSpec bur = make_problem(ProblemKind::burgers);
    bur.source = nullptr;
    const SpectralOperator bop = make_operator(64, bur.a, bur.b);
    SolveOptions opts;
    opts.use_filter = true;
    const Eigen::VectorXd v = solve(bur, bop, burgers_stepper(), opts);
    double berr = 0.0;
    for (int i = 0; i <= 64; ++i)
        berr = std::max(berr, std::fabs(v[i] - bop.nodes[i] / 3.0));
    CHECK(berr < 1e-8);
}

TEST_CASE("solver rejects malformed problems") {
    ProblemSpec adv = make_problem(ProblemKind::advection);
    adv.initial = nullptr;
    const SpectralOperator op = make_operator(16, -1.0, 1.0);
    CHECK_THROWS_AS(solve(adv, op, advection_stepper()), validation_error);

    ProblemSpec ok = make_problem(ProblemKind::advection);
    TimeStepper broken;
    CHECK_THROWS_AS(solve(ok, op, broken), validation_error);
}

TEST_CASE("fine-grid reference interpolates its own nodes exactly") {
    ProblemSpec bur = make_problem(ProblemKind::burgers);
    bur.source = nullptr;
    SolveOptions opts;
    opts.use_filter = true;
    const Reference ref = self_convergence_reference(bur, 64, opts);
    for (int i = 0; i <= 64; i += 7)
        CHECK(ref(ref.op.nodes[i]) == ref.values[i]);
    for (double x : {0.05, 0.73, 1.9})
        CHECK(ref(x) == doctest::Approx(x / 3.0).epsilon(1e-8));
}

TEST_CASE("regularized advection study meets the designed orders" *
          doctest::timeout(900)) {
    StudyConfig cfg;
    cfg.kind = ProblemKind::advection;
    cfg.m = 7;
    cfg.k = 4;
    cfg.q = 2;
    cfg.epsilon = 6.6e-2;
    const ConvergenceReport rep = run_convergence_study(cfg);

    REQUIRE(rep.N_values == std::vector<int>({60, 100, 140, 200}));
    REQUIRE(rep.errors_P.size() == 4);
    for (size_t i = 1; i < rep.errors_P.size(); ++i) {
        CHECK(rep.errors_P[i] < rep.errors_P[i - 1]);
        CHECK(rep.errors_Q[i] < rep.errors_Q[i - 1]);
    }
    CHECK(rep.epsilon == 6.6e-2);
    // interior order tracks the kernel moment design, and away from the
    // source the full spectral accuracy shows through even sooner
    CHECK(rep.order_P >= 5.0);
    CHECK(rep.order_Q >= 6.0);
    CHECK(rep.order_PQ >= 5.0);
    // the untagged norm is polluted by the non-convergent bands around the
    // support endpoints, so it cannot beat the Q-region order by much
    const FitResult all_fit = fit_convergence(rep.N_values, rep.errors_all);
    CHECK(rep.order_Q >= all_fit.order - 0.2);
}

TEST_CASE("burgers study plumbing produces finite positive errors" *
          doctest::timeout(900)) {
    StudyConfig cfg;
    cfg.kind = ProblemKind::burgers;
    cfg.m = 5;
    cfg.k = 4;
    cfg.q = 2;
    cfg.epsilon = 0.2;
    cfg.N_values = {24, 32, 48};
    cfg.N_ref = 64;
    const ConvergenceReport rep = run_convergence_study(cfg);
    REQUIRE(rep.errors_P.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(std::isfinite(rep.errors_P[i]));
        CHECK(rep.errors_P[i] > 0.0);
        CHECK(std::isfinite(rep.errors_Q[i]));
        CHECK(rep.errors_Q[i] > 0.0);
    }

    // the self-convergence reference must stay finer than the whole sweep
    StudyConfig bad = cfg;
    bad.N_ref = 48;
    CHECK_THROWS_AS(run_convergence_study(bad), validation_error);
}

TEST_CASE("interior regularization error scan matches the direct computation") {
    const double err = max_regularization_error_on_P(ProblemKind::advection, 5, 4, 2,
                                                     4e-2);
    CHECK(err == doctest::Approx(5.6331e-07).epsilon(0.05));

    CHECK_THROWS_AS(
        max_regularization_error_on_P(ProblemKind::advection, 5, 4, 2, 0.0),
        invalid_scaling_error);
    CHECK_THROWS_AS(
        max_regularization_error_on_P(ProblemKind::advection, 5, 4, 2, 0.35),
        empty_p_region_error);
    CHECK_THROWS_AS(
        max_regularization_error_on_P(ProblemKind::advection, 5, 4, 2, 4e-2, 1),
        validation_error);
}

}  // TEST_SUITE
