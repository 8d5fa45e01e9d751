#include "deltareg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "deltareg/errors.hpp"

namespace deltareg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double advection_source(double x) {
    const double ax = std::fabs(x);
    if (ax > 0.3) return 0.0;
    const double window = (ax == 0.3) ? 0.5 : 1.0;  // half-value at the jumps
    return 3.0 * std::cos(5.0 * kPi * x) * window;
}

double burgers_source(double x) {
    const double d = std::fabs(x - 1.0);
    if (d > 0.3) return 0.0;
    const double window = (d == 0.3) ? 0.5 : 1.0;
    return 3.0 * std::cos(5.0 * kPi * x) * window;
}

namespace {

// Antiderivative of the advection source, continued by constants outside
// the support.
double clamped_antiderivative(double xi) {
    const double amp = 3.0 / (5.0 * kPi);
    if (xi <= -0.3) return amp;
    if (xi >= 0.3) return -amp;
    return amp * std::sin(5.0 * kPi * xi);
}

}  // namespace

double advection_exact(double x, double t) {
    return std::sin(kPi * (x - t)) + clamped_antiderivative(x) -
           clamped_antiderivative(x - t);
}

ProblemSpec make_problem(ProblemKind kind) {
    ProblemSpec p;
    p.kind = kind;
    if (kind == ProblemKind::advection) {
        p.a = -1.0;
        p.b = 1.0;
        p.initial = [](double x) { return std::sin(kPi * x); };
        p.inflow_value = [](double t) { return std::sin(kPi * (-1.0 - t)); };
        p.source = advection_source;
        p.quadratic_flux = false;
    } else {
        p.a = 0.0;
        p.b = 2.0;
        p.initial = [](double x) { return x; };
        p.inflow_value = [](double) { return 0.0; };
        p.source = burgers_source;
        p.quadratic_flux = true;
    }
    return p;
}

ParticleField particle_grid(ProblemKind kind, int N_p) {
    if (N_p < 1) throw validation_error("particle_grid: N_p must be >= 1");
    const double shift = (kind == ProblemKind::advection) ? 0.0 : 1.0;
    double (*src)(double) =
        (kind == ProblemKind::advection) ? advection_source : burgers_source;
    ParticleField field;
    field.positions.resize(N_p + 1);
    field.values.resize(N_p + 1);
    for (int i = 0; i <= N_p; ++i) {
        const double pos =
            shift + 0.3 * std::sin(kPi * (-0.5 + static_cast<double>(i) / N_p));
        field.positions[i] = pos;
        field.values[i] = src(pos);
    }
    field.source_fn = src;
    return field;
}

Eigen::VectorXd solve(const ProblemSpec& problem, const SpectralOperator& op,
                      const TimeStepper& stepper, const SolveOptions& options) {
    if (!problem.initial) throw validation_error("solve: initial condition required");
    if (!stepper.dt_rule) throw validation_error("solve: time stepper has no dt rule");
    const int N = op.N;
    Eigen::VectorXd u(N + 1);
    for (int i = 0; i <= N; ++i) u[i] = problem.initial(op.nodes[i]);

    Eigen::VectorXd s = Eigen::VectorXd::Zero(N + 1);
    if (problem.source)
        for (int i = 0; i <= N; ++i) s[i] = problem.source(op.nodes[i]);

    Eigen::VectorXd flux(N + 1);
    RhsFn rhs;
    if (problem.quadratic_flux) {
        rhs = [&op, &s, &flux](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
            flux = 0.5 * v.cwiseProduct(v);
            out = s;
            out.noalias() -= op.diff_matrix * flux;
        };
    } else {
        rhs = [&op, &s](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
            out = s;
            out.noalias() -= op.diff_matrix * v;
        };
    }

    RK3Workspace ws;
    double t = 0.0;
    const double T = problem.t_final;
    long long step = 0;
    while (t < T - 1e-12) {
        const double speed = u.cwiseAbs().maxCoeff();
        double dt = stepper.dt_rule(N, speed);
        if (t + dt > T) dt = T - t;
        tvd_rk3_step(u, t, dt, rhs, problem.inflow_value, 0, ws);
        if (options.use_filter) {
            u = op.filter_mat * u;
            if (problem.inflow_value) u[0] = problem.inflow_value(t + dt);
        }
        t += dt;
        ++step;
        if (options.progress && step % 50000 == 0)
            std::fprintf(stderr, "    t = %.6f (step %lld)\n", t, step);
    }
    return u;
}

char RegionPartition::region_of(double x) const {
    if (x > xi_first + epsilon && x < xi_last - epsilon) return 'P';
    if (std::fabs(x - xi_first) <= epsilon || std::fabs(x - xi_last) <= epsilon)
        return 'R';
    return 'Q';
}

RegionPartition partition_domain(const ParticleField& field, double epsilon,
                                 double a, double b) {
    field.validate();
    if (epsilon <= 0.0)
        throw invalid_scaling_error("partition_domain: epsilon must be positive");
    if (!(a < b)) throw invalid_domain_error("partition_domain: need a < b");
    RegionPartition part;
    part.xi_first = field.positions.front();
    part.xi_last = field.positions.back();
    part.epsilon = epsilon;
    part.a = a;
    part.b = b;
    if (!(part.xi_first + epsilon < part.xi_last - epsilon))
        throw empty_p_region_error("partition_domain: interior region is empty");
    return part;
}

double weighted_error(const Eigen::VectorXd& u_num, const Eigen::VectorXd& u_ref,
                      const std::string& regions, const RegionPartition& partition,
                      const SpectralOperator& op) {
    if (u_num.size() != u_ref.size() ||
        static_cast<int>(u_num.size()) != op.N + 1)
        throw invalid_input_error("weighted_error: vector sizes do not match the operator");
    if (regions.empty())
        throw validation_error("weighted_error: no regions requested");
    const double w_base = kPi / op.N * 0.5 * (op.b - op.a);
    double acc = 0.0;
    bool any = false;
    for (int i = 0; i <= op.N; ++i) {
        if (regions.find(partition.region_of(op.nodes[i])) == std::string::npos)
            continue;
        any = true;
        const double w = (i == 0 || i == op.N) ? 0.5 * w_base : w_base;
        const double d = u_num[i] - u_ref[i];
        acc += w * d * d;
    }
    if (!any)
        throw empty_region_error("weighted_error: no collocation nodes fall in region " +
                                 regions);
    return std::sqrt(acc);
}

FitResult fit_convergence(const std::vector<int>& N_values,
                          const std::vector<double>& errors) {
    const size_t n = N_values.size();
    if (n != errors.size() || n < 2)
        throw invalid_data_error("fit_convergence: need at least two matching samples");
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        if (N_values[i] <= 0)
            throw invalid_data_error("fit_convergence: resolutions must be positive");
        if (!std::isfinite(errors[i]) || errors[i] <= 0.0)
            throw invalid_data_error("fit_convergence: errors must be positive and finite");
        lx[i] = std::log(static_cast<double>(N_values[i]));
        ly[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0)
        throw invalid_data_error("fit_convergence: all resolutions are equal");
    const double slope = sxy / sxx;
    FitResult r;
    r.order = -slope;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double pred = my + slope * (lx[i] - mx);
        ss += (ly[i] - pred) * (ly[i] - pred);
    }
    r.residual = std::sqrt(ss / n);
    return r;
}

double Reference::operator()(double x) const {
    return barycentric_interpolate(op.nodes, values, x);
}

Reference self_convergence_reference(const ProblemSpec& problem, int N_fine,
                                     const SolveOptions& options) {
    Reference ref;
    ref.op = make_operator(N_fine, problem.a, problem.b, options.filter_order);
    const TimeStepper stepper =
        problem.quadratic_flux ? burgers_stepper() : advection_stepper();
    ref.values = solve(problem, ref.op, stepper, options);
    return ref;
}

ConvergenceReport run_convergence_study(const StudyConfig& config) {
    ProblemSpec problem = make_problem(config.kind);
    const int N_p = config.N_p > 0 ? config.N_p : default_particle_Np(config.kind);
    ParticleField field = particle_grid(config.kind, N_p);

    const DeltaKernel kernel = build_kernel({config.m, config.k});
    const QuadratureRule rule = newton_cotes_weights(config.q);
    double epsilon = config.epsilon;
    if (epsilon <= 0.0)
        epsilon = optimal_epsilon(config.m, config.q, substep_lengths(field, config.q),
                                  config.C);

    if (config.regularized) {
        RegularizedSource rsrc;
        rsrc.kernel = kernel;
        rsrc.epsilon = epsilon;
        rsrc.particles = &field;  // field outlives every solve below
        rsrc.mode = RegularizationMode::analytic_subdivision;
        problem.source = [rsrc, rule](double x) { return regularize(rsrc, rule, x); };
    }
    // with regularized = false the exact singular profile from make_problem
    // stays in place; epsilon is still used to partition the domain.

    SolveOptions sopt;
    sopt.use_filter = config.use_filter.value_or(config.kind == ProblemKind::burgers);
    sopt.filter_order = config.filter_order;
    sopt.progress = config.progress;

    const std::vector<int> Ns =
        config.N_values.empty() ? std::vector<int>{60, 100, 140, 200} : config.N_values;

    std::function<double(double)> ref_fn;
    Reference ref;
    if (config.kind == ProblemKind::advection) {
        const double T = problem.t_final;
        ref_fn = [T](double x) { return advection_exact(x, T); };
    } else {
        int max_n = 0;
        for (int N : Ns) max_n = std::max(max_n, N);
        if (config.N_ref <= max_n)
            throw validation_error(
                "reference resolution N_ref = " + std::to_string(config.N_ref) +
                " must exceed every study resolution (max N = " +
                std::to_string(max_n) + ")");
        if (config.progress)
            std::fprintf(stderr, "  reference solve, N = %d\n", config.N_ref);
        ref = self_convergence_reference(problem, config.N_ref, sopt);
        ref_fn = [&ref](double x) { return ref(x); };
    }

    const RegionPartition part = partition_domain(field, epsilon, problem.a, problem.b);
    const TimeStepper stepper =
        problem.quadratic_flux ? burgers_stepper() : advection_stepper();

    ConvergenceReport report;
    report.N_values = Ns;
    report.epsilon = epsilon;
    for (int N : Ns) {
        if (config.progress) std::fprintf(stderr, "  solve, N = %d\n", N);
        const SpectralOperator op = make_operator(N, problem.a, problem.b,
                                                  config.filter_order);
        const Eigen::VectorXd u = solve(problem, op, stepper, sopt);
        Eigen::VectorXd u_ref(N + 1);
        for (int i = 0; i <= N; ++i) u_ref[i] = ref_fn(op.nodes[i]);
        report.errors_P.push_back(weighted_error(u, u_ref, "P", part, op));
        report.errors_Q.push_back(weighted_error(u, u_ref, "Q", part, op));
        report.errors_PQ.push_back(weighted_error(u, u_ref, "PQ", part, op));
        report.errors_all.push_back(weighted_error(u, u_ref, "PQR", part, op));
    }
    const FitResult fit_P = fit_convergence(Ns, report.errors_P);
    const FitResult fit_Q = fit_convergence(Ns, report.errors_Q);
    const FitResult fit_PQ = fit_convergence(Ns, report.errors_PQ);
    report.order_P = fit_P.order;
    report.residual_P = fit_P.residual;
    report.order_Q = fit_Q.order;
    report.residual_Q = fit_Q.residual;
    report.order_PQ = fit_PQ.order;
    return report;
}

double max_regularization_error_on_P(ProblemKind kind, int m, int k, int q,
                                     double epsilon, int scan_points, int N_p) {
    if (epsilon <= 0.0)
        throw invalid_scaling_error("max_regularization_error_on_P: epsilon must be positive");
    if (scan_points < 2)
        throw validation_error("max_regularization_error_on_P: need at least two scan points");
    const int np = N_p > 0 ? N_p : default_particle_Np(kind);
    const ParticleField field = particle_grid(kind, np);
    RegularizedSource rsrc;
    rsrc.kernel = build_kernel({m, k});
    rsrc.epsilon = epsilon;
    rsrc.particles = &field;
    rsrc.mode = RegularizationMode::analytic_subdivision;
    const QuadratureRule rule = newton_cotes_weights(q);

    const double lo = field.positions.front() + epsilon;
    const double hi = field.positions.back() - epsilon;
    if (!(lo < hi))
        throw empty_p_region_error("max_regularization_error_on_P: interior region is empty");
    double (*exact)(double) =
        (kind == ProblemKind::advection) ? advection_source : burgers_source;
    double worst = 0.0;
    for (int i = 0; i < scan_points; ++i) {
        const double x = lo + (hi - lo) * i / (scan_points - 1);
        worst = std::max(worst, std::fabs(regularize(rsrc, rule, x) - exact(x)));
    }
    return worst;
}

}  // namespace deltareg
