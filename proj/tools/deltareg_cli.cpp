// Command-line harness: kernel construction, source regularization,
// singular advection / Burgers solves, convergence studies, and the two
// summary tables. All numeric output is deterministic CSV.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "deltareg/csv.hpp"
#include "deltareg/delta_kernel.hpp"
#include "deltareg/errors.hpp"
#include "deltareg/experiments.hpp"
#include "deltareg/regularizer.hpp"
#include "deltareg/spectral.hpp"

namespace {

using namespace deltareg;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open output file: " + path);
    out << text;
}

ProblemKind parse_problem(const std::string& name) {
    if (name == "advection") return ProblemKind::advection;
    if (name == "burgers") return ProblemKind::burgers;
    throw validation_error("unknown problem: " + name + " (expected advection or burgers)");
}

void check_exactness(int m, int k, int q, bool allow_unsafe) {
    if (validate_exactness_constraint(m, k, q)) return;
    if (allow_unsafe) {
        std::fprintf(stderr,
                     "warning: q = %d violates the exactness constraint q <= min(m, k) - 1 "
                     "for m = %d, k = %d; proceeding as requested\n",
                     q, m, k);
        return;
    }
    throw validation_error(
        "quadrature rule q = " + std::to_string(q) +
        " violates the exactness constraint q <= min(m, k) - 1 for m = " +
        std::to_string(m) + ", k = " + std::to_string(k) +
        " (pass --allow-unsafe-q to override)");
}

ParticleField read_particle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open particle file: " + path);
    ParticleField field;
    std::string line;
    bool maybe_header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double p = 0, v = 0, d = 0;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf", &p, &v, &d);
        if (got < 2) {
            if (maybe_header) {  // tolerate one leading header row
                maybe_header = false;
                continue;
            }
            throw validation_error("malformed particle row: " + line);
        }
        maybe_header = false;
        field.positions.push_back(p);
        field.values.push_back(v);
        if (got == 3) field.densities.push_back(d);
    }
    if (!field.densities.empty() && field.densities.size() != field.positions.size())
        throw validation_error("particle file mixes rows with and without density");
    field.validate();
    return field;
}

struct EvalGrid {
    double lo = 0, hi = 0;
    int count = 0;
};

EvalGrid parse_eval_grid(const std::string& spec) {
    EvalGrid g;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.count) != 3)
        throw validation_error("--eval-grid expects lo:hi:count, got: " + spec);
    if (g.count < 1) throw validation_error("--eval-grid needs count >= 1");
    if (g.count > 1 && !(g.lo < g.hi))
        throw validation_error("--eval-grid needs lo < hi");
    return g;
}

double grid_point(const EvalGrid& g, int i) {
    if (g.count == 1) return g.lo;
    return g.lo + (g.hi - g.lo) * i / (g.count - 1);
}

// ---- kernel ----------------------------------------------------------

struct KernelArgs {
    int m = 1, k = 0;
    std::string dump_path;
};

void run_kernel(const KernelArgs& args) {
    const DeltaKernel kernel = build_kernel({args.m, args.k});
    const std::vector<rational> coeffs = expanded_coefficients(kernel);
    std::string table = "power,numerator,denominator,float_value\n";
    for (int p = 0; p <= kernel.degree; p += 2) {
        table += std::to_string(p) + "," + numerator_string(coeffs[p]) + "," +
                 denominator_string(coeffs[p]) + "," +
                 format_sci(to_double(coeffs[p])) + "\n";
    }
    const ConditionReport report = verify_conditions(kernel);
    std::string residuals = "residual,value\n";
    residuals += "mass," + format_sci(report.mass_residual) + "\n";
    residuals += "max_moment," + format_sci(report.max_moment_residual) + "\n";
    residuals += "max_derivative," + format_sci(report.max_derivative_residual) + "\n";
    if (args.dump_path.empty()) {
        write_text("", table + "\n" + residuals);
    } else {
        write_text(args.dump_path, table);
        write_text("", residuals);
    }
}

// ---- regularize ------------------------------------------------------

struct RegularizeArgs {
    int m = 7, k = 4, q = 2;
    double epsilon = -1.0;
    bool auto_epsilon = false;
    double C = 0.5;
    std::string particles_path;
    std::string source_name;  // built-in singular sources
    int N_p = -1;
    std::string eval_grid;
    std::string out_path;
    bool allow_unsafe_q = false;
    bool samples_only = false;
};

void run_regularize(const RegularizeArgs& args) {
    check_exactness(args.m, args.k, args.q, args.allow_unsafe_q);
    if (args.particles_path.empty() && args.source_name.empty())
        throw validation_error("regularize needs --particles or --source");

    ParticleField field;
    std::optional<ProblemKind> kind;
    if (!args.source_name.empty()) {
        kind = parse_problem(args.source_name);
        field = particle_grid(*kind, args.N_p > 0 ? args.N_p : default_particle_Np(*kind));
    } else {
        field = read_particle_file(args.particles_path);
    }

    const QuadratureRule rule = newton_cotes_weights(args.q);
    double epsilon = args.epsilon;
    if (args.auto_epsilon || epsilon <= 0.0)
        epsilon = optimal_epsilon(args.m, args.q, substep_lengths(field, args.q), args.C);

    RegularizedSource rsrc;
    rsrc.kernel = build_kernel({args.m, args.k});
    rsrc.epsilon = epsilon;
    rsrc.particles = &field;
    rsrc.mode = (args.samples_only || !field.source_fn)
                    ? RegularizationMode::samples_only
                    : RegularizationMode::analytic_subdivision;

    const EvalGrid grid = parse_eval_grid(args.eval_grid);
    const double span_lo = std::min(field.positions.front(), grid.lo);
    const double span_hi = std::max(field.positions.back(), grid.count == 1 ? grid.lo : grid.hi);
    const RegionPartition part =
        partition_domain(field, epsilon, span_lo - 1.0, span_hi + 1.0);

    std::string csv = "x,s_tilde,s_exact,abs_error,region\n";
    for (int i = 0; i < grid.count; ++i) {
        const double x = grid_point(grid, i);
        const double s_tilde = regularize(rsrc, rule, x);
        double s_exact = kNan, abs_error = kNan;
        if (kind) {
            s_exact = (*kind == ProblemKind::advection) ? advection_source(x)
                                                        : burgers_source(x);
            abs_error = std::fabs(s_tilde - s_exact);
        }
        csv += format_sci(x) + "," + format_sci(s_tilde) + "," + format_sci(s_exact) +
               "," + format_sci(abs_error) + "," + std::string(1, part.region_of(x)) +
               "\n";
    }
    write_text(args.out_path, csv);
}

// ---- solve -----------------------------------------------------------

struct SolveArgs {
    std::string problem_name = "advection";
    int N = 100;
    int m = 7, k = 4, q = 2;
    double epsilon = -1.0;
    bool auto_epsilon = false;
    double C = 0.5;
    bool no_regularization = false;
    int filter_order = 12;
    int use_filter = -1;  // -1: problem default, 0: off, 1: on
    int N_p = -1;
    double t_final = 2.0;
    bool allow_unsafe_q = false;
    bool progress = false;
    std::string out_path;
    std::string dump_operator_path;
};

void dump_operator(const SpectralOperator& op, const std::string& path) {
    std::string csv = "entry,i,j,value\n";
    for (int i = 0; i <= op.N; ++i)
        csv += "node," + std::to_string(i) + ",," + format_sci(op.nodes[i]) + "\n";
    for (int j = 0; j <= op.N; ++j)
        csv += "sigma," + std::to_string(j) + ",," + format_sci(op.filter_diag[j]) + "\n";
    for (int i = 0; i <= op.N; ++i)
        for (int j = 0; j <= op.N; ++j)
            csv += "dmat," + std::to_string(i) + "," + std::to_string(j) + "," +
                   format_sci(op.diff_matrix(i, j)) + "\n";
    write_text(path, csv);
}

void run_solve(const SolveArgs& args) {
    if (!args.no_regularization)
        check_exactness(args.m, args.k, args.q, args.allow_unsafe_q);
    if (args.N < 1) throw validation_error("--N must be >= 1");
    if (!(args.t_final > 0.0)) throw validation_error("--t-final must be positive");

    const ProblemKind kind = parse_problem(args.problem_name);
    ProblemSpec problem = make_problem(kind);
    problem.t_final = args.t_final;

    ParticleField field =
        particle_grid(kind, args.N_p > 0 ? args.N_p : default_particle_Np(kind));
    const QuadratureRule rule = newton_cotes_weights(args.q);
    double epsilon = args.epsilon;
    if (args.auto_epsilon || epsilon <= 0.0)
        epsilon = optimal_epsilon(args.m, args.q, substep_lengths(field, args.q), args.C);

    RegularizedSource rsrc;
    rsrc.kernel = build_kernel({args.m, args.k});
    rsrc.epsilon = epsilon;
    rsrc.particles = &field;
    rsrc.mode = RegularizationMode::analytic_subdivision;
    if (!args.no_regularization)
        problem.source = [&rsrc, &rule](double x) { return regularize(rsrc, rule, x); };

    const SpectralOperator op = make_operator(args.N, problem.a, problem.b,
                                              args.filter_order);
    if (!args.dump_operator_path.empty()) dump_operator(op, args.dump_operator_path);

    SolveOptions options;
    options.use_filter = (args.use_filter < 0) ? (kind == ProblemKind::burgers)
                                               : (args.use_filter == 1);
    options.filter_order = args.filter_order;
    options.progress = args.progress;
    const TimeStepper stepper =
        problem.quadratic_flux ? burgers_stepper() : advection_stepper();
    const Eigen::VectorXd u = solve(problem, op, stepper, options);

    const RegionPartition part = partition_domain(field, epsilon, problem.a, problem.b);
    std::string csv = "x,u_num,u_ref,abs_error,region\n";
    for (int i = 0; i <= args.N; ++i) {
        const double x = op.nodes[i];
        double u_ref = kNan, abs_error = kNan;
        if (kind == ProblemKind::advection) {
            u_ref = advection_exact(x, problem.t_final);
            abs_error = std::fabs(u[i] - u_ref);
        }
        csv += format_sci(x) + "," + format_sci(u[i]) + "," + format_sci(u_ref) + "," +
               format_sci(abs_error) + "," + std::string(1, part.region_of(x)) + "\n";
    }
    write_text(args.out_path, csv);
}

// ---- converge --------------------------------------------------------

struct ConvergeArgs {
    std::string problem_name = "advection";
    int m = 7, k = 4, q = 2;
    double epsilon = -1.0;
    bool auto_epsilon = false;
    double C = 0.5;
    std::vector<int> N_list;
    bool full = false;
    int N_ref = -1;
    bool no_regularization = false;
    int filter_order = 12;
    int use_filter = -1;
    int N_p = -1;
    bool allow_unsafe_q = false;
    bool progress = false;
    std::string out_path;
};

std::string report_csv(const ConvergenceReport& report) {
    std::string csv = "N,error_P,error_Q\n";
    for (size_t i = 0; i < report.N_values.size(); ++i)
        csv += std::to_string(report.N_values[i]) + "," +
               format_sci(report.errors_P[i]) + "," + format_sci(report.errors_Q[i]) +
               "\n";
    csv += "\nsummary,value\n";
    csv += "order_P," + format_sci(report.order_P) + "\n";
    csv += "order_Q," + format_sci(report.order_Q) + "\n";
    csv += "epsilon," + format_sci(report.epsilon) + "\n";
    return csv;
}

void run_converge(const ConvergeArgs& args) {
    if (!args.no_regularization)
        check_exactness(args.m, args.k, args.q, args.allow_unsafe_q);
    StudyConfig config;
    config.kind = parse_problem(args.problem_name);
    config.m = args.m;
    config.k = args.k;
    config.q = args.q;
    config.epsilon = args.auto_epsilon ? -1.0 : args.epsilon;
    config.C = args.C;
    config.N_values = args.N_list;
    if (config.N_values.empty() && args.full) config.N_values = {100, 200, 300, 400};
    // default reference: desk-scale 280, or 500 once the sweep reaches past
    // N = 200 (the reference must stay finer than every study resolution)
    int max_n = 200;
    for (int N : config.N_values) max_n = std::max(max_n, N);
    config.N_ref = args.N_ref > 0 ? args.N_ref : (max_n > 200 ? 500 : 280);
    config.regularized = !args.no_regularization;
    if (args.use_filter >= 0) config.use_filter = (args.use_filter == 1);
    config.filter_order = args.filter_order;
    config.N_p = args.N_p;
    config.progress = args.progress;
    write_text(args.out_path, report_csv(run_convergence_study(config)));
}

// ---- table1 / table2 -------------------------------------------------

struct TableArgs {
    bool full = false;
    bool progress = false;
    std::string out_path;
};

void run_table(int which, const TableArgs& args) {
    const ProblemKind kind =
        (which == 1) ? ProblemKind::advection : ProblemKind::burgers;
    std::vector<int> ms{5, 9, 13, 17};
    std::vector<double> eps_values{4.0e-2, 9.5e-2, 1.5e-1, 2.1e-1};
    if (which == 1) {
        ms.insert(ms.begin(), 1);
        eps_values.insert(eps_values.begin(), 6.5e-3);
    }

    std::string csv = "m,epsilon,max_log10_err_P,order_P,order_Q\n";
    for (size_t row = 0; row < ms.size(); ++row) {
        const int m = ms[row];
        const double epsilon = eps_values[row];
        if (!validate_exactness_constraint(m, 4, 2))
            std::fprintf(stderr,
                         "warning: row m = %d violates the exactness constraint "
                         "q <= min(m, k) - 1 for q = 2, k = 4; reproduced as published\n",
                         m);
        if (args.progress)
            std::fprintf(stderr, "row m = %d, epsilon = %g\n", m, epsilon);
        const double max_err =
            max_regularization_error_on_P(kind, m, 4, 2, epsilon);

        StudyConfig config;
        config.kind = kind;
        config.m = m;
        config.k = 4;
        config.q = 2;
        config.epsilon = epsilon;
        if (args.full) config.N_values = {100, 200, 300, 400};
        config.N_ref = args.full ? 500 : 280;
        config.progress = args.progress;
        const ConvergenceReport report = run_convergence_study(config);

        csv += std::to_string(m) + "," + format_sci(epsilon) + "," +
               format_sci(std::log10(max_err)) + "," + format_sci(report.order_P) +
               "," + format_sci(report.order_Q) + "\n";
    }
    write_text(args.out_path, csv);
}

void add_config(CLI::App* cmd) {
    cmd->set_config("--config", "",
                    "flat key=value file mirroring this subcommand's flags; "
                    "command-line flags override it");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compactly supported polynomial delta kernels: construction, "
                 "source regularization, and spectral convergence studies"};
    app.set_version_flag("--version", "deltareg 1.0.0");
    app.require_subcommand(1);

    KernelArgs kernel_args;
    CLI::App* kernel_cmd =
        app.add_subcommand("kernel", "build a kernel and report its condition residuals");
    kernel_cmd->add_option("--m", kernel_args.m, "moment order (>= 1)");
    kernel_cmd->add_option("--k", kernel_args.k, "smoothness order (>= 0)");
    kernel_cmd->add_option("--dump-coeffs", kernel_args.dump_path,
                           "write the coefficient table to this file");
    add_config(kernel_cmd);
    kernel_cmd->callback([&] { run_kernel(kernel_args); });

    RegularizeArgs reg_args;
    CLI::App* reg_cmd =
        app.add_subcommand("regularize", "evaluate the regularized source on a grid");
    reg_cmd->add_option("--m", reg_args.m, "moment order");
    reg_cmd->add_option("--k", reg_args.k, "smoothness order");
    reg_cmd->add_option("--q", reg_args.q, "Newton-Cotes panel rule order (1..8)");
    CLI::Option* reg_eps = reg_cmd->add_option("--epsilon", reg_args.epsilon,
                                               "kernel support half-width");
    CLI::Option* reg_auto = reg_cmd->add_flag("--auto-epsilon", reg_args.auto_epsilon,
                                              "choose epsilon from the grid spacing");
    reg_eps->excludes(reg_auto);
    reg_cmd->add_option("--C", reg_args.C, "proportionality constant for --auto-epsilon");
    reg_cmd->add_option("--particles", reg_args.particles_path,
                        "particle CSV: position,value[,density]");
    reg_cmd->add_option("--source", reg_args.source_name,
                        "built-in singular source (advection or burgers)");
    reg_cmd->add_option("--Np", reg_args.N_p, "panel count for the built-in grids");
    reg_cmd->add_option("--eval-grid", reg_args.eval_grid, "evaluation points, lo:hi:count")
        ->required();
    reg_cmd->add_option("--out", reg_args.out_path, "output CSV path (default stdout)");
    reg_cmd->add_flag("--allow-unsafe-q", reg_args.allow_unsafe_q,
                      "proceed when q > min(m, k) - 1");
    reg_cmd->add_flag("--samples-only", reg_args.samples_only,
                      "ignore the analytic source and use stored samples");
    add_config(reg_cmd);
    reg_cmd->callback([&] { run_regularize(reg_args); });

    SolveArgs solve_args;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "run one spectral solve and write the error profile");
    solve_cmd->add_option("--problem", solve_args.problem_name, "advection or burgers");
    solve_cmd->add_option("--N", solve_args.N, "polynomial degree (>= 1)")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--m", solve_args.m, "moment order");
    solve_cmd->add_option("--k", solve_args.k, "smoothness order");
    solve_cmd->add_option("--q", solve_args.q, "Newton-Cotes panel rule order");
    CLI::Option* solve_eps =
        solve_cmd->add_option("--epsilon", solve_args.epsilon, "kernel support half-width");
    CLI::Option* solve_auto = solve_cmd->add_flag(
        "--auto-epsilon", solve_args.auto_epsilon, "choose epsilon from the grid spacing");
    solve_eps->excludes(solve_auto);
    solve_cmd->add_option("--C", solve_args.C, "proportionality constant for --auto-epsilon");
    solve_cmd->add_flag("--no-regularization", solve_args.no_regularization,
                        "sample the singular source directly");
    solve_cmd->add_option("--filter-order", solve_args.filter_order,
                          "exponential filter order (even, >= 2)");
    solve_cmd->add_flag("--use-filter{1},--no-filter{0}", solve_args.use_filter,
                        "force the spectral filter on or off "
                        "(default: on for burgers, off for advection)");
    solve_cmd->add_option("--Np", solve_args.N_p, "particle panel count");
    solve_cmd->add_option("--t-final", solve_args.t_final, "integration horizon");
    solve_cmd->add_flag("--allow-unsafe-q", solve_args.allow_unsafe_q,
                        "proceed when q > min(m, k) - 1");
    solve_cmd->add_flag("--progress", solve_args.progress, "step diagnostics to stderr");
    solve_cmd->add_option("--out", solve_args.out_path, "output CSV path (default stdout)");
    solve_cmd->add_option("--dump-operator", solve_args.dump_operator_path,
                          "write nodes, filter factors and the derivative matrix");
    add_config(solve_cmd);
    solve_cmd->callback([&] { run_solve(solve_args); });

    ConvergeArgs conv_args;
    CLI::App* conv_cmd =
        app.add_subcommand("converge", "run a resolution sweep and fit convergence orders");
    conv_cmd->add_option("--problem", conv_args.problem_name, "advection or burgers");
    conv_cmd->add_option("--m", conv_args.m, "moment order");
    conv_cmd->add_option("--k", conv_args.k, "smoothness order");
    conv_cmd->add_option("--q", conv_args.q, "Newton-Cotes panel rule order");
    CLI::Option* conv_eps =
        conv_cmd->add_option("--epsilon", conv_args.epsilon, "kernel support half-width");
    CLI::Option* conv_auto = conv_cmd->add_flag(
        "--auto-epsilon", conv_args.auto_epsilon, "choose epsilon from the grid spacing");
    conv_eps->excludes(conv_auto);
    conv_cmd->add_option("--C", conv_args.C, "proportionality constant for --auto-epsilon");
    conv_cmd->add_option("--N-list", conv_args.N_list,
                         "comma-separated resolutions (default 60,100,140,200)")
        ->delimiter(',');
    conv_cmd->add_flag("--full", conv_args.full,
                       "publication-scale sweep: N = 100,200,300,400 with an N = 500 "
                       "reference (long runtime)");
    conv_cmd->add_option("--N-ref", conv_args.N_ref,
                         "self-convergence reference resolution (default 280, or 500 "
                         "with --full)");
    conv_cmd->add_flag("--no-regularization", conv_args.no_regularization,
                       "sample the singular source directly");
    conv_cmd->add_option("--filter-order", conv_args.filter_order,
                         "exponential filter order (even, >= 2)");
    conv_cmd->add_flag("--use-filter{1},--no-filter{0}", conv_args.use_filter,
                       "force the spectral filter on or off");
    conv_cmd->add_option("--Np", conv_args.N_p, "particle panel count");
    conv_cmd->add_flag("--allow-unsafe-q", conv_args.allow_unsafe_q,
                       "proceed when q > min(m, k) - 1");
    conv_cmd->add_flag("--progress", conv_args.progress, "per-run diagnostics to stderr");
    conv_cmd->add_option("--out", conv_args.out_path, "output CSV path (default stdout)");
    add_config(conv_cmd);
    conv_cmd->callback([&] { run_converge(conv_args); });

    TableArgs table1_args;
    CLI::App* table1_cmd = app.add_subcommand(
        "table1", "advection summary: regularization error and fitted orders per m");
    table1_cmd->add_flag("--full", table1_args.full, "publication-scale resolutions");
    table1_cmd->add_flag("--progress", table1_args.progress, "row diagnostics to stderr");
    table1_cmd->add_option("--out", table1_args.out_path, "output CSV path (default stdout)");
    add_config(table1_cmd);
    table1_cmd->callback([&] { run_table(1, table1_args); });

    TableArgs table2_args;
    CLI::App* table2_cmd = app.add_subcommand(
        "table2", "Burgers summary: regularization error and fitted orders per m");
    table2_cmd->add_flag("--full", table2_args.full, "publication-scale resolutions");
    table2_cmd->add_flag("--progress", table2_args.progress, "row diagnostics to stderr");
    table2_cmd->add_option("--out", table2_args.out_path, "output CSV path (default stdout)");
    add_config(table2_cmd);
    table2_cmd->callback([&] { run_table(2, table2_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const runtime_failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
