#include "deltareg/spectral.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>

#include "deltareg/errors.hpp"

namespace deltareg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> gauss_lobatto_nodes(int N, double a, double b) {
    if (N < 1) throw validation_error("gauss_lobatto_nodes: N must be >= 1");
    if (!(a < b)) throw invalid_domain_error("gauss_lobatto_nodes: need a < b");
    std::vector<double> nodes(N + 1);
    nodes[0] = a;
    nodes[N] = b;
    for (int i = 1; i < N; ++i)
        nodes[i] = a + 0.5 * (b - a) * (1.0 + std::cos(kPi * (N - i) / N));
    return nodes;
}

Eigen::MatrixXd differentiation_matrix(int N, double a, double b) {
    if (N < 1) throw validation_error("differentiation_matrix: N must be >= 1");
    if (!(a < b)) throw invalid_domain_error("differentiation_matrix: need a < b");
    // reference nodes ascending, barycentric weights (+-1, halved at ends)
    std::vector<double> xi(N + 1), w(N + 1);
    for (int i = 0; i <= N; ++i) {
        xi[i] = std::cos(kPi * (N - i) / N);
        w[i] = (i % 2 ? -1.0 : 1.0);
    }
    xi[0] = -1.0;
    xi[N] = 1.0;
    w[0] *= 0.5;
    w[N] *= 0.5;

    const double scale = 2.0 / (b - a);
    Eigen::MatrixXd D(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
        double diag = 0.0;
        for (int j = 0; j <= N; ++j) {
            if (j == i) continue;
            const double entry = (w[j] / w[i]) / (xi[i] - xi[j]);
            D(i, j) = entry * scale;
            diag -= entry;
        }
        D(i, i) = diag * scale;
    }
    return D;
}

std::vector<double> exponential_filter(int N, int p) {
    if (N < 1) throw validation_error("exponential_filter: N must be >= 1");
    if (p < 2 || p % 2 != 0)
        throw validation_error("exponential_filter: order must be even and >= 2");
    const double alpha = -std::log(DBL_EPSILON);
    std::vector<double> sigma(N + 1);
    for (int j = 0; j <= N; ++j)
        sigma[j] = std::exp(-alpha * std::pow(static_cast<double>(j) / N, p));
    sigma[0] = 1.0;
    return sigma;
}

namespace {

// cos(pi * r / N) with exact periodic index reduction, shared by the
// transform matrices so analysis and synthesis use identical values.
struct CosTable {
    int N;
    std::vector<double> values;  // cos(pi r / N), r = 0..2N-1
    explicit CosTable(int N_) : N(N_), values(2 * N_) {
        for (int r = 0; r < 2 * N; ++r) values[r] = std::cos(kPi * r / N);
    }
    double operator()(long long product) const {
        return values[static_cast<int>(product % (2 * N))];
    }
};

}  // namespace

Eigen::MatrixXd chebyshev_analysis(int N) {
    if (N < 1) throw validation_error("chebyshev_analysis: N must be >= 1");
    CosTable table(N);
    Eigen::MatrixXd A(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) {
        const double ck = (k == 0 || k == N) ? 2.0 : 1.0;
        for (int i = 0; i <= N; ++i) {
            const int j = N - i;  // ascending node i sits at cosine index N-i
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            A(k, i) = 2.0 / (ck * cj * N) * table(static_cast<long long>(k) * j);
        }
    }
    return A;
}

Eigen::MatrixXd chebyshev_synthesis(int N) {
    if (N < 1) throw validation_error("chebyshev_synthesis: N must be >= 1");
    CosTable table(N);
    Eigen::MatrixXd S(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
        const int j = N - i;
        for (int k = 0; k <= N; ++k)
            S(i, k) = table(static_cast<long long>(k) * j);
    }
    return S;
}

Eigen::MatrixXd filter_matrix(int N, int p) {
    const std::vector<double> sigma = exponential_filter(N, p);
    Eigen::VectorXd diag(N + 1);
    for (int j = 0; j <= N; ++j) diag[j] = sigma[j];
    return chebyshev_synthesis(N) * diag.asDiagonal() * chebyshev_analysis(N);
}

SpectralOperator make_operator(int N, double a, double b, int filter_order) {
    SpectralOperator op;
    op.N = N;
    op.a = a;
    op.b = b;
    op.nodes = gauss_lobatto_nodes(N, a, b);
    op.diff_matrix = differentiation_matrix(N, a, b);
    op.filter_order = filter_order;
    op.filter_diag = exponential_filter(N, filter_order);
    op.filter_mat = filter_matrix(N, filter_order);
    return op;
}

TimeStepper advection_stepper() {
    TimeStepper s;
    s.dt_rule = [](int N, double) { return 0.5 / (static_cast<double>(N) * N); };
    return s;
}

TimeStepper burgers_stepper() {
    TimeStepper s;
    s.dt_rule = [](int N, double speed) {
        return 0.5 / (static_cast<double>(N) * N * std::max(1.0, speed));
    };
    return s;
}

void tvd_rk3_step(Eigen::VectorXd& u, double t, double dt, const RhsFn& rhs,
                  const InflowFn& inflow, int inflow_index, RK3Workspace& ws) {
    const auto n = u.size();
    ws.u1.resize(n);
    ws.u2.resize(n);
    ws.L.resize(n);

    rhs(u, t, ws.L);
    ws.u1 = u + dt * ws.L;
    if (!ws.u1.allFinite()) throw blow_up_error(t);
    if (inflow) ws.u1[inflow_index] = inflow(t + dt);

    rhs(ws.u1, t + dt, ws.L);
    ws.u2 = 0.75 * u + 0.25 * (ws.u1 + dt * ws.L);
    if (!ws.u2.allFinite()) throw blow_up_error(t);
    if (inflow) ws.u2[inflow_index] = inflow(t + 0.5 * dt);

    rhs(ws.u2, t + 0.5 * dt, ws.L);
    u = (1.0 / 3.0) * u + (2.0 / 3.0) * (ws.u2 + dt * ws.L);
    if (!u.allFinite()) throw blow_up_error(t);
    if (inflow) u[inflow_index] = inflow(t + dt);
}

double barycentric_interpolate(const std::vector<double>& nodes,
                               const Eigen::VectorXd& values, double x) {
    const int N = static_cast<int>(nodes.size()) - 1;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double diff = x - nodes[i];
        if (diff == 0.0) return values[i];
        double w = (i % 2 ? -1.0 : 1.0);
        if (i == 0 || i == N) w *= 0.5;
        const double c = w / diff;
        num += c * values[i];
        den += c;
    }
    return num / den;
}

}  // namespace deltareg
