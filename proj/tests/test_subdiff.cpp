#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracocp/errors.hpp"
#include "fracocp/subdiff.hpp"
#include "fracocp/verify.hpp"

using namespace fracocp;
using std::numbers::pi;

namespace {

double max_abs(const Trajectory& a, const Trajectory& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double max_abs(const Trajectory& a) { return max_abs(a, Trajectory(a.entries(), a.dim())); }

Trajectory random_traj(int entries, int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Trajectory t(entries, dim);
    for (double& v : t.values()) v = u(rng);
    return t;
}

}  // namespace

TEST_CASE("zero data gives zero state") {
    const auto U = solve_forward(l1_weights(0.5, 20), make_time_grid(20, 0.1), make_mesh(8), SourceSpec{});
    CHECK(max_abs(U) == 0.0);
}

TEST_CASE("alpha = 1 reduces to backward Euler") {
    const TimeGrid time = make_time_grid(32, 0.5);
    const Mesh1D mesh = make_mesh(16);
    auto f = [](double x, double t) { return std::cos(3 * t) * x * (1 - x) + t * std::sin(5 * x); };
    const auto be = verify::backward_euler_heat(time, mesh, f);
    for (Scheme s : {Scheme::L1, Scheme::BECQ}) {
        const auto U = solve_forward(make_weights(s, 1.0, time.N), time, mesh, SourceSpec{SourceKind::Pointwise, f});
        CHECK(max_abs(U, be) <= 1e-12);
    }
}

TEST_CASE("history methods agree inside the solver") {
    const TimeGrid time = make_time_grid(1200, 0.1);
    const Mesh1D mesh = make_mesh(12);
    const auto sys = factor_system(l1_weights(0.4, time.N), time, mesh);
    const SourceSpec src{SourceKind::Pointwise, [](double x, double t) { return (1 + std::cos(t)) * (x > 0.5); }};
    const auto a = solve_forward(sys, src, nullptr, HistoryMethod::Serial);
    const auto b = solve_forward(sys, src, nullptr, HistoryMethod::Fft);
    const auto c = solve_forward(sys, src, nullptr, HistoryMethod::OpenMP);
    CHECK(max_abs(a, b) <= 1e-12 * max_abs(a));
    CHECK(max_abs(a, c) <= 1e-13 * max_abs(a));
}

TEST_CASE("manufactured solution converges at first order with BE-CQ") {
    const Mesh1D mesh = make_mesh(256);
    const auto mc = verify::manufactured_t2(0.6);
    double prev = 0.0;
    for (int N : {64, 128}) {
        const TimeGrid time = make_time_grid(N, 1.0);
        const auto U = solve_forward(cq_weights(0.6, N), time, mesh, SourceSpec{SourceKind::Pointwise, mc.source});
        double err = 0.0;
        for (int n = 1; n <= N; ++n) {
            const NodalFn ex = interpolate(mesh, [&](double x) { return mc.u_exact(x, time.t(n)); });
            NodalFn d(mesh.interior());
            for (int i = 0; i < mesh.interior(); ++i) d[i] = U[n][i] - ex[i];
            err = std::max(err, l2_norm(mesh, d));
        }
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.1));
        prev = err;
    }
}

TEST_CASE("averaged and pointwise sources coincide for time-independent data") {
    const TimeGrid time = make_time_grid(10, 0.1);
    const Mesh1D mesh = make_mesh(10);
    auto f = [](double x, double) { return x * x; };
    const auto p = source_loads(mesh, time, SourceSpec{SourceKind::Pointwise, f});
    const auto a = source_loads(mesh, time, SourceSpec{SourceKind::Averaged, f});
    CHECK(max_abs(p, a) <= 1e-15);
    for (double v : p[0]) CHECK(v == 0.0);
}

TEST_CASE("adjoint vanishes when the state matches the target") {
    const TimeGrid time = make_time_grid(15, 0.1);
    const Mesh1D mesh = make_mesh(10);
    auto ud = [](double x, double t) { return std::exp(t) * x * (1 - x); };
    const auto sys = factor_system(l1_weights(0.5, time.N), time, mesh);
    Trajectory U(time.N + 1, mesh.interior());
    for (int n = 0; n <= time.N; ++n) {
        const auto p = l2_project(mesh, [&](double x) { return ud(x, time.t(n)); });
        std::copy(p.begin(), p.end(), U[n].begin());
    }
    CHECK(max_abs(solve_adjoint(sys, U, ud)) <= 1e-14);
}

TEST_CASE("adjoint equals the time-reversed forward solve") {
    const TimeGrid time = make_time_grid(40, 0.1);
    const Mesh1D mesh = make_mesh(9);
    const int N = time.N, dim = mesh.interior();
    const Trajectory S = random_traj(N + 1, dim, 21);
    for (Scheme s : {Scheme::L1, Scheme::BECQ}) {
        const auto sys = factor_system(make_weights(s, 0.7, N), time, mesh);
        const auto Z = solve_adjoint(sys, S, static_cast<const Trajectory*>(nullptr));
        Trajectory Q(N, dim);
        for (int m = 1; m <= N; ++m) std::copy(S[N - m + 1].begin(), S[N - m + 1].end(), Q[m - 1].begin());
        const auto Y = solve_forward(sys, static_cast<const Trajectory*>(nullptr), &Q);
        Trajectory Yr(N + 1, dim);
        for (int m = 0; m <= N; ++m) std::copy(Y[m].begin(), Y[m].end(), Yr[N - m].begin());
        CHECK(max_abs(Z, Yr) <= 1e-12);
        for (double v : Z[N]) CHECK(v == 0.0);
    }
}

TEST_CASE("alpha = 1 adjoint is backward Euler backwards in time") {
    const TimeGrid time = make_time_grid(20, 0.3);
    const Mesh1D mesh = make_mesh(8);
    const int N = time.N, m = mesh.interior();
    const Trajectory S = random_traj(N + 1, m, 4);
    const auto sys = factor_system(l1_weights(1.0, N), time, mesh);
    const auto Z = solve_adjoint(sys, S, static_cast<const Trajectory*>(nullptr));

    verify::DenseMatrix K(m, m), Md(m, m);
    const TriDiag M = assemble_mass(mesh), A = assemble_stiffness(mesh);
    for (int i = 0; i < m; ++i) {
        Md(i, i) = M.diag[i];
        K(i, i) = M.diag[i] / time.tau + A.diag[i];
        if (i + 1 < m) {
            Md(i, i + 1) = M.super[i];
            Md(i + 1, i) = M.sub[i];
            K(i, i + 1) = M.super[i] / time.tau + A.super[i];
            K(i + 1, i) = M.sub[i] / time.tau + A.sub[i];
        }
    }
    std::vector<double> z(m, 0.0);
    for (int n = N; n >= 1; --n) {
        std::vector<double> v(m);
        for (int i = 0; i < m; ++i) v[i] = z[i] / time.tau + S[n][i];
        z = verify::dense_solve(K, Md.apply(v));
        for (int i = 0; i < m; ++i) CHECK(Z[n - 1][i] == doctest::Approx(z[i]).epsilon(1e-12));
    }
}

TEST_CASE("factor_system") {
    const TimeGrid time = make_time_grid(10, 0.1);
    const Mesh1D mesh = make_mesh(10);
    const auto cq = factor_system(cq_weights(0.5, 10), time, mesh);
    CHECK(cq.scale == doctest::Approx(10.0).epsilon(1e-14));
    const TriDiag M = assemble_mass(mesh), A = assemble_stiffness(mesh);
    for (int i = 0; i < mesh.interior(); ++i) CHECK(cq.matrix.diag[i] == doctest::Approx(10 * M.diag[i] + A.diag[i]));
    for (int i = 0; i + 1 < mesh.interior(); ++i) CHECK(cq.matrix.sub[i] == doctest::Approx(10 * M.sub[i] + A.sub[i]));

    const auto l1 = factor_system(l1_weights(0.5, 10), time, mesh);
    CHECK(l1.scale == doctest::Approx(10.0 / std::tgamma(1.5)).epsilon(1e-14));

    const Trajectory b = random_traj(1, mesh.interior(), 8);
    const auto x = l1.factor.solve(b[0]);
    const auto back = l1.matrix.apply(x);
    for (int i = 0; i < mesh.interior(); ++i) CHECK(back[i] == doctest::Approx(b[0][i]).epsilon(1e-12));

    const SourceSpec src{SourceKind::Averaged, [](double x, double t) { return std::sin(7 * x + t); }};
    const auto U1 = solve_forward(l1, src);
    const auto U2 = solve_forward(l1, src);
    const auto U3 = solve_forward(factor_system(l1_weights(0.5, 10), time, mesh), src);
    CHECK(U1 == U2);
    CHECK(U1 == U3);
}

TEST_CASE("solver input checks") {
    const TimeGrid time = make_time_grid(10, 0.1);
    const Mesh1D mesh = make_mesh(6);
    CHECK_THROWS_AS(factor_system(l1_weights(0.5, 5), time, mesh), InvalidArgument);
    const auto sys = factor_system(l1_weights(0.5, 10), time, mesh);
    Trajectory bad(3, 5);
    CHECK_THROWS_AS(solve_forward(sys, static_cast<const Trajectory*>(nullptr), &bad), InvalidArgument);
    const SourceSpec nan_src{SourceKind::Pointwise, [](double, double t) { return t > 0.05 ? std::nan("") : 0.0; }};
    CHECK_THROWS_AS(solve_forward(sys, nan_src), EvaluationError);
}
