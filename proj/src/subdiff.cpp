#include "fracocp/subdiff.hpp"

#include <cmath>
#include <string>

#include "fracocp/errors.hpp"

namespace fracocp {

namespace {

void check_rows(const Trajectory* t, int entries, int dim, const char* what) {
    if (t == nullptr) return;
    if (t->entries() != entries || t->dim() != dim) {
        throw InvalidArgument(std::string(what) + ": expected " + std::to_string(entries) + " x " +
                              std::to_string(dim) + " trajectory, got " + std::to_string(t->entries()) + " x " +
                              std::to_string(t->dim()));
    }
}

void add_load(const Mesh1D& mesh, const SpaceTimeFn& f, double t, double weight, std::span<double> row) {
    const auto b = load_vector(mesh, [&](double x) { return f(x, t); });
    for (std::size_t i = 0; i < b.size(); ++i) row[i] += weight * b[i];
}

}  // namespace

SteppingSystem factor_system(const FracWeights& w, const TimeGrid& time, const Mesh1D& mesh) {
    if (w.size() < time.N + 1) throw InvalidArgument("factor_system: need N + 1 weights");
    const double scale = w.scale(time.tau);
    TriDiag mass = assemble_mass(mesh);
    TriDiag stiffness = assemble_stiffness(mesh);
    TriDiag matrix = combine(scale * w.betas[0], mass, 1.0, stiffness);
    ThomasFactor factor(matrix);
    return SteppingSystem{w, time, mesh, scale, std::move(mass), std::move(stiffness), std::move(matrix),
                          std::move(factor)};
}

Trajectory source_loads(const Mesh1D& mesh, const TimeGrid& time, const SourceSpec& source) {
    Trajectory loads(time.N + 1, mesh.interior());
    if (!source.f) return loads;
    for (int n = 1; n <= time.N; ++n) {
        if (source.kind == SourceKind::Pointwise) {
            add_load(mesh, source.f, time.t(n), 1.0, loads[n]);
        } else {
            for (int q = 0; q < Gauss3::size; ++q) {
                add_load(mesh, source.f, time.t(n - 1) + Gauss3::nodes[q] * time.tau, Gauss3::weights[q], loads[n]);
            }
        }
    }
    return loads;
}

Trajectory sampled_loads(const Mesh1D& mesh, const TimeGrid& time, const SpaceTimeFn& target) {
    Trajectory loads(time.N + 1, mesh.interior());
    if (!target) return loads;
    for (int n = 0; n <= time.N; ++n) add_load(mesh, target, time.t(n), 1.0, loads[n]);
    return loads;
}

Trajectory solve_forward(const SteppingSystem& sys, const Trajectory* loads, const Trajectory* control,
                         HistoryMethod method) {
    const int N = sys.time.N;
    const int dim = sys.mesh.interior();
    check_rows(loads, N + 1, dim, "solve_forward loads");
    check_rows(control, N, dim, "solve_forward control");

    Trajectory U(N + 1, dim);
    std::vector<double> work(dim), rhs(dim);
    const StepFn step = [&](int n, std::span<const double> history, std::span<double> out) {
        // rhs = loads^n + M (Q^{n-1} - scale * H^n)
        for (int i = 0; i < dim; ++i) {
            work[i] = -sys.scale * history[i];
            if (control != nullptr) work[i] += (*control)[n - 1][i];
        }
        sys.mass.apply(work, rhs);
        if (loads != nullptr) {
            const auto l = (*loads)[n];
            for (int i = 0; i < dim; ++i) rhs[i] += l[i];
        }
        sys.factor.solve(rhs, out);
    };
    march(sys.weights.betas, U, step, method);
    return U;
}

Trajectory solve_forward(const SteppingSystem& sys, const SourceSpec& source, const Trajectory* control,
                         HistoryMethod method) {
    if (!source.f) return solve_forward(sys, static_cast<const Trajectory*>(nullptr), control, method);
    const Trajectory loads = source_loads(sys.mesh, sys.time, source);
    return solve_forward(sys, &loads, control, method);
}

Trajectory solve_forward(const FracWeights& w, const TimeGrid& time, const Mesh1D& mesh, const SourceSpec& source,
                         const Trajectory* control) {
    return solve_forward(factor_system(w, time, mesh), source, control);
}

Trajectory solve_adjoint(const SteppingSystem& sys, const Trajectory& state, const Trajectory* target_loads,
                         HistoryMethod method) {
    const int N = sys.time.N;
    const int dim = sys.mesh.interior();
    check_rows(&state, N + 1, dim, "solve_adjoint state");
    check_rows(target_loads, N + 1, dim, "solve_adjoint target");

    // Y^m = Z^{N-m} turns the backward problem into a forward march with data index N - m + 1.
    Trajectory Y(N + 1, dim);
    std::vector<double> work(dim), rhs(dim);
    const StepFn step = [&](int m, std::span<const double> history, std::span<double> out) {
        const int n = N - m + 1;
        const auto u = state[n];
        for (int i = 0; i < dim; ++i) work[i] = u[i] - sys.scale * history[i];
        sys.mass.apply(work, rhs);
        if (target_loads != nullptr) {
            const auto l = (*target_loads)[n];
            for (int i = 0; i < dim; ++i) rhs[i] -= l[i];
        }
        sys.factor.solve(rhs, out);
    };
    march(sys.weights.betas, Y, step, method);

    Trajectory Z(N + 1, dim);
    for (int m = 0; m <= N; ++m) std::copy(Y[m].begin(), Y[m].end(), Z[N - m].begin());
    return Z;
}

Trajectory solve_adjoint(const SteppingSystem& sys, const Trajectory& state, const SpaceTimeFn& target,
                         HistoryMethod method) {
    if (!target) return solve_adjoint(sys, state, static_cast<const Trajectory*>(nullptr), method);
    const Trajectory loads = sampled_loads(sys.mesh, sys.time, target);
    return solve_adjoint(sys, state, &loads, method);
}

}  // namespace fracocp
