#include "fracocp/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracocp/errors.hpp"

namespace fracocp {

void validate(const OcpProblem& prob) {
    if (!(prob.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(prob.lower < prob.upper)) throw InvalidArgument("control bounds need lower < upper");
    if (!(prob.alpha > 0.0 && prob.alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    if (prob.time.N < 1 || !(prob.time.tau > 0.0)) throw InvalidArgument("invalid time grid");
    if (prob.mesh.M < 2) throw InvalidArgument("invalid mesh");
}

NodalFn clamp_project(std::span<const double> v, double a, double b) {
    if (!(a < b)) throw InvalidArgument("clamp_project needs a < b");
    NodalFn out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return std::clamp(x, a, b); });
    return out;
}

double discrete_inner(const Mesh1D& mesh, double tau, const SeqView& v, const SeqView& w) {
    if (v.count() != w.count()) {
        throw InvalidArgument("discrete_inner: sequences have " + std::to_string(v.count()) + " and " +
                              std::to_string(w.count()) + " entries");
    }
    double s = 0.0;
    for (int n = 0; n < v.count(); ++n) s += l2_inner(mesh, v[n], w[n]);
    return tau * s;
}

double discrete_norm(const Mesh1D& mesh, double tau, const SeqView& v) {
    return std::sqrt(std::max(0.0, discrete_inner(mesh, tau, v, v)));
}

OcpModel::OcpModel(const OcpProblem& prob, HistoryMethod history)
    : prob_(prob),
      history_(history),
      sys_((validate(prob), factor_system(make_weights(prob.scheme, prob.alpha, prob.time.N), prob.time, prob.mesh))),
      source_loads_(source_loads(prob.mesh, prob.time, SourceSpec{SourceKind::Pointwise, prob.source})),
      target_loads_(sampled_loads(prob.mesh, prob.time, prob.target)),
      target_proj_(target_loads_.entries(), target_loads_.dim()) {
    const ThomasFactor mass(sys_.mass);
    for (int n = 0; n < target_loads_.entries(); ++n) mass.solve(target_loads_[n], target_proj_[n]);
}

Trajectory OcpModel::state(const Trajectory& control) const {
    const Trajectory* loads = prob_.source ? &source_loads_ : nullptr;
    return solve_forward(sys_, loads, &control, history_);
}

Trajectory OcpModel::adjoint(const Trajectory& state) const {
    const Trajectory* loads = prob_.target ? &target_loads_ : nullptr;
    return solve_adjoint(sys_, state, loads, history_);
}

double OcpModel::objective(const Trajectory& state, const Trajectory& control) const {
    const int N = prob_.time.N;
    const int dim = prob_.mesh.interior();
    if (state.entries() != N + 1 || control.entries() != N || state.dim() != dim || control.dim() != dim) {
        throw InvalidArgument("objective: trajectory shapes do not match the grids");
    }
    std::vector<double> d(dim);
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) {
        const auto u = state[n];
        const auto p = target_proj_[n];
        for (int i = 0; i < dim; ++i) d[i] = u[i] - p[i];
        sum += l2_inner(prob_.mesh, d, d) + prob_.gamma * l2_inner(prob_.mesh, control[n - 1], control[n - 1]);
    }
    return 0.5 * prob_.time.tau * sum;
}

Trajectory OcpModel::gradient(const Trajectory& control) const {
    const Trajectory Z = adjoint(state(control));
    Trajectory g(control.entries(), control.dim());
    for (int n = 0; n < control.entries(); ++n) {
        for (int i = 0; i < control.dim(); ++i) g[n][i] = prob_.gamma * control[n][i] + Z[n][i];
    }
    return g;
}

double objective(const OcpProblem& prob, const Trajectory& state, const Trajectory& control) {
    return OcpModel(prob).objective(state, control);
}

namespace {

// P_[a,b](-Z^{n-1} / gamma) for n = 1..N.
Trajectory complementarity_map(const OcpProblem& prob, const Trajectory& Z) {
    const int N = prob.time.N;
    Trajectory T(N, Z.dim());
    for (int n = 0; n < N; ++n) {
        for (int i = 0; i < Z.dim(); ++i) T[n][i] = std::clamp(-Z[n][i] / prob.gamma, prob.lower, prob.upper);
    }
    return T;
}

}  // namespace

OcpSolution solve_ocp(const OcpModel& model, const OcpOptions& options) {
    const OcpProblem& prob = model.problem();
    if (!(options.tol > 0.0)) throw InvalidArgument("solve_ocp: tol must be positive");
    if (!(options.damping > 0.0 && options.damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (options.max_iter < 1) throw InvalidArgument("solve_ocp: max_iter must be positive");

    const int N = prob.time.N;
    const int dim = prob.mesh.interior();
    const double tau = prob.time.tau;

    Trajectory Q(N, dim);
    if (options.initial_control != nullptr) {
        if (options.initial_control->entries() != N || options.initial_control->dim() != dim) {
            throw InvalidArgument("solve_ocp: initial control has the wrong shape");
        }
        Q = *options.initial_control;
    }
    for (int n = 0; n < N; ++n) {
        const auto c = clamp_project(Q[n], prob.lower, prob.upper);
        std::copy(c.begin(), c.end(), Q[n].begin());
    }

    double omega = options.damping;
    double last_step = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= options.max_iter; ++k) {
        Trajectory U = model.state(Q);
        Trajectory Z = model.adjoint(U);
        const Trajectory T = complementarity_map(prob, Z);

        Trajectory next(N, dim);
        auto nv = next.values();
        const auto qv = Q.values();
        const auto tv = T.values();
        for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = (1.0 - omega) * qv[i] + omega * tv[i];

        Trajectory diff = next;
        auto dv = diff.values();
        for (std::size_t i = 0; i < dv.size(); ++i) dv[i] -= qv[i];
        const double step = discrete_norm(prob.mesh, tau, diff.view());
        const double size = discrete_norm(prob.mesh, tau, Q.view());

        if (step <= options.tol * std::max(1.0, size)) {
            OcpSolution sol;
            if (step == 0.0) {
                sol.state = std::move(U);
                sol.adjoint = std::move(Z);
            } else {
                sol.state = model.state(next);
                sol.adjoint = model.adjoint(sol.state);
            }
            sol.control = std::move(next);
            sol.objective = model.objective(sol.state, sol.control);
            sol.iterations = k;
            sol.residual = step;
            return sol;
        }
        if (step > last_step && omega > 0.5) omega = 0.5;
        last_step = step;
        Q = std::move(next);
    }
    throw NonConvergence("projected fixed point did not converge in " + std::to_string(options.max_iter) +
                             " iterations",
                         options.max_iter, last_step);
}

OcpSolution solve_ocp(const OcpProblem& prob, const OcpOptions& options) {
    return solve_ocp(OcpModel(prob, options.history), options);
}

double kkt_residual(const OcpModel& model, const Trajectory& control) {
    const OcpProblem& prob = model.problem();
    const Trajectory Z = model.adjoint(model.state(control));
    const Trajectory T = complementarity_map(prob, Z);
    double worst = 0.0;
    std::vector<double> d(control.dim());
    for (int n = 0; n < control.entries(); ++n) {
        for (int i = 0; i < control.dim(); ++i) d[i] = control[n][i] - T[n][i];
        worst = std::max(worst, l2_norm(prob.mesh, d));
    }
    return worst;
}

double kkt_residual(const OcpProblem& prob, const OcpSolution& sol) {
    return kkt_residual(OcpModel(prob), sol.control);
}

}  // namespace fracocp
