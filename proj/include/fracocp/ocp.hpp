#pragma once

#include <span>

#include "fracocp/fem1d.hpp"
#include "fracocp/fracweights.hpp"
#include "fracocp/grid.hpp"
#include "fracocp/subdiff.hpp"
#include "fracocp/trajectory.hpp"

namespace fracocp {

/// min (tau/2) sum_n ||U^n - u_d(t_n)||^2 + gamma ||Q^{n-1}||^2  over  lower <= Q <= upper,
/// subject to the fully discrete subdiffusion equation driven by f + Q.
struct OcpProblem {
    double gamma = 1.0;
    double lower = 0.0;
    double upper = 0.05;
    SpaceTimeFn source;  ///< f; empty means 0
    SpaceTimeFn target;  ///< u_d; empty means 0
    TimeGrid time;
    Mesh1D mesh;
    Scheme scheme = Scheme::L1;
    double alpha = 0.5;
};

void validate(const OcpProblem& prob);

struct OcpSolution {
    Trajectory state;    ///< U^0..U^N
    Trajectory adjoint;  ///< Z^0..Z^N, Z^N = 0
    Trajectory control;  ///< Q^0..Q^{N-1}
    double objective = 0.0;
    int iterations = 0;
    double residual = 0.0;  ///< |||Q_{k+1} - Q_k|||_tau of the last fixed-point step
};

struct OcpOptions {
    double tol = 1e-10;
    int max_iter = 200;
    double damping = 1.0;
    HistoryMethod history = HistoryMethod::Automatic;
    const Trajectory* initial_control = nullptr;
};

/// Precomputed pieces of a problem: factored step matrix, source loads, projected targets.
class OcpModel {
public:
    explicit OcpModel(const OcpProblem& prob, HistoryMethod history = HistoryMethod::Automatic);

    const OcpProblem& problem() const { return prob_; }
    const SteppingSystem& system() const { return sys_; }

    Trajectory state(const Trajectory& control) const;
    Trajectory adjoint(const Trajectory& state) const;
    double objective(const Trajectory& state, const Trajectory& control) const;
    /// gamma Q^{n-1} + Z^{n-1}: the gradient of the reduced objective in the [.,.]_tau sense.
    Trajectory gradient(const Trajectory& control) const;
    /// P_h u_d(t_n), n = 0..N.
    const Trajectory& projected_target() const { return target_proj_; }

private:
    OcpProblem prob_;
    HistoryMethod history_;
    SteppingSystem sys_;
    Trajectory source_loads_;
    Trajectory target_loads_;
    Trajectory target_proj_;
};

/// max(a, min(v_i, b)) elementwise.
NodalFn clamp_project(std::span<const double> v, double a, double b);

/// [v, w]_tau = tau sum_n (v_n, w_n)_{L2}.
double discrete_inner(const Mesh1D& mesh, double tau, const SeqView& v, const SeqView& w);
double discrete_norm(const Mesh1D& mesh, double tau, const SeqView& v);

double objective(const OcpProblem& prob, const Trajectory& state, const Trajectory& control);

/// Damped projected fixed point Q <- (1 - w) Q + w P_[a,b](-Z(Q) / gamma).
/// Throws NonConvergence after max_iter steps.
OcpSolution solve_ocp(const OcpProblem& prob, const OcpOptions& options = {});
OcpSolution solve_ocp(const OcpModel& model, const OcpOptions& options = {});

/// max_n || Q^{n-1} - P_[a,b](-Z^{n-1} / gamma) ||_{L2}, with Z re-solved from sol.control.
double kkt_residual(const OcpProblem& prob, const OcpSolution& sol);
double kkt_residual(const OcpModel& model, const Trajectory& control);

}  // namespace fracocp
