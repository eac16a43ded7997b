#pragma once

#include <functional>

#include "fracocp/fem1d.hpp"
#include "fracocp/fracweights.hpp"
#include "fracocp/grid.hpp"
#include "fracocp/history.hpp"
#include "fracocp/trajectory.hpp"

namespace fracocp {

using SpaceTimeFn = std::function<double(double x, double t)>;

enum class SourceKind {
    Pointwise,  ///< g^n = P_h g(t_n)
    Averaged,   ///< g^n = P_h of the mean of g over (t_{n-1}, t_n), 3-point Gauss in time
};

struct SourceSpec {
    SourceKind kind = SourceKind::Pointwise;
    SpaceTimeFn f;  ///< empty means g = 0
};

/// Matrices of one (weights, time grid, mesh) triple plus the factored step matrix
///   scale * beta_0 * mass + stiffness,   scale = weights.scale(tau).
/// Built once and shared by every forward and adjoint solve on that triple.
struct SteppingSystem {
    FracWeights weights;
    TimeGrid time;
    Mesh1D mesh;
    double scale = 1.0;
    TriDiag mass;
    TriDiag stiffness;
    TriDiag matrix;
    ThomasFactor factor;
};

SteppingSystem factor_system(const FracWeights& w, const TimeGrid& time, const Mesh1D& mesh);

/// Row n (1..N) holds the load vector (g^n, phi_i), i.e. mass * g^n; row 0 is zero.
Trajectory source_loads(const Mesh1D& mesh, const TimeGrid& time, const SourceSpec& source);

/// Loads of target(., t_n) for n = 0..N (pointwise sampling).
Trajectory sampled_loads(const Mesh1D& mesh, const TimeGrid& time, const SpaceTimeFn& target);

/// Solves  D_tau^alpha U^n - Delta_h U^n = g^n + Q^{n-1},  U^0 = 0,  n = 1..N.
/// `loads` are mass-weighted source rows (may be null); `control` has N rows,
/// row n-1 entering step n (may be null).
Trajectory solve_forward(const SteppingSystem& sys, const Trajectory* loads, const Trajectory* control,
                         HistoryMethod method = HistoryMethod::Automatic);

Trajectory solve_forward(const SteppingSystem& sys, const SourceSpec& source, const Trajectory* control = nullptr,
                         HistoryMethod method = HistoryMethod::Automatic);

/// Factors internally; for one-off solves.
Trajectory solve_forward(const FracWeights& w, const TimeGrid& time, const Mesh1D& mesh, const SourceSpec& source,
                         const Trajectory* control = nullptr);

/// Solves the terminal-value problem backwards from Z^N = 0:
///   Dbar_tau^alpha Z^{n-1} - Delta_h Z^{n-1} = U^n - P_h u_d(t_n),  n = N..1.
/// `target_loads` row n holds mass * P_h u_d(t_n) (may be null for u_d = 0).
Trajectory solve_adjoint(const SteppingSystem& sys, const Trajectory& state, const Trajectory* target_loads,
                         HistoryMethod method = HistoryMethod::Automatic);

Trajectory solve_adjoint(const SteppingSystem& sys, const Trajectory& state, const SpaceTimeFn& target,
                         HistoryMethod method = HistoryMethod::Automatic);

}  // namespace fracocp
