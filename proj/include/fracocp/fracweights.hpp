#pragma once

#include <string_view>
#include <vector>

#include "fracocp/trajectory.hpp"

namespace fracocp {

enum class Scheme { L1, BECQ };

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);

/// Convolution weights beta_0..beta_N of a discrete fractional derivative
///   d^n = c tau^{-alpha} sum_{j=0}^{n} beta_{n-j} phi^j,
/// with c = 1 / Gamma(2 - alpha) for L1 and c = 1 for BE-CQ.
struct FracWeights {
    Scheme scheme = Scheme::L1;
    double alpha = 1.0;
    std::vector<double> betas;
    double prefactor = 1.0;  ///< c above

    int size() const { return static_cast<int>(betas.size()); }
    /// c tau^{-alpha}
    double scale(double tau) const;
};

/// beta_j = (j+1)^{1-a} - 2 j^{1-a} + (j-1)^{1-a}, beta_0 = 1, prefactor 1 / Gamma(2 - a).
FracWeights l1_weights(double alpha, int N);
/// Taylor coefficients of (1 - z)^alpha.
FracWeights cq_weights(double alpha, int N);
FracWeights make_weights(Scheme scheme, double alpha, int N);

/// Forward (left-sided) derivative at step n, 1 <= n < traj.entries().
std::vector<double> frac_deriv_forward(const FracWeights& w, double tau, const Trajectory& traj, int n);

/// Backward (right-sided) derivative at step n over the whole trajectory, 0 <= n < N
/// with N = traj.entries() - 1:
///   tau^{-alpha} sum_{i=n}^{N} beta_{i-n} phi^i.
/// Equals frac_deriv_forward of the time-reversed trajectory at step N - n.
std::vector<double> frac_deriv_adjoint(const FracWeights& w, double tau, const Trajectory& traj, int n);

}  // namespace fracocp
