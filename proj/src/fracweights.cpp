#include "fracocp/fracweights.hpp"

#include <cmath>
#include <string>

#include "fracocp/errors.hpp"

namespace fracocp {

namespace {

void check_order(double alpha, int N) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("fractional order must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (N < 0) throw InvalidArgument("weight count must be nonnegative");
}

// (1+x)^p + (1-x)^p - 2 for 0 < x <= 1/8, summed as 2 sum_k C(p,2k) x^{2k}.
// Every term has the same sign when 0 <= p < 1, so no cancellation occurs.
double second_difference_series(double p, double x) {
    const double x2 = x * x;
    double coeff = p * (p - 1.0) / 2.0;  // C(p, 2)
    double power = x2;
    double sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        const double term = coeff * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        const double m = 2.0 * k;
        coeff *= (p - m) * (p - m - 1.0) / ((m + 1.0) * (m + 2.0));
        power *= x2;
    }
    return 2.0 * sum;
}

void check_step(const FracWeights& w, const Trajectory& traj, int n, int lo, int hi) {
    if (n < lo || n > hi) {
        throw InvalidArgument("step index " + std::to_string(n) + " outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    }
    if (w.size() < traj.entries()) throw InvalidArgument("not enough weights for trajectory length");
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
    if (name == "l1" || name == "L1") return Scheme::L1;
    if (name == "cq" || name == "becq" || name == "BECQ") return Scheme::BECQ;
    throw InvalidArgument("unknown scheme '" + std::string(name) + "' (expected l1 or cq)");
}

double FracWeights::scale(double tau) const { return prefactor * std::pow(tau, -alpha); }

std::string_view to_string(Scheme scheme) { return scheme == Scheme::L1 ? "l1" : "cq"; }

FracWeights l1_weights(double alpha, int N) {
    check_order(alpha, N);
    const double p = 1.0 - alpha;
    FracWeights w{Scheme::L1, alpha, std::vector<double>(N + 1), 1.0 / std::tgamma(2.0 - alpha)};
    w.betas[0] = 1.0;
    for (int j = 1; j <= N; ++j) {
        if (alpha == 1.0) {
            w.betas[j] = j == 1 ? -1.0 : 0.0;
        } else if (j < 8) {
            // (j-1)^p vanishes for j = 1 since p > 0
            const double lower = j == 1 ? 0.0 : std::pow(j - 1.0, p);
            w.betas[j] = std::pow(j + 1.0, p) - 2.0 * std::pow(double(j), p) + lower;
        } else {
            w.betas[j] = std::pow(double(j), p) * second_difference_series(p, 1.0 / j);
        }
    }
    return w;
}

FracWeights cq_weights(double alpha, int N) {
    check_order(alpha, N);
    FracWeights w{Scheme::BECQ, alpha, std::vector<double>(N + 1), 1.0};
    w.betas[0] = 1.0;
    for (int j = 1; j <= N; ++j) w.betas[j] = -w.betas[j - 1] * (alpha - j + 1.0) / j;
    return w;
}

FracWeights make_weights(Scheme scheme, double alpha, int N) {
    return scheme == Scheme::L1 ? l1_weights(alpha, N) : cq_weights(alpha, N);
}

std::vector<double> frac_deriv_forward(const FracWeights& w, double tau, const Trajectory& traj, int n) {
    check_step(w, traj, n, 1, traj.entries() - 1);
    std::vector<double> out(traj.dim(), 0.0);
    for (int j = 0; j <= n; ++j) {
        const double b = w.betas[n - j];
        const auto row = traj[j];
        for (int i = 0; i < traj.dim(); ++i) out[i] += b * row[i];
    }
    const double scale = w.scale(tau);
    for (double& v : out) v *= scale;
    return out;
}

std::vector<double> frac_deriv_adjoint(const FracWeights& w, double tau, const Trajectory& traj, int n) {
    const int N = traj.entries() - 1;
    check_step(w, traj, n, 0, N - 1);
    std::vector<double> out(traj.dim(), 0.0);
    for (int i = n; i <= N; ++i) {
        const double b = w.betas[i - n];
        const auto row = traj[i];
        for (int k = 0; k < traj.dim(); ++k) out[k] += b * row[k];
    }
    const double scale = w.scale(tau);
    for (double& v : out) v *= scale;
    return out;
}

}  // namespace fracocp
