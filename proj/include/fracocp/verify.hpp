#pragma once

#include <vector>

#include "fracocp/grid.hpp"
#include "fracocp/ocp.hpp"
#include "fracocp/subdiff.hpp"
#include "fracocp/trajectory.hpp"

// Independent reference computations. None of these call the tridiagonal
// solver or the convolution marcher they are used to check.
namespace fracocp::verify {

/// Row-major dense matrix with an LU solve (partial pivoting).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

    std::vector<double> apply(const std::vector<double>& x) const;
    DenseMatrix multiply(const DenseMatrix& B) const;
    DenseMatrix transpose() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

/// Solves A X = B by Gaussian elimination with partial pivoting.
DenseMatrix dense_solve(DenseMatrix A, DenseMatrix B);
std::vector<double> dense_solve(const DenseMatrix& A, const std::vector<double>& b);

/// u(x, t) and the source g that makes it solve  RL-derivative(u) - u_xx = g, u(., 0) = 0.
struct ManufacturedCase {
    double alpha = 0.5;
    SpaceTimeFn u_exact;
    SpaceTimeFn source;
};

/// u = t^2 sin(pi x), g = (Gamma(3) / Gamma(3 - alpha)) t^{2-alpha} sin(pi x) + pi^2 t^2 sin(pi x).
ManufacturedCase manufactured_t2(double alpha);

/// Largest control problem the oracle accepts, counted in control unknowns N (M - 1).
inline constexpr int kQpOracleMaxUnknowns = 64;

struct QpOracleResult {
    Trajectory control;
    double objective = 0.0;
    int iterations = 0;
    double step = 0.0;  ///< max-norm of the last projected-gradient update
};

/// Dense all-at-once formulation of the discrete control problem, minimized by
/// projected gradient with the mass-weighted (Riesz) gradient until updates fall below 1e-12.
QpOracleResult qp_oracle(const OcpProblem& prob);

/// Objective of `control` evaluated through the dense control-to-state map.
double qp_objective(const OcpProblem& prob, const Trajectory& control);

/// Classical backward Euler for u_t - u_xx = g, u(0) = 0, P1 in space, dense solves.
Trajectory backward_euler_heat(const TimeGrid& time, const Mesh1D& mesh, const SpaceTimeFn& source);

}  // namespace fracocp::verify
