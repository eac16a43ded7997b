#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracocp/grid.hpp"

namespace fracocp {

/// Interior nodal coefficients of a continuous piecewise-linear function that
/// vanishes at x = 0 and x = 1.
using NodalFn = std::vector<double>;

using SpaceFn = std::function<double(double)>;

/// Tridiagonal matrix; sub[i] couples rows i + 1 and i, super[i] couples rows i and i + 1.
struct TriDiag {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;

    int size() const { return static_cast<int>(diag.size()); }

    /// y = A x.
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;
};

/// Returns alpha * A + beta * B entrywise (same sizes).
TriDiag combine(double alpha, const TriDiag& A, double beta, const TriDiag& B);

/// LU factors of a tridiagonal matrix, computed once and reused for many solves.
class ThomasFactor {
public:
    explicit ThomasFactor(const TriDiag& A);

    int size() const { return static_cast<int>(inv_pivot_.size()); }
    /// Solves A x = rhs; rhs and x may alias.
    void solve(std::span<const double> rhs, std::span<double> x) const;
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    std::vector<double> sub_;
    std::vector<double> upper_;      // super-diagonal scaled by the pivot
    std::vector<double> inv_pivot_;
};

std::vector<double> thomas_solve(const TriDiag& A, std::span<const double> b);

TriDiag assemble_mass(const Mesh1D& mesh);
TriDiag assemble_stiffness(const Mesh1D& mesh);

/// b_i = (f, phi_i), three-point Gauss rule on every element.
std::vector<double> load_vector(const Mesh1D& mesh, const SpaceFn& f);

/// L2(0,1) projection onto the P1 space.
NodalFn l2_project(const Mesh1D& mesh, const SpaceFn& f);
/// Nodal interpolant.
NodalFn interpolate(const Mesh1D& mesh, const SpaceFn& f);

double l2_inner(const Mesh1D& mesh, std::span<const double> v, std::span<const double> w);
double l2_norm(const Mesh1D& mesh, std::span<const double> v);

/// Exact P1 prolongation from a mesh onto a nested refinement.
NodalFn prolong(const Mesh1D& coarse, std::span<const double> v, const Mesh1D& fine);

/// Values of a fine-mesh function at the nodes of a nested coarse mesh.
NodalFn restrict_nodes(const Mesh1D& fine, std::span<const double> v, const Mesh1D& coarse);

/// || prolong(coarse_v) - fine_v ||_{L2} measured on the fine mesh.
double l2_diff_nested(const Mesh1D& coarse, std::span<const double> coarse_v, const Mesh1D& fine,
                      std::span<const double> fine_v);

/// Three-point Gauss rule on [0, 1].
struct Gauss3 {
    static constexpr int size = 3;
    static const double nodes[3];
    static const double weights[3];
};

}  // namespace fracocp
