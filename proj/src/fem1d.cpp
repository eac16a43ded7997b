#include "fracocp/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracocp/errors.hpp"

namespace fracocp {

const double Gauss3::nodes[3] = {0.5 - 0.5 * 0.7745966692414833770, 0.5, 0.5 + 0.5 * 0.7745966692414833770};
const double Gauss3::weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

namespace {

void check_length(const Mesh1D& mesh, std::size_t n, const char* what) {
    if (n != static_cast<std::size_t>(mesh.interior())) {
        throw InvalidArgument(std::string(what) + ": expected " + std::to_string(mesh.interior()) +
                              " coefficients, got " + std::to_string(n));
    }
}

TriDiag constant_tridiag(int n, double off, double diag) {
    TriDiag A;
    A.diag.assign(n, diag);
    A.sub.assign(n > 0 ? n - 1 : 0, off);
    A.super.assign(n > 0 ? n - 1 : 0, off);
    return A;
}

}  // namespace

void TriDiag::apply(std::span<const double> x, std::span<double> y) const {
    const int n = size();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) {
        throw InvalidArgument("TriDiag::apply: size mismatch");
    }
    if (n == 0) return;
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + super[0] * x[1];
    for (int i = 1; i < n - 1; ++i) {
        y[i] = sub[i - 1] * x[i - 1] + diag[i] * x[i] + super[i] * x[i + 1];
    }
    y[n - 1] = sub[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

std::vector<double> TriDiag::apply(std::span<const double> x) const {
    std::vector<double> y(x.size());
    apply(x, y);
    return y;
}

TriDiag combine(double alpha, const TriDiag& A, double beta, const TriDiag& B) {
    if (A.size() != B.size()) throw InvalidArgument("combine: size mismatch");
    TriDiag C = A;
    for (std::size_t i = 0; i < C.diag.size(); ++i) C.diag[i] = alpha * A.diag[i] + beta * B.diag[i];
    for (std::size_t i = 0; i < C.sub.size(); ++i) {
        C.sub[i] = alpha * A.sub[i] + beta * B.sub[i];
        C.super[i] = alpha * A.super[i] + beta * B.super[i];
    }
    return C;
}

ThomasFactor::ThomasFactor(const TriDiag& A) : sub_(A.sub), upper_(A.super), inv_pivot_(A.diag.size()) {
    const int n = A.size();
    if (n == 0) throw InvalidArgument("ThomasFactor: empty matrix");
    if (static_cast<int>(A.sub.size()) != n - 1 || static_cast<int>(A.super.size()) != n - 1) {
        throw InvalidArgument("ThomasFactor: off-diagonals must have length n - 1");
    }
    double pivot = A.diag[0];
    for (int i = 0;; ++i) {
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw SingularMatrix("zero pivot in tridiagonal elimination at row " + std::to_string(i));
        }
        inv_pivot_[i] = 1.0 / pivot;
        if (i == n - 1) break;
        upper_[i] = A.super[i] * inv_pivot_[i];
        pivot = A.diag[i + 1] - A.sub[i] * upper_[i];
    }
}

void ThomasFactor::solve(std::span<const double> rhs, std::span<double> x) const {
    const int n = size();
    if (static_cast<int>(rhs.size()) != n || static_cast<int>(x.size()) != n) {
        throw InvalidArgument("ThomasFactor::solve: size mismatch");
    }
    x[0] = rhs[0] * inv_pivot_[0];
    for (int i = 1; i < n; ++i) x[i] = (rhs[i] - sub_[i - 1] * x[i - 1]) * inv_pivot_[i];
    for (int i = n - 2; i >= 0; --i) x[i] -= upper_[i] * x[i + 1];
}

std::vector<double> ThomasFactor::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.size());
    solve(rhs, x);
    return x;
}

std::vector<double> thomas_solve(const TriDiag& A, std::span<const double> b) { return ThomasFactor(A).solve(b); }

TriDiag assemble_mass(const Mesh1D& mesh) {
    return constant_tridiag(mesh.interior(), mesh.h / 6.0, 4.0 * mesh.h / 6.0);
}

TriDiag assemble_stiffness(const Mesh1D& mesh) {
    return constant_tridiag(mesh.interior(), -1.0 / mesh.h, 2.0 / mesh.h);
}

std::vector<double> load_vector(const Mesh1D& mesh, const SpaceFn& f) {
    const int n = mesh.interior();
    std::vector<double> b(n, 0.0);
    for (int e = 0; e < mesh.M; ++e) {
        const double x0 = mesh.node(e);
        double left = 0.0, right = 0.0;
        for (int q = 0; q < Gauss3::size; ++q) {
            const double xi = Gauss3::nodes[q];
            const double fx = f(x0 + xi * mesh.h);
            if (!std::isfinite(fx)) {
                throw EvaluationError("non-finite integrand at x = " + std::to_string(x0 + xi * mesh.h));
            }
            const double wq = Gauss3::weights[q] * mesh.h * fx;
            left += wq * (1.0 - xi);
            right += wq * xi;
        }
        // element e spans nodes e and e + 1, i.e. coefficients e - 1 and e
        if (e >= 1) b[e - 1] += left;
        if (e + 1 <= n) b[e] += right;
    }
    return b;
}

NodalFn l2_project(const Mesh1D& mesh, const SpaceFn& f) {
    return thomas_solve(assemble_mass(mesh), load_vector(mesh, f));
}

NodalFn interpolate(const Mesh1D& mesh, const SpaceFn& f) {
    NodalFn v(mesh.interior());
    for (int k = 0; k < mesh.interior(); ++k) v[k] = f(mesh.coord(k));
    return v;
}

double l2_inner(const Mesh1D& mesh, std::span<const double> v, std::span<const double> w) {
    check_length(mesh, v.size(), "l2_inner");
    check_length(mesh, w.size(), "l2_inner");
    const int n = mesh.interior();
    const double h6 = mesh.h / 6.0;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double mw = 4.0 * w[i];
        if (i > 0) mw += w[i - 1];
        if (i + 1 < n) mw += w[i + 1];
        s += v[i] * mw;
    }
    return h6 * s;
}

double l2_norm(const Mesh1D& mesh, std::span<const double> v) {
    return std::sqrt(std::max(0.0, l2_inner(mesh, v, v)));
}

NodalFn prolong(const Mesh1D& coarse, std::span<const double> v, const Mesh1D& fine) {
    check_length(coarse, v.size(), "prolong");
    const int r = nesting(coarse, fine).ratio;
    NodalFn out(fine.interior());
    // nodal values including the two boundary zeros
    auto coarse_at = [&](int i) { return (i == 0 || i == coarse.M) ? 0.0 : v[i - 1]; };
    for (int i = 1; i < fine.M; ++i) {
        const int e = i / r;
        const int off = i % r;
        const double s = static_cast<double>(off) / r;
        out[i - 1] = off == 0 ? coarse_at(e) : (1.0 - s) * coarse_at(e) + s * coarse_at(e + 1);
    }
    return out;
}

NodalFn restrict_nodes(const Mesh1D& fine, std::span<const double> v, const Mesh1D& coarse) {
    check_length(fine, v.size(), "restrict_nodes");
    const NestingMap map = nesting(coarse, fine);
    NodalFn out(coarse.interior());
    for (int k = 0; k < coarse.interior(); ++k) out[k] = v[map.fine_index(k + 1) - 1];
    return out;
}

double l2_diff_nested(const Mesh1D& coarse, std::span<const double> coarse_v, const Mesh1D& fine,
                      std::span<const double> fine_v) {
    check_length(fine, fine_v.size(), "l2_diff_nested");
    NodalFn d = prolong(coarse, coarse_v, fine);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= fine_v[i];
    return l2_norm(fine, d);
}

}  // namespace fracocp
