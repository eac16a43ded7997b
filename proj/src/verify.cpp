#include "fracocp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracocp/errors.hpp"
#include "fracocp/fem1d.hpp"

namespace fracocp::verify {

std::vector<double> DenseMatrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& B) const {
    DenseMatrix C(rows_, B.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (int j = 0; j < B.cols_; ++j) C(i, j) += a * B(k, j);
        }
    }
    return C;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix T(cols_, rows_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    }
    return T;
}

DenseMatrix dense_solve(DenseMatrix A, DenseMatrix B) {
    const int n = A.rows();
    if (A.cols() != n || B.rows() != n) throw InvalidArgument("dense_solve: shape mismatch");
    const int m = B.cols();
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r) {
            if (std::abs(A(r, c)) > std::abs(A(p, c))) p = r;
        }
        if (A(p, c) == 0.0) throw SingularMatrix("dense_solve: singular matrix at column " + std::to_string(c));
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(A(c, j), A(p, j));
            for (int j = 0; j < m; ++j) std::swap(B(c, j), B(p, j));
        }
        for (int r = c + 1; r < n; ++r) {
            const double f = A(r, c) / A(c, c);
            if (f == 0.0) continue;
            for (int j = c; j < n; ++j) A(r, j) -= f * A(c, j);
            for (int j = 0; j < m; ++j) B(r, j) -= f * B(c, j);
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        for (int j = 0; j < m; ++j) {
            double s = B(c, j);
            for (int k = c + 1; k < n; ++k) s -= A(c, k) * B(k, j);
            B(c, j) = s / A(c, c);
        }
    }
    return B;
}

std::vector<double> dense_solve(const DenseMatrix& A, const std::vector<double>& b) {
    DenseMatrix B(static_cast<int>(b.size()), 1);
    for (std::size_t i = 0; i < b.size(); ++i) B(static_cast<int>(i), 0) = b[i];
    const DenseMatrix X = dense_solve(A, B);
    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[i] = X(static_cast<int>(i), 0);
    return x;
}

ManufacturedCase manufactured_t2(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("manufactured_t2 needs 0 < alpha < 1");
    constexpr double pi = std::numbers::pi;
    const double coeff = 2.0 / std::tgamma(3.0 - alpha);
    ManufacturedCase mc;
    mc.alpha = alpha;
    mc.u_exact = [](double x, double t) { return t * t * std::sin(pi * x); };
    mc.source = [alpha, coeff](double x, double t) {
        const double s = std::sin(pi * x);
        return coeff * std::pow(t, 2.0 - alpha) * s + pi * pi * t * t * s;
    };
    return mc;
}

namespace {

DenseMatrix dense_mass(const Mesh1D& mesh) {
    const int m = mesh.interior();
    DenseMatrix A(m, m);
    for (int i = 0; i < m; ++i) {
        A(i, i) = 2.0 * mesh.h / 3.0;
        if (i > 0) A(i, i - 1) = mesh.h / 6.0;
        if (i + 1 < m) A(i, i + 1) = mesh.h / 6.0;
    }
    return A;
}

DenseMatrix dense_stiffness(const Mesh1D& mesh) {
    const int m = mesh.interior();
    DenseMatrix A(m, m);
    for (int i = 0; i < m; ++i) {
        A(i, i) = 2.0 / mesh.h;
        if (i > 0) A(i, i - 1) = -1.0 / mesh.h;
        if (i + 1 < m) A(i, i + 1) = -1.0 / mesh.h;
    }
    return A;
}

// Everything the oracle needs, in stacked form over the N steps (block n-1 <-> step n).
struct DenseQp {
    int N = 0;
    int m = 0;
    double tau = 0.0;
    DenseMatrix mass_blocks;  // blockdiag(M)
    DenseMatrix G;            // control-to-state map
    std::vector<double> u0;   // state for zero control
    std::vector<double> pud;  // P_h u_d(t_n)
};

DenseQp assemble_qp(const OcpProblem& prob) {
    validate(prob);
    DenseQp qp;
    qp.N = prob.time.N;
    qp.m = prob.mesh.interior();
    qp.tau = prob.time.tau;
    const int N = qp.N, m = qp.m, size = N * m;
    if (size > kQpOracleMaxUnknowns) {
        throw InvalidArgument("qp_oracle: " + std::to_string(size) + " control unknowns exceed the limit of " +
                              std::to_string(kQpOracleMaxUnknowns));
    }
    const auto w = make_weights(prob.scheme, prob.alpha, N);
    const double c = prob.scheme == Scheme::L1 ? 1.0 / std::tgamma(2.0 - prob.alpha) : 1.0;
    const double scale = c * std::pow(prob.time.tau, -prob.alpha);
    const DenseMatrix M = dense_mass(prob.mesh);
    const DenseMatrix A = dense_stiffness(prob.mesh);

    // All-at-once block lower-triangular Toeplitz system K U = F + Mblk q.
    DenseMatrix K(size, size);
    qp.mass_blocks = DenseMatrix(size, size);
    for (int n = 0; n < N; ++n) {
        for (int j = 0; j <= n; ++j) {
            const double b = scale * w.betas[n - j];
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    K(n * m + r, j * m + c) = b * M(r, c) + (j == n ? A(r, c) : 0.0);
                }
            }
        }
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) qp.mass_blocks(n * m + r, n * m + c) = M(r, c);
        }
    }
    DenseMatrix rhs(size, size + 1);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) rhs(i, j) = qp.mass_blocks(i, j);
    }
    qp.pud.assign(size, 0.0);
    for (int n = 1; n <= N; ++n) {
        const double t = prob.time.t(n);
        if (prob.source) {
            const auto f = load_vector(prob.mesh, [&](double x) { return prob.source(x, t); });
            for (int r = 0; r < m; ++r) rhs((n - 1) * m + r, size) = f[r];
        }
        if (prob.target) {
            const auto ud = load_vector(prob.mesh, [&](double x) { return prob.target(x, t); });
            const auto p = dense_solve(M, ud);
            for (int r = 0; r < m; ++r) qp.pud[(n - 1) * m + r] = p[r];
        }
    }
    const DenseMatrix X = dense_solve(K, rhs);
    qp.G = DenseMatrix(size, size);
    qp.u0.assign(size, 0.0);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) qp.G(i, j) = X(i, j);
        qp.u0[i] = X(i, size);
    }
    return qp;
}

double dense_objective(const OcpProblem& prob, const DenseQp& qp, const std::vector<double>& q) {
    auto u = qp.G.apply(q);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += qp.u0[i] - qp.pud[i];
    const auto Mu = qp.mass_blocks.apply(u);
    const auto Mq = qp.mass_blocks.apply(q);
    double su = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i] * Mu[i];
        sq += q[i] * Mq[i];
    }
    return 0.5 * qp.tau * (su + prob.gamma * sq);
}

}  // namespace

double qp_objective(const OcpProblem& prob, const Trajectory& control) {
    const DenseQp qp = assemble_qp(prob);
    if (control.entries() != qp.N || control.dim() != qp.m) throw InvalidArgument("qp_objective: bad control shape");
    const auto v = control.values();
    return dense_objective(prob, qp, std::vector<double>(v.begin(), v.end()));
}

QpOracleResult qp_oracle(const OcpProblem& prob) {
    const DenseQp qp = assemble_qp(prob);
    const int size = qp.N * qp.m;

    // Riesz gradient g(q) = H q + c with H = gamma I + Mblk^{-1} G^T Mblk G,
    // c = Mblk^{-1} G^T Mblk (u0 - pud).
    const DenseMatrix GtM = qp.G.transpose().multiply(qp.mass_blocks);
    const DenseMatrix W = dense_solve(qp.mass_blocks, GtM);
    DenseMatrix H = W.multiply(qp.G);
    for (int i = 0; i < size; ++i) H(i, i) += prob.gamma;
    std::vector<double> r(size);
    for (int i = 0; i < size; ++i) r[i] = qp.u0[i] - qp.pud[i];
    const std::vector<double> c = W.apply(r);

    // Spectral radius of H by power iteration; H is similar to an SPD matrix.
    std::vector<double> v(size, 1.0);
    double lambda = prob.gamma;
    for (int it = 0; it < 500; ++it) {
        auto Hv = H.apply(v);
        double norm = 0.0;
        for (double x : Hv) norm = std::max(norm, std::abs(x));
        if (norm == 0.0) break;
        for (auto& x : Hv) x /= norm;
        const bool settled = std::abs(norm - lambda) <= 1e-14 * norm;
        lambda = norm;
        v = std::move(Hv);
        if (settled) break;
    }
    const double step = 1.0 / lambda;

    std::vector<double> q(size, std::clamp(0.0, prob.lower, prob.upper));
    QpOracleResult res;
    for (int it = 1; it <= 1000000; ++it) {
        const auto g = H.apply(q);
        double change = 0.0;
        for (int i = 0; i < size; ++i) {
            const double next = std::clamp(q[i] - step * (g[i] + c[i]), prob.lower, prob.upper);
            change = std::max(change, std::abs(next - q[i]));
            q[i] = next;
        }
        res.iterations = it;
        res.step = change;
        double qmax = 1.0;
        for (double x : q) qmax = std::max(qmax, std::abs(x));
        if (change <= 1e-14 * qmax) break;
    }
    res.control = Trajectory(qp.N, qp.m);
    std::copy(q.begin(), q.end(), res.control.values().begin());
    res.objective = dense_objective(prob, qp, q);
    return res;
}

Trajectory backward_euler_heat(const TimeGrid& time, const Mesh1D& mesh, const SpaceTimeFn& source) {
    const int m = mesh.interior();
    const DenseMatrix M = dense_mass(mesh);
    DenseMatrix S = dense_stiffness(mesh);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) S(i, j) += M(i, j) / time.tau;
    }
    Trajectory U(time.N + 1, m);
    for (int n = 1; n <= time.N; ++n) {
        const auto prev = U[n - 1];
        std::vector<double> rhs(m, 0.0);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) rhs[i] += M(i, j) * prev[j] / time.tau;
        }
        if (source) {
            const double t = time.t(n);
            const auto b = load_vector(mesh, [&](double x) { return source(x, t); });
            for (int i = 0; i < m; ++i) rhs[i] += b[i];
        }
        const auto x = dense_solve(S, rhs);
        std::copy(x.begin(), x.end(), U[n].begin());
    }
    return U;
}

}  // namespace fracocp::verify
