#include "tdompc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "tdompc/errors.hpp"

namespace tdompc::linalg {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw NonFiniteError(std::string(what) + " contains non-finite entries");
}

double asymmetry(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() < 1 || m.rows() != m.cols())
        throw DimensionError(std::string(what) + " must be square and non-empty, got " + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()));
}

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen sym_eig(const Matrix& m, const Tolerances& tol) {
    require_square(m, "sym_eig input");
    require_finite(m, "sym_eig input");
    const double scale_max = m.cwiseAbs().maxCoeff();
    if (asymmetry(m) > tol.symmetry * scale_max)
        throw SymmetryError("sym_eig: matrix is not symmetric (max |M - M^T| = " + std::to_string(asymmetry(m)) + ")");

    const Index n = m.rows();
    Matrix a = symmetrized(m);
    Matrix v = Matrix::Identity(n, n);
    const double stop = tol.jacobi_offdiag * a.norm();

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && offdiag_norm(a) > stop; ++sweep) {
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (Index k = 0; k < n; ++k) {
        out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

double spectral_norm(const Matrix& m) {
    require_finite(m, "spectral_norm input");
    if (m.size() == 0) return 0.0;
    const Matrix gram = m.rows() >= m.cols() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
    const double top = sym_eig(symmetrized(gram)).values.maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

SpdFactor spd_factor(const Matrix& m, const Tolerances& tol) {
    const auto eig = sym_eig(m, tol);
    const double lo = eig.values.minCoeff();
    const double hi = eig.values.maxCoeff();
    if (!(lo > 0.0) || lo <= tol.spd_ratio * hi)
        throw NotSpdError("matrix is not (numerically) positive definite: lambda_min = " + std::to_string(lo) +
                          ", lambda_max = " + std::to_string(hi));

    const Vector root = eig.values.cwiseSqrt();
    SpdFactor f;
    f.original = m;
    f.sqrt = symmetrized(eig.vectors * root.asDiagonal() * eig.vectors.transpose());
    f.inv_sqrt = symmetrized(eig.vectors * root.cwiseInverse().asDiagonal() * eig.vectors.transpose());
    return f;
}

EigenBounds weighted_eig_bounds(const Matrix& m, const Matrix& w, const Tolerances& tol) {
    if (m.rows() != w.rows() || m.cols() != w.cols())
        throw DimensionError("weighted_eig_bounds: M is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " but W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
    const auto wf = spd_factor(w, tol);
    const auto eig = sym_eig(symmetrized(wf.inv_sqrt * m * wf.inv_sqrt), tol);
    return {eig.values.minCoeff(), eig.values.maxCoeff()};
}

namespace {

Matrix riccati_map(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r, const Matrix& p) {
    const Matrix pb = p * b;
    const Matrix s = r + b.transpose() * pb;
    const Matrix k = s.llt().solve(pb.transpose() * a);
    return symmetrized(q + a.transpose() * p * a - a.transpose() * pb * k);
}

void require_dare_shapes(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    require_square(a, "A");
    require_square(q, "Q");
    require_square(r, "R");
    if (b.rows() != a.rows() || q.rows() != a.rows() || r.rows() != b.cols())
        throw DimensionError("Riccati data dimensions are inconsistent");
    require_finite(a, "A");
    require_finite(b, "B");
    require_finite(q, "Q");
    require_finite(r, "R");
}

}  // namespace

double riccati_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r, const Matrix& p) {
    require_dare_shapes(a, b, q, r);
    return (p - riccati_map(a, b, q, r, p)).norm();
}

Matrix solve_dare(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r, const Tolerances& tol) {
    require_dare_shapes(a, b, q, r);
    Matrix p = symmetrized(q);
    for (long it = 0; it < tol.fixed_point_iters; ++it) {
        Matrix next = riccati_map(a, b, q, r, p);
        if (!next.allFinite()) break;
        const double change = (next - p).cwiseAbs().maxCoeff();
        p = std::move(next);
        if (change <= tol.fixed_point * p.cwiseAbs().maxCoeff()) {
            const Matrix pb = p * b;
            const Matrix k = (r + b.transpose() * pb).llt().solve(pb.transpose() * a);
            if (spectral_radius(a - b * k) >= 1.0) break;
            spd_factor(p, tol);  // throws if the limit is not SPD
            return p;
        }
    }
    throw NonConvergenceError("solve_dare: Riccati iteration did not converge; (A, B) may not be stabilizable");
}

double spectral_radius(const Matrix& m) {
    require_square(m, "spectral_radius input");
    require_finite(m, "spectral_radius input");
    Eigen::EigenSolver<Matrix> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix solve_dlyap(const Matrix& a, const Matrix& q, const Tolerances& tol) {
    require_square(a, "A");
    require_square(q, "Q");
    if (a.rows() != q.rows()) throw DimensionError("solve_dlyap: A and Q differ in size");
    require_finite(q, "Q");
    const double rho = spectral_radius(a);
    if (!(rho < 1.0)) throw NotSchurError("solve_dlyap: spectral radius " + std::to_string(rho) + " >= 1");

    Matrix u = symmetrized(q);
    for (long it = 0; it < tol.fixed_point_iters; ++it) {
        Matrix next = symmetrized(q + a.transpose() * u * a);
        const double change = (next - u).norm();
        u = std::move(next);
        if (change <= tol.fixed_point * u.norm()) return u;
    }
    throw NonConvergenceError("solve_dlyap: iteration did not converge");
}

Matrix expm(const Matrix& m) {
    require_square(m, "expm input");
    require_finite(m, "expm input");
    const Index n = m.rows();

    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix x = m / std::ldexp(1.0, squarings);

    constexpr int kOrder = 6;
    Matrix numer = Matrix::Identity(n, n);
    Matrix denom = Matrix::Identity(n, n);
    Matrix power = Matrix::Identity(n, n);
    double c = 1.0;
    for (int k = 1; k <= kOrder; ++k) {
        c *= static_cast<double>(kOrder - k + 1) / static_cast<double>(k * (2 * kOrder - k + 1));
        power = power * x;
        numer += c * power;
        denom += ((k % 2) ? -c : c) * power;
    }
    Matrix e = denom.partialPivLu().solve(numer);
    for (int s = 0; s < squarings; ++s) e = e * e;
    return e;
}

}  // namespace tdompc::linalg
