#include "graphdr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphdr/errors.hpp"
#include "graphdr/kernels.hpp"

namespace graphdr {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: a.cols != b.rows");
    DenseMatrix c(a.rows(), b.cols());
    kernels::matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
    return c;
}

namespace {

void require_symmetric(const DenseMatrix& a, const char* who) {
    if (a.rows() != a.cols()) throw ContractError(std::string(who) + ": matrix not square");
    const double tol = 1e-10 * std::max(1.0, max_abs(a));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            if (std::fabs(a(i, j) - a(j, i)) > tol) {
                throw ContractError(std::string(who) + ": matrix not symmetric");
            }
        }
    }
}

double off_diagonal_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) sum += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(sum);
}

}  // namespace

EigenDecomposition symmetric_eig(const DenseMatrix& input) {
    require_symmetric(input, "symmetric_eig");
    const std::size_t n = input.rows();
    if (n > 5000) throw ContractError("symmetric_eig: dimension exceeds 5000");
    if (n == 0) return {{}, DenseMatrix()};

    DenseMatrix a = input;
    // Eigenvectors accumulated transposed so rotations touch contiguous rows.
    DenseMatrix vt = DenseMatrix::identity(n);

    const double norm_a = frobenius_norm(a);
    const double tol = 1e-12 * std::max(norm_a, 1e-300);
    // Rotations below this threshold cannot move the off-diagonal norm
    // above tol even if every pair sits exactly at it.
    const double skip = tol / (10.0 * static_cast<double>(n));

    constexpr int max_sweeps = 100;
    bool converged = norm_a == 0.0 || off_diagonal_norm(a) <= tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= skip) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                kernels::rotate_rows(a.row(p), a.row(q), c, s, n);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a(i, p) = a(p, i);
                    a(i, q) = a(q, i);
                }
                kernels::rotate_rows(vt.row(p), vt.row(q), c, s, n);
            }
        }
        converged = off_diagonal_norm(a) <= tol;
    }
    if (!converged) throw ConvergenceError("symmetric_eig: Jacobi sweeps exhausted before tolerance");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vt(src, i);
    }
    return out;
}

ThinSvd svd_thin(const DenseMatrix& a, std::size_t k) {
    const std::size_t m = a.rows();
    const std::size_t p = a.cols();
    if (k == 0 || k > std::min(m, p)) throw ContractError("svd_thin: k out of range");

    ThinSvd out;
    out.s.resize(k);
    out.u = DenseMatrix(m, k);
    out.v = DenseMatrix(p, k);

    const bool gram_right = p <= m;  // eigendecompose the smaller Gram matrix
    const DenseMatrix at = transpose(a);
    const DenseMatrix gram = gram_right ? matmul(at, a) : matmul(a, at);
    EigenDecomposition eig = symmetric_eig(gram);

    const std::size_t g = gram.rows();
    // Eigenvalues of the Gram matrix below its numerical noise floor are
    // rank-deficiency artifacts; report them as exact zeros.
    const double lambda_max = std::max(eig.values.empty() ? 0.0 : eig.values.back(), 0.0);
    const double lambda_floor = lambda_max * static_cast<double>(g) * 0x1.0p-52;
    double smax = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double lambda = eig.values[g - 1 - j];
        out.s[j] = lambda > lambda_floor ? std::sqrt(lambda) : 0.0;
        smax = std::max(smax, out.s[j]);
    }
    const double tiny = 1e-12 * std::max(smax, 1e-300);

    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t col = g - 1 - j;
        if (gram_right) {
            for (std::size_t i = 0; i < p; ++i) out.v(i, j) = eig.vectors(i, col);
            if (out.s[j] > tiny) {
                const double inv = 1.0 / out.s[j];
                for (std::size_t i = 0; i < m; ++i) {
                    double acc = 0.0;
                    const double* arow = a.row(i);
                    for (std::size_t c = 0; c < p; ++c) acc += arow[c] * out.v(c, j);
                    out.u(i, j) = acc * inv;
                }
            }
        } else {
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) = eig.vectors(i, col);
            if (out.s[j] > tiny) {
                const double inv = 1.0 / out.s[j];
                for (std::size_t i = 0; i < p; ++i) {
                    double acc = 0.0;
                    for (std::size_t r = 0; r < m; ++r) acc += a(r, i) * out.u(r, j);
                    out.v(i, j) = acc * inv;
                }
            }
        }
    }
    return out;
}

DenseMatrix spd_inverse_sqrt_small(const DenseMatrix& a, double eps) {
    if (a.rows() != a.cols()) throw ContractError("spd_inverse_sqrt_small: matrix not square");
    if (a.rows() > 16) throw ContractError("spd_inverse_sqrt_small: dimension exceeds 16");
    const std::size_t d = a.rows();
    DenseMatrix b = a;
    for (std::size_t i = 0; i < d; ++i) b(i, i) += eps;

    EigenDecomposition eig = symmetric_eig(b);
    for (double lambda : eig.values) {
        if (lambda <= 0.0) {
            throw SingularityError("spd_inverse_sqrt_small: matrix not positive definite after regularization");
        }
    }
    DenseMatrix scaled(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const double w = 1.0 / std::sqrt(eig.values[j]);
        for (std::size_t i = 0; i < d; ++i) scaled(i, j) = eig.vectors(i, j) * w;
    }
    return matmul(scaled, transpose(eig.vectors));
}

DenseMatrix pairwise_sq_distances(const DenseMatrix& x) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<double> norms(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = x.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += r[j] * r[j];
        norms[i] = acc;
    }
    const DenseMatrix gram = matmul(x, transpose(x));
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        kernels::sq_dist_combine(gram.row(i), norms[i], norms.data(), out.row(i), n);
        out(i, i) = 0.0;
    }
    return out;
}

DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != a.cols()) throw ContractError("solve_linear: matrix not square");
    if (a.rows() != b.rows()) throw ShapeError("solve_linear: rhs row count mismatch");
    const std::size_t n = a.rows();
    DenseMatrix lu = a;
    DenseMatrix x = b;
    const double piv_tol = std::max(1e-14 * max_abs(a), 1e-300);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(lu(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= piv_tol) throw SingularityError("solve_linear: matrix singular to working precision");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
        }
        const double inv = 1.0 / lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = lu(r, col) * inv;
            if (factor == 0.0) continue;
            lu(r, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= factor * lu(col, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(r, j) -= factor * x(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        const double inv = 1.0 / lu(col, col);
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double acc = x(col, j);
            for (std::size_t r = col + 1; r < n; ++r) acc -= lu(col, r) * x(r, j);
            x(col, j) = acc * inv;
        }
    }
    return x;
}

}  // namespace graphdr
