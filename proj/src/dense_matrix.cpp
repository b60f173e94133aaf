#include "graphdr/dense_matrix.hpp"

#include <cmath>
#include <utility>

#include "graphdr/errors.hpp"
#include "graphdr/kernels.hpp"

namespace graphdr {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("DenseMatrix: data length does not match rows*cols");
    }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("DenseMatrix: ragged initializer rows");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

namespace {
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (!a.same_shape(b)) throw ShapeError(std::string(op) + ": shape mismatch");
}
}  // namespace

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "add");
    DenseMatrix out(a.rows(), a.cols());
    kernels::add(a.data(), b.data(), out.data(), a.size());
    return out;
}

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "sub");
    DenseMatrix out(a.rows(), a.cols());
    kernels::sub(a.data(), b.data(), out.data(), a.size());
    return out;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "hadamard");
    DenseMatrix out(a.rows(), a.cols());
    kernels::hadamard(a.data(), b.data(), out.data(), a.size());
    return out;
}

DenseMatrix scale(const DenseMatrix& a, double s) {
    DenseMatrix out(a.rows(), a.cols());
    kernels::scale(a.data(), s, out.data(), a.size());
    return out;
}

double frobenius_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (double v : a.values()) sum += v * v;
    return std::sqrt(sum);
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.values()) {
        const double av = std::fabs(v);
        if (av > m) m = av;
    }
    return m;
}

DenseMatrix column_means(const DenseMatrix& a) {
    DenseMatrix mu(1, a.cols());
    if (a.rows() == 0) return mu;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) mu(0, j) += r[j];
    }
    const double inv = 1.0 / static_cast<double>(a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) mu(0, j) *= inv;
    return mu;
}

}  // namespace graphdr
