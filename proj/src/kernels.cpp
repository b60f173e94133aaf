#include "graphdr/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

namespace graphdr::kernels {

namespace scalar_impl {

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double aik = a[i * k + kk];
            const double* brow = b + kk * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void relu(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void relu_backward(const double* grad, const double* pre, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = pre[i] > 0.0 ? grad[i] : 0.0;
}

void rotate_rows(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

void sq_dist_combine(const double* gram_row, double ni, const double* norms, double* out, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double v = (ni + norms[j]) - 2.0 * gram_row[j];
        out[j] = v > 0.0 ? v : 0.0;
    }
}

}  // namespace scalar_impl

#if defined(__x86_64__) || defined(_M_X64)
#define GRAPHDR_HAVE_AVX2_BUILD 1
namespace avx2_impl {
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void add(const double* a, const double* b, double* out, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
void scale(const double* a, double s, double* out, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void relu(const double* a, double* out, std::size_t n);
void relu_backward(const double* grad, const double* pre, double* out, std::size_t n);
void rotate_rows(double* x, double* y, double c, double s, std::size_t n);
void sq_dist_combine(const double* gram_row, double ni, const double* norms, double* out, std::size_t n);
}  // namespace avx2_impl
#endif

bool avx2_supported() {
#ifdef GRAPHDR_HAVE_AVX2_BUILD
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend resolve_initial_backend() {
    if (const char* env = std::getenv("GRAPHDR_KERNEL")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && avx2_supported()) return Backend::avx2;
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{resolve_initial_backend()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported()) b = Backend::scalar;
    g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

#ifdef GRAPHDR_HAVE_AVX2_BUILD
#define GRAPHDR_DISPATCH(fn, ...)                               \
    if (active_backend() == Backend::avx2) {                    \
        avx2_impl::fn(__VA_ARGS__);                             \
    } else {                                                    \
        scalar_impl::fn(__VA_ARGS__);                           \
    }
#else
#define GRAPHDR_DISPATCH(fn, ...) scalar_impl::fn(__VA_ARGS__)
#endif

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    GRAPHDR_DISPATCH(matmul, a, b, c, m, k, n);
}
void add(const double* a, const double* b, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(add, a, b, out, n);
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(sub, a, b, out, n);
}
void hadamard(const double* a, const double* b, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(hadamard, a, b, out, n);
}
void scale(const double* a, double s, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(scale, a, s, out, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    GRAPHDR_DISPATCH(axpy, alpha, x, y, n);
}
void relu(const double* a, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(relu, a, out, n);
}
void relu_backward(const double* grad, const double* pre, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(relu_backward, grad, pre, out, n);
}
void rotate_rows(double* x, double* y, double c, double s, std::size_t n) {
    GRAPHDR_DISPATCH(rotate_rows, x, y, c, s, n);
}
void sq_dist_combine(const double* gram_row, double ni, const double* norms, double* out, std::size_t n) {
    GRAPHDR_DISPATCH(sq_dist_combine, gram_row, ni, norms, out, n);
}

}  // namespace graphdr::kernels
