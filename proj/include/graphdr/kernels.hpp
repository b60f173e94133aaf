#pragma once

#include <cstddef>

// Arithmetic inner loops used throughout the library. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant selected
// at runtime. The two variants are bitwise-equivalent: vector lanes always
// map to independent outputs, per-element operations keep the scalar
// rounding sequence (no FMA contraction), and reductions keep the scalar
// accumulation order. Equivalence is enforced by tests/test_kernels.cpp.

namespace graphdr::kernels {

enum class Backend { scalar, avx2 };

// Backend resolved at first use: GRAPHDR_KERNEL=scalar|avx2 overrides,
// otherwise AVX2 when the CPU supports it.
Backend active_backend();
void set_backend(Backend b);
const char* backend_name(Backend b);
bool avx2_supported();

// c (m x n) = a (m x k) * b (k x n), row-major, c overwritten.
// Accumulation order over k is fixed (i,k,j loop nest).
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

void add(const double* a, const double* b, double* out, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
void scale(const double* a, double s, double* out, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// out = a > 0 ? a : 0
void relu(const double* a, double* out, std::size_t n);
// out = pre > 0 ? grad : 0
void relu_backward(const double* grad, const double* pre, double* out, std::size_t n);
// plane rotation applied to two rows: x' = c*x - s*y, y' = s*x + c*y
void rotate_rows(double* x, double* y, double c, double s, std::size_t n);
// out[j] = max(0, ni + norms[j] - 2*gram_row[j]); expanded squared distances
void sq_dist_combine(const double* gram_row, double ni, const double* norms, double* out, std::size_t n);

}  // namespace graphdr::kernels
