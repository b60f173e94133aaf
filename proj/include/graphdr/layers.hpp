#pragma once

#include <string>
#include <vector>

#include "graphdr/dense_matrix.hpp"
#include "graphdr/rng.hpp"
#include "graphdr/sparse_graph.hpp"
#include "graphdr/tape.hpp"

namespace graphdr {

enum class InitScheme { normal, xavier_uniform, xavier_normal };

InitScheme parse_init_scheme(const std::string& name);
std::string init_scheme_name(InitScheme scheme);

// normal: N(0, 0.01^2); xavier_uniform: U(+-sqrt(6/(fan_in+fan_out)));
// xavier_normal: N(0, 2/(fan_in+fan_out)). Row-major draw order.
DenseMatrix init_weights(std::size_t rows, std::size_t cols, InitScheme scheme, Rng& rng);

/// Two-layer GCN over a fixed graph: A_hat ReLU(A_hat X W0) W1, with the
/// renormalized adjacency (self-loops added) cached at construction.
/// A_hat X is also cached since neither factor changes during training.
struct GcnEncoder {
    Parameter w0;
    Parameter w1;
    DenseMatrix norm_adj;
    DenseMatrix norm_adj_features;

    GcnEncoder(const SparseGraph& g, const DenseMatrix& features, std::size_t hidden,
               std::size_t out_dim, InitScheme scheme, Rng& rng);

    std::vector<Parameter*> parameters() { return {&w0, &w1}; }
};

Var gcn_forward(Tape& tape, GcnEncoder& enc, Var norm_adj, Var norm_adj_features);
// Convenience overload that uploads the cached inputs as tape constants.
Var gcn_forward(Tape& tape, GcnEncoder& enc);

// Differentiable whitening: out = (Y - mean) * (cov(Y) + eps I)^{-1/2},
// the inverse square root computed by `iters` trace-normalized
// Newton-Schulz steps (matmul-only, so the tape differentiates it).
Var dbn_forward(Tape& tape, Var y, double eps, int iters);

/// Adam optimizer state; one slot pair per parameter.
struct AdamState {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long t = 0;
    std::vector<DenseMatrix> m;
    std::vector<DenseMatrix> v;

    explicit AdamState(double learning_rate = 0.01) : lr(learning_rate) {}
};

// Standard Adam update with bias correction; gradients zeroed afterward.
void adam_step(AdamState& state, const std::vector<Parameter*>& params);

}  // namespace graphdr
