#include "graphdr/layers.hpp"

#include <cmath>

#include "graphdr/errors.hpp"
#include "graphdr/graph_ops.hpp"
#include "graphdr/numerics.hpp"

namespace graphdr {

InitScheme parse_init_scheme(const std::string& name) {
    if (name == "normal") return InitScheme::normal;
    if (name == "xavier_uniform") return InitScheme::xavier_uniform;
    if (name == "xavier_normal") return InitScheme::xavier_normal;
    throw ContractError("init_weights: unknown scheme '" + name + "'");
}

std::string init_scheme_name(InitScheme scheme) {
    switch (scheme) {
        case InitScheme::normal: return "normal";
        case InitScheme::xavier_uniform: return "xavier_uniform";
        case InitScheme::xavier_normal: return "xavier_normal";
    }
    return "?";
}

DenseMatrix init_weights(std::size_t rows, std::size_t cols, InitScheme scheme, Rng& rng) {
    DenseMatrix w(rows, cols);
    const double fan = static_cast<double>(rows + cols);
    switch (scheme) {
        case InitScheme::normal: {
            for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.normal(0.0, 0.01);
            break;
        }
        case InitScheme::xavier_uniform: {
            const double bound = std::sqrt(6.0 / fan);
            for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
            break;
        }
        case InitScheme::xavier_normal: {
            const double stddev = std::sqrt(2.0 / fan);
            for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.normal(0.0, stddev);
            break;
        }
    }
    return w;
}

GcnEncoder::GcnEncoder(const SparseGraph& g, const DenseMatrix& features, std::size_t hidden,
                       std::size_t out_dim, InitScheme scheme, Rng& rng)
    : w0(init_weights(features.cols(), hidden, scheme, rng), "gcn.w0"),
      w1(init_weights(hidden, out_dim, scheme, rng), "gcn.w1"),
      norm_adj(normalized_adjacency(g, true)),
      norm_adj_features(matmul(norm_adj, features)) {
    if (features.rows() != g.num_nodes()) throw ShapeError("GcnEncoder: feature rows must match node count");
}

Var gcn_forward(Tape& tape, GcnEncoder& enc, Var norm_adj, Var norm_adj_features) {
    const Var h = tape.relu(tape.matmul(norm_adj_features, tape.param(enc.w0)));
    // A_hat (H W1) rather than (A_hat H) W1: same product, far fewer flops.
    return tape.matmul(norm_adj, tape.matmul(h, tape.param(enc.w1)));
}

Var gcn_forward(Tape& tape, GcnEncoder& enc) {
    return gcn_forward(tape, enc, tape.constant(enc.norm_adj), tape.constant(enc.norm_adj_features));
}

Var dbn_forward(Tape& tape, Var y, double eps, int iters) {
    const DenseMatrix& val = tape.value(y);
    const std::size_t n = val.rows();
    const std::size_t d = val.cols();
    if (n < 2) throw ContractError("dbn_forward: needs at least two rows");
    if (d > 16) throw ContractError("dbn_forward: output dimension exceeds 16");

    const Var centered = tape.batch_center(y);
    Var cov = tape.scale(tape.matmul(tape.transpose(centered), centered), 1.0 / static_cast<double>(n));
    if (eps != 0.0) {
        cov = tape.add(cov, tape.constant(scale(DenseMatrix::identity(d), eps)));
    }
    const Var tr = tape.trace(cov);
    const Var normalized = tape.scale_by(cov, tape.pow(tr, -1.0));

    Var p = tape.constant(DenseMatrix::identity(d));
    for (int k = 0; k < iters; ++k) {
        p = tape.ns_iteration_step(p, normalized);
    }
    const Var inv_sqrt = tape.scale_by(p, tape.pow(tr, -0.5));
    return tape.matmul(centered, inv_sqrt);
}

void adam_step(AdamState& state, const std::vector<Parameter*>& params) {
    if (state.m.empty()) {
        for (const Parameter* p : params) {
            state.m.emplace_back(p->value.rows(), p->value.cols());
            state.v.emplace_back(p->value.rows(), p->value.cols());
        }
    }
    if (state.m.size() != params.size()) throw ContractError("adam_step: parameter list changed size");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        DenseMatrix& m = state.m[pi];
        DenseMatrix& v = state.v[pi];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad.data()[i];
            double& mi = m.data()[i];
            double& vi = v.data()[i];
            mi = state.beta1 * mi + (1.0 - state.beta1) * g;
            vi = state.beta2 * vi + (1.0 - state.beta2) * g * g;
            const double mhat = mi / bc1;
            const double vhat = vi / bc2;
            p.value.data()[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
        p.zero_grad();
    }
}

}  // namespace graphdr
