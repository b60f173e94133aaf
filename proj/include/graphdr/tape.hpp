#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphdr/dense_matrix.hpp"

namespace graphdr {

/// Trainable tensor: value plus gradient accumulator of the same shape.
struct Parameter {
    DenseMatrix value;
    DenseMatrix grad;
    std::string name;

    Parameter() = default;
    Parameter(DenseMatrix v, std::string n)
        : value(std::move(v)), grad(value.rows(), value.cols()), name(std::move(n)) {}

    void zero_grad() { grad = DenseMatrix(value.rows(), value.cols()); }
};

/// Handle to a recorded tensor on a Tape.
struct Var {
    std::int32_t id = -1;
    bool valid() const { return id >= 0; }
};

/// Reverse-mode differentiation tape over dense tensors. Operations are
/// recorded in forward order; backward() visits them in exact reverse
/// order with a deterministic accumulation sequence. One tape per
/// forward/backward pass.
class Tape {
public:
    // Leaves.
    Var constant(DenseMatrix value);
    Var param(Parameter& p);

    // Primitives; each has an exact adjoint rule.
    Var matmul(Var a, Var b);
    Var transpose(Var a);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    // a (n x d) scaled columnwise by v (1 x d).
    Var mul_rowvec(Var a, Var v);
    Var add_scalar(Var a, double s);
    Var scale(Var a, double s);
    // a scaled by the 1x1 tensor s.
    Var scale_by(Var a, Var s);
    Var relu(Var a);
    Var sigmoid(Var a);
    Var exp(Var a);
    Var log(Var a);
    Var pow(Var a, double e);
    Var clamp(Var a, double lo, double hi);
    Var sum(Var a);       // 1x1
    Var mean(Var a);      // 1x1
    Var row_sum(Var a);   // n x m -> n x 1
    Var col_sum(Var a);   // n x m -> 1 x m
    Var trace(Var a);     // 1x1
    Var batch_center(Var a);    // subtract column means
    Var row_normalize(Var a);   // rows rescaled to unit L2 norm (eps-guarded)
    Var pairwise_sq_dist(Var a);  // n x d -> n x n
    Var gather_rows(Var a, std::vector<std::uint32_t> rows);

    // Composite helpers recorded through the primitives above.
    Var trace_normalize(Var a);                       // a / trace(a)
    Var ns_iteration_step(Var p, Var a_normalized);   // 0.5 * (3p - p^3 a)

    void backward(Var loss);

    const DenseMatrix& value(Var v) const { return nodes_[v.id].value; }
    const DenseMatrix& adjoint(Var v) const;
    std::size_t size() const { return nodes_.size(); }

private:
    enum class Op {
        constant,
        param,
        matmul,
        transpose,
        add,
        sub,
        mul,
        mul_rowvec,
        add_scalar,
        scale,
        scale_by,
        relu,
        sigmoid,
        exp_,
        log_,
        pow_,
        clamp_,
        sum,
        mean,
        row_sum,
        col_sum,
        trace,
        batch_center,
        row_normalize,
        pairwise_sq_dist,
        gather_rows,
    };

    struct Node {
        Op op;
        std::int32_t a = -1;
        std::int32_t b = -1;
        double s0 = 0.0;
        double s1 = 0.0;
        std::vector<std::uint32_t> rows;
        DenseMatrix value;
        DenseMatrix adjoint;
        bool needs_grad = false;
        bool adjoint_live = false;
        Parameter* parameter = nullptr;
    };

    Var push(Node node);
    Node& at(Var v);
    DenseMatrix& grad_buffer(std::int32_t id);
    void accumulate(std::int32_t id, const DenseMatrix& delta);

    std::vector<Node> nodes_;
};

}  // namespace graphdr
