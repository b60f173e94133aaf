#include "graphdr/tape.hpp"

#include <cmath>

#include "graphdr/errors.hpp"
#include "graphdr/kernels.hpp"

namespace graphdr {

Var Tape::push(Node node) {
    nodes_.push_back(std::move(node));
    return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

Tape::Node& Tape::at(Var v) {
    if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size()) {
        throw ContractError("Tape: invalid tensor reference");
    }
    return nodes_[v.id];
}

Var Tape::constant(DenseMatrix value) {
    Node n;
    n.op = Op::constant;
    n.value = std::move(value);
    return push(std::move(n));
}

Var Tape::param(Parameter& p) {
    Node n;
    n.op = Op::param;
    n.value = p.value;
    n.needs_grad = true;
    n.parameter = &p;
    return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
    Node& na = at(a);
    Node& nb = at(b);
    if (na.value.cols() != nb.value.rows()) throw ShapeError("Tape::matmul: inner dimensions differ");
    Node n;
    n.op = Op::matmul;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = DenseMatrix(na.value.rows(), nb.value.cols());
    kernels::matmul(na.value.data(), nb.value.data(), n.value.data(), na.value.rows(), na.value.cols(),
                    nb.value.cols());
    return push(std::move(n));
}

Var Tape::transpose(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::transpose;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = graphdr::transpose(na.value);
    return push(std::move(n));
}

namespace {
void check_same_shape(const DenseMatrix& x, const DenseMatrix& y, const char* who) {
    if (!x.same_shape(y)) throw ShapeError(std::string(who) + ": shape mismatch");
}
}  // namespace

Var Tape::add(Var a, Var b) {
    Node& na = at(a);
    Node& nb = at(b);
    check_same_shape(na.value, nb.value, "Tape::add");
    Node n;
    n.op = Op::add;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    kernels::add(na.value.data(), nb.value.data(), n.value.data(), n.value.size());
    return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
    Node& na = at(a);
    Node& nb = at(b);
    check_same_shape(na.value, nb.value, "Tape::sub");
    Node n;
    n.op = Op::sub;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    kernels::sub(na.value.data(), nb.value.data(), n.value.data(), n.value.size());
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    Node& na = at(a);
    Node& nb = at(b);
    check_same_shape(na.value, nb.value, "Tape::mul");
    Node n;
    n.op = Op::mul;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    kernels::hadamard(na.value.data(), nb.value.data(), n.value.data(), n.value.size());
    return push(std::move(n));
}

Var Tape::mul_rowvec(Var a, Var v) {
    Node& na = at(a);
    Node& nv = at(v);
    if (nv.value.rows() != 1 || nv.value.cols() != na.value.cols()) {
        throw ShapeError("Tape::mul_rowvec: v must be 1 x a.cols");
    }
    Node n;
    n.op = Op::mul_rowvec;
    n.a = a.id;
    n.b = v.id;
    n.needs_grad = na.needs_grad || nv.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < na.value.rows(); ++i) {
        kernels::hadamard(na.value.row(i), nv.value.data(), n.value.row(i), na.value.cols());
    }
    return push(std::move(n));
}

Var Tape::add_scalar(Var a, double s) {
    Node& na = at(a);
    Node n;
    n.op = Op::add_scalar;
    n.a = a.id;
    n.s0 = s;
    n.needs_grad = na.needs_grad;
    n.value = na.value;
    for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] += s;
    return push(std::move(n));
}

Var Tape::scale(Var a, double s) {
    Node& na = at(a);
    Node n;
    n.op = Op::scale;
    n.a = a.id;
    n.s0 = s;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    kernels::scale(na.value.data(), s, n.value.data(), n.value.size());
    return push(std::move(n));
}

Var Tape::scale_by(Var a, Var s) {
    Node& na = at(a);
    Node& ns = at(s);
    if (ns.value.size() != 1) throw ShapeError("Tape::scale_by: scale factor must be 1x1");
    Node n;
    n.op = Op::scale_by;
    n.a = a.id;
    n.b = s.id;
    n.needs_grad = na.needs_grad || ns.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    kernels::scale(na.value.data(), ns.value(0, 0), n.value.data(), n.value.size());
    return push(std::move(n));
}

Var Tape::relu(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::relu;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    kernels::relu(na.value.data(), n.value.data(), n.value.size());
    return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::sigmoid;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < n.value.size(); ++i) {
        n.value.data()[i] = 1.0 / (1.0 + std::exp(-na.value.data()[i]));
    }
    return push(std::move(n));
}

Var Tape::exp(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::exp_;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] = std::exp(na.value.data()[i]);
    return push(std::move(n));
}

Var Tape::log(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::log_;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] = std::log(na.value.data()[i]);
    return push(std::move(n));
}

Var Tape::pow(Var a, double e) {
    Node& na = at(a);
    Node n;
    n.op = Op::pow_;
    n.a = a.id;
    n.s0 = e;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] = std::pow(na.value.data()[i], e);
    return push(std::move(n));
}

Var Tape::clamp(Var a, double lo, double hi) {
    Node& na = at(a);
    Node n;
    n.op = Op::clamp_;
    n.a = a.id;
    n.s0 = lo;
    n.s1 = hi;
    n.needs_grad = na.needs_grad;
    n.value = na.value;
    for (std::size_t i = 0; i < n.value.size(); ++i) {
        double& v = n.value.data()[i];
        if (v < lo) v = lo;
        if (v > hi) v = hi;
    }
    return push(std::move(n));
}

Var Tape::sum(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::sum;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    double acc = 0.0;
    for (std::size_t i = 0; i < na.value.size(); ++i) acc += na.value.data()[i];
    n.value = DenseMatrix(1, 1, {acc});
    return push(std::move(n));
}

Var Tape::mean(Var a) {
    Node& na = at(a);
    if (na.value.size() == 0) throw ShapeError("Tape::mean: empty tensor");
    Node n;
    n.op = Op::mean;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    double acc = 0.0;
    for (std::size_t i = 0; i < na.value.size(); ++i) acc += na.value.data()[i];
    n.value = DenseMatrix(1, 1, {acc / static_cast<double>(na.value.size())});
    return push(std::move(n));
}

Var Tape::row_sum(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::row_sum;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), 1);
    for (std::size_t i = 0; i < na.value.rows(); ++i) {
        double acc = 0.0;
        const double* r = na.value.row(i);
        for (std::size_t j = 0; j < na.value.cols(); ++j) acc += r[j];
        n.value(i, 0) = acc;
    }
    return push(std::move(n));
}

Var Tape::col_sum(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::col_sum;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(1, na.value.cols());
    for (std::size_t i = 0; i < na.value.rows(); ++i) {
        const double* r = na.value.row(i);
        for (std::size_t j = 0; j < na.value.cols(); ++j) n.value(0, j) += r[j];
    }
    return push(std::move(n));
}

Var Tape::trace(Var a) {
    Node& na = at(a);
    if (na.value.rows() != na.value.cols()) throw ShapeError("Tape::trace: matrix not square");
    Node n;
    n.op = Op::trace;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    double acc = 0.0;
    for (std::size_t i = 0; i < na.value.rows(); ++i) acc += na.value(i, i);
    n.value = DenseMatrix(1, 1, {acc});
    return push(std::move(n));
}

Var Tape::batch_center(Var a) {
    Node& na = at(a);
    if (na.value.rows() == 0) throw ShapeError("Tape::batch_center: empty tensor");
    Node n;
    n.op = Op::batch_center;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    const DenseMatrix mu = column_means(na.value);
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < na.value.rows(); ++i) {
        kernels::sub(na.value.row(i), mu.data(), n.value.row(i), na.value.cols());
    }
    return push(std::move(n));
}

namespace {
constexpr double kRowNormFloor = 1e-12;
}

Var Tape::row_normalize(Var a) {
    Node& na = at(a);
    Node n;
    n.op = Op::row_normalize;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(na.value.rows(), na.value.cols());
    for (std::size_t i = 0; i < na.value.rows(); ++i) {
        const double* r = na.value.row(i);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < na.value.cols(); ++j) norm2 += r[j] * r[j];
        const double denom = std::max(std::sqrt(norm2), kRowNormFloor);
        kernels::scale(r, 1.0 / denom, n.value.row(i), na.value.cols());
    }
    return push(std::move(n));
}

Var Tape::pairwise_sq_dist(Var a) {
    Node& na = at(a);
    const std::size_t n_rows = na.value.rows();
    const std::size_t d = na.value.cols();
    Node n;
    n.op = Op::pairwise_sq_dist;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.value = DenseMatrix(n_rows, n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        const double* ri = na.value.row(i);
        for (std::size_t j = i + 1; j < n_rows; ++j) {
            const double* rj = na.value.row(j);
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = ri[c] - rj[c];
                acc += diff * diff;
            }
            n.value(i, j) = acc;
            n.value(j, i) = acc;
        }
    }
    return push(std::move(n));
}

Var Tape::gather_rows(Var a, std::vector<std::uint32_t> rows) {
    Node& na = at(a);
    for (const std::uint32_t r : rows) {
        if (r >= na.value.rows()) throw ContractError("Tape::gather_rows: row index out of range");
    }
    Node n;
    n.op = Op::gather_rows;
    n.a = a.id;
    n.needs_grad = na.needs_grad;
    n.rows = std::move(rows);
    n.value = DenseMatrix(n.rows.size(), na.value.cols());
    for (std::size_t i = 0; i < n.rows.size(); ++i) {
        const double* src = na.value.row(n.rows[i]);
        double* dst = n.value.row(i);
        for (std::size_t j = 0; j < na.value.cols(); ++j) dst[j] = src[j];
    }
    return push(std::move(n));
}

Var Tape::trace_normalize(Var a) {
    const Var t = trace(a);
    return scale_by(a, pow(t, -1.0));
}

Var Tape::ns_iteration_step(Var p, Var a_normalized) {
    const Var pa = matmul(p, a_normalized);
    const Var ppa = matmul(p, pa);
    const Var pppa = matmul(p, ppa);
    return scale(sub(scale(p, 3.0), pppa), 0.5);
}

const DenseMatrix& Tape::adjoint(Var v) const {
    const Node& n = nodes_[v.id];
    if (!n.adjoint_live) throw ContractError("Tape::adjoint: no gradient recorded for this tensor");
    return n.adjoint;
}

DenseMatrix& Tape::grad_buffer(std::int32_t id) {
    Node& n = nodes_[id];
    if (!n.adjoint_live) {
        n.adjoint = DenseMatrix(n.value.rows(), n.value.cols());
        n.adjoint_live = true;
    }
    return n.adjoint;
}

void Tape::accumulate(std::int32_t id, const DenseMatrix& delta) {
    DenseMatrix& g = grad_buffer(id);
    kernels::add(g.data(), delta.data(), g.data(), g.size());
}

void Tape::backward(Var loss) {
    Node& top = at(loss);
    if (top.value.size() != 1) throw ContractError("Tape::backward: loss must be a scalar");
    grad_buffer(loss.id)(0, 0) = 1.0;

    for (std::int32_t id = loss.id; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.adjoint_live || !n.needs_grad) continue;
        const DenseMatrix& g = n.adjoint;
        const auto want = [this](std::int32_t in) { return in >= 0 && nodes_[in].needs_grad; };

        switch (n.op) {
            case Op::constant:
                break;
            case Op::param:
                kernels::add(n.parameter->grad.data(), g.data(), n.parameter->grad.data(), g.size());
                break;
            case Op::matmul: {
                const Node& na = nodes_[n.a];
                const Node& nb = nodes_[n.b];
                if (want(n.a)) {
                    DenseMatrix da(na.value.rows(), na.value.cols());
                    const DenseMatrix bt = graphdr::transpose(nb.value);
                    kernels::matmul(g.data(), bt.data(), da.data(), g.rows(), g.cols(), bt.cols());
                    accumulate(n.a, da);
                }
                if (want(n.b)) {
                    DenseMatrix db(nb.value.rows(), nb.value.cols());
                    const DenseMatrix at = graphdr::transpose(na.value);
                    kernels::matmul(at.data(), g.data(), db.data(), at.rows(), at.cols(), g.cols());
                    accumulate(n.b, db);
                }
                break;
            }
            case Op::transpose:
                if (want(n.a)) accumulate(n.a, graphdr::transpose(g));
                break;
            case Op::add:
                if (want(n.a)) accumulate(n.a, g);
                if (want(n.b)) accumulate(n.b, g);
                break;
            case Op::sub:
                if (want(n.a)) accumulate(n.a, g);
                if (want(n.b)) accumulate(n.b, graphdr::scale(g, -1.0));
                break;
            case Op::mul:
                if (want(n.a)) accumulate(n.a, graphdr::hadamard(g, nodes_[n.b].value));
                if (want(n.b)) accumulate(n.b, graphdr::hadamard(g, nodes_[n.a].value));
                break;
            case Op::mul_rowvec: {
                const Node& na = nodes_[n.a];
                const Node& nv = nodes_[n.b];
                if (want(n.a)) {
                    DenseMatrix da(na.value.rows(), na.value.cols());
                    for (std::size_t i = 0; i < da.rows(); ++i) {
                        kernels::hadamard(g.row(i), nv.value.data(), da.row(i), da.cols());
                    }
                    accumulate(n.a, da);
                }
                if (want(n.b)) {
                    DenseMatrix dv(1, nv.value.cols());
                    for (std::size_t i = 0; i < na.value.rows(); ++i) {
                        for (std::size_t j = 0; j < na.value.cols(); ++j) {
                            dv(0, j) += g(i, j) * na.value(i, j);
                        }
                    }
                    accumulate(n.b, dv);
                }
                break;
            }
            case Op::add_scalar:
                if (want(n.a)) accumulate(n.a, g);
                break;
            case Op::scale:
                if (want(n.a)) accumulate(n.a, graphdr::scale(g, n.s0));
                break;
            case Op::scale_by: {
                const Node& na = nodes_[n.a];
                const Node& ns = nodes_[n.b];
                if (want(n.a)) accumulate(n.a, graphdr::scale(g, ns.value(0, 0)));
                if (want(n.b)) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < g.size(); ++i) acc += g.data()[i] * na.value.data()[i];
                    accumulate(n.b, DenseMatrix(1, 1, {acc}));
                }
                break;
            }
            case Op::relu: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(g.rows(), g.cols());
                    kernels::relu_backward(g.data(), na.value.data(), da.data(), g.size());
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::sigmoid: {
                if (want(n.a)) {
                    DenseMatrix da(g.rows(), g.cols());
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        const double s = n.value.data()[i];
                        da.data()[i] = g.data()[i] * s * (1.0 - s);
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::exp_: {
                if (want(n.a)) accumulate(n.a, graphdr::hadamard(g, n.value));
                break;
            }
            case Op::log_: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(g.rows(), g.cols());
                    for (std::size_t i = 0; i < g.size(); ++i) da.data()[i] = g.data()[i] / na.value.data()[i];
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::pow_: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(g.rows(), g.cols());
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        da.data()[i] = g.data()[i] * n.s0 * std::pow(na.value.data()[i], n.s0 - 1.0);
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::clamp_: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(g.rows(), g.cols());
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        const double v = na.value.data()[i];
                        da.data()[i] = (v >= n.s0 && v <= n.s1) ? g.data()[i] : 0.0;
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::sum: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    accumulate(n.a, DenseMatrix(na.value.rows(), na.value.cols(), g(0, 0)));
                }
                break;
            }
            case Op::mean: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    accumulate(n.a, DenseMatrix(na.value.rows(), na.value.cols(),
                                                g(0, 0) / static_cast<double>(na.value.size())));
                }
                break;
            }
            case Op::row_sum: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(na.value.rows(), na.value.cols());
                    for (std::size_t i = 0; i < da.rows(); ++i) {
                        const double gi = g(i, 0);
                        for (std::size_t j = 0; j < da.cols(); ++j) da(i, j) = gi;
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::col_sum: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(na.value.rows(), na.value.cols());
                    for (std::size_t i = 0; i < da.rows(); ++i) {
                        for (std::size_t j = 0; j < da.cols(); ++j) da(i, j) = g(0, j);
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::trace: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(na.value.rows(), na.value.cols());
                    for (std::size_t i = 0; i < da.rows(); ++i) da(i, i) = g(0, 0);
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::batch_center: {
                if (want(n.a)) {
                    // d/dx of (x - colmean(x)) applied to g is g - colmean(g).
                    const DenseMatrix mu = column_means(g);
                    DenseMatrix da(g.rows(), g.cols());
                    for (std::size_t i = 0; i < g.rows(); ++i) {
                        kernels::sub(g.row(i), mu.data(), da.row(i), g.cols());
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::row_normalize: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(g.rows(), g.cols());
                    for (std::size_t i = 0; i < g.rows(); ++i) {
                        const double* r = na.value.row(i);
                        double norm2 = 0.0;
                        for (std::size_t j = 0; j < g.cols(); ++j) norm2 += r[j] * r[j];
                        const double norm = std::sqrt(norm2);
                        if (norm > kRowNormFloor) {
                            const double* out = n.value.row(i);
                            double dot = 0.0;
                            for (std::size_t j = 0; j < g.cols(); ++j) dot += g(i, j) * out[j];
                            for (std::size_t j = 0; j < g.cols(); ++j) {
                                da(i, j) = (g(i, j) - out[j] * dot) / norm;
                            }
                        } else {
                            for (std::size_t j = 0; j < g.cols(); ++j) da(i, j) = g(i, j) / kRowNormFloor;
                        }
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::pairwise_sq_dist: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    const std::size_t rows = na.value.rows();
                    const std::size_t d = na.value.cols();
                    DenseMatrix da(rows, d);
                    for (std::size_t i = 0; i < rows; ++i) {
                        const double* ri = na.value.row(i);
                        double* dst = da.row(i);
                        for (std::size_t j = 0; j < rows; ++j) {
                            if (j == i) continue;
                            const double w = 2.0 * (g(i, j) + g(j, i));
                            if (w == 0.0) continue;
                            const double* rj = na.value.row(j);
                            for (std::size_t c = 0; c < d; ++c) dst[c] += w * (ri[c] - rj[c]);
                        }
                    }
                    accumulate(n.a, da);
                }
                break;
            }
            case Op::gather_rows: {
                if (want(n.a)) {
                    const Node& na = nodes_[n.a];
                    DenseMatrix da(na.value.rows(), na.value.cols());
                    for (std::size_t i = 0; i < n.rows.size(); ++i) {
                        kernels::add(da.row(n.rows[i]), g.row(i), da.row(n.rows[i]), da.cols());
                    }
                    accumulate(n.a, da);
                }
                break;
            }
        }
    }
}

}  // namespace graphdr
