#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace graphdr {

/// Symmetric weighted graph in compressed-row form. No self-loops are
/// stored; every edge (i,j,w) has its mirror (j,i,w); weights lie in [0,1].
/// Immutable after construction.
class SparseGraph {
public:
    SparseGraph() = default;

    // Builds from an undirected edge list; duplicates are collapsed (the
    // weight must agree) and self-loops rejected.
    static SparseGraph from_edges(std::size_t n,
                                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                  const std::vector<double>& weights = {});

    std::size_t num_nodes() const { return n_; }
    std::size_t num_undirected_edges() const { return col_indices_.size() / 2; }

    std::span<const std::uint32_t> neighbors(std::size_t i) const {
        return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
    }
    std::span<const double> edge_weights(std::size_t i) const {
        return {weights_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
    }
    std::size_t degree(std::size_t i) const { return row_offsets_[i + 1] - row_offsets_[i]; }

    bool has_edge(std::uint32_t i, std::uint32_t j) const;
    double weight(std::uint32_t i, std::uint32_t j) const;  // 0 when absent

    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::uint32_t>& col_indices() const { return col_indices_; }
    const std::vector<double>& weights() const { return weights_; }

    // Undirected edges as (i, j) with i < j, ordered by (i, j).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> undirected_edges() const;

    bool is_connected() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::uint32_t> col_indices_;
    std::vector<double> weights_;
};

}  // namespace graphdr
