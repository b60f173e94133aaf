#include "graphdr/sparse_graph.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "graphdr/errors.hpp"

namespace graphdr {

SparseGraph SparseGraph::from_edges(std::size_t n,
                                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                    const std::vector<double>& weights) {
    if (!weights.empty() && weights.size() != edges.size()) {
        throw ContractError("SparseGraph: weight count does not match edge count");
    }
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> directed;
    directed.reserve(edges.size() * 2);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [i, j] = edges[e];
        const double w = weights.empty() ? 1.0 : weights[e];
        if (i >= n || j >= n) throw ContractError("SparseGraph: node id out of range");
        if (i == j) throw ContractError("SparseGraph: self-loops are not allowed");
        if (!(w >= 0.0 && w <= 1.0)) throw ContractError("SparseGraph: edge weight outside [0,1]");
        directed.emplace_back(i, j, w);
        directed.emplace_back(j, i, w);
    }
    std::sort(directed.begin(), directed.end());

    SparseGraph g;
    g.n_ = n;
    g.row_offsets_.assign(n + 1, 0);
    for (std::size_t e = 0; e < directed.size(); ++e) {
        if (e > 0 && std::get<0>(directed[e]) == std::get<0>(directed[e - 1]) &&
            std::get<1>(directed[e]) == std::get<1>(directed[e - 1])) {
            if (std::get<2>(directed[e]) != std::get<2>(directed[e - 1])) {
                throw ContractError("SparseGraph: duplicate edge with conflicting weights");
            }
            continue;
        }
        g.col_indices_.push_back(std::get<1>(directed[e]));
        g.weights_.push_back(std::get<2>(directed[e]));
        ++g.row_offsets_[std::get<0>(directed[e]) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.row_offsets_[i + 1] += g.row_offsets_[i];
    return g;
}

bool SparseGraph::has_edge(std::uint32_t i, std::uint32_t j) const {
    const auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

double SparseGraph::weight(std::uint32_t i, std::uint32_t j) const {
    const auto nb = neighbors(i);
    const auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it == nb.end() || *it != j) return 0.0;
    return weights_[row_offsets_[i] + static_cast<std::size_t>(it - nb.begin())];
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SparseGraph::undirected_edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(num_undirected_edges());
    for (std::uint32_t i = 0; i < n_; ++i) {
        for (const std::uint32_t j : neighbors(i)) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

bool SparseGraph::is_connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (const std::uint32_t v : neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == n_;
}

}  // namespace graphdr
