#include "graphdr/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

#include "graphdr/errors.hpp"
#include "graphdr/numerics.hpp"

namespace graphdr {

SparseGraph knn_graph(const DenseMatrix& points, std::size_t k) {
    const std::size_t n = points.rows();
    if (k >= n) throw ContractError("knn_graph: k must be smaller than the number of points");
    if (!points.all_finite()) throw ContractError("knn_graph: points must be finite");

    const DenseMatrix d2 = pairwise_sq_distances(points);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(n * k);
    std::vector<std::pair<double, std::uint32_t>> cand(n - 1);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j != i) cand[c++] = {d2(i, j), j};
        }
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (std::size_t t = 0; t < k; ++t) {
            const std::uint32_t j = cand[t].second;
            edges.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    return SparseGraph::from_edges(n, edges);
}

namespace {

std::vector<double> weighted_degrees(const SparseGraph& g, double self_loop_weight) {
    std::vector<double> deg(g.num_nodes(), self_loop_weight);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        for (const double w : g.edge_weights(i)) deg[i] += w;
    }
    return deg;
}

}  // namespace

DenseMatrix normalized_adjacency(const SparseGraph& g, bool add_self_loops) {
    const std::size_t n = g.num_nodes();
    const std::vector<double> deg = weighted_degrees(g, add_self_loops ? 1.0 : 0.0);
    std::vector<double> dinv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (deg[i] <= 0.0) {
            throw DegenerateDegreeError("normalized_adjacency: isolated node without self-loops");
        }
        dinv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
    }
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto nb = g.neighbors(i);
        const auto w = g.edge_weights(i);
        for (std::size_t e = 0; e < nb.size(); ++e) {
            out(i, nb[e]) = w[e] * dinv_sqrt[i] * dinv_sqrt[nb[e]];
        }
        if (add_self_loops) out(i, i) = dinv_sqrt[i] * dinv_sqrt[i];
    }
    return out;
}

GeodesicDistances shortest_paths(const SparseGraph& g,
                                 const std::vector<std::uint32_t>& sources,
                                 EdgeLengthMode mode,
                                 const std::vector<double>& edge_lengths) {
    const std::size_t n = g.num_nodes();
    if (mode == EdgeLengthMode::euclidean && edge_lengths.size() != g.col_indices().size()) {
        throw ContractError("shortest_paths: edge_lengths must align with CSR entries");
    }
    GeodesicDistances out;
    out.sources = sources;
    out.dist = DenseMatrix(sources.size(), n, kUnreachable);

    using Item = std::pair<double, std::uint32_t>;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        std::vector<double> dist(n, kUnreachable);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[sources[s]] = 0.0;
        heap.emplace(0.0, sources[s]);
        while (!heap.empty()) {
            const auto [du, u] = heap.top();
            heap.pop();
            if (du > dist[u]) continue;
            const auto nb = g.neighbors(u);
            const std::size_t base = g.row_offsets()[u];
            for (std::size_t e = 0; e < nb.size(); ++e) {
                const double len = mode == EdgeLengthMode::unit ? 1.0 : edge_lengths[base + e];
                const double cand = du + len;
                if (cand < dist[nb[e]]) {
                    dist[nb[e]] = cand;
                    heap.emplace(cand, nb[e]);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) out.dist(s, v) = dist[v];
    }
    return out;
}

DenseMatrix spectral_embedding(const SparseGraph& g, std::size_t d) {
    const std::size_t n = g.num_nodes();
    if (d >= n) throw ContractError("spectral_embedding: d must be smaller than the node count");
    if (!g.is_connected()) throw ConnectivityError("spectral_embedding: graph is not connected");

    const EigenDecomposition eig = symmetric_eig(graph_laplacian(g, LaplacianKind::symmetric));
    const std::vector<double> deg = weighted_degrees(g, 0.0);

    DenseMatrix emb(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        // Skip the zero eigenvalue of the connected graph.
        const std::size_t col = j + 1;
        for (std::size_t i = 0; i < n; ++i) {
            emb(i, j) = eig.vectors(i, col) / std::sqrt(deg[i]);
        }
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::fabs(emb(i, j)) > std::fabs(emb(arg, j))) arg = i;
        }
        if (emb(arg, j) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) emb(i, j) = -emb(i, j);
        }
    }
    return emb;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> negative_edge_sample(const SparseGraph& g,
                                                                          std::size_t count,
                                                                          Rng& rng) {
    const std::size_t n = g.num_nodes();
    const std::size_t total_pairs = n * (n - 1) / 2;
    const std::size_t available = total_pairs - g.num_undirected_edges();
    if (count > available) {
        throw ContractError("negative_edge_sample: request exceeds number of non-edges");
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(count);

    if (2 * count >= available) {
        // Dense regime: enumerate the non-edges and take a partial shuffle.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pool;
        pool.reserve(available);
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t j = i + 1; j < n; ++j) {
                if (!g.has_edge(i, j)) pool.emplace_back(i, j);
            }
        }
        for (std::size_t t = 0; t < count; ++t) {
            const std::size_t pick = t + rng.uniform_int(pool.size() - t);
            std::swap(pool[t], pool[pick]);
            out.push_back(pool[t]);
        }
        return out;
    }

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    while (out.size() < count) {
        const auto i = static_cast<std::uint32_t>(rng.uniform_int(n));
        const auto j = static_cast<std::uint32_t>(rng.uniform_int(n));
        if (i == j) continue;
        const std::uint32_t a = std::min(i, j);
        const std::uint32_t b = std::max(i, j);
        if (g.has_edge(a, b)) continue;
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        if (!seen.insert(key).second) continue;
        out.emplace_back(a, b);
    }
    return out;
}

DenseMatrix graph_laplacian(const SparseGraph& g, LaplacianKind kind) {
    const std::size_t n = g.num_nodes();
    const std::vector<double> deg = weighted_degrees(g, 0.0);
    DenseMatrix out(n, n);
    if (kind == LaplacianKind::unnormalized) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto nb = g.neighbors(i);
            const auto w = g.edge_weights(i);
            for (std::size_t e = 0; e < nb.size(); ++e) out(i, nb[e]) = -w[e];
            out(i, i) = deg[i];
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (deg[i] <= 0.0) throw DegenerateDegreeError("graph_laplacian: isolated node under symmetric kind");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto nb = g.neighbors(i);
        const auto w = g.edge_weights(i);
        for (std::size_t e = 0; e < nb.size(); ++e) {
            out(i, nb[e]) = -w[e] / std::sqrt(deg[i] * deg[nb[e]]);
        }
        out(i, i) = 1.0;
    }
    return out;
}

}  // namespace graphdr
