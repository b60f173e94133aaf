#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "graphdr/errors.hpp"
#include "graphdr/graph_ops.hpp"
#include "graphdr/numerics.hpp"

using namespace graphdr;

namespace {

SparseGraph path_graph(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return SparseGraph::from_edges(n, edges);
}

SparseGraph cycle_graph(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, static_cast<std::uint32_t>((i + 1) % n));
    return SparseGraph::from_edges(n, edges);
}

SparseGraph complete_graph(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return SparseGraph::from_edges(n, edges);
}

SparseGraph random_graph(std::size_t n, double p, Rng& rng) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < p) edges.emplace_back(i, j);
        }
    }
    return SparseGraph::from_edges(n, edges);
}

// All-pairs oracle for shortest paths.
DenseMatrix floyd_warshall(const SparseGraph& g, const std::vector<double>& lengths) {
    const std::size_t n = g.num_nodes();
    DenseMatrix d(n, n, kUnreachable);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto nb = g.neighbors(i);
        const std::size_t base = g.row_offsets()[i];
        for (std::size_t e = 0; e < nb.size(); ++e) {
            d(i, nb[e]) = lengths.empty() ? 1.0 : lengths[base + e];
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
            }
        }
    }
    return d;
}

}  // namespace

TEST_CASE("knn_graph on a 1-D quartet") {
    const DenseMatrix pts{{0.0}, {1.0}, {3.0}, {10.0}};
    const SparseGraph g = knn_graph(pts, 1);
    CHECK(g.num_undirected_edges() == 3);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 3));
    CHECK_FALSE(g.has_edge(0, 2));
    for (const double w : g.weights()) CHECK(w == 1.0);
}

TEST_CASE("knn_graph trivial and contract cases") {
    const DenseMatrix two{{0.0}, {5.0}};
    const SparseGraph g = knn_graph(two, 1);
    CHECK(g.num_undirected_edges() == 1);
    CHECK_THROWS_AS(knn_graph(two, 2), ContractError);
}

TEST_CASE("knn_graph union symmetrization keeps degree >= k") {
    Rng rng(4);
    DenseMatrix pts(40, 2);
    for (std::size_t i = 0; i < pts.size(); ++i) pts.data()[i] = rng.uniform(-3.0, 3.0);
    for (const std::size_t k : {1UL, 3UL, 7UL}) {
        const SparseGraph g = knn_graph(pts, k);
        for (std::size_t i = 0; i < g.num_nodes(); ++i) CHECK(g.degree(i) >= k);
    }
}

TEST_CASE("normalized_adjacency hand cases") {
    const SparseGraph pair = path_graph(2);
    const DenseMatrix plain = normalized_adjacency(pair, false);
    CHECK(plain(0, 0) == 0.0);
    CHECK(plain(0, 1) == doctest::Approx(1.0));
    CHECK(plain(1, 0) == doctest::Approx(1.0));

    const DenseMatrix looped = normalized_adjacency(pair, true);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK(looped(i, j) == doctest::Approx(0.5));
    }

    const DenseMatrix p3 = normalized_adjacency(path_graph(3), false);
    CHECK(p3(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("normalized_adjacency of regular graphs with self-loops has unit row sums") {
    for (const SparseGraph& g : {cycle_graph(4), complete_graph(4)}) {
        const DenseMatrix a = normalized_adjacency(g, true);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalized_adjacency rejects isolated nodes without self-loops") {
    const SparseGraph g = SparseGraph::from_edges(3, {{0, 1}});
    CHECK_THROWS_AS(normalized_adjacency(g, false), DegenerateDegreeError);
    CHECK_NOTHROW(normalized_adjacency(g, true));
}

TEST_CASE("shortest_paths on a path and a disconnected pair") {
    const auto geo = shortest_paths(path_graph(3), {0}, EdgeLengthMode::unit);
    CHECK(geo.dist(0, 2) == doctest::Approx(2.0));

    const SparseGraph two = SparseGraph::from_edges(2, {});
    const auto d = shortest_paths(two, {0}, EdgeLengthMode::unit);
    CHECK(d.dist(0, 1) == kUnreachable);
}

TEST_CASE("shortest_paths equals Floyd-Warshall on random graphs") {
    Rng rng(8);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 5 + rng.uniform_int(11);
        const SparseGraph g = random_graph(n, 0.3, rng);
        std::vector<std::uint32_t> sources(n);
        for (std::uint32_t i = 0; i < n; ++i) sources[i] = i;

        const auto unit = shortest_paths(g, sources, EdgeLengthMode::unit);
        const DenseMatrix oracle_unit = floyd_warshall(g, {});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(unit.dist(i, j) == oracle_unit(i, j));
            }
        }

        std::vector<double> lengths(g.col_indices().size());
        // Symmetric random lengths keyed on the unordered pair.
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto nb = g.neighbors(i);
            const std::size_t base = g.row_offsets()[i];
            for (std::size_t e = 0; e < nb.size(); ++e) {
                const double key = 0.1 + 0.9 * std::fmod(static_cast<double>(std::min<std::uint32_t>(i, nb[e]) * 31 +
                                                                             std::max<std::uint32_t>(i, nb[e]) * 7),
                                                         13.0) /
                                             13.0;
                lengths[base + e] = key;
            }
        }
        const auto weighted = shortest_paths(g, sources, EdgeLengthMode::euclidean, lengths);
        const DenseMatrix oracle_w = floyd_warshall(g, lengths);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (oracle_w(i, j) == kUnreachable) {
                    CHECK(weighted.dist(i, j) == kUnreachable);
                } else {
                    CHECK(weighted.dist(i, j) == doctest::Approx(oracle_w(i, j)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("spectral_embedding K4 column is orthogonal to the constant vector") {
    const DenseMatrix emb = spectral_embedding(complete_graph(4), 1);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += emb(i, 0);
    CHECK(std::fabs(s) < 1e-9);
}

TEST_CASE("spectral_embedding C4 lies on a circle") {
    const DenseMatrix emb = spectral_embedding(cycle_graph(4), 2);
    std::vector<double> norms(4);
    for (std::size_t i = 0; i < 4; ++i) {
        norms[i] = std::hypot(emb(i, 0), emb(i, 1));
    }
    for (std::size_t i = 1; i < 4; ++i) CHECK(norms[i] == doctest::Approx(norms[0]).epsilon(1e-8));
    // Four distinct directions.
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double dx = emb(i, 0) - emb(j, 0);
            const double dy = emb(i, 1) - emb(j, 1);
            CHECK(std::hypot(dx, dy) > 1e-3);
        }
    }
}

TEST_CASE("spectral_embedding columns are D-orthonormal") {
    Rng rng(15);
    SparseGraph g = random_graph(20, 0.3, rng);
    while (!g.is_connected()) g = random_graph(20, 0.3, rng);
    const DenseMatrix emb = spectral_embedding(g, 4);
    std::vector<double> deg(20, 0.0);
    for (std::size_t i = 0; i < 20; ++i) {
        for (const double w : g.edge_weights(i)) deg[i] += w;
    }
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < 20; ++i) dot += deg[i] * emb(i, a) * emb(i, b);
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-7).scale(1.0));
        }
    }
}

TEST_CASE("spectral_embedding contract errors") {
    const SparseGraph disconnected = SparseGraph::from_edges(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(spectral_embedding(disconnected, 1), ConnectivityError);
    CHECK_THROWS_AS(spectral_embedding(cycle_graph(4), 4), ContractError);
}

TEST_CASE("negative_edge_sample exhaustive and contract cases") {
    Rng rng(3);
    CHECK_THROWS_AS(negative_edge_sample(complete_graph(4), 1, rng), ContractError);

    const SparseGraph empty3 = SparseGraph::from_edges(3, {});
    const auto all = negative_edge_sample(empty3, 3, rng);
    std::set<std::pair<std::uint32_t, std::uint32_t>> got(all.begin(), all.end());
    CHECK(got == std::set<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("negative_edge_sample is reproducible and avoids edges") {
    const SparseGraph g = cycle_graph(30);
    Rng a(12), b(12);
    const auto s1 = negative_edge_sample(g, 40, a);
    const auto s2 = negative_edge_sample(g, 40, b);
    CHECK(s1 == s2);

    Rng rng(77);
    for (int batch = 0; batch < 250; ++batch) {
        const auto sample = negative_edge_sample(g, 40, rng);
        std::set<std::pair<std::uint32_t, std::uint32_t>> dedup;
        for (const auto& [i, j] : sample) {
            CHECK(i != j);
            CHECK_FALSE(g.has_edge(i, j));
            CHECK(dedup.insert({i, j}).second);
        }
    }
}

TEST_CASE("graph_laplacian forms") {
    const DenseMatrix l = graph_laplacian(path_graph(2), LaplacianKind::unnormalized);
    CHECK(l(0, 0) == 1.0);
    CHECK(l(0, 1) == -1.0);
    CHECK(l(1, 0) == -1.0);
    CHECK(l(1, 1) == 1.0);

    Rng rng(6);
    const SparseGraph g = random_graph(12, 0.4, rng);
    const DenseMatrix lu = graph_laplacian(g, LaplacianKind::unnormalized);
    for (std::size_t i = 0; i < 12; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 12; ++j) s += lu(i, j);
        CHECK(s == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    }

    const auto eig = symmetric_eig(graph_laplacian(cycle_graph(4), LaplacianKind::symmetric));
    CHECK(eig.values[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(eig.values[1] == doctest::Approx(1.0));
    CHECK(eig.values[2] == doctest::Approx(1.0));
    CHECK(eig.values[3] == doctest::Approx(2.0));
}
