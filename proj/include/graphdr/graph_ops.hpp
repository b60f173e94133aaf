#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "graphdr/dense_matrix.hpp"
#include "graphdr/rng.hpp"
#include "graphdr/sparse_graph.hpp"

namespace graphdr {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Shortest-path lengths from a set of source nodes; dist(s, v) for the
/// s-th requested source. Unreachable pairs hold +inf.
struct GeodesicDistances {
    std::vector<std::uint32_t> sources;
    DenseMatrix dist;  // sources.size() x n
};

enum class EdgeLengthMode { unit, euclidean };
enum class LaplacianKind { unnormalized, symmetric };

// k-nearest-neighbour graph on the rows of points, symmetrized by union.
// Distances are compared on squared values; ties break on the lower index.
// All weights are 1.
SparseGraph knn_graph(const DenseMatrix& points, std::size_t k);

// D^{-1/2} (A [+ I]) D^{-1/2} with D the (augmented) degree matrix.
DenseMatrix normalized_adjacency(const SparseGraph& g, bool add_self_loops);

// Dijkstra from each source. In euclidean mode, `edge_lengths` supplies a
// length per CSR entry (aligned with g.col_indices()).
GeodesicDistances shortest_paths(const SparseGraph& g,
                                 const std::vector<std::uint32_t>& sources,
                                 EdgeLengthMode mode,
                                 const std::vector<double>& edge_lengths = {});

// Coordinates from the d smallest nonzero eigenvectors of L_sym, rescaled
// by D^{-1/2} (the generalized-problem solution). Columns sign-fixed so
// the largest-magnitude entry is positive.
DenseMatrix spectral_embedding(const SparseGraph& g, std::size_t d);

// Uniform sample of `count` distinct non-adjacent unordered pairs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> negative_edge_sample(const SparseGraph& g,
                                                                          std::size_t count,
                                                                          Rng& rng);

DenseMatrix graph_laplacian(const SparseGraph& g, LaplacianKind kind);

}  // namespace graphdr
