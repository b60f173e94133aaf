#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphdr/dense_matrix.hpp"
#include "graphdr/rng.hpp"
#include "graphdr/sparse_graph.hpp"

namespace graphdr {

/// Points in ambient space with optional class labels and an optional
/// intrinsic (manifold) coordinate per point.
struct PointCloud {
    DenseMatrix coords;
    std::vector<int> labels;      // empty when absent
    std::vector<double> intrinsic;  // empty when absent
};

/// Graph plus node features, the training input for every graph method.
struct GraphDataset {
    SparseGraph graph;
    DenseMatrix features;
    std::vector<int> labels;
    DenseMatrix ground_truth_coords;  // empty when unknown
    std::string name;
};

// Isotropic Gaussian blobs around centers drawn uniformly in [-10,10]^2.
// Class sizes are balanced; the remainder goes to the earliest classes.
PointCloud make_blobs(std::size_t n, std::size_t centers, double stddev, Rng& rng);

// Two concentric circles (outer label 0, inner label 1 at radius `factor`),
// angles evenly spaced, iid Gaussian noise per coordinate.
PointCloud make_circles(std::size_t n, double factor, double noise, Rng& rng);

// Two interleaved half-circles with evenly spaced angles.
PointCloud make_moons(std::size_t n, double noise, Rng& rng);

// Swissroll (t cos t, h, t sin t), t ~ U[1.5pi, 4.5pi], h ~ U[0,21];
// labels are 10 quantile bins of t.
PointCloud make_swissroll(std::size_t n, double noise, Rng& rng);

// The synthetic pipeline: k-NN graph on the coordinates (must come out
// connected) with spectral-embedding features.
GraphDataset build_graph_dataset(const PointCloud& pc, std::size_t k_graph, std::size_t feat_components,
                                 const std::string& name = "");

// On-disk formats: edge file `src<TAB>dst<TAB>weight` (weight optional,
// `#` comments), feature CSV (row i = node i), label file (one int per line).
GraphDataset load_graph_dataset(const std::string& edge_path, const std::string& feature_path,
                                const std::optional<std::string>& label_path = std::nullopt);
void save_graph_dataset(const GraphDataset& ds, const std::string& edge_path,
                        const std::string& feature_path,
                        const std::optional<std::string>& label_path = std::nullopt);

// CSV helpers shared with the CLI (17 significant digits, bit-exact round trip).
void write_matrix_csv(const DenseMatrix& m, const std::string& path);
DenseMatrix read_matrix_csv(const std::string& path);

}  // namespace graphdr
