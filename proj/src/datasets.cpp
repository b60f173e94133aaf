#include "graphdr/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "graphdr/errors.hpp"
#include "graphdr/graph_ops.hpp"

namespace graphdr {

namespace {

void add_noise(DenseMatrix& coords, double noise, Rng& rng) {
    if (noise <= 0.0) return;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        coords.data()[i] += noise * rng.normal();
    }
}

}  // namespace

PointCloud make_blobs(std::size_t n, std::size_t centers, double stddev, Rng& rng) {
    if (centers < 1) throw ContractError("make_blobs: centers must be >= 1");
    if (!(stddev > 0.0)) throw ContractError("make_blobs: std must be > 0");
    if (n < centers) throw ContractError("make_blobs: n must be >= centers");

    std::vector<std::pair<double, double>> c(centers);
    for (auto& [cx, cy] : c) {
        cx = rng.uniform(-10.0, 10.0);
        cy = rng.uniform(-10.0, 10.0);
    }
    PointCloud pc;
    pc.coords = DenseMatrix(n, 2);
    pc.labels.resize(n);
    const std::size_t base = n / centers;
    const std::size_t rem = n % centers;
    std::size_t row = 0;
    for (std::size_t cls = 0; cls < centers; ++cls) {
        const std::size_t sz = base + (cls < rem ? 1 : 0);
        for (std::size_t p = 0; p < sz; ++p, ++row) {
            pc.coords(row, 0) = c[cls].first + stddev * rng.normal();
            pc.coords(row, 1) = c[cls].second + stddev * rng.normal();
            pc.labels[row] = static_cast<int>(cls);
        }
    }
    return pc;
}

PointCloud make_circles(std::size_t n, double factor, double noise, Rng& rng) {
    if (!(factor > 0.0 && factor < 1.0)) throw ContractError("make_circles: factor must lie in (0,1)");
    if (noise < 0.0) throw ContractError("make_circles: noise must be >= 0");
    if (n % 2 != 0) throw ContractError("make_circles: n must be even");

    const std::size_t m = n / 2;
    PointCloud pc;
    pc.coords = DenseMatrix(n, 2);
    pc.labels.resize(n);
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        pc.coords(i, 0) = std::cos(theta);
        pc.coords(i, 1) = std::sin(theta);
        pc.labels[i] = 0;
        pc.coords(m + i, 0) = factor * std::cos(theta);
        pc.coords(m + i, 1) = factor * std::sin(theta);
        pc.labels[m + i] = 1;
    }
    add_noise(pc.coords, noise, rng);
    return pc;
}

PointCloud make_moons(std::size_t n, double noise, Rng& rng) {
    if (noise < 0.0) throw ContractError("make_moons: noise must be >= 0");
    if (n % 2 != 0) throw ContractError("make_moons: n must be even");

    const std::size_t m = n / 2;
    PointCloud pc;
    pc.coords = DenseMatrix(n, 2);
    pc.labels.resize(n);
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = m == 1 ? 0.0 : std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1);
        pc.coords(i, 0) = std::cos(theta);
        pc.coords(i, 1) = std::sin(theta);
        pc.labels[i] = 0;
        pc.coords(m + i, 0) = 1.0 - std::cos(theta);
        pc.coords(m + i, 1) = 0.5 - std::sin(theta);
        pc.labels[m + i] = 1;
    }
    add_noise(pc.coords, noise, rng);
    return pc;
}

PointCloud make_swissroll(std::size_t n, double noise, Rng& rng) {
    if (noise < 0.0) throw ContractError("make_swissroll: noise must be >= 0");

    PointCloud pc;
    pc.coords = DenseMatrix(n, 3);
    pc.intrinsic.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = rng.uniform(1.5 * std::numbers::pi, 4.5 * std::numbers::pi);
        const double h = rng.uniform(0.0, 21.0);
        pc.coords(i, 0) = t * std::cos(t);
        pc.coords(i, 1) = h;
        pc.coords(i, 2) = t * std::sin(t);
        pc.intrinsic[i] = t;
    }
    add_noise(pc.coords, noise, rng);

    // 10 quantile bins of the roll coordinate as class labels.
    pc.labels.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&pc](std::size_t a, std::size_t b) { return pc.intrinsic[a] < pc.intrinsic[b]; });
    for (std::size_t rank = 0; rank < n; ++rank) {
        pc.labels[order[rank]] = static_cast<int>(rank * 10 / n);
    }
    return pc;
}

GraphDataset build_graph_dataset(const PointCloud& pc, std::size_t k_graph, std::size_t feat_components,
                                 const std::string& name) {
    GraphDataset ds;
    ds.graph = knn_graph(pc.coords, k_graph);
    if (!ds.graph.is_connected()) {
        throw ConnectivityError("build_graph_dataset: k-NN graph is disconnected; increase k or regenerate");
    }
    ds.features = spectral_embedding(ds.graph, feat_components);
    ds.labels = pc.labels;
    ds.ground_truth_coords = pc.coords;
    ds.name = name;
    return ds;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line_no) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') parse_fail(path, line_no, "malformed number '" + tok + "'");
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<double> data;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::size_t c = 0;
        while (std::getline(ss, tok, ',')) {
            data.push_back(parse_double(tok, path, line_no));
            ++c;
        }
        if (rows == 0) {
            cols = c;
        } else if (c != cols) {
            parse_fail(path, line_no, "ragged row: expected " + std::to_string(cols) + " fields, got " + std::to_string(c));
        }
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(data));
}

void write_matrix_csv(const DenseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_matrix_csv: cannot open " + path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

GraphDataset load_graph_dataset(const std::string& edge_path, const std::string& feature_path,
                                const std::optional<std::string>& label_path) {
    GraphDataset ds;
    ds.features = read_matrix_csv(feature_path);
    const std::size_t n = ds.features.rows();

    std::ifstream in(edge_path);
    if (!in) throw ParseError(edge_path + ": cannot open file");
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> edge_map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, '\t')) fields.push_back(tok);
        if (fields.size() < 2 || fields.size() > 3) {
            parse_fail(edge_path, line_no, "expected src<TAB>dst[<TAB>weight]");
        }
        const double src = parse_double(fields[0], edge_path, line_no);
        const double dst = parse_double(fields[1], edge_path, line_no);
        const double w = fields.size() == 3 ? parse_double(fields[2], edge_path, line_no) : 1.0;
        if (src < 0 || dst < 0 || src != std::floor(src) || dst != std::floor(dst)) {
            parse_fail(edge_path, line_no, "node ids must be nonnegative integers");
        }
        const auto i = static_cast<std::uint32_t>(src);
        const auto j = static_cast<std::uint32_t>(dst);
        if (i >= n || j >= n) {
            parse_fail(edge_path, line_no,
                       "node id out of range for " + std::to_string(n) + " feature rows");
        }
        if (i == j) parse_fail(edge_path, line_no, "self-loop not allowed");
        if (!(w >= 0.0 && w <= 1.0)) parse_fail(edge_path, line_no, "weight outside [0,1]");
        const auto key = std::make_pair(std::min(i, j), std::max(i, j));
        const auto [it, inserted] = edge_map.emplace(key, w);
        if (!inserted && it->second != w) {
            parse_fail(edge_path, line_no, "duplicate edge with conflicting weight");
        }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<double> weights;
    edges.reserve(edge_map.size());
    weights.reserve(edge_map.size());
    for (const auto& [key, w] : edge_map) {
        edges.push_back(key);
        weights.push_back(w);
    }
    ds.graph = SparseGraph::from_edges(n, edges, weights);

    if (label_path) {
        std::ifstream lin(*label_path);
        if (!lin) throw ParseError(*label_path + ": cannot open file");
        std::size_t lline = 0;
        while (std::getline(lin, line)) {
            ++lline;
            if (line.empty()) continue;
            int v = 0;
            const auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
            if (ec != std::errc() || p != line.data() + line.size()) {
                parse_fail(*label_path, lline, "malformed label '" + line + "'");
            }
            ds.labels.push_back(v);
        }
        if (ds.labels.size() != n) {
            throw ParseError(*label_path + ": label count " + std::to_string(ds.labels.size()) +
                             " does not match " + std::to_string(n) + " nodes");
        }
    }
    return ds;
}

void save_graph_dataset(const GraphDataset& ds, const std::string& edge_path,
                        const std::string& feature_path,
                        const std::optional<std::string>& label_path) {
    std::ofstream out(edge_path);
    if (!out) throw Error("save_graph_dataset: cannot open " + edge_path);
    for (std::uint32_t i = 0; i < ds.graph.num_nodes(); ++i) {
        const auto nb = ds.graph.neighbors(i);
        const auto w = ds.graph.edge_weights(i);
        for (std::size_t e = 0; e < nb.size(); ++e) {
            if (i < nb[e]) {
                out << i << '\t' << nb[e] << '\t' << format_double(w[e]) << '\n';
            }
        }
    }
    write_matrix_csv(ds.features, feature_path);
    if (label_path) {
        std::ofstream lout(*label_path);
        if (!lout) throw Error("save_graph_dataset: cannot open " + *label_path);
        for (const int v : ds.labels) lout << v << '\n';
    }
}

}  // namespace graphdr
