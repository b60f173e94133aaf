#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "graphdr/datasets.hpp"
#include "graphdr/errors.hpp"
#include "graphdr/graph_ops.hpp"

using namespace graphdr;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "graphdr_test_datasets";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("make_blobs balances classes and shrinks with std") {
    Rng rng(1);
    const PointCloud pc = make_blobs(10, 3, 1e-8, rng);
    REQUIRE(pc.labels.size() == 10);
    int sizes[3] = {0, 0, 0};
    for (const int l : pc.labels) ++sizes[l];
    CHECK(sizes[0] == 4);
    CHECK(sizes[1] == 3);
    CHECK(sizes[2] == 3);

    // Degenerate spread: intra-class diameter collapses.
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 10; ++j) {
            if (pc.labels[i] != pc.labels[j]) continue;
            const double dx = pc.coords(i, 0) - pc.coords(j, 0);
            const double dy = pc.coords(i, 1) - pc.coords(j, 1);
            CHECK(std::hypot(dx, dy) < 1e-6);
        }
    }
    CHECK_THROWS_AS(make_blobs(2, 3, 1.0, rng), ContractError);
}

TEST_CASE("generators are deterministic per seed and differ across seeds") {
    const auto first3 = [](const PointCloud& pc) {
        return std::vector<double>{pc.coords(0, 0), pc.coords(0, 1), pc.coords(1, 0)};
    };
    {
        Rng a(5), b(5), c(6);
        CHECK(make_blobs(50, 4, 1.0, a).coords == make_blobs(50, 4, 1.0, b).coords);
        Rng a2(5);
        CHECK(first3(make_blobs(50, 4, 1.0, a2)) != first3(make_blobs(50, 4, 1.0, c)));
    }
    {
        Rng a(5), b(5), c(6);
        CHECK(make_circles(40, 0.5, 0.1, a).coords == make_circles(40, 0.5, 0.1, b).coords);
        Rng a2(5);
        CHECK(first3(make_circles(40, 0.5, 0.1, a2)) != first3(make_circles(40, 0.5, 0.1, c)));
    }
    {
        Rng a(5), b(5), c(6);
        CHECK(make_moons(40, 0.1, a).coords == make_moons(40, 0.1, b).coords);
        Rng a2(5);
        CHECK(first3(make_moons(40, 0.1, a2)) != first3(make_moons(40, 0.1, c)));
    }
    {
        Rng a(5), b(5), c(6);
        CHECK(make_swissroll(50, 0.0, a).coords == make_swissroll(50, 0.0, b).coords);
        Rng a2(5);
        CHECK(first3(make_swissroll(50, 0.0, a2)) != first3(make_swissroll(50, 0.0, c)));
    }
}

TEST_CASE("make_circles noise-free geometry") {
    Rng rng(2);
    const PointCloud pc = make_circles(4, 0.5, 0.0, rng);
    CHECK(pc.coords(0, 0) == doctest::Approx(1.0));
    CHECK(pc.coords(0, 1) == doctest::Approx(0.0).scale(1.0));
    CHECK(pc.coords(1, 0) == doctest::Approx(-1.0));
    CHECK(pc.coords(2, 0) == doctest::Approx(0.5));
    CHECK(pc.coords(3, 0) == doctest::Approx(-0.5));
    CHECK(pc.labels == std::vector<int>{0, 0, 1, 1});

    const PointCloud big = make_circles(100, 0.3, 0.0, rng);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(std::hypot(big.coords(i, 0), big.coords(i, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_circles(5, 0.5, 0.0, rng), ContractError);
}

TEST_CASE("make_moons noise-free geometry") {
    Rng rng(2);
    const PointCloud pc = make_moons(4, 0.0, rng);
    CHECK(pc.coords(0, 0) == doctest::Approx(1.0));
    CHECK(pc.coords(1, 0) == doctest::Approx(-1.0));
    CHECK(pc.coords(2, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(pc.coords(2, 1) == doctest::Approx(0.5));
    CHECK(pc.coords(3, 0) == doctest::Approx(2.0));
    CHECK(pc.coords(3, 1) == doctest::Approx(0.5));

    const PointCloud big = make_moons(80, 0.0, rng);
    for (std::size_t i = 0; i < 40; ++i) {
        const double r2 = big.coords(i, 0) * big.coords(i, 0) + big.coords(i, 1) * big.coords(i, 1);
        CHECK(r2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_moons(5, 0.0, rng), ContractError);
}

TEST_CASE("make_swissroll parametrization and quantile labels") {
    Rng rng(3);
    const PointCloud pc = make_swissroll(200, 0.0, rng);
    for (std::size_t i = 0; i < 200; ++i) {
        const double t = pc.intrinsic[i];
        const double r2 = pc.coords(i, 0) * pc.coords(i, 0) + pc.coords(i, 2) * pc.coords(i, 2);
        CHECK(r2 == doctest::Approx(t * t).epsilon(1e-9));
        CHECK(t >= 1.5 * 3.14159);
        CHECK(t <= 4.5 * 3.14160);
    }
    // Sorted intrinsic coordinate gives nondecreasing labels, 10 classes.
    std::vector<std::pair<double, int>> tl(200);
    for (std::size_t i = 0; i < 200; ++i) tl[i] = {pc.intrinsic[i], pc.labels[i]};
    std::sort(tl.begin(), tl.end());
    for (std::size_t i = 1; i < 200; ++i) CHECK(tl[i].second >= tl[i - 1].second);
    CHECK(tl.front().second == 0);
    CHECK(tl.back().second == 9);
}

TEST_CASE("build_graph_dataset wires the synthetic pipeline") {
    Rng rng(7);
    const PointCloud pc = make_swissroll(150, 0.0, rng);
    const GraphDataset ds = build_graph_dataset(pc, 10, 5, "swissroll");
    CHECK(ds.features.rows() == 150);
    CHECK(ds.features.cols() == 5);
    CHECK(ds.graph.num_nodes() == 150);
    CHECK(ds.ground_truth_coords == pc.coords);
    CHECK(ds.labels == pc.labels);
    for (std::size_t i = 0; i < 150; ++i) CHECK(ds.graph.degree(i) >= 10);

    // Spectral features stay D-orthonormal.
    std::vector<double> deg(150, 0.0);
    for (std::size_t i = 0; i < 150; ++i) {
        for (const double w : ds.graph.edge_weights(i)) deg[i] += w;
    }
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < 150; ++i) dot += deg[i] * ds.features(i, a) * ds.features(i, b);
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-7).scale(1.0));
        }
    }
}

TEST_CASE("build_graph_dataset reports disconnected graphs") {
    Rng rng(11);
    const PointCloud pc = make_blobs(40, 4, 1e-8, rng);
    CHECK_THROWS_AS(build_graph_dataset(pc, 2, 2), ConnectivityError);
}

TEST_CASE("loader round trip is the identity") {
    Rng rng(19);
    GraphDataset ds;
    const std::size_t n = 60 + rng.uniform_int(41);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list;
    std::vector<double> weights;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < 0.1) {
                edge_list.emplace_back(i, j);
                weights.push_back(rng.uniform());
            }
        }
    }
    ds.graph = SparseGraph::from_edges(n, edge_list, weights);
    ds.features = DenseMatrix(n, 4);
    for (std::size_t i = 0; i < ds.features.size(); ++i) ds.features.data()[i] = rng.normal();
    for (std::size_t i = 0; i < n; ++i) ds.labels.push_back(static_cast<int>(rng.uniform_int(3)));

    const auto dir = temp_dir();
    const auto edges = (dir / "edges.tsv").string();
    const auto feats = (dir / "features.csv").string();
    const auto labels = (dir / "labels.txt").string();
    save_graph_dataset(ds, edges, feats, labels);
    const GraphDataset back = load_graph_dataset(edges, feats, labels);

    CHECK(back.graph.row_offsets() == ds.graph.row_offsets());
    CHECK(back.graph.col_indices() == ds.graph.col_indices());
    CHECK(back.graph.weights() == ds.graph.weights());
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
}

TEST_CASE("loader parses a 2-node toy and rejects bad files") {
    const auto dir = temp_dir();
    const auto edges = (dir / "toy_edges.tsv").string();
    const auto feats = (dir / "toy_features.csv").string();
    {
        std::ofstream e(edges);
        e << "# toy graph\n0\t1\t0.5\n";
        std::ofstream f(feats);
        f << "1.0,2.0\n3.0,4.0\n";
    }
    const GraphDataset ds = load_graph_dataset(edges, feats);
    CHECK(ds.graph.num_nodes() == 2);
    CHECK(ds.graph.num_undirected_edges() == 1);
    CHECK(ds.graph.weight(0, 1) == 0.5);

    {
        std::ofstream e(edges, std::ios::trunc);
        e << "0\t7\n";
        std::ofstream f(feats, std::ios::trunc);
        f << "1.0\n2.0\n3.0\n";
    }
    CHECK_THROWS_AS(load_graph_dataset(edges, feats), ParseError);

    {
        std::ofstream f(feats, std::ios::trunc);
        f << "1.0,2.0\n3.0\n";
    }
    CHECK_THROWS_AS(read_matrix_csv(feats), ParseError);

    {
        std::ofstream e(edges, std::ios::trunc);
        e << "0\t1\t0.25\n1\t0\t0.75\n";
        std::ofstream f(feats, std::ios::trunc);
        f << "1.0\n2.0\n";
    }
    CHECK_THROWS_AS(load_graph_dataset(edges, feats), ParseError);
}
