#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "dvqls/graph.hpp"

using namespace dvqls;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("neighbor sets include the vertex itself") {
    const NeighborGraph g = make_graph(GraphKind::path, 3);
    CHECK(g.neighbors(0) == std::vector<int>{0, 1});
    CHECK(g.neighbors(1) == std::vector<int>{0, 1, 2});
    CHECK(g.neighbors(2) == std::vector<int>{1, 2});
    CHECK(g.adjacent(0, 1));
    CHECK_FALSE(g.adjacent(0, 2));
    CHECK(g.connected());
}

TEST_CASE("path laplacian and its spectrum") {
    const NeighborGraph g = make_graph(GraphKind::path, 3);
    Eigen::MatrixXd expected(3, 3);
    expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    const Eigen::MatrixXd lap = laplacian(g);
    CHECK((lap - expected).norm() < kTol);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    CHECK(std::abs(es.eigenvalues()(0)) < kTol);
    CHECK(std::abs(es.eigenvalues()(1) - 1.0) < kTol);
    CHECK(std::abs(es.eigenvalues()(2) - 3.0) < kTol);
}

TEST_CASE("metropolis weights on the 3-path") {
    const Eigen::MatrixXd w = metropolis_weights(make_graph(GraphKind::path, 3));
    CHECK(std::abs(w(0, 1) - 1.0 / 3.0) < kTol);
    CHECK(std::abs(w(1, 0) - 1.0 / 3.0) < kTol);
    CHECK(std::abs(w(0, 0) - 2.0 / 3.0) < kTol);
    CHECK(std::abs(w(1, 1) - 1.0 / 3.0) < kTol);
    CHECK(std::abs(w(2, 2) - 2.0 / 3.0) < kTol);
    CHECK(std::abs(w(0, 2)) < kTol);
}

TEST_CASE("complete graph mixes uniformly") {
    const Eigen::MatrixXd w =
        metropolis_weights(make_graph(GraphKind::complete, 4));
    CHECK((w - Eigen::MatrixXd::Constant(4, 4, 0.25)).norm() < kTol);
}

TEST_CASE("weights are symmetric doubly stochastic with spectral gap") {
    for (GraphKind kind : {GraphKind::path, GraphKind::ring, GraphKind::complete}) {
        for (int m : {1, 2, 3, 5, 8}) {
            const Eigen::MatrixXd w = metropolis_weights(make_graph(kind, m));
            CHECK((w - w.transpose()).norm() < kTol);
            CHECK((w.rowwise().sum() - Eigen::VectorXd::Ones(m)).norm() < kTol);
            CHECK(w.minCoeff() >= -kTol);

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
            CHECK(std::abs(es.eigenvalues()(m - 1) - 1.0) < kTol);
            if (m > 1) {
                // connected: eigenvalue 1 is simple
                CHECK(es.eigenvalues()(m - 2) < 1.0 - 1e-9);
            }
        }
    }
}

TEST_CASE("disconnected graphs are rejected") {
    const NeighborGraph g(3, {{0, 1}});
    CHECK_FALSE(g.connected());
    CHECK_THROWS_AS(metropolis_weights(g), std::invalid_argument);
}

TEST_CASE("construction validates edges") {
    CHECK_THROWS_AS(NeighborGraph(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(NeighborGraph(2, {{0, 2}}), std::out_of_range);
    CHECK_THROWS_AS(parse_graph_kind("torus"), std::invalid_argument);
    CHECK(parse_graph_kind("ring") == GraphKind::ring);

    // ring m=2 degenerates to a single edge, not a double edge
    const NeighborGraph r2 = make_graph(GraphKind::ring, 2);
    CHECK(r2.neighbors(0) == std::vector<int>{0, 1});
}
