#include "dvqls/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dvqls {

GraphKind parse_graph_kind(const std::string &name) {
    if (name == "path") {
        return GraphKind::path;
    }
    if (name == "ring") {
        return GraphKind::ring;
    }
    if (name == "complete") {
        return GraphKind::complete;
    }
    throw std::invalid_argument("unknown graph kind '" + name + "'");
}

NeighborGraph::NeighborGraph(int num_vertices,
                             std::vector<std::pair<int, int>> edges)
    : m_(num_vertices) {
    if (num_vertices < 1) {
        throw std::invalid_argument("NeighborGraph: need at least one vertex");
    }
    neighbor_sets_.assign(static_cast<size_t>(m_), {});
    for (int v = 0; v < m_; ++v) {
        neighbor_sets_[static_cast<size_t>(v)].push_back(v);
    }
    for (const auto &[a, b] : edges) {
        if (a < 0 || a >= m_ || b < 0 || b >= m_) {
            throw std::out_of_range("NeighborGraph: edge vertex out of range");
        }
        if (a == b) {
            throw std::invalid_argument(
                "NeighborGraph: explicit self-loops are not allowed");
        }
        if (!adjacent(a, b)) {
            neighbor_sets_[static_cast<size_t>(a)].push_back(b);
            neighbor_sets_[static_cast<size_t>(b)].push_back(a);
        }
    }
    for (auto &set : neighbor_sets_) {
        std::sort(set.begin(), set.end());
    }
}

const std::vector<int> &NeighborGraph::neighbors(int v) const {
    if (v < 0 || v >= m_) {
        throw std::out_of_range("NeighborGraph: vertex out of range");
    }
    return neighbor_sets_[static_cast<size_t>(v)];
}

bool NeighborGraph::adjacent(int a, int b) const {
    const auto &set = neighbor_sets_[static_cast<size_t>(a)];
    return std::find(set.begin(), set.end(), b) != set.end();
}

bool NeighborGraph::connected() const {
    std::vector<bool> seen(static_cast<size_t>(m_), false);
    std::vector<int> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : neighbors(v)) {
            if (!seen[static_cast<size_t>(u)]) {
                seen[static_cast<size_t>(u)] = true;
                stack.push_back(u);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

NeighborGraph make_graph(GraphKind kind, int m) {
    if (m < 1) {
        throw std::invalid_argument("make_graph: m must be >= 1");
    }
    std::vector<std::pair<int, int>> edges;
    switch (kind) {
    case GraphKind::path:
        for (int v = 0; v + 1 < m; ++v) {
            edges.emplace_back(v, v + 1);
        }
        break;
    case GraphKind::ring:
        for (int v = 0; v + 1 < m; ++v) {
            edges.emplace_back(v, v + 1);
        }
        if (m > 2) {
            edges.emplace_back(m - 1, 0);
        }
        break;
    case GraphKind::complete:
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                edges.emplace_back(a, b);
            }
        }
        break;
    }
    return NeighborGraph(m, std::move(edges));
}

Eigen::MatrixXd laplacian(const NeighborGraph &g) {
    const int m = g.num_vertices();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
    for (int v = 0; v < m; ++v) {
        for (int u : g.neighbors(v)) {
            if (u == v) {
                continue;
            }
            lap(v, v) += 1.0;
            lap(v, u) -= 1.0;
        }
    }
    return lap;
}

Eigen::MatrixXd metropolis_weights(const NeighborGraph &g) {
    if (!g.connected()) {
        throw std::invalid_argument("metropolis_weights: graph is disconnected");
    }
    const int m = g.num_vertices();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    for (int v = 0; v < m; ++v) {
        double off_mass = 0.0;
        const double deg_v = static_cast<double>(g.neighbors(v).size());
        for (int u : g.neighbors(v)) {
            if (u == v) {
                continue;
            }
            const double deg_u = static_cast<double>(g.neighbors(u).size());
            w(v, u) = 1.0 / std::max(deg_v, deg_u);
            off_mass += w(v, u);
        }
        w(v, v) = 1.0 - off_mass;
    }
    return w;
}

} // namespace dvqls
