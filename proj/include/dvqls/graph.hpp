// Neighbor graphs over agent row/column indices, their Laplacians, and
// Metropolis mixing weights. Every vertex is its own neighbor; neighbor-set
// sizes used in the Metropolis formula count the self-loop.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dvqls {

enum class GraphKind { path, ring, complete };

GraphKind parse_graph_kind(const std::string &name);

class NeighborGraph {
  public:
    // Edges are undirected pairs over {0..m-1}; self-loops are implicit and
    // must not appear in the edge list.
    NeighborGraph(int num_vertices, std::vector<std::pair<int, int>> edges);

    int num_vertices() const { return m_; }
    // Includes the vertex itself.
    const std::vector<int> &neighbors(int v) const;
    bool adjacent(int a, int b) const;
    bool connected() const;

  private:
    int m_;
    std::vector<std::vector<int>> neighbor_sets_;
};

NeighborGraph make_graph(GraphKind kind, int m);

// Degree minus adjacency, self-loops excluded from degrees.
Eigen::MatrixXd laplacian(const NeighborGraph &g);

// Symmetric doubly stochastic mixing matrix; throws on disconnected graphs.
Eigen::MatrixXd metropolis_weights(const NeighborGraph &g);

} // namespace dvqls
