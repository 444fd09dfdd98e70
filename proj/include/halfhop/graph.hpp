#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace halfhop {

using NodeId = std::int64_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using Mask = std::vector<std::uint8_t>;

// Immutable after construction; all read paths are safe to share across
// threads. Node ids are dense and 0-based. Labels are stored as doubles;
// integer class ids compare exactly. A NaN label means "unlabeled".
struct Graph {
  NodeId num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<double> edge_weights;  // empty = unweighted (all 1)
  Eigen::MatrixXd features;          // num_nodes x feature_dim (may be n x 0)
  std::optional<Eigen::VectorXd> labels;
  std::map<std::string, Mask> masks;

  bool weighted() const { return !edge_weights.empty(); }
  double weight(std::size_t e) const {
    return edge_weights.empty() ? 1.0 : edge_weights[e];
  }
  std::int64_t num_edges() const {
    return static_cast<std::int64_t>(edges.size());
  }
};

struct DegreeView {
  std::vector<std::int64_t> in_degree;
  std::vector<std::int64_t> out_degree;
  // Undirected neighbor sets, self-loops excluded, each sorted ascending.
  std::vector<std::vector<NodeId>> undirected_neighbors;
};

struct BuildOptions {
  bool dedup = true;  // drop duplicate directed edges, keeping the first
};

// Validates and assembles a Graph. Duplicate directed edges are removed by
// default (first occurrence and its weight survive); insertion order is
// preserved. Throws std::invalid_argument naming the offending edge index
// for out-of-range endpoints, and on feature/label/mask length mismatches.
Graph build_graph(NodeId num_nodes, std::vector<Edge> edges,
                  Eigen::MatrixXd features = {},
                  std::optional<Eigen::VectorXd> labels = std::nullopt,
                  BuildOptions options = {},
                  std::vector<double> edge_weights = {});

DegreeView degree_view(const Graph& g);

// Mean over labeled, non-isolated nodes of the fraction of undirected
// neighbors sharing the node's label. Isolated nodes are skipped; throws if
// labels are missing or every node is isolated.
double homophily_ratio(const Graph& g);

// Ensures (j,i) is present for every (i,j); existing edges keep their order,
// new reverse edges are appended in scan order with the forward weight.
Graph symmetrize(const Graph& g);

}  // namespace halfhop
