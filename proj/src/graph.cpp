#include "halfhop/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace halfhop {

namespace {

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    return std::hash<std::int64_t>()(e.src * 0x100000001b3LL ^ e.dst);
  }
};

void check_masks(const Graph& g) {
  for (const auto& [name, mask] : g.masks) {
    if (static_cast<NodeId>(mask.size()) != g.num_nodes)
      throw std::invalid_argument("graph.build_graph: mask '" + name +
                                  "' has length " +
                                  std::to_string(mask.size()) + ", expected " +
                                  std::to_string(g.num_nodes));
  }
  // Masks must be pairwise disjoint.
  for (auto a = g.masks.begin(); a != g.masks.end(); ++a) {
    for (auto b = std::next(a); b != g.masks.end(); ++b) {
      for (NodeId v = 0; v < g.num_nodes; ++v) {
        if (a->second[v] && b->second[v])
          throw std::invalid_argument("graph.build_graph: masks '" + a->first +
                                      "' and '" + b->first +
                                      "' both contain node " +
                                      std::to_string(v));
      }
    }
  }
}

}  // namespace

Graph build_graph(NodeId num_nodes, std::vector<Edge> edges,
                  Eigen::MatrixXd features,
                  std::optional<Eigen::VectorXd> labels, BuildOptions options,
                  std::vector<double> edge_weights) {
  if (num_nodes < 0)
    throw std::invalid_argument("graph.build_graph: negative node count");
  if (!edge_weights.empty() && edge_weights.size() != edges.size())
    throw std::invalid_argument(
        "graph.build_graph: edge_weights length " +
        std::to_string(edge_weights.size()) + " does not match edge count " +
        std::to_string(edges.size()));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [s, d] = edges[e];
    if (s < 0 || s >= num_nodes || d < 0 || d >= num_nodes)
      throw std::invalid_argument(
          "graph.build_graph: edge " + std::to_string(e) + " (" +
          std::to_string(s) + " -> " + std::to_string(d) +
          ") out of range for " + std::to_string(num_nodes) + " nodes");
    if (!edge_weights.empty() && edge_weights[e] < 0.0)
      throw std::invalid_argument("graph.build_graph: edge " +
                                  std::to_string(e) + " has negative weight");
  }
  if (features.size() > 0 && features.rows() != num_nodes)
    throw std::invalid_argument(
        "graph.build_graph: feature matrix has " +
        std::to_string(features.rows()) + " rows, expected " +
        std::to_string(num_nodes));
  if (labels && labels->size() != num_nodes)
    throw std::invalid_argument("graph.build_graph: label vector has " +
                                std::to_string(labels->size()) +
                                " entries, expected " +
                                std::to_string(num_nodes));

  if (options.dedup) {
    std::unordered_set<Edge, EdgeHash> seen;
    seen.reserve(edges.size());
    std::vector<Edge> kept;
    std::vector<double> kept_w;
    kept.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (seen.insert(edges[e]).second) {
        kept.push_back(edges[e]);
        if (!edge_weights.empty()) kept_w.push_back(edge_weights[e]);
      }
    }
    edges = std::move(kept);
    edge_weights = std::move(kept_w);
  }

  Graph g;
  g.num_nodes = num_nodes;
  g.edges = std::move(edges);
  g.edge_weights = std::move(edge_weights);
  if (features.size() > 0)
    g.features = std::move(features);
  else
    g.features.resize(num_nodes, 0);
  g.labels = std::move(labels);
  check_masks(g);
  return g;
}

DegreeView degree_view(const Graph& g) {
  DegreeView dv;
  const auto n = static_cast<std::size_t>(g.num_nodes);
  dv.in_degree.assign(n, 0);
  dv.out_degree.assign(n, 0);
  dv.undirected_neighbors.assign(n, {});
  for (const auto& [s, d] : g.edges) {
    ++dv.out_degree[static_cast<std::size_t>(s)];
    ++dv.in_degree[static_cast<std::size_t>(d)];
    if (s != d) {
      dv.undirected_neighbors[static_cast<std::size_t>(s)].push_back(d);
      dv.undirected_neighbors[static_cast<std::size_t>(d)].push_back(s);
    }
  }
  for (auto& nbrs : dv.undirected_neighbors) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return dv;
}

double homophily_ratio(const Graph& g) {
  if (!g.labels)
    throw std::invalid_argument("graph.homophily_ratio: graph has no labels");
  const DegreeView dv = degree_view(g);
  const Eigen::VectorXd& y = *g.labels;
  double sum = 0.0;
  std::int64_t counted = 0;
  for (NodeId v = 0; v < g.num_nodes; ++v) {
    const auto& nbrs = dv.undirected_neighbors[static_cast<std::size_t>(v)];
    if (nbrs.empty()) continue;  // |N(v)| = 0: excluded from the average
    std::int64_t same = 0;
    for (NodeId w : nbrs)
      if (y[v] == y[w]) ++same;
    sum += static_cast<double>(same) / static_cast<double>(nbrs.size());
    ++counted;
  }
  if (counted == 0)
    throw std::invalid_argument(
        "graph.homophily_ratio: every node is isolated");
  return sum / static_cast<double>(counted);
}

Graph symmetrize(const Graph& g) {
  std::unordered_set<Edge, EdgeHash> present(g.edges.begin(), g.edges.end());
  std::vector<Edge> edges = g.edges;
  std::vector<double> weights = g.edge_weights;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge rev{g.edges[e].dst, g.edges[e].src};
    if (present.insert(rev).second) {
      edges.push_back(rev);
      if (!weights.empty()) weights.push_back(g.edge_weights[e]);
    }
  }
  Graph out = g;
  out.edges = std::move(edges);
  out.edge_weights = std::move(weights);
  return out;
}

}  // namespace halfhop
