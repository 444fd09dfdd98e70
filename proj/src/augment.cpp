#include "halfhop/augment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "halfhop/rng.hpp"

namespace halfhop {

namespace {

// Seed salts keeping node selection and random-init feature draws on
// separate streams, so half_hop_sampled(p = 1) reproduces half_hop exactly.
constexpr std::uint64_t kSelectSalt = 0x5e1ec7ULL;
constexpr std::uint64_t kFeatureSalt = 0xfea7ULL;

void validate_config(const HalfHopConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
    throw std::invalid_argument("augment.half_hop: alpha must lie in [0, 1]");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0))
    throw std::invalid_argument("augment.half_hop: p must lie in [0, 1]");
}

// Core rewrite over a fixed set of selected target nodes (empty selector
// means "all"). Scans edges in stored order; hopped edges are replaced in
// place by their motif so the original edge order can be reconstructed.
AugmentedGraph apply(const Graph& g, const HalfHopConfig& cfg,
                     const Mask* selected) {
  const NodeId n = g.num_nodes;
  const auto dim = g.features.cols();

  std::int64_t hopped = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& [s, d] = g.edges[e];
    if (s == d) continue;
    if (selected && !(*selected)[static_cast<std::size_t>(d)]) continue;
    ++hopped;
  }

  const int motif_edges = cfg.variant == Variant::HH    ? 3
                          : cfg.variant == Variant::HH1 ? 2
                                                        : 4;
  AugmentedGraph ag;
  ag.original_count = n;
  ag.provenance.reserve(static_cast<std::size_t>(hopped));

  Graph& out = ag.graph;
  out.num_nodes = n + hopped;
  out.edges.reserve(g.edges.size() +
                    static_cast<std::size_t>(hopped) * (motif_edges - 1));
  const bool weighted = g.weighted();
  if (weighted) out.edge_weights.reserve(out.edges.capacity());

  Eigen::MatrixXd features(n + hopped, dim);
  features.topRows(n) = g.features;

  Rng feature_rng(mix_seed(cfg.seed, kFeatureSalt));
  NodeId next_slow = n;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [src, dst] = g.edges[e];
    const double w = g.weight(e);
    const bool hop =
        src != dst &&
        (!selected || (*selected)[static_cast<std::size_t>(dst)]);
    if (!hop) {
      out.edges.push_back({src, dst});
      if (weighted) out.edge_weights.push_back(w);
      continue;
    }
    const NodeId s = next_slow++;
    ag.provenance.push_back({src, dst});
    switch (cfg.variant) {
      case Variant::HH:
        out.edges.push_back({src, s});
        out.edges.push_back({dst, s});
        out.edges.push_back({s, dst});
        break;
      case Variant::HH1:
        out.edges.push_back({src, s});
        out.edges.push_back({s, dst});
        break;
      case Variant::HH2:
        out.edges.push_back({src, s});
        out.edges.push_back({s, src});
        out.edges.push_back({dst, s});
        out.edges.push_back({s, dst});
        break;
    }
    if (weighted)
      for (int i = 0; i < motif_edges; ++i) out.edge_weights.push_back(w);

    switch (cfg.init) {
      case SlowInit::Interpolate:
        features.row(s) = (1.0 - cfg.alpha) * g.features.row(dst) +
                          cfg.alpha * g.features.row(src);
        break;
      case SlowInit::Zero:
        features.row(s).setZero();
        break;
      case SlowInit::Random:
        for (Eigen::Index c = 0; c < dim; ++c)
          features(s, c) = feature_rng.uniform01();
        break;
    }
  }
  out.features = std::move(features);

  if (g.labels) {
    Eigen::VectorXd labels(n + hopped);
    labels.head(n) = *g.labels;
    labels.tail(hopped).setConstant(std::numeric_limits<double>::quiet_NaN());
    out.labels = std::move(labels);
  }
  for (const auto& [name, mask] : g.masks) {
    Mask padded = mask;
    padded.resize(static_cast<std::size_t>(n + hopped), 0);
    out.masks.emplace(name, std::move(padded));
  }
  return ag;
}

}  // namespace

AugmentedGraph half_hop(const Graph& g, const HalfHopConfig& cfg) {
  validate_config(cfg);
  return apply(g, cfg, nullptr);
}

AugmentedGraph half_hop_sampled(const Graph& g, const HalfHopConfig& cfg) {
  validate_config(cfg);
  Mask selected(static_cast<std::size_t>(g.num_nodes), 0);
  Rng select_rng(mix_seed(cfg.seed, kSelectSalt));
  for (auto& flag : selected) flag = select_rng.bernoulli(cfg.p) ? 1 : 0;
  return apply(g, cfg, &selected);
}

Graph strip_slow_nodes(const AugmentedGraph& ag) {
  const NodeId n = ag.original_count;
  const NodeId total = ag.graph.num_nodes;
  if (total != n + ag.slow_count())
    throw std::invalid_argument(
        "augment.strip_slow_nodes: node count does not match provenance");
  for (const auto& [src, dst] : ag.provenance) {
    if (src < 0 || src >= n || dst < 0 || dst >= n || src == dst)
      throw std::invalid_argument(
          "augment.strip_slow_nodes: corrupted provenance entry (" +
          std::to_string(src) + " -> " + std::to_string(dst) + ")");
  }

  Graph out;
  out.num_nodes = n;
  const bool weighted = ag.graph.weighted();
  for (std::size_t e = 0; e < ag.graph.edges.size(); ++e) {
    const auto [src, dst] = ag.graph.edges[e];
    if (src < n && dst < n) {
      out.edges.push_back({src, dst});
      if (weighted) out.edge_weights.push_back(ag.graph.edge_weights[e]);
      continue;
    }
    if (dst >= n) {
      // The source->slow edge stands in for the original edge; motifs emit
      // it first, so the original edge order is reproduced.
      const auto& prov = ag.provenance[static_cast<std::size_t>(dst - n)];
      if (src == prov.source) {
        out.edges.push_back({prov.source, prov.target});
        if (weighted) out.edge_weights.push_back(ag.graph.edge_weights[e]);
      }
    }
  }
  out.features = ag.graph.features.topRows(n);
  if (ag.graph.labels) out.labels = ag.graph.labels->head(n);
  for (const auto& [name, mask] : ag.graph.masks)
    out.masks.emplace(name, Mask(mask.begin(), mask.begin() + n));
  return out;
}

std::pair<AugmentedGraph, AugmentedGraph> make_views(
    const Graph& g, const HalfHopConfig& cfg1, const HalfHopConfig& cfg2) {
  return {half_hop_sampled(g, cfg1), half_hop_sampled(g, cfg2)};
}

}  // namespace halfhop
