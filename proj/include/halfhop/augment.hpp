#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "halfhop/graph.hpp"

namespace halfhop {

// Connectivity motif for the inserted slow node on edge (i -> j):
//   HH  : i -> s, j -> s, s -> j   (backward edge from the target)
//   HH1 : i -> s, s -> j           (forward chain only)
//   HH2 : i -> s, s -> i, j -> s, s -> j
enum class Variant { HH, HH1, HH2 };

enum class SlowInit { Interpolate, Zero, Random };

struct HalfHopConfig {
  double alpha = 0.5;  // slow feature = (1-alpha) x_target + alpha x_source
  double p = 1.0;      // per-node probability of hopping all incoming edges
  Variant variant = Variant::HH;
  SlowInit init = SlowInit::Interpolate;
  std::uint64_t seed = 0;
};

// Which original directed edge each slow node replaced.
struct SlowProvenance {
  NodeId source = 0;
  NodeId target = 0;
};

// The rewritten graph. Original nodes keep ids 0..original_count-1; slow
// nodes occupy original_count.. in creation order (input edge scan order).
// Slow nodes carry no label (NaN) and belong to no mask.
struct AugmentedGraph {
  Graph graph;
  NodeId original_count = 0;
  std::vector<SlowProvenance> provenance;

  NodeId slow_count() const {
    return static_cast<NodeId>(provenance.size());
  }
};

// Deterministic full transform: every non-self directed edge is half-hopped
// (p is ignored / treated as 1). Self-loops pass through untouched. On
// weighted graphs the hopped edge's weight is copied to its whole motif.
AugmentedGraph half_hop(const Graph& g, const HalfHopConfig& cfg);

// Node-sampled transform: each node is selected with probability cfg.p
// (Bernoulli draws in ascending node id order); every non-self edge whose
// target is selected is half-hopped, everything else survives untouched.
AugmentedGraph half_hop_sampled(const Graph& g, const HalfHopConfig& cfg);

// Inverse of the rewrite: collapses every slow node back onto its original
// directed edge and returns the graph over the original nodes, carrying the
// CURRENT feature rows of those nodes (so stripping after diffusion yields
// diffused original-node embeddings). Throws on corrupted provenance.
Graph strip_slow_nodes(const AugmentedGraph& ag);

// Two independently sampled views with aligned original-node indices.
std::pair<AugmentedGraph, AugmentedGraph> make_views(const Graph& g,
                                                     const HalfHopConfig& cfg1,
                                                     const HalfHopConfig& cfg2);

}  // namespace halfhop
