#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "halfhop/augment.hpp"
#include "halfhop/graph.hpp"

namespace halfhop {

enum class OperatorKind { MeanRownorm, SymNorm };

// Row-compressed propagation matrix. Row j holds the (column, value) pairs
// of L[j, i]: the weight node j places on in-neighbor i during one step of
// aggregation. Immutable after build; safe to share across threads.
struct DiffusionOperator {
  OperatorKind kind = OperatorKind::MeanRownorm;
  bool self_loops = true;
  NodeId dim = 0;
  std::vector<std::int64_t> row_offsets;  // dim + 1
  std::vector<NodeId> cols;
  std::vector<double> values;
  std::int64_t zero_in_degree_rows = 0;   // rows left all-zero (documented)
};

// Builds the aggregation operator over directed in-neighbors.
//   MeanRownorm: L[j,i] = a(i->j) / sum_i a(i->j)      (rows sum to 1)
//   SymNorm:     L[j,i] = a(i->j) / sqrt(dhat_j dhat_i) with dhat = row sums
// Self-loop policy: explicit self-loop edges in g contribute to the diagonal
// only when self_loops is true (with weight as stored); nodes without an
// explicit self-loop get diagonal 1 when self_loops is true. With
// self_loops false the diagonal is zero and zero-in-degree rows stay
// all-zero rather than being renormalized.
DiffusionOperator build_operator(const Graph& g, OperatorKind kind,
                                 bool self_loops);

// L^k H by k successive sparse multiplications. k = 0 returns H unchanged.
Eigen::MatrixXd propagate(const DiffusionOperator& op,
                          const Eigen::MatrixXd& features, std::int64_t k);

// The center's row of L^k: per-node weight of each node in the center's
// embedding after k steps. Entries outside the k-step in-neighborhood are
// exact zeros.
Eigen::VectorXd receptive_field(const DiffusionOperator& op, NodeId center,
                                std::int64_t k);

// One left-multiplication step r^T L; building block for incremental
// receptive-field sweeps over k.
Eigen::VectorXd receptive_field_step(const DiffusionOperator& op,
                                     const Eigen::VectorXd& r);

// Folds slow-node mass of an augmented-graph receptive field back onto the
// original nodes: a slow node on edge (i -> j) contributes alpha of its
// weight to i and (1 - alpha) to j, mirroring the interpolation that seeded
// its features.
Eigen::VectorXd attribute_to_original(const AugmentedGraph& ag,
                                      const Eigen::VectorXd& rf_augmented,
                                      double alpha);

struct SelfWeightCurve {
  std::vector<std::int64_t> ks;       // 0..K
  std::vector<double> alphas;         // half-hop columns
  std::vector<double> baseline;       // per k
  Eigen::MatrixXd halfhop;            // (K+1) x alphas.size()
};

// Center self-weight of the receptive field as a function of step k, for
// the plain graph and for the fully half-hopped graph at each alpha
// (variant HH, interpolated init, mean aggregation).
SelfWeightCurve self_weight_curve(const Graph& g, NodeId center,
                                  const std::vector<double>& alphas,
                                  std::int64_t max_k, bool self_loops);

}  // namespace halfhop
