#include "halfhop/diffusion.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace halfhop {

DiffusionOperator build_operator(const Graph& g, OperatorKind kind,
                                 bool self_loops) {
  const NodeId n = g.num_nodes;
  DiffusionOperator op;
  op.kind = kind;
  op.self_loops = self_loops;
  op.dim = n;

  // Pass 1: count entries per row (row j aggregates edges i -> j).
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  std::vector<double> self_weight(
      static_cast<std::size_t>(n), self_loops ? 1.0 : 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [s, d] = g.edges[e];
    if (s == d) {
      // Explicit self-loops participate only under the self-loop policy.
      if (self_loops) self_weight[static_cast<std::size_t>(d)] = g.weight(e);
      continue;
    }
    ++counts[static_cast<std::size_t>(d)];
  }
  if (self_loops)
    for (auto& c : counts) ++c;

  op.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId j = 0; j < n; ++j)
    op.row_offsets[static_cast<std::size_t>(j) + 1] =
        op.row_offsets[static_cast<std::size_t>(j)] +
        counts[static_cast<std::size_t>(j)];
  const std::int64_t nnz = op.row_offsets.back();
  op.cols.resize(static_cast<std::size_t>(nnz));
  op.values.resize(static_cast<std::size_t>(nnz));

  // Pass 2: fill raw adjacency weights (diagonal first, then scan order).
  std::vector<std::int64_t> cursor(op.row_offsets.begin(),
                                   op.row_offsets.end() - 1);
  if (self_loops) {
    for (NodeId j = 0; j < n; ++j) {
      const auto at = static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]++);
      op.cols[at] = j;
      op.values[at] = self_weight[static_cast<std::size_t>(j)];
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [s, d] = g.edges[e];
    if (s == d) continue;
    const auto at = static_cast<std::size_t>(cursor[static_cast<std::size_t>(d)]++);
    op.cols[at] = s;
    op.values[at] = g.weight(e);
  }

  // Row sums of the (self-loop-adjusted) adjacency.
  Eigen::VectorXd dhat = Eigen::VectorXd::Zero(n);
  for (NodeId j = 0; j < n; ++j)
    for (auto t = op.row_offsets[static_cast<std::size_t>(j)];
         t < op.row_offsets[static_cast<std::size_t>(j) + 1]; ++t)
      dhat[j] += op.values[static_cast<std::size_t>(t)];

  if (kind == OperatorKind::MeanRownorm) {
    for (NodeId j = 0; j < n; ++j) {
      if (dhat[j] <= 0.0) {
        ++op.zero_in_degree_rows;
        continue;  // row stays all-zero, no renormalization
      }
      for (auto t = op.row_offsets[static_cast<std::size_t>(j)];
           t < op.row_offsets[static_cast<std::size_t>(j) + 1]; ++t)
        op.values[static_cast<std::size_t>(t)] /= dhat[j];
    }
  } else {
    Eigen::VectorXd inv_sqrt(n);
    for (NodeId j = 0; j < n; ++j) {
      if (dhat[j] <= 0.0) {
        ++op.zero_in_degree_rows;
        inv_sqrt[j] = 0.0;
      } else {
        inv_sqrt[j] = 1.0 / std::sqrt(dhat[j]);
      }
    }
    for (NodeId j = 0; j < n; ++j)
      for (auto t = op.row_offsets[static_cast<std::size_t>(j)];
           t < op.row_offsets[static_cast<std::size_t>(j) + 1]; ++t)
        op.values[static_cast<std::size_t>(t)] *=
            inv_sqrt[j] * inv_sqrt[op.cols[static_cast<std::size_t>(t)]];
  }

  if (op.zero_in_degree_rows > 0)
    std::cerr << "warning: diffusion.build_operator: "
              << op.zero_in_degree_rows
              << " node(s) with zero in-degree keep an all-zero row\n";
  return op;
}

Eigen::MatrixXd propagate(const DiffusionOperator& op,
                          const Eigen::MatrixXd& features, std::int64_t k) {
  if (features.rows() != op.dim)
    throw std::invalid_argument(
        "diffusion.propagate: feature rows (" +
        std::to_string(features.rows()) + ") do not match operator dimension (" +
        std::to_string(op.dim) + ")");
  if (k < 0) throw std::invalid_argument("diffusion.propagate: k must be >= 0");

  Eigen::MatrixXd h = features;
  Eigen::MatrixXd next(h.rows(), h.cols());
  for (std::int64_t step = 0; step < k; ++step) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      const double* in = h.col(c).data();
      double* out = next.col(c).data();
      for (NodeId j = 0; j < op.dim; ++j) {
        double acc = 0.0;
        for (auto t = op.row_offsets[static_cast<std::size_t>(j)];
             t < op.row_offsets[static_cast<std::size_t>(j) + 1]; ++t)
          acc += op.values[static_cast<std::size_t>(t)] *
                 in[op.cols[static_cast<std::size_t>(t)]];
        out[j] = acc;
      }
    }
    h.swap(next);
  }
  return h;
}

Eigen::VectorXd receptive_field_step(const DiffusionOperator& op,
                                     const Eigen::VectorXd& r) {
  if (r.size() != op.dim)
    throw std::invalid_argument(
        "diffusion.receptive_field_step: vector length does not match "
        "operator dimension");
  // r' = r^T L, scattered row by row; untouched entries stay exact zeros.
  Eigen::VectorXd next = Eigen::VectorXd::Zero(op.dim);
  for (NodeId j = 0; j < op.dim; ++j) {
    const double rj = r[j];
    if (rj == 0.0) continue;
    for (auto t = op.row_offsets[static_cast<std::size_t>(j)];
         t < op.row_offsets[static_cast<std::size_t>(j) + 1]; ++t)
      next[op.cols[static_cast<std::size_t>(t)]] +=
          rj * op.values[static_cast<std::size_t>(t)];
  }
  return next;
}

Eigen::VectorXd receptive_field(const DiffusionOperator& op, NodeId center,
                                std::int64_t k) {
  if (center < 0 || center >= op.dim)
    throw std::invalid_argument("diffusion.receptive_field: center " +
                                std::to_string(center) + " out of range");
  if (k < 0)
    throw std::invalid_argument("diffusion.receptive_field: k must be >= 0");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(op.dim);
  r[center] = 1.0;
  for (std::int64_t step = 0; step < k; ++step) r = receptive_field_step(op, r);
  return r;
}

Eigen::VectorXd attribute_to_original(const AugmentedGraph& ag,
                                      const Eigen::VectorXd& rf_augmented,
                                      double alpha) {
  if (rf_augmented.size() != ag.graph.num_nodes)
    throw std::invalid_argument(
        "diffusion.attribute_to_original: receptive field length does not "
        "match the augmented graph");
  const NodeId n = ag.original_count;
  Eigen::VectorXd out = rf_augmented.head(n);
  for (NodeId s = 0; s < ag.slow_count(); ++s) {
    const auto& prov = ag.provenance[static_cast<std::size_t>(s)];
    const double mass = rf_augmented[n + s];
    out[prov.source] += alpha * mass;
    out[prov.target] += (1.0 - alpha) * mass;
  }
  return out;
}

SelfWeightCurve self_weight_curve(const Graph& g, NodeId center,
                                  const std::vector<double>& alphas,
                                  std::int64_t max_k, bool self_loops) {
  if (center < 0 || center >= g.num_nodes)
    throw std::invalid_argument("diffusion.self_weight_curve: center " +
                                std::to_string(center) + " out of range");
  SelfWeightCurve curve;
  curve.alphas = alphas;
  curve.ks.resize(static_cast<std::size_t>(max_k) + 1);
  curve.baseline.resize(static_cast<std::size_t>(max_k) + 1);
  curve.halfhop.resize(max_k + 1, static_cast<Eigen::Index>(alphas.size()));

  const DiffusionOperator base_op =
      build_operator(g, OperatorKind::MeanRownorm, self_loops);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(g.num_nodes);
  r[center] = 1.0;
  for (std::int64_t k = 0; k <= max_k; ++k) {
    if (k > 0) r = receptive_field_step(base_op, r);
    curve.ks[static_cast<std::size_t>(k)] = k;
    curve.baseline[static_cast<std::size_t>(k)] = r[center];
  }
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    HalfHopConfig cfg;
    cfg.alpha = alphas[a];
    cfg.variant = Variant::HH;
    cfg.init = SlowInit::Interpolate;
    const AugmentedGraph ag = half_hop(g, cfg);
    const DiffusionOperator op =
        build_operator(ag.graph, OperatorKind::MeanRownorm, self_loops);
    Eigen::VectorXd rh = Eigen::VectorXd::Zero(ag.graph.num_nodes);
    rh[center] = 1.0;
    for (std::int64_t k = 0; k <= max_k; ++k) {
      if (k > 0) rh = receptive_field_step(op, rh);
      curve.halfhop(k, static_cast<Eigen::Index>(a)) =
          attribute_to_original(ag, rh, alphas[a])[center];
    }
  }
  return curve;
}

}  // namespace halfhop
