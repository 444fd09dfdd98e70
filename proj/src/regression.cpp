#include "halfhop/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "halfhop/synth.hpp"

namespace halfhop {

RidgeEstimate fit_ridge(const Eigen::MatrixXd& x_train,
                        const Eigen::MatrixXd& y_train, double gamma) {
  const auto n_tr = x_train.rows();
  if (n_tr < 1 || y_train.rows() != n_tr)
    throw std::invalid_argument(
        "regression.fit_ridge: X and Y must have the same nonzero row count");
  if (gamma < 0.0)
    throw std::invalid_argument("regression.fit_ridge: gamma must be >= 0");
  if (!x_train.allFinite() || !y_train.allFinite())
    throw std::invalid_argument("regression.fit_ridge: non-finite input");

  Eigen::MatrixXd gram = x_train.transpose() * x_train;
  gram.diagonal().array() += 2.0 * gamma * static_cast<double>(n_tr);
  const Eigen::MatrixXd rhs = x_train.transpose() * y_train;

  RidgeEstimate est;
  est.gamma = gamma;
  est.train_size = n_tr;
  if (gamma == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
      throw std::invalid_argument(
          "regression.fit_ridge: singular system with gamma = 0");
    est.beta_hat = lu.solve(rhs);
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "regression.fit_ridge: factorization failed");
    est.beta_hat = llt.solve(rhs);
  }
  return est;
}

double test_risk(const RidgeEstimate& est, const Eigen::MatrixXd& x_test,
                 const Eigen::MatrixXd& y_test) {
  if (x_test.rows() == 0)
    throw std::invalid_argument("regression.test_risk: empty test set");
  if (y_test.rows() != x_test.rows() ||
      x_test.cols() != est.beta_hat.rows() ||
      y_test.cols() != est.beta_hat.cols())
    throw std::invalid_argument("regression.test_risk: dimension mismatch");
  const Eigen::MatrixXd resid = y_test - x_test * est.beta_hat;
  return resid.squaredNorm() / static_cast<double>(x_test.rows());
}

namespace {

std::vector<Eigen::Index> mask_indices(const Mask& mask, NodeId n) {
  std::vector<Eigen::Index> idx;
  for (NodeId v = 0; v < n; ++v)
    if (mask[static_cast<std::size_t>(v)]) idx.push_back(v);
  return idx;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m,
                          const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(idx[r]);
  return out;
}

Eigen::MatrixXd encode_labels(const Eigen::VectorXd& labels, NodeId n,
                              LabelEncoding encoding) {
  if (encoding == LabelEncoding::Scalar) return labels.head(n);
  std::vector<double> classes(labels.data(), labels.data() + n);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(classes.size()));
  for (NodeId v = 0; v < n; ++v) {
    const auto it =
        std::lower_bound(classes.begin(), classes.end(), labels[v]);
    y(v, static_cast<Eigen::Index>(it - classes.begin())) = 1.0;
  }
  return y;
}

}  // namespace

RiskCurve mse_curve(const Graph& g, const MseCurveConfig& cfg) {
  if (!g.labels)
    throw std::invalid_argument("regression.mse_curve: graph has no labels");
  if (cfg.max_k < 0)
    throw std::invalid_argument("regression.mse_curve: max_k must be >= 0");

  RiskCurve curve;
  curve.config = cfg;

  Mask train, test;
  const auto it_train = g.masks.find("train");
  const auto it_test = g.masks.find("test");
  if (it_train != g.masks.end() && it_test != g.masks.end()) {
    train = it_train->second;
    test = it_test->second;
    curve.used_existing_masks = true;
  } else {
    std::tie(train, test) =
        split_masks(g.num_nodes, cfg.train_fraction, cfg.split_seed);
  }
  const auto tr_idx = mask_indices(train, g.num_nodes);
  const auto te_idx = mask_indices(test, g.num_nodes);
  if (tr_idx.empty() || te_idx.empty())
    throw std::invalid_argument("regression.mse_curve: empty train or test mask");

  const Eigen::MatrixXd y = encode_labels(*g.labels, g.num_nodes, cfg.encoding);
  const Eigen::MatrixXd y_tr = take_rows(y, tr_idx);
  const Eigen::MatrixXd y_te = take_rows(y, te_idx);

  const auto score = [&](const Eigen::MatrixXd& h, std::int64_t k) {
    RidgeEstimate est =
        fit_ridge(take_rows(h, tr_idx), y_tr, cfg.gamma);
    est.k = k;
    return test_risk(est, take_rows(h, te_idx), y_te);
  };

  // Baseline arm: diffuse the graph's own features.
  {
    const DiffusionOperator op = build_operator(g, cfg.op_kind, cfg.self_loops);
    Eigen::MatrixXd h = g.features;
    for (std::int64_t k = 0; k <= cfg.max_k; ++k) {
      if (k > 0) h = propagate(op, h, 1);
      curve.ks.push_back(k);
      curve.baseline_mse.push_back(score(h, k));
    }
  }
  // Half-hop arm: full transform, diffuse on the augmented graph, read the
  // original rows back off (slow nodes are appended, so the stripped
  // feature block is simply the top rows).
  {
    HalfHopConfig hh = cfg.hh;
    hh.p = 1.0;
    const AugmentedGraph ag = half_hop(g, hh);
    const DiffusionOperator op =
        build_operator(ag.graph, cfg.op_kind, cfg.self_loops);
    Eigen::MatrixXd h = ag.graph.features;
    for (std::int64_t k = 0; k <= cfg.max_k; ++k) {
      if (k > 0) h = propagate(op, h, 1);
      curve.halfhop_mse.push_back(score(h.topRows(g.num_nodes), k));
    }
  }
  return curve;
}

}  // namespace halfhop
