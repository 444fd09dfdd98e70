#include "halfhop/synth.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "halfhop/rng.hpp"

namespace halfhop {

void validate_model(const LatentModel& model) {
  const auto d = model.sigma.rows();
  if (d == 0 || model.sigma.cols() != d)
    throw std::invalid_argument("synth.validate_model: sigma must be square");
  if ((model.sigma - model.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("synth.validate_model: sigma not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.sigma);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument(
        "synth.validate_model: sigma not positive definite");
  if (model.projection.rows() != d)
    throw std::invalid_argument(
        "synth.validate_model: projection must have latent_dim rows");
  if (model.beta_star.size() != d)
    throw std::invalid_argument(
        "synth.validate_model: beta_star must have latent_dim entries");
  if (!model.beta_star.allFinite())
    throw std::invalid_argument("synth.validate_model: beta_star not finite");
  if (model.epsilon < 0.0)
    throw std::invalid_argument("synth.validate_model: epsilon < 0");
  if (model.ridge_gamma <= 0.0)
    throw std::invalid_argument("synth.validate_model: ridge_gamma <= 0");
}

LatentModel diagonal_model(const Eigen::VectorXd& sigma_diag, double epsilon,
                           double ridge_gamma) {
  LatentModel m;
  const auto d = sigma_diag.size();
  m.sigma = sigma_diag.asDiagonal();
  m.projection = Eigen::MatrixXd::Identity(d, d);
  m.beta_star = Eigen::VectorXd::Ones(d);
  m.epsilon = epsilon;
  m.ridge_gamma = ridge_gamma;
  validate_model(m);
  return m;
}

Graph grid_graph(std::int64_t rows, std::int64_t cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("synth.grid_graph: rows and cols must be >= 1");
  const NodeId n = rows * cols;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(4 * n));
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      const NodeId v = r * cols + c;
      if (c + 1 < cols) {
        edges.push_back({v, v + 1});
        edges.push_back({v + 1, v});
      }
      if (r + 1 < rows) {
        edges.push_back({v, v + cols});
        edges.push_back({v + cols, v});
      }
    }
  }
  return build_graph(n, std::move(edges), Eigen::MatrixXd::Ones(n, 1));
}

Eigen::MatrixXd sample_latents(const LatentModel& model, std::int64_t n,
                               std::uint64_t seed) {
  validate_model(model);
  if (n < 2)
    throw std::invalid_argument("synth.sample_latents: n must be >= 2");
  const auto d = model.latent_dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.sigma);
  const Eigen::MatrixXd root =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
  Rng rng(seed);
  Eigen::MatrixXd z(n, d);
  Eigen::VectorXd g(d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g[j] = rng.normal();
    z.row(i) = (root * g).transpose();
  }
  return z;
}

Eigen::MatrixXd latent_weight_matrix(const Eigen::MatrixXd& latents,
                                     double epsilon) {
  const Eigen::VectorXd sq = latents.rowwise().squaredNorm();
  Eigen::MatrixXd w = -2.0 * (latents * latents.transpose());
  w.colwise() += sq;
  w.rowwise() += sq.transpose();
  // w now holds |z_i - z_j|^2 up to rounding; clamp tiny negatives.
  w = (-0.5 * w.cwiseMax(0.0)).array().exp().matrix();
  w.array() += epsilon;
  // Blocked matrix products can leave 1-ulp asymmetries; the kernel is
  // symmetric by definition, so mirror the upper triangle.
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) w(j, i) = w(i, j);
  return w;
}

LatentSample sample_latent_graph(const LatentModel& model, std::int64_t n,
                                 std::uint64_t seed, bool include_self_loops) {
  LatentSample out;
  out.latents = sample_latents(model, n, seed);
  const Eigen::MatrixXd w = latent_weight_matrix(out.latents, model.epsilon);

  std::vector<Edge> edges;
  std::vector<double> weights;
  const auto m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  edges.reserve(m);
  weights.reserve(m);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j && !include_self_loops) continue;
      edges.push_back({i, j});
      weights.push_back(w(i, j));
    }
  }
  Eigen::MatrixXd features = out.latents * model.projection;
  Eigen::VectorXd labels = out.latents * model.beta_star;
  // Pairs are unique by construction; skip the dedup pass.
  out.graph = build_graph(n, std::move(edges), std::move(features),
                          std::move(labels), BuildOptions{.dedup = false},
                          std::move(weights));
  return out;
}

std::pair<Mask, Mask> split_masks(std::int64_t n, double train_fraction,
                                  std::uint64_t seed) {
  if (n < 2)
    throw std::invalid_argument("synth.split_masks: n must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument(
        "synth.split_masks: train_fraction must lie in (0, 1)");
  const auto n_train =
      static_cast<std::int64_t>(std::llround(train_fraction * n));
  if (n_train < 1 || n_train >= n)
    throw std::invalid_argument(
        "synth.split_masks: fraction " + std::to_string(train_fraction) +
        " leaves an empty split for n = " + std::to_string(n));
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(seed);
  rng.shuffle(order);
  Mask train(static_cast<std::size_t>(n), 0), test(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    if (i < n_train)
      train[static_cast<std::size_t>(order[i])] = 1;
    else
      test[static_cast<std::size_t>(order[i])] = 1;
  }
  return {std::move(train), std::move(test)};
}

}  // namespace halfhop
