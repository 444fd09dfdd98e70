#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "halfhop/graph.hpp"

namespace halfhop {

// Parameters of the latent-space random graph / regression model: hidden
// positions z ~ N(0, sigma), observed features x = projection^T z, labels
// y = z . beta_star, pairwise edge weights epsilon + exp(-|z_i - z_j|^2 / 2).
struct LatentModel {
  Eigen::MatrixXd sigma;       // latent_dim x latent_dim, symmetric PD
  Eigen::MatrixXd projection;  // latent_dim x feature_dim
  Eigen::VectorXd beta_star;   // latent_dim
  double epsilon = 0.1;
  double ridge_gamma = 0.1;

  Eigen::Index latent_dim() const { return sigma.rows(); }
  Eigen::Index feature_dim() const { return projection.cols(); }
};

// Throws std::invalid_argument if sigma is not symmetric positive definite,
// dimensions disagree, or epsilon / ridge_gamma are out of range.
void validate_model(const LatentModel& model);

// Identity-projection model with the given sigma diagonal; handy default.
LatentModel diagonal_model(const Eigen::VectorXd& sigma_diag, double epsilon,
                           double ridge_gamma);

struct LatentSample {
  Graph graph;             // dense weighted symmetric graph, features, labels
  Eigen::MatrixXd latents; // n x latent_dim
};

// rows x cols 4-neighbor lattice with symmetric directed edges and constant
// all-ones scalar features.
Graph grid_graph(std::int64_t rows, std::int64_t cols);

// Latent positions only: n x latent_dim, rows drawn i.i.d. N(0, sigma).
// Deterministic given seed (row-major draw order, pinned normal sampler).
Eigen::MatrixXd sample_latents(const LatentModel& model, std::int64_t n,
                               std::uint64_t seed);

// Dense pairwise weight matrix W_ij = epsilon + exp(-|z_i - z_j|^2 / 2),
// diagonal epsilon + 1 (zero self-distance).
Eigen::MatrixXd latent_weight_matrix(const Eigen::MatrixXd& latents,
                                     double epsilon);

// Full sample assembled as a Graph: every ordered pair (i, j), i != j,
// becomes a weighted directed edge; include_self_loops additionally stores
// the diagonal as explicit self-loop edges (whether they participate in
// propagation is the diffusion operator's self-loop policy).
LatentSample sample_latent_graph(const LatentModel& model, std::int64_t n,
                                 std::uint64_t seed,
                                 bool include_self_loops = true);

// Disjoint exhaustive train/test masks with |train| = round(f * n).
// Throws if the fraction is degenerate (empty train or test side).
std::pair<Mask, Mask> split_masks(std::int64_t n, double train_fraction,
                                  std::uint64_t seed);

}  // namespace halfhop
