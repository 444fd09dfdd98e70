#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "halfhop/synth.hpp"

namespace halfhop {

// A = (I + Sigma^{-1})^{-1}, the per-step smoothing map on the latent
// covariance. Shares Sigma's eigenbasis; eigenvalue map l -> l / (1 + l).
struct SmoothingOperator {
  Eigen::MatrixXd matrix;        // latent_dim x latent_dim, symmetric PSD
  Eigen::MatrixXd eigenvectors;  // shared with Sigma
  Eigen::VectorXd sigma_eigenvalues;
  Eigen::VectorXd a_eigenvalues;  // each in (0, 1)
};

SmoothingOperator smoothing_operator(const LatentModel& model);

// Eigenvalue maps of the predicted covariances, as scalar functions of a
// Sigma eigenvalue l (with a = l / (1 + l)):
//   baseline: a^{2k} l
//   half-hop: (1/2) a^{k-1} (1 + ((1-alpha) + alpha a)^2) l, odd k only
double baseline_eigenvalue_map(double lambda, std::int64_t k);
double halfhop_eigenvalue_map(double lambda, std::int64_t k, double alpha);

// Predicted feature covariance after k rounds of plain mean aggregation:
// A^{2k} Sigma, evaluated in the shared eigenbasis.
Eigen::MatrixXd predicted_cov_baseline(const LatentModel& model,
                                       std::int64_t k);

// Predicted covariance after k rounds with the forward-chain half-hop:
// (1/2) A^{k-1} (I + ((1-alpha) I + alpha A)^2) Sigma. The closed form is
// stated for odd k only; even k is rejected.
Eigen::MatrixXd predicted_cov_halfhop(const LatentModel& model, std::int64_t k,
                                      double alpha);

// Closed-form ridge risk of an effective feature covariance S:
//   R(S) = (Sigma^{1/2} b)^T K (Sigma^{1/2} b),
//   K = (I - S^{1/2} M (gamma I + M^T S M)^{-1} M^T S^{1/2})^2.
// S must be symmetric PSD; eigenvalues below zero are clamped (tolerance
// -1e-10). Throws on asymmetry beyond 1e-8 or a singular inner system.
double r_reg(const Eigen::MatrixXd& s, const LatentModel& model);

struct EigenDecayRow {
  double lambda = 0.0;
  double baseline = 0.0;  // baseline map value
  double halfhop = 0.0;   // half-hop map value
};

struct EigenDecayTable {
  std::vector<EigenDecayRow> rows;  // per Sigma eigendirection
  double baseline_slope = 0.0;      // log-log slope over small lambdas
  double halfhop_slope = 0.0;
};

// Least-squares slope of log(value) against log(lambda).
double fit_loglog_slope(const std::vector<double>& lambdas,
                        const std::vector<double>& values);

// Per-eigendirection decay table plus fitted small-eigenvalue log-log
// slopes (evaluated on a logarithmic grid over [1e-4, 1e-2]). Odd k only.
EigenDecayTable eigen_decay_table(const LatentModel& model, std::int64_t k,
                                  double alpha);

enum class McArm { Baseline, HalfHop };

struct McOptions {
  std::uint64_t seed = 0;
  double train_fraction = 0.5;
  int threads = 0;  // 0 = hardware concurrency
};

struct McResult {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::vector<double> per_trial;
};

// Empirical test risk of ridge regression on diffused latent-graph features,
// averaged over independently sampled graphs. Mirrors the closed-form
// setting: weighted dense graph, row-normalized mean aggregation without
// self-loops, and for the half-hop arm the forward-chain variant (HH1) with
// interpolated slow features, stripped before fitting. The ridge penalty is
// applied in the asymptotic convention the closed form uses: the normal
// equations carry + gamma * n_tr * I.
McResult monte_carlo_risk(const LatentModel& model, std::int64_t n,
                          std::int64_t k, double alpha, McArm arm,
                          std::int64_t trials, const McOptions& options = {});

// One-trial simulators, exposed for equivalence tests against the explicit
// graph pipeline. Both propagate exactly as mean aggregation on the
// (augmented) graph would; the half-hop arm uses the collapsed two-phase
// recursion, which is algebraically exact for the full HH1 rewrite.
Eigen::MatrixXd latent_mp_baseline(const Eigen::MatrixXd& w,
                                   const Eigen::MatrixXd& x, std::int64_t k);
Eigen::MatrixXd latent_mp_halfhop(const Eigen::MatrixXd& w,
                                  const Eigen::MatrixXd& x, std::int64_t k,
                                  double alpha);

struct SpectralReport {
  std::int64_t k = 0;
  double alpha = 0.0;
  Eigen::MatrixXd predicted_cov_baseline;
  Eigen::MatrixXd predicted_cov_halfhop;  // empty when k is even
  double predicted_risk_baseline = 0.0;
  double predicted_risk_halfhop = 0.0;
  bool has_empirical = false;
  McResult empirical_baseline;
  McResult empirical_halfhop;
  EigenDecayTable eigen_table;
};

// Convenience bundle: predictions, decay table, and (optionally) the
// Monte-Carlo measurements for both arms.
SpectralReport spectral_report(const LatentModel& model, std::int64_t k,
                               double alpha, std::int64_t n,
                               std::int64_t trials, bool empirical,
                               const McOptions& options = {});

}  // namespace halfhop
