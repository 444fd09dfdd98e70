#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "halfhop/augment.hpp"
#include "halfhop/diffusion.hpp"
#include "halfhop/graph.hpp"

namespace halfhop {

struct RidgeEstimate {
  Eigen::MatrixXd beta_hat;  // feature_dim x output_dim
  double gamma = 0.0;
  std::int64_t k = 0;          // smoothing order the features carried
  std::int64_t train_size = 0;
};

// Minimizes (1 / (2 n_tr)) |Y - X beta|^2 + gamma |beta|^2, i.e. the closed
// form beta = (X^T X + 2 gamma n_tr I)^{-1} X^T Y, solved by a symmetric
// positive-definite factorization. gamma = 0 is allowed only when the Gram
// matrix is numerically full rank.
RidgeEstimate fit_ridge(const Eigen::MatrixXd& x_train,
                        const Eigen::MatrixXd& y_train, double gamma);

// Mean squared prediction error over the test rows (summed across output
// columns for multi-output targets).
double test_risk(const RidgeEstimate& est, const Eigen::MatrixXd& x_test,
                 const Eigen::MatrixXd& y_test);

enum class LabelEncoding { Scalar, OneHot };

struct MseCurveConfig {
  HalfHopConfig hh;                 // alpha / variant / init for the HH arm
  OperatorKind op_kind = OperatorKind::MeanRownorm;
  bool self_loops = false;
  double gamma = 0.1;
  std::int64_t max_k = 16;
  LabelEncoding encoding = LabelEncoding::Scalar;
  // Used only when the graph carries no "train"/"test" masks.
  double train_fraction = 0.5;
  std::uint64_t split_seed = 0;
};

struct RiskCurve {
  std::vector<std::int64_t> ks;
  std::vector<double> baseline_mse;
  std::vector<double> halfhop_mse;
  MseCurveConfig config;        // full provenance of the run
  bool used_existing_masks = false;
};

// Test MSE as a function of the smoothing order k = 0..max_k, for the plain
// graph and for the fully half-hopped graph (slow nodes stripped before
// fitting). Both arms share the identical split and gamma.
RiskCurve mse_curve(const Graph& g, const MseCurveConfig& cfg);

}  // namespace halfhop
