#include "halfhop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "halfhop/regression.hpp"
#include "halfhop/rng.hpp"

namespace halfhop {

SmoothingOperator smoothing_operator(const LatentModel& model) {
  validate_model(model);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.sigma);
  SmoothingOperator a;
  a.eigenvectors = es.eigenvectors();
  a.sigma_eigenvalues = es.eigenvalues();
  a.a_eigenvalues =
      a.sigma_eigenvalues.array() / (1.0 + a.sigma_eigenvalues.array());
  a.matrix = a.eigenvectors * a.a_eigenvalues.asDiagonal() *
             a.eigenvectors.transpose();
  return a;
}

double baseline_eigenvalue_map(double lambda, std::int64_t k) {
  if (k < 0)
    throw std::invalid_argument(
        "spectral.baseline_eigenvalue_map: k must be >= 0");
  const double a = lambda / (1.0 + lambda);
  return std::pow(a, 2.0 * static_cast<double>(k)) * lambda;
}

double halfhop_eigenvalue_map(double lambda, std::int64_t k, double alpha) {
  if (k < 1 || k % 2 == 0)
    throw std::invalid_argument(
        "spectral.halfhop_eigenvalue_map: the half-hop closed form is stated "
        "for odd k only (got k = " + std::to_string(k) + ")");
  const double a = lambda / (1.0 + lambda);
  const double mixed = (1.0 - alpha) + alpha * a;
  return 0.5 * std::pow(a, static_cast<double>(k - 1)) *
         (1.0 + mixed * mixed) * lambda;
}

namespace {

Eigen::MatrixXd map_in_eigenbasis(const SmoothingOperator& a,
                                  const Eigen::VectorXd& mapped) {
  return a.eigenvectors * mapped.asDiagonal() * a.eigenvectors.transpose();
}

}  // namespace

Eigen::MatrixXd predicted_cov_baseline(const LatentModel& model,
                                       std::int64_t k) {
  const SmoothingOperator a = smoothing_operator(model);
  Eigen::VectorXd mapped(a.sigma_eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i)
    mapped[i] = baseline_eigenvalue_map(a.sigma_eigenvalues[i], k);
  return map_in_eigenbasis(a, mapped);
}

Eigen::MatrixXd predicted_cov_halfhop(const LatentModel& model, std::int64_t k,
                                      double alpha) {
  const SmoothingOperator a = smoothing_operator(model);
  Eigen::VectorXd mapped(a.sigma_eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i)
    mapped[i] = halfhop_eigenvalue_map(a.sigma_eigenvalues[i], k, alpha);
  return map_in_eigenbasis(a, mapped);
}

double r_reg(const Eigen::MatrixXd& s, const LatentModel& model) {
  validate_model(model);
  const auto d = model.latent_dim();
  if (s.rows() != d || s.cols() != d)
    throw std::invalid_argument("spectral.r_reg: S has the wrong dimension");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("spectral.r_reg: S is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (s + s.transpose()));
  Eigen::VectorXd evals = es.eigenvalues();
  if (evals.minCoeff() < -1e-10)
    throw std::invalid_argument(
        "spectral.r_reg: S has a negative eigenvalue beyond tolerance");
  evals = evals.cwiseMax(0.0);
  const Eigen::MatrixXd s_half = es.eigenvectors() *
                                 evals.cwiseSqrt().asDiagonal() *
                                 es.eigenvectors().transpose();

  const Eigen::MatrixXd& m = model.projection;
  Eigen::MatrixXd inner = m.transpose() * s * m;
  inner.diagonal().array() += model.ridge_gamma;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(inner);
  if (!lu.isInvertible())
    throw std::invalid_argument(
        "spectral.r_reg: gamma I + M^T S M is singular");

  const Eigen::MatrixXd shm = s_half * m;
  const Eigen::MatrixXd k_inner =
      Eigen::MatrixXd::Identity(d, d) -
      shm * lu.solve(shm.transpose());
  const Eigen::MatrixXd k_mat = k_inner * k_inner;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sig(model.sigma);
  const Eigen::VectorXd b = sig.eigenvectors() *
                            sig.eigenvalues().cwiseSqrt().asDiagonal() *
                            sig.eigenvectors().transpose() * model.beta_star;
  return b.dot(k_mat * b);
}

double fit_loglog_slope(const std::vector<double>& lambdas,
                        const std::vector<double>& values) {
  if (lambdas.size() != values.size() || lambdas.size() < 2)
    throw std::invalid_argument(
        "spectral.fit_loglog_slope: need matching lists of length >= 2");
  const auto n = static_cast<double>(lambdas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double x = std::log(lambdas[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  return grid;
}

}  // namespace

EigenDecayTable eigen_decay_table(const LatentModel& model, std::int64_t k,
                                  double alpha) {
  const SmoothingOperator a = smoothing_operator(model);
  EigenDecayTable table;
  for (Eigen::Index i = 0; i < a.sigma_eigenvalues.size(); ++i) {
    const double lambda = a.sigma_eigenvalues[i];
    table.rows.push_back({lambda, baseline_eigenvalue_map(lambda, k),
                          halfhop_eigenvalue_map(lambda, k, alpha)});
  }
  const std::vector<double> grid = log_grid(1e-4, 1e-2, 25);
  std::vector<double> base_vals, hh_vals;
  for (double lambda : grid) {
    base_vals.push_back(baseline_eigenvalue_map(lambda, k));
    hh_vals.push_back(halfhop_eigenvalue_map(lambda, k, alpha));
  }
  table.baseline_slope = fit_loglog_slope(grid, base_vals);
  table.halfhop_slope = fit_loglog_slope(grid, hh_vals);
  return table;
}

Eigen::MatrixXd latent_mp_baseline(const Eigen::MatrixXd& w,
                                   const Eigen::MatrixXd& x, std::int64_t k) {
  Eigen::MatrixXd l = w;
  l.diagonal().setZero();
  const Eigen::VectorXd row_sums = l.rowwise().sum();
  l.array().colwise() /= row_sums.array();
  Eigen::MatrixXd h = x;
  for (std::int64_t s = 0; s < k; ++s) h = l * h;
  return h;
}

Eigen::MatrixXd latent_mp_halfhop(const Eigen::MatrixXd& w,
                                  const Eigen::MatrixXd& x, std::int64_t k,
                                  double alpha) {
  Eigen::MatrixXd l = w;
  l.diagonal().setZero();
  const Eigen::VectorXd row_sums = l.rowwise().sum();
  l.array().colwise() /= row_sums.array();
  if (k == 0) return x;
  // On the fully rewritten HH1 graph each slow node keeps a single
  // in-neighbor (its source), so the dynamics collapse exactly:
  //   H^(1)    = (1 - alpha) X + alpha L X
  //   H^(t+1)  = L H^(t-1)        for t >= 1
  // i.e. H^(2t) = L^t X and H^(2t+1) = L^t H^(1).
  Eigen::MatrixXd h;
  if (k % 2 == 1)
    h = (1.0 - alpha) * x + alpha * (l * x);
  else
    h = x;
  for (std::int64_t s = 0; s < k / 2; ++s) h = l * h;
  return h;
}

namespace {

double one_trial(const LatentModel& model, std::int64_t n, std::int64_t k,
                 double alpha, McArm arm, std::uint64_t trial_seed,
                 double train_fraction) {
  const Eigen::MatrixXd z = sample_latents(model, n, trial_seed);
  const Eigen::MatrixXd w = latent_weight_matrix(z, model.epsilon);
  const Eigen::MatrixXd x = z * model.projection;
  const Eigen::VectorXd y = z * model.beta_star;

  const Eigen::MatrixXd h = arm == McArm::Baseline
                                ? latent_mp_baseline(w, x, k)
                                : latent_mp_halfhop(w, x, k, alpha);

  const auto [train, test] =
      split_masks(n, train_fraction, mix_seed(trial_seed, 0x517ULL));
  std::vector<Eigen::Index> tr, te;
  for (std::int64_t v = 0; v < n; ++v)
    (train[static_cast<std::size_t>(v)] ? tr : te).push_back(v);

  Eigen::MatrixXd x_tr(static_cast<Eigen::Index>(tr.size()), h.cols());
  Eigen::VectorXd y_tr(static_cast<Eigen::Index>(tr.size()));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    x_tr.row(static_cast<Eigen::Index>(i)) = h.row(tr[i]);
    y_tr[static_cast<Eigen::Index>(i)] = y[tr[i]];
  }
  Eigen::MatrixXd x_te(static_cast<Eigen::Index>(te.size()), h.cols());
  Eigen::VectorXd y_te(static_cast<Eigen::Index>(te.size()));
  for (std::size_t i = 0; i < te.size(); ++i) {
    x_te.row(static_cast<Eigen::Index>(i)) = h.row(te[i]);
    y_te[static_cast<Eigen::Index>(i)] = y[te[i]];
  }

  // The closed form's gamma is the asymptotic penalty (normal equations
  // + gamma n_tr I); fit_ridge's objective doubles it, so pass gamma / 2.
  const RidgeEstimate est = fit_ridge(x_tr, y_tr, model.ridge_gamma / 2.0);
  return test_risk(est, x_te, y_te);
}

}  // namespace

McResult monte_carlo_risk(const LatentModel& model, std::int64_t n,
                          std::int64_t k, double alpha, McArm arm,
                          std::int64_t trials, const McOptions& options) {
  validate_model(model);
  if (trials < 1)
    throw std::invalid_argument("spectral.monte_carlo_risk: trials must be >= 1");
  if (k < 0)
    throw std::invalid_argument("spectral.monte_carlo_risk: k must be >= 0");

  McResult result;
  result.per_trial.assign(static_cast<std::size_t>(trials), 0.0);

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, static_cast<int>(trials));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&](int offset) {
    for (std::int64_t t = offset; t < trials; t += threads) {
      try {
        result.per_trial[static_cast<std::size_t>(t)] =
            one_trial(model, n, k, alpha, arm,
                      mix_seed(options.seed, static_cast<std::uint64_t>(t)),
                      options.train_fraction);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker, i);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (double v : result.per_trial) sum += v;
  result.mean = sum / static_cast<double>(trials);
  double var = 0.0;
  for (double v : result.per_trial) var += (v - result.mean) * (v - result.mean);
  if (trials > 1) {
    var /= static_cast<double>(trials - 1);
    result.stderr_mean = std::sqrt(var / static_cast<double>(trials));
  }
  return result;
}

SpectralReport spectral_report(const LatentModel& model, std::int64_t k,
                               double alpha, std::int64_t n,
                               std::int64_t trials, bool empirical,
                               const McOptions& options) {
  SpectralReport report;
  report.k = k;
  report.alpha = alpha;
  report.predicted_cov_baseline = predicted_cov_baseline(model, k);
  report.predicted_risk_baseline = r_reg(report.predicted_cov_baseline, model);
  report.predicted_cov_halfhop = predicted_cov_halfhop(model, k, alpha);
  report.predicted_risk_halfhop = r_reg(report.predicted_cov_halfhop, model);
  report.eigen_table = eigen_decay_table(model, k, alpha);
  if (empirical) {
    report.has_empirical = true;
    report.empirical_baseline =
        monte_carlo_risk(model, n, k, 0.0, McArm::Baseline, trials, options);
    report.empirical_halfhop =
        monte_carlo_risk(model, n, k, alpha, McArm::HalfHop, trials, options);
  }
  return report;
}

}  // namespace halfhop
