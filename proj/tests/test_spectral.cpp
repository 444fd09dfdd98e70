#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfhop/augment.hpp"
#include "halfhop/diffusion.hpp"
#include "halfhop/spectral.hpp"
#include "test_helpers.hpp"

using namespace halfhop;

namespace {

LatentModel scalar_model(double sigma, double gamma) {
  LatentModel m;
  m.sigma = Eigen::MatrixXd::Constant(1, 1, sigma);
  m.projection = Eigen::MatrixXd::Identity(1, 1);
  m.beta_star = Eigen::VectorXd::Ones(1);
  m.ridge_gamma = gamma;
  return m;
}

LatentModel bench_model() {
  Eigen::VectorXd diag(4);
  diag << 2.0, 1.0, 0.5, 0.25;
  LatentModel m = diagonal_model(diag, 0.1, 0.1);
  m.beta_star = Eigen::VectorXd::Constant(4, 0.5);
  return m;
}

}  // namespace

TEST_CASE("smoothing_operator: eigenvalue map and commutation") {
  const LatentModel m = bench_model();
  const SmoothingOperator a = smoothing_operator(m);
  // A = (I + Sigma^{-1})^{-1} directly.
  const Eigen::MatrixXd direct =
      (Eigen::MatrixXd::Identity(4, 4) + m.sigma.inverse()).inverse();
  CHECK((a.matrix - direct).cwiseAbs().maxCoeff() <= 1e-12);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(a.a_eigenvalues[i] > 0.0);
    CHECK(a.a_eigenvalues[i] < 1.0);
  }
  const Eigen::MatrixXd comm = a.matrix * m.sigma - m.sigma * a.matrix;
  CHECK(comm.norm() <= 1e-10);
}

TEST_CASE("r_reg: scalar hand computations") {
  // S = 1, gamma -> 0: perfect recovery.
  CHECK(r_reg(Eigen::MatrixXd::Ones(1, 1), scalar_model(1.0, 1e-12)) <= 1e-9);
  // gamma = 1: K = (1 - 1/2)^2 = 1/4.
  CHECK(r_reg(Eigen::MatrixXd::Ones(1, 1), scalar_model(1.0, 1.0)) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // S = 0: risk equals beta*^T Sigma beta*.
  CHECK(r_reg(Eigen::MatrixXd::Zero(1, 1), scalar_model(1.0, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const LatentModel m = bench_model();
  CHECK(r_reg(Eigen::MatrixXd::Zero(4, 4), m) ==
        doctest::Approx(m.beta_star.dot(m.sigma * m.beta_star))
            .epsilon(1e-12));
}

TEST_CASE("r_reg: validation errors") {
  const LatentModel m = bench_model();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(4, 4);
  s(0, 1) = 0.5;  // asymmetric
  CHECK_THROWS_AS(r_reg(s, m), std::invalid_argument);
  Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(4, 4);
  neg(3, 3) = -0.5;
  CHECK_THROWS_AS(r_reg(neg, m), std::invalid_argument);
  CHECK_THROWS_AS(r_reg(Eigen::MatrixXd::Identity(3, 3), m),
                  std::invalid_argument);
}

TEST_CASE("r_reg: monotonicity sanity on the scalar family") {
  const LatentModel m = scalar_model(2.0, 0.3);
  const double full = r_reg(Eigen::MatrixXd::Constant(1, 1, 2.0), m);
  const double none = r_reg(Eigen::MatrixXd::Zero(1, 1), m);
  CHECK(full <= none);
  CHECK(none == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("predicted covariances: identity-sigma identities") {
  LatentModel m;
  m.sigma = Eigen::MatrixXd::Identity(2, 2);
  m.projection = Eigen::MatrixXd::Identity(2, 2);
  m.beta_star = Eigen::VectorXd::Ones(2);

  const Eigen::MatrixXd base1 = predicted_cov_baseline(m, 1);
  CHECK((base1 - 0.25 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <=
        1e-12);
  const Eigen::MatrixXd base0 = predicted_cov_baseline(m, 0);
  CHECK((base0 - m.sigma).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::MatrixXd hh = predicted_cov_halfhop(m, 1, 0.5);
  CHECK((hh - 0.78125 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <=
        1e-12);
  const Eigen::MatrixXd hh0 = predicted_cov_halfhop(m, 1, 0.0);
  CHECK((hh0 - m.sigma).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_WITH_AS(predicted_cov_halfhop(m, 2, 0.5),
                       doctest::Contains("odd"), std::invalid_argument);
}

TEST_CASE("predicted_cov_baseline: anisotropic eigenvalue map by hand") {
  LatentModel m;
  m.sigma = Eigen::Vector2d(4.0, 0.01).asDiagonal();
  m.projection = Eigen::MatrixXd::Identity(2, 2);
  m.beta_star = Eigen::VectorXd::Ones(2);
  const Eigen::MatrixXd cov = predicted_cov_baseline(m, 2);
  const double big = std::pow(4.0 / 5.0, 4) * 4.0;
  const double small = std::pow(0.01 / 1.01, 4) * 0.01;
  // Small eigendirections collapse much faster than large ones.
  CHECK(cov(0, 0) == doctest::Approx(big).epsilon(1e-12));
  CHECK(cov(1, 1) == doctest::Approx(small).epsilon(1e-12));
  CHECK(small / 0.01 < 1e-7);
  CHECK(big / 4.0 > 0.4);
}

TEST_CASE("predicted covariances: symmetric PSD") {
  const LatentModel m = bench_model();
  for (std::int64_t k : {1, 3, 5}) {
    const Eigen::MatrixXd cov = predicted_cov_halfhop(m, k, 0.7);
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("eigen decay: slopes and limits") {
  // Baseline log-log slope over small lambdas equals 2k + 1.
  std::vector<double> grid;
  for (int i = 0; i < 25; ++i)
    grid.push_back(std::pow(10.0, -4.0 + 2.0 * i / 24.0));
  for (std::int64_t k : {1, 2, 3}) {
    std::vector<double> vals;
    for (double l : grid) vals.push_back(baseline_eigenvalue_map(l, k));
    CHECK(std::abs(fit_loglog_slope(grid, vals) -
                   (2.0 * static_cast<double>(k) + 1.0)) <= 0.1);
  }
  // Half-hop decays strictly slower for k >= 3.
  for (std::int64_t k : {3, 5}) {
    for (double alpha : {0.25, 0.5, 1.0}) {
      std::vector<double> base, hh;
      for (double l : grid) {
        base.push_back(baseline_eigenvalue_map(l, k));
        hh.push_back(halfhop_eigenvalue_map(l, k, alpha));
      }
      CHECK(fit_loglog_slope(grid, hh) < fit_loglog_slope(grid, base));
    }
  }
  // Large-lambda limit at k = 1: the map preserves the magnitude.
  CHECK(halfhop_eigenvalue_map(1e8, 1, 0.5) / 1e8 ==
        doctest::Approx(1.0).epsilon(1e-6));

  // Per eigendirection, half-hop dominates the baseline for lambda <= 1.
  for (std::int64_t k : {3, 5, 7}) {
    for (double alpha : {0.25, 0.5, 1.0}) {
      for (double l = 1e-6; l <= 1.0; l *= 3.0) {
        CHECK(halfhop_eigenvalue_map(l, k, alpha) >=
              baseline_eigenvalue_map(l, k));
      }
    }
  }
}

TEST_CASE("eigen_decay_table: rows mirror the maps") {
  const LatentModel m = bench_model();
  const EigenDecayTable table = eigen_decay_table(m, 3, 0.5);
  REQUIRE(table.rows.size() == 4);
  for (const auto& row : table.rows) {
    CHECK(row.baseline ==
          doctest::Approx(baseline_eigenvalue_map(row.lambda, 3)).epsilon(1e-12));
    CHECK(row.halfhop ==
          doctest::Approx(halfhop_eigenvalue_map(row.lambda, 3, 0.5))
              .epsilon(1e-12));
  }
  CHECK(std::abs(table.baseline_slope - 7.0) <= 0.1);
  CHECK(table.halfhop_slope < table.baseline_slope);
}

// The Monte-Carlo arms use collapsed recursions on the dense weight matrix;
// these must agree exactly with the explicit pipeline: build the augmented
// graph, build the operator (no self-loops), propagate, strip.
TEST_CASE("latent_mp_*: equivalent to the explicit graph pipeline") {
  LatentModel m = bench_model();
  const std::int64_t n = 40;
  const Eigen::MatrixXd z = sample_latents(m, n, 123);
  const Eigen::MatrixXd w = latent_weight_matrix(z, m.epsilon);
  const Eigen::MatrixXd x = z * m.projection;

  const LatentSample sample = sample_latent_graph(m, n, 123);
  CHECK((sample.latents.array() == z.array()).all());

  SUBCASE("baseline arm") {
    const DiffusionOperator op =
        build_operator(sample.graph, OperatorKind::MeanRownorm, false);
    for (std::int64_t k : {0, 1, 2, 3}) {
      const Eigen::MatrixXd via_graph = propagate(op, x, k);
      const Eigen::MatrixXd via_dense = latent_mp_baseline(w, x, k);
      CHECK((via_graph - via_dense).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("half-hop arm (HH1, interpolate)") {
    for (double alpha : {0.25, 1.0}) {
      for (std::int64_t k : {1, 2, 3, 5}) {
        HalfHopConfig cfg;
        cfg.alpha = alpha;
        cfg.variant = Variant::HH1;
        Graph g = sample.graph;
        g.features = x;
        const AugmentedGraph ag = half_hop(g, cfg);
        const DiffusionOperator op =
            build_operator(ag.graph, OperatorKind::MeanRownorm, false);
        const Eigen::MatrixXd via_graph =
            propagate(op, ag.graph.features, k).topRows(n);
        const Eigen::MatrixXd via_dense = latent_mp_halfhop(w, x, k, alpha);
        CHECK((via_graph - via_dense).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("monte_carlo_risk: k = 0 arms agree and match R_reg(Sigma)") {
  LatentModel m = bench_model();
  const std::int64_t n = 600, trials = 6;
  const McResult base =
      monte_carlo_risk(m, n, 0, 0.5, McArm::Baseline, trials, {.seed = 4});
  const McResult hh =
      monte_carlo_risk(m, n, 0, 0.5, McArm::HalfHop, trials, {.seed = 4});
  for (std::int64_t t = 0; t < trials; ++t)
    CHECK(base.per_trial[static_cast<std::size_t>(t)] ==
          hh.per_trial[static_cast<std::size_t>(t)]);
  const double predicted = r_reg(m.sigma, m);
  CHECK(std::abs(base.mean - predicted) / predicted < 0.2);
}

TEST_CASE("monte_carlo_risk: thread count never changes the trial values") {
  const LatentModel m = bench_model();
  const McResult seq = monte_carlo_risk(m, 200, 1, 0.5, McArm::HalfHop, 5,
                                        {.seed = 11, .threads = 1});
  const McResult par = monte_carlo_risk(m, 200, 1, 0.5, McArm::HalfHop, 5,
                                        {.seed = 11, .threads = 2});
  CHECK(seq.per_trial == par.per_trial);
  CHECK(seq.mean == par.mean);
}

TEST_CASE("monte_carlo_risk: standard error shrinks like 1/sqrt(trials)") {
  const LatentModel m = bench_model();
  const McResult small = monte_carlo_risk(m, 300, 1, 0.5, McArm::Baseline, 8,
                                          {.seed = 21});
  const McResult large = monte_carlo_risk(m, 300, 1, 0.5, McArm::Baseline, 32,
                                          {.seed = 21});
  const double ratio = large.stderr_mean / small.stderr_mean;
  CHECK(ratio > 0.2);
  CHECK(ratio < 1.0);
}

// With a vanishing edge-weight offset the concentration actually holds and
// the empirical risk lands on the closed forms; the original-node covariance
// after the HH1 rewrite is A^{k-1} ((1-alpha) I + alpha A)^2 Sigma.
TEST_CASE("monte_carlo_risk: concentration at epsilon = 0") {
  LatentModel m = bench_model();
  m.epsilon = 0.0;
  const SmoothingOperator a = smoothing_operator(m);
  const std::int64_t n = 1500, trials = 6;

  for (std::int64_t k : {1, 2}) {
    const double predicted = r_reg(predicted_cov_baseline(m, k), m);
    const McResult mc =
        monte_carlo_risk(m, n, k, 0.0, McArm::Baseline, trials, {.seed = 31});
    CHECK(std::abs(mc.mean - predicted) / predicted < 0.15);
  }
  const auto matpow = [](const Eigen::MatrixXd& mat, std::int64_t p) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(mat.rows(), mat.cols());
    for (std::int64_t i = 0; i < p; ++i) out = out * mat;
    return out;
  };
  for (const auto& [k, alpha] : std::vector<std::pair<std::int64_t, double>>{
           {1, 0.25}, {1, 1.0}, {3, 0.5}}) {
    const Eigen::MatrixXd mix =
        (1.0 - alpha) * Eigen::MatrixXd::Identity(4, 4) + alpha * a.matrix;
    const Eigen::MatrixXd cov_orig = matpow(a.matrix, k - 1) * mix * mix * m.sigma;
    const double predicted = r_reg(cov_orig, m);
    const McResult mc =
        monte_carlo_risk(m, n, k, alpha, McArm::HalfHop, trials, {.seed = 37});
    CHECK(std::abs(mc.mean - predicted) / predicted < 0.15);
  }
}

TEST_CASE("spectral_report: bundles predictions and empirical arms") {
  const LatentModel m = bench_model();
  const SpectralReport rep = spectral_report(m, 1, 0.5, 300, 3, true,
                                             {.seed = 100});
  CHECK(rep.predicted_risk_baseline > 0.0);
  CHECK(rep.predicted_risk_halfhop > 0.0);
  CHECK(rep.has_empirical);
  CHECK(rep.empirical_baseline.per_trial.size() == 3);
  CHECK(rep.eigen_table.rows.size() == 4);
}
