#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halfhop/synth.hpp"
#include "test_helpers.hpp"

using namespace halfhop;

TEST_CASE("grid_graph: hand examples") {
  {
    const Graph g = grid_graph(1, 2);
    CHECK(g.num_nodes == 2);
    CHECK(g.edges == std::vector<Edge>{{0, 1}, {1, 0}});
    CHECK(g.features.col(0).isOnes());
  }
  {
    const Graph g = grid_graph(2, 2);
    CHECK(g.num_nodes == 4);
    CHECK(g.num_edges() == 8);
  }
  {
    const Graph g = grid_graph(3, 3);
    const DegreeView dv = degree_view(g);
    CHECK(dv.undirected_neighbors[4].size() == 4);  // center of the 3x3
  }
  CHECK_THROWS_AS(grid_graph(0, 3), std::invalid_argument);
}

TEST_CASE("validate_model: rejects bad inputs") {
  LatentModel m;
  m.sigma = Eigen::MatrixXd::Identity(2, 2);
  m.projection = Eigen::MatrixXd::Identity(2, 2);
  m.beta_star = Eigen::VectorXd::Ones(2);
  CHECK_NOTHROW(validate_model(m));

  LatentModel bad = m;
  bad.sigma(0, 0) = -1.0;  // not PD
  CHECK_THROWS_AS(validate_model(bad), std::invalid_argument);

  bad = m;
  bad.sigma(0, 1) = 0.5;  // not symmetric
  CHECK_THROWS_AS(validate_model(bad), std::invalid_argument);

  bad = m;
  bad.ridge_gamma = 0.0;
  CHECK_THROWS_AS(validate_model(bad), std::invalid_argument);

  bad = m;
  bad.epsilon = -0.1;
  CHECK_THROWS_AS(validate_model(bad), std::invalid_argument);
}

TEST_CASE("latent_weight_matrix: kernel endpoints") {
  // Equal latents: weight epsilon + 1. Distant latents: weight -> epsilon.
  Eigen::MatrixXd z(3, 2);
  z << 1.0, 2.0, 1.0, 2.0, 100.0, -100.0;
  const Eigen::MatrixXd w = latent_weight_matrix(z, 0.1);
  CHECK(w(0, 1) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(w(0, 2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(w(2, 0) == w(0, 2));
  CHECK(w(0, 0) == doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("sample_latent_graph: structure and determinism") {
  LatentModel m = diagonal_model(Eigen::Vector2d(1.0, 1.0), 0.1, 0.1);
  m.beta_star = Eigen::Vector2d(1.0, 0.0);

  const LatentSample a = sample_latent_graph(m, 30, 42);
  const LatentSample b = sample_latent_graph(m, 30, 42);
  CHECK((a.latents.array() == b.latents.array()).all());  // bit identical
  CHECK(a.graph.edges == b.graph.edges);
  CHECK(a.graph.edge_weights == b.graph.edge_weights);

  // Labels equal the first latent coordinate under beta* = (1, 0).
  for (int i = 0; i < 30; ++i)
    CHECK((*a.graph.labels)[i] == doctest::Approx(a.latents(i, 0)).epsilon(1e-15));
  // Features = Z M exactly (M = I here).
  CHECK((a.graph.features - a.latents).cwiseAbs().maxCoeff() == 0.0);

  // W symmetric exactly, off-diagonal within [eps, eps + 1].
  const NodeId n = a.graph.num_nodes;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < a.graph.edges.size(); ++e)
    w(a.graph.edges[e].src, a.graph.edges[e].dst) = a.graph.edge_weights[e];
  CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      CHECK(w(i, j) >= m.epsilon);
      CHECK(w(i, j) <= m.epsilon + 1.0);
    }

  const LatentSample c = sample_latent_graph(m, 30, 43);
  CHECK(!(a.latents.array() == c.latents.array()).all());
}

TEST_CASE("sample_latents: empirical covariance approaches sigma") {
  Eigen::VectorXd diag(3);
  diag << 2.0, 1.0, 0.5;
  const LatentModel m = diagonal_model(diag, 0.1, 0.1);
  const std::int64_t n = 4000;
  const Eigen::MatrixXd z = sample_latents(m, n, 9);
  const Eigen::MatrixXd cov =
      z.transpose() * z / static_cast<double>(n);
  const double err = (cov - m.sigma).norm();
  CHECK(err <= 3.0 * 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("split_masks: examples, determinism, errors") {
  {
    const auto [train, test] = split_masks(10, 0.5, 1);
    std::int64_t tr = 0, te = 0;
    for (int i = 0; i < 10; ++i) {
      tr += train[i];
      te += test[i];
      CHECK((train[i] & test[i]) == 0);
      CHECK((train[i] | test[i]) == 1);
    }
    CHECK(tr == 5);
    CHECK(te == 5);
  }
  {
    const auto [a_train, a_test] = split_masks(100, 0.3, 7);
    const auto [b_train, b_test] = split_masks(100, 0.3, 7);
    CHECK(a_train == b_train);
    CHECK(a_test == b_test);
  }
  {
    const auto [train, test] = split_masks(4, 0.25, 3);
    std::int64_t tr = 0;
    for (int i = 0; i < 4; ++i) tr += train[i];
    CHECK(tr == 1);
  }
  CHECK_THROWS_AS(split_masks(10, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_masks(10, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_masks(10, 0.999, 1), std::invalid_argument);
}
