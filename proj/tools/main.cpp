// Command-line front end: deterministic, file-based runs over the library.
// Every subcommand writes its outputs atomically plus a provenance JSON of
// the fully resolved configuration, so identical invocations produce
// byte-identical files.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfhop/augment.hpp"
#include "halfhop/diffusion.hpp"
#include "halfhop/graph.hpp"
#include "halfhop/io.hpp"
#include "halfhop/regression.hpp"
#include "halfhop/spectral.hpp"
#include "halfhop/synth.hpp"
#include "halfhop/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace halfhop;

namespace {

struct CommonOpts {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;
};

struct GraphInputOpts {
  std::string edges_path;
  std::string features_path;
  std::string labels_path;
  std::vector<std::string> mask_specs;  // name=path
  std::int64_t num_nodes = -1;          // -1: infer max id + 1
  bool features_header = false;
  bool no_dedup = false;
  bool symmetrize_input = false;
};

void add_graph_inputs(CLI::App* cmd, GraphInputOpts& in,
                      bool features_required) {
  cmd->add_option("--edges", in.edges_path, "edge list file (src dst [weight])")
      ->required();
  auto* feat = cmd->add_option("--features", in.features_path,
                               "feature CSV, row i = node i");
  if (features_required) feat->required();
  cmd->add_option("--labels", in.labels_path, "label CSV, one column");
  cmd->add_option("--mask", in.mask_specs,
                  "named mask as name=path (repeatable)");
  cmd->add_option("--num-nodes", in.num_nodes,
                  "node count (default: max id + 1)");
  cmd->add_flag("--features-header", in.features_header,
                "skip one header row in the feature CSV");
  cmd->add_flag("--no-dedup", in.no_dedup,
                "keep duplicate directed edges");
  cmd->add_flag("--symmetrize", in.symmetrize_input,
                "add missing reverse edges after loading");
}

Graph load_graph(const GraphInputOpts& in) {
  EdgeListData data = read_edge_list(in.edges_path);
  NodeId n = in.num_nodes;
  if (n < 0) {
    n = 0;
    for (const auto& e : data.edges) n = std::max({n, e.src + 1, e.dst + 1});
  }
  Eigen::MatrixXd features;
  if (!in.features_path.empty())
    features = read_csv_matrix(in.features_path, in.features_header);
  if (features.size() == 0 && n > 0) features = Eigen::MatrixXd::Zero(n, 0);
  std::optional<Eigen::VectorXd> labels;
  if (!in.labels_path.empty()) labels = read_csv_column(in.labels_path);
  Graph g = build_graph(n, std::move(data.edges), std::move(features),
                        std::move(labels), BuildOptions{.dedup = !in.no_dedup},
                        std::move(data.weights));
  for (const auto& spec : in.mask_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("cli: --mask expects name=path, got '" + spec +
                               "'");
    Mask mask = read_mask(spec.substr(eq + 1));
    if (static_cast<NodeId>(mask.size()) != g.num_nodes)
      throw std::runtime_error("cli: mask '" + spec.substr(0, eq) +
                               "' length does not match node count");
    g.masks.emplace(spec.substr(0, eq), std::move(mask));
  }
  if (in.symmetrize_input) g = symmetrize(g);
  return g;
}

json graph_input_provenance(const GraphInputOpts& in) {
  return json{{"edges", in.edges_path},
              {"features", in.features_path},
              {"labels", in.labels_path},
              {"masks", in.mask_specs},
              {"num_nodes", in.num_nodes},
              {"features_header", in.features_header},
              {"no_dedup", in.no_dedup},
              {"symmetrize", in.symmetrize_input}};
}

void write_provenance(const CommonOpts& common, const std::string& subcommand,
                      json config) {
  json prov{{"tool", "halfhop"},
            {"version", kVersion},
            {"subcommand", subcommand},
            {"seed", common.seed},
            {"threads", common.threads},
            {"config", std::move(config)}};
  write_text(fs::path(common.out_dir) / "provenance.json", prov.dump(2) + "\n");
}

void ensure_out_dir(const CommonOpts& common) {
  fs::create_directories(common.out_dir);
}

json model_to_json(const LatentModel& model) {
  const auto mat = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json j;
  j["sigma"] = mat(model.sigma);
  j["projection"] = mat(model.projection);
  j["beta_star"] = std::vector<double>(
      model.beta_star.data(), model.beta_star.data() + model.beta_star.size());
  j["epsilon"] = model.epsilon;
  j["ridge_gamma"] = model.ridge_gamma;
  return j;
}

LatentModel model_from_json(const json& j) {
  const auto mat = [](const json& rows) {
    const auto r = rows.size();
    const auto c = r == 0 ? 0 : rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r),
                      static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < c; ++k)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            rows[i][k].get<double>();
    return m;
  };
  LatentModel model;
  model.sigma = mat(j.at("sigma"));
  model.projection = j.contains("projection")
                         ? mat(j.at("projection"))
                         : Eigen::MatrixXd::Identity(model.sigma.rows(),
                                                     model.sigma.rows());
  if (j.contains("beta_star")) {
    const auto v = j.at("beta_star").get<std::vector<double>>();
    model.beta_star = Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
  } else {
    model.beta_star = Eigen::VectorXd::Ones(model.sigma.rows());
  }
  model.epsilon = j.value("epsilon", 0.1);
  model.ridge_gamma = j.value("ridge_gamma", 0.1);
  validate_model(model);
  return model;
}

// Default model: the diagonal benchmark configuration used throughout the
// test suite.
LatentModel default_model() {
  Eigen::VectorXd diag(4);
  diag << 2.0, 1.0, 0.5, 0.25;
  LatentModel m = diagonal_model(diag, 0.1, 0.1);
  m.beta_star = Eigen::VectorXd::Constant(4, 0.5);
  return m;
}

struct ModelOpts {
  std::string model_path;
  std::vector<double> sigma_diag;
  double epsilon = 0.1;
  double ridge_gamma = 0.1;
};

void add_model_opts(CLI::App* cmd, ModelOpts& mo) {
  cmd->add_option("--model", mo.model_path, "latent model JSON file");
  cmd->add_option("--sigma-diag", mo.sigma_diag,
                  "diagonal latent covariance entries");
  cmd->add_option("--epsilon", mo.epsilon, "edge weight offset");
  cmd->add_option("--gamma", mo.ridge_gamma, "ridge penalty");
}

LatentModel resolve_model(const ModelOpts& mo) {
  if (!mo.model_path.empty()) {
    std::ifstream in(mo.model_path);
    if (!in)
      throw std::runtime_error("cli: cannot open model file " + mo.model_path);
    json j;
    in >> j;
    return model_from_json(j);
  }
  if (!mo.sigma_diag.empty()) {
    LatentModel m = diagonal_model(
        Eigen::Map<const Eigen::VectorXd>(
            mo.sigma_diag.data(),
            static_cast<Eigen::Index>(mo.sigma_diag.size())),
        mo.epsilon, mo.ridge_gamma);
    return m;
  }
  LatentModel m = default_model();
  m.epsilon = mo.epsilon;
  m.ridge_gamma = mo.ridge_gamma;
  return m;
}

Variant parse_variant(const std::string& name) {
  if (name == "hh") return Variant::HH;
  if (name == "hh1") return Variant::HH1;
  if (name == "hh2") return Variant::HH2;
  throw std::runtime_error("cli: unknown variant '" + name +
                           "' (expected hh, hh1 or hh2)");
}

SlowInit parse_init(const std::string& name) {
  if (name == "interpolate") return SlowInit::Interpolate;
  if (name == "zero") return SlowInit::Zero;
  if (name == "random") return SlowInit::Random;
  throw std::runtime_error("cli: unknown init '" + name +
                           "' (expected interpolate, zero or random)");
}

std::string csv_cell(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int run_ingest(const CommonOpts& common, const GraphInputOpts& in,
               bool remap) {
  ensure_out_dir(common);
  Graph g;
  std::vector<std::string> id_map;
  if (remap) {
    RemappedEdgeList remapped = read_edge_list_remapped(in.edges_path);
    id_map = std::move(remapped.id_to_token);
    GraphInputOpts rest = in;
    rest.edges_path.clear();
    Eigen::MatrixXd features;
    if (!in.features_path.empty())
      features = read_csv_matrix(in.features_path, in.features_header);
    std::optional<Eigen::VectorXd> labels;
    if (!in.labels_path.empty()) labels = read_csv_column(in.labels_path);
    g = build_graph(static_cast<NodeId>(id_map.size()),
                    std::move(remapped.data.edges), std::move(features),
                    std::move(labels), BuildOptions{.dedup = !in.no_dedup},
                    std::move(remapped.data.weights));
    if (in.symmetrize_input) g = symmetrize(g);
  } else {
    g = load_graph(in);
  }

  const fs::path out(common.out_dir);
  write_edge_list(out / "edges.txt", g.edges, g.edge_weights);
  if (g.features.cols() > 0) write_csv_matrix(out / "features.csv", g.features);
  if (g.labels) write_csv_column(out / "labels.csv", *g.labels);
  for (const auto& [name, mask] : g.masks)
    write_mask(out / ("mask_" + name + ".csv"), mask);

  const DegreeView dv = degree_view(g);
  std::int64_t isolated = 0;
  for (const auto& nbrs : dv.undirected_neighbors)
    if (nbrs.empty()) ++isolated;
  json summary{{"num_nodes", g.num_nodes},
               {"num_edges", g.num_edges()},
               {"feature_dim", g.features.cols()},
               {"weighted", g.weighted()},
               {"has_labels", g.labels.has_value()},
               {"isolated_nodes", isolated}};
  if (remap) summary["id_map"] = id_map;
  write_text(out / "graph.json", summary.dump(2) + "\n");
  write_provenance(common, "ingest",
                   {{"input", graph_input_provenance(in)}, {"remap", remap}});
  std::cout << "ingested " << g.num_nodes << " nodes, " << g.num_edges()
            << " edges\n";
  return 0;
}

int run_gen(const CommonOpts& common, const std::string& kind,
            std::int64_t rows, std::int64_t cols, const ModelOpts& mo,
            std::int64_t n, double train_fraction, bool no_self_loops) {
  ensure_out_dir(common);
  const fs::path out(common.out_dir);
  json config{{"kind", kind}};
  if (kind == "grid") {
    if (cols <= 0) cols = rows;
    const Graph g = grid_graph(rows, cols);
    write_edge_list(out / "edges.txt", g.edges, g.edge_weights);
    write_csv_matrix(out / "features.csv", g.features);
    config["rows"] = rows;
    config["cols"] = cols;
    std::cout << "grid " << rows << "x" << cols << ": " << g.num_nodes
              << " nodes, " << g.num_edges() << " edges\n";
  } else if (kind == "latent") {
    const LatentModel model = resolve_model(mo);
    const LatentSample sample =
        sample_latent_graph(model, n, common.seed, !no_self_loops);
    write_edge_list(out / "edges.txt", sample.graph.edges,
                    sample.graph.edge_weights);
    write_csv_matrix(out / "features.csv", sample.graph.features);
    write_csv_column(out / "labels.csv", *sample.graph.labels);
    if (train_fraction > 0.0) {
      const auto [train, test] = split_masks(n, train_fraction, common.seed);
      write_mask(out / "mask_train.csv", train);
      write_mask(out / "mask_test.csv", test);
    }
    json sidecar{{"model", model_to_json(model)},
                 {"n", n},
                 {"seed", common.seed},
                 {"include_self_loops", !no_self_loops},
                 {"train_fraction", train_fraction}};
    write_text(out / "model.json", sidecar.dump(2) + "\n");
    config["n"] = n;
    config["model"] = model_to_json(model);
    config["train_fraction"] = train_fraction;
    config["include_self_loops"] = !no_self_loops;
    std::cout << "latent graph: " << n << " nodes\n";
  } else {
    throw std::runtime_error("cli: unknown gen kind '" + kind + "'");
  }
  write_provenance(common, "gen", config);
  return 0;
}

int run_augment(const CommonOpts& common, const GraphInputOpts& in,
                double alpha, double p, const std::string& variant,
                const std::string& init, bool full) {
  ensure_out_dir(common);
  const Graph g = load_graph(in);
  HalfHopConfig cfg;
  cfg.alpha = alpha;
  cfg.p = p;
  cfg.variant = parse_variant(variant);
  cfg.init = parse_init(init);
  cfg.seed = common.seed;
  const AugmentedGraph ag = full ? half_hop(g, cfg) : half_hop_sampled(g, cfg);

  const fs::path out(common.out_dir);
  write_edge_list(out / "edges.txt", ag.graph.edges, ag.graph.edge_weights);
  if (ag.graph.features.cols() > 0)
    write_csv_matrix(out / "features.csv", ag.graph.features);
  json slow = json::array();
  for (const auto& prov : ag.provenance)
    slow.push_back(json::array({prov.source, prov.target}));
  json prov_json{{"original_count", ag.original_count},
                 {"slow_count", ag.slow_count()},
                 {"slow_nodes", std::move(slow)}};
  write_text(out / "slow_nodes.json", prov_json.dump() + "\n");
  write_provenance(common, "augment",
                   {{"input", graph_input_provenance(in)},
                    {"alpha", alpha},
                    {"p", p},
                    {"variant", variant},
                    {"init", init},
                    {"full", full}});
  std::cout << "augmented: " << ag.graph.num_nodes << " nodes ("
            << ag.slow_count() << " slow), " << ag.graph.num_edges()
            << " edges\n";
  return 0;
}

int run_rf(const CommonOpts& common, const GraphInputOpts& in,
           std::int64_t grid_rows, std::int64_t grid_cols, std::int64_t center,
           std::int64_t max_k, std::vector<double> alphas, bool no_self_loops) {
  ensure_out_dir(common);
  Graph g;
  if (grid_rows > 0) {
    g = grid_graph(grid_rows, grid_cols > 0 ? grid_cols : grid_rows);
  } else {
    g = load_graph(in);
  }
  if (center < 0) {
    if (grid_rows > 0) {
      const std::int64_t gc = grid_cols > 0 ? grid_cols : grid_rows;
      center = (grid_rows / 2) * gc + gc / 2;
    } else {
      center = 0;
    }
  }
  const bool self_loops = !no_self_loops;
  const SelfWeightCurve curve =
      self_weight_curve(g, center, alphas, max_k, self_loops);

  // Self-weight table: k, baseline, then one column per alpha.
  std::string table = "k,baseline";
  for (double a : alphas) table += ",alpha_" + format_double(a);
  table += '\n';
  for (std::size_t k = 0; k < curve.ks.size(); ++k) {
    table += std::to_string(curve.ks[k]) + ',' + csv_cell(curve.baseline[k]);
    for (Eigen::Index a = 0; a < curve.halfhop.cols(); ++a)
      table += ',' + csv_cell(curve.halfhop(static_cast<Eigen::Index>(k), a));
    table += '\n';
  }
  const fs::path out(common.out_dir);
  write_text(out / "self_weight.csv", table);

  // Receptive-field weights at max_k, attributed to original nodes.
  const DiffusionOperator base_op =
      build_operator(g, OperatorKind::MeanRownorm, self_loops);
  const Eigen::VectorXd rf_base = receptive_field(base_op, center, max_k);
  std::vector<Eigen::VectorXd> rf_hh;
  for (double a : alphas) {
    HalfHopConfig cfg;
    cfg.alpha = a;
    const AugmentedGraph ag = half_hop(g, cfg);
    const DiffusionOperator op =
        build_operator(ag.graph, OperatorKind::MeanRownorm, self_loops);
    rf_hh.push_back(
        attribute_to_original(ag, receptive_field(op, center, max_k), a));
  }
  std::string weights = "node,baseline";
  for (double a : alphas) weights += ",alpha_" + format_double(a);
  weights += '\n';
  for (NodeId v = 0; v < g.num_nodes; ++v) {
    weights += std::to_string(v) + ',' + csv_cell(rf_base[v]);
    for (const auto& rf : rf_hh) weights += ',' + csv_cell(rf[v]);
    weights += '\n';
  }
  write_text(out / "rf_weights.csv", weights);

  write_provenance(common, "rf",
                   {{"input", grid_rows > 0 ? json{{"grid_rows", grid_rows},
                                                   {"grid_cols", grid_cols}}
                                            : graph_input_provenance(in)},
                    {"center", center},
                    {"k", max_k},
                    {"alphas", alphas},
                    {"self_loops", self_loops}});
  std::cout << "receptive field written for center " << center << " up to k="
            << max_k << "\n";
  return 0;
}

int run_diffuse(const CommonOpts& common, const GraphInputOpts& in,
                std::int64_t max_k, double gamma, double alpha,
                const std::string& variant, double train_fraction,
                const std::string& encoding, bool self_loops,
                const std::string& op_kind) {
  ensure_out_dir(common);
  const Graph g = load_graph(in);
  MseCurveConfig cfg;
  cfg.hh.alpha = alpha;
  cfg.hh.variant = parse_variant(variant);
  cfg.hh.seed = common.seed;
  cfg.op_kind = op_kind == "sym" ? OperatorKind::SymNorm
                                 : OperatorKind::MeanRownorm;
  cfg.self_loops = self_loops;
  cfg.gamma = gamma;
  cfg.max_k = max_k;
  cfg.encoding =
      encoding == "onehot" ? LabelEncoding::OneHot : LabelEncoding::Scalar;
  cfg.train_fraction = train_fraction;
  cfg.split_seed = common.seed;
  const RiskCurve curve = mse_curve(g, cfg);

  std::string csv = "k,baseline_mse,halfhop_mse\n";
  for (std::size_t i = 0; i < curve.ks.size(); ++i)
    csv += std::to_string(curve.ks[i]) + ',' +
           csv_cell(curve.baseline_mse[i]) + ',' +
           csv_cell(curve.halfhop_mse[i]) + '\n';
  write_text(fs::path(common.out_dir) / "risk_curve.csv", csv);
  write_provenance(common, "diffuse",
                   {{"input", graph_input_provenance(in)},
                    {"k_max", max_k},
                    {"gamma", gamma},
                    {"alpha", alpha},
                    {"variant", variant},
                    {"operator", op_kind},
                    {"self_loops", self_loops},
                    {"encoding", encoding},
                    {"train_fraction", train_fraction},
                    {"used_existing_masks", curve.used_existing_masks}});
  std::cout << "risk curve written for k = 0.." << max_k << "\n";
  return 0;
}

int run_spectra(const CommonOpts& common, const ModelOpts& mo, std::int64_t k,
                double alpha, std::int64_t n, std::int64_t trials,
                bool empirical, double train_fraction) {
  ensure_out_dir(common);
  const LatentModel model = resolve_model(mo);
  McOptions options;
  options.seed = common.seed;
  options.train_fraction = train_fraction;
  options.threads = common.threads;
  const SpectralReport report =
      spectral_report(model, k, alpha, n, trials, empirical, options);

  const auto mat = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json j{{"k", report.k},
         {"alpha", report.alpha},
         {"model", model_to_json(model)},
         {"predicted_cov_baseline", mat(report.predicted_cov_baseline)},
         {"predicted_cov_halfhop", mat(report.predicted_cov_halfhop)},
         {"predicted_risk_baseline", report.predicted_risk_baseline},
         {"predicted_risk_halfhop", report.predicted_risk_halfhop},
         {"baseline_slope", report.eigen_table.baseline_slope},
         {"halfhop_slope", report.eigen_table.halfhop_slope}};
  if (report.has_empirical) {
    j["empirical_risk_baseline"] = {
        {"mean", report.empirical_baseline.mean},
        {"stderr", report.empirical_baseline.stderr_mean},
        {"trials", trials}};
    j["empirical_risk_halfhop"] = {
        {"mean", report.empirical_halfhop.mean},
        {"stderr", report.empirical_halfhop.stderr_mean},
        {"trials", trials}};
  }
  const fs::path out(common.out_dir);
  write_text(out / "spectral_report.json", j.dump(2) + "\n");

  std::string csv = "lambda,baseline,halfhop\n";
  for (const auto& row : report.eigen_table.rows)
    csv += csv_cell(row.lambda) + ',' + csv_cell(row.baseline) + ',' +
           csv_cell(row.halfhop) + '\n';
  write_text(out / "eigen_table.csv", csv);

  write_provenance(common, "spectra",
                   {{"k", k},
                    {"alpha", alpha},
                    {"n", n},
                    {"trials", trials},
                    {"empirical", empirical},
                    {"train_fraction", train_fraction},
                    {"model", model_to_json(model)}});
  std::cout << "predicted risk: baseline " << report.predicted_risk_baseline
            << ", half-hop " << report.predicted_risk_halfhop << "\n";
  return 0;
}

int run_homophily(const CommonOpts& common, const GraphInputOpts& in) {
  ensure_out_dir(common);
  const Graph g = load_graph(in);
  const double ratio = homophily_ratio(g);
  json j{{"homophily_ratio", ratio},
         {"num_nodes", g.num_nodes},
         {"num_edges", g.num_edges()}};
  write_text(fs::path(common.out_dir) / "homophily.json", j.dump(2) + "\n");
  write_provenance(common, "homophily",
                   {{"input", graph_input_provenance(in)}});
  std::cout << "homophily_ratio " << format_double(ratio) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "halfhop: slow-node graph upsampling with receptive-field, ridge "
      "diffusion and spectral-risk analysis"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--out", common.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--seed", common.seed, "base random seed")
      ->capture_default_str();
  app.add_option("--threads", common.threads,
                 "max worker threads (0 = all cores)");

  // ingest
  GraphInputOpts ingest_in;
  bool ingest_remap = false;
  auto* ingest = app.add_subcommand(
      "ingest", "validate a graph from files and re-emit it canonically");
  add_graph_inputs(ingest, ingest_in, false);
  ingest->add_flag("--remap", ingest_remap,
                   "accept arbitrary id tokens, remap to dense 0-based ids");

  // gen
  std::string gen_kind = "grid";
  std::int64_t gen_rows = 15, gen_cols = 0, gen_n = 3000;
  double gen_train_fraction = 0.5;
  bool gen_no_self_loops = false;
  ModelOpts gen_model;
  auto* gen = app.add_subcommand("gen", "generate a synthetic graph");
  gen->add_option("--kind", gen_kind, "grid | latent")->capture_default_str();
  gen->add_option("--rows", gen_rows, "grid rows");
  gen->add_option("--cols", gen_cols, "grid cols (default rows)");
  gen->add_option("--n", gen_n, "latent graph size");
  gen->add_option("--train-frac", gen_train_fraction,
                  "emit train/test masks with this fraction (0 = none)");
  gen->add_flag("--no-self-loops", gen_no_self_loops,
                "omit the diagonal self-loop edges of the latent graph");
  add_model_opts(gen, gen_model);

  // augment
  GraphInputOpts aug_in;
  double aug_alpha = 0.5, aug_p = 1.0;
  std::string aug_variant = "hh", aug_init = "interpolate";
  bool aug_full = false;
  auto* aug = app.add_subcommand("augment",
                                 "insert slow nodes along directed edges");
  add_graph_inputs(aug, aug_in, false);
  aug->add_option("--alpha", aug_alpha, "slow feature mixing parameter")
      ->capture_default_str();
  aug->add_option("--p", aug_p, "per-node sampling probability")
      ->capture_default_str();
  aug->add_option("--variant", aug_variant, "hh | hh1 | hh2")
      ->capture_default_str();
  aug->add_option("--init", aug_init, "interpolate | zero | random")
      ->capture_default_str();
  aug->add_flag("--full", aug_full,
                "deterministic full transform (ignore --p)");

  // rf
  GraphInputOpts rf_in;
  std::int64_t rf_rows = 0, rf_cols = 0, rf_center = -1, rf_k = 10;
  std::vector<double> rf_alphas{0.5};
  bool rf_no_self_loops = false;
  auto* rf = app.add_subcommand(
      "rf", "receptive-field weights and self-weight curves");
  rf->add_option("--edges", rf_in.edges_path, "edge list file");
  rf->add_option("--features", rf_in.features_path, "feature CSV");
  rf->add_option("--num-nodes", rf_in.num_nodes, "node count");
  rf->add_flag("--symmetrize", rf_in.symmetrize_input,
               "add missing reverse edges after loading");
  rf->add_option("--grid", rf_rows, "use an R x R grid instead of files");
  rf->add_option("--grid-cols", rf_cols, "grid cols when --grid is given");
  rf->add_option("--center", rf_center, "center node (default: grid middle)");
  rf->add_option("--k", rf_k, "number of aggregation steps")
      ->capture_default_str();
  rf->add_option("--alpha", rf_alphas, "half-hop mixing values (repeatable)");
  rf->add_flag("--no-self-loops", rf_no_self_loops,
               "build operators without self-loops");

  // diffuse
  GraphInputOpts diff_in;
  std::int64_t diff_k = 16;
  double diff_gamma = 0.1, diff_alpha = 0.5, diff_train_fraction = 0.5;
  std::string diff_encoding = "scalar", diff_variant = "hh",
              diff_op = "mean";
  bool diff_self_loops = false;
  auto* diff = app.add_subcommand(
      "diffuse", "test-MSE-vs-k curves for plain and half-hopped diffusion");
  add_graph_inputs(diff, diff_in, false);
  diff->add_option("--k-max", diff_k, "largest smoothing order")
      ->capture_default_str();
  diff->add_option("--gamma", diff_gamma, "ridge penalty")
      ->capture_default_str();
  diff->add_option("--alpha", diff_alpha, "half-hop mixing parameter")
      ->capture_default_str();
  diff->add_option("--variant", diff_variant, "hh | hh1 | hh2")
      ->capture_default_str();
  diff->add_option("--train-frac", diff_train_fraction,
                   "train fraction when no masks are supplied")
      ->capture_default_str();
  diff->add_option("--encoding", diff_encoding, "scalar | onehot")
      ->capture_default_str();
  diff->add_option("--operator", diff_op, "mean | sym")->capture_default_str();
  diff->add_flag("--self-loops", diff_self_loops,
                 "include self-loops in the operators");

  // spectra
  ModelOpts spec_model;
  std::int64_t spec_k = 1, spec_n = 3000, spec_trials = 20;
  double spec_alpha = 0.5, spec_train_fraction = 0.5;
  bool spec_empirical = false;
  auto* spec = app.add_subcommand(
      "spectra", "closed-form risk predictions and Monte-Carlo validation");
  add_model_opts(spec, spec_model);
  spec->add_option("--k", spec_k, "rounds of message passing (odd)")
      ->capture_default_str();
  spec->add_option("--alpha", spec_alpha, "half-hop mixing parameter")
      ->capture_default_str();
  spec->add_option("--n", spec_n, "graph size per trial")
      ->capture_default_str();
  spec->add_option("--trials", spec_trials, "Monte-Carlo trials")
      ->capture_default_str();
  spec->add_flag("--empirical", spec_empirical,
                 "also run the Monte-Carlo arms");
  spec->add_option("--train-frac", spec_train_fraction, "train fraction")
      ->capture_default_str();

  // homophily
  GraphInputOpts hom_in;
  auto* hom = app.add_subcommand(
      "homophily", "node homophily ratio of a labeled graph");
  add_graph_inputs(hom, hom_in, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return run_ingest(common, ingest_in, ingest_remap);
    if (gen->parsed())
      return run_gen(common, gen_kind, gen_rows, gen_cols, gen_model, gen_n,
                     gen_train_fraction, gen_no_self_loops);
    if (aug->parsed())
      return run_augment(common, aug_in, aug_alpha, aug_p, aug_variant,
                         aug_init, aug_full);
    if (rf->parsed())
      return run_rf(common, rf_in, rf_rows, rf_cols, rf_center, rf_k,
                    rf_alphas, rf_no_self_loops);
    if (diff->parsed())
      return run_diffuse(common, diff_in, diff_k, diff_gamma, diff_alpha,
                         diff_variant, diff_train_fraction, diff_encoding,
                         diff_self_loops, diff_op);
    if (spec->parsed())
      return run_spectra(common, spec_model, spec_k, spec_alpha, spec_n,
                         spec_trials, spec_empirical, spec_train_fraction);
    if (hom->parsed()) return run_homophily(common, hom_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
