#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "halfhop/graph.hpp"

namespace halfhop {

// Edge-list text format: one `src dst [weight]` per line, whitespace
// separated, 0-based integer ids, '#' comment lines and blank lines ignored.
struct EdgeListData {
  std::vector<Edge> edges;
  std::vector<double> weights;  // empty when no line carried a weight
};

// Parse errors name the file and 1-based line number.
EdgeListData read_edge_list(const std::filesystem::path& path);

// With remap = true, arbitrary integer or string tokens are accepted and
// mapped to dense ids in first-appearance order; the mapping is returned so
// callers can persist it.
struct RemappedEdgeList {
  EdgeListData data;
  std::vector<std::string> id_to_token;  // dense id -> original token
};
RemappedEdgeList read_edge_list_remapped(const std::filesystem::path& path);

// Numeric CSV, no header unless skip_header; returns a row-major matrix.
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path,
                                bool skip_header = false);

// Single-column CSV of reals (class ids parse as exact integers).
Eigen::VectorXd read_csv_column(const std::filesystem::path& path,
                                bool skip_header = false);

// Single-column CSV of 0/1 flags.
Mask read_mask(const std::filesystem::path& path, bool skip_header = false);

// All writers are atomic (temp file in the same directory + rename) and
// format floating point with 17 significant digits so values round-trip.
void write_edge_list(const std::filesystem::path& path,
                     const std::vector<Edge>& edges,
                     const std::vector<double>& weights = {});
void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m);
void write_csv_column(const std::filesystem::path& path,
                      const Eigen::VectorXd& v);
void write_mask(const std::filesystem::path& path, const Mask& mask);
void write_text(const std::filesystem::path& path, const std::string& text);

// %.17g rendering used across all outputs.
std::string format_double(double v);

}  // namespace halfhop
