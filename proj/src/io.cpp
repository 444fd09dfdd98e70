#include "halfhop/io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace halfhop {

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& path,
                              std::size_t line_no, const std::string& what) {
  throw std::runtime_error("io: " + path.string() + ":" +
                           std::to_string(line_no) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("io: cannot open " + path.string() + ": " +
                             std::strerror(errno));
  return in;
}

bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::filesystem::path& path, std::size_t line_no,
                    const std::string& token) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    while (used < token.size() &&
           std::isspace(static_cast<unsigned char>(token[used])))
      ++used;
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    parse_error(path, line_no, "cannot parse number '" + token + "'");
  }
}

}  // namespace

EdgeListData read_edge_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  EdgeListData out;
  std::string line;
  std::size_t line_no = 0;
  bool any_weight = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::int64_t src = 0, dst = 0;
    if (!(ss >> src >> dst))
      parse_error(path, line_no, "expected 'src dst [weight]'");
    if (src < 0 || dst < 0) parse_error(path, line_no, "negative node id");
    double w = 1.0;
    const bool has_w = static_cast<bool>(ss >> w);
    if (!has_w) ss.clear();
    std::string trailing;
    if (ss >> trailing)
      parse_error(path, line_no, "unexpected trailing token '" + trailing + "'");
    if (has_w && !out.edges.empty() && !any_weight)
      parse_error(path, line_no, "weight column appears mid-file");
    if (!has_w && any_weight)
      parse_error(path, line_no, "missing weight column");
    out.edges.push_back({src, dst});
    if (has_w) {
      any_weight = true;
      out.weights.push_back(w);
    }
  }
  return out;
}

RemappedEdgeList read_edge_list_remapped(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  RemappedEdgeList out;
  std::unordered_map<std::string, NodeId> ids;
  const auto intern = [&](const std::string& token) {
    const auto [it, inserted] =
        ids.emplace(token, static_cast<NodeId>(out.id_to_token.size()));
    if (inserted) out.id_to_token.push_back(token);
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  bool any_weight = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string src, dst, rest;
    if (!(ss >> src >> dst))
      parse_error(path, line_no, "expected 'src dst [weight]'");
    double w = 1.0;
    bool has_w = false;
    if (ss >> rest) {
      w = parse_double(path, line_no, rest);
      has_w = true;
    }
    if (!has_w && any_weight)
      parse_error(path, line_no, "missing weight column");
    out.data.edges.push_back({intern(src), intern(dst)});
    if (has_w) {
      any_weight = true;
      out.data.weights.push_back(w);
    }
  }
  return out;
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path,
                                bool skip_header) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (skippable(line)) continue;
    const auto cells = split_csv(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells)
      row.push_back(parse_double(path, line_no, cell));
    if (!rows.empty() && row.size() != rows.front().size())
      parse_error(path, line_no,
                  "row has " + std::to_string(row.size()) +
                      " columns, expected " +
                      std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0
                                 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

Eigen::VectorXd read_csv_column(const std::filesystem::path& path,
                                bool skip_header) {
  const Eigen::MatrixXd m = read_csv_matrix(path, skip_header);
  if (m.rows() > 0 && m.cols() != 1)
    throw std::runtime_error("io: " + path.string() +
                             ": expected a single column, found " +
                             std::to_string(m.cols()));
  return m.col(0);
}

Mask read_mask(const std::filesystem::path& path, bool skip_header) {
  const Eigen::VectorXd v = read_csv_column(path, skip_header);
  Mask mask(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0 && v[i] != 1.0)
      throw std::runtime_error("io: " + path.string() + ": mask entry " +
                               std::to_string(i) + " is not 0 or 1");
    mask[static_cast<std::size_t>(i)] = v[i] == 1.0 ? 1 : 0;
  }
  return mask;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("io: cannot write " + tmp.string() + ": " +
                               std::strerror(errno));
    out << text;
    if (!out.flush())
      throw std::runtime_error("io: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_edge_list(const std::filesystem::path& path,
                     const std::vector<Edge>& edges,
                     const std::vector<double>& weights) {
  std::string text;
  text.reserve(edges.size() * 8);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    text += std::to_string(edges[e].src);
    text += ' ';
    text += std::to_string(edges[e].dst);
    if (!weights.empty()) {
      text += ' ';
      text += format_double(weights[e]);
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m) {
  std::string text;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) text += ',';
      text += format_double(m(r, c));
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_csv_column(const std::filesystem::path& path,
                      const Eigen::VectorXd& v) {
  write_csv_matrix(path, v);
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
  std::string text;
  for (auto flag : mask) {
    text += flag ? '1' : '0';
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace halfhop
