#include "itca/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "itca/errors.hpp"
#include "itca/rng.hpp"

namespace itca {

void Dataset::validate() const {
  if (n() < 1 || d() < 1) throw ConfigError("dataset: n and d must be positive");
  if (static_cast<int>(labels.size()) != n()) {
    throw ConfigError("dataset: label count does not match row count");
  }
  std::vector<bool> seen(static_cast<std::size_t>(k0), false);
  for (int y : labels) {
    if (y < 1 || y > k0) throw LabelOutOfRange(y, k0);
    seen[static_cast<std::size_t>(y - 1)] = true;
  }
  for (int c = 0; c < k0; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw ConfigError("dataset: class " + std::to_string(c + 1) + " has no samples");
    }
  }
  if (!features.allFinite()) throw ConfigError("dataset: non-finite feature value");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

CsvLoadResult load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string(), 1, 1, "missing header row");
  }
  const auto header = split_line(line);
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == label_column) {
      label_idx = i;
      break;
    }
  }
  if (label_idx == header.size()) {
    throw ParseError(path.string(), 1, 1, "label column '" + label_column + "' not found");
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(path.string(), lineno, cells.size() + 1,
                       "expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      if (c == label_idx) {
        if (cell.empty()) throw ParseError(path.string(), lineno, c + 1, "empty label");
        raw_labels.push_back(cell);
        continue;
      }
      if (cell.empty()) throw ParseError(path.string(), lineno, c + 1, "empty cell");
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw NonNumericFeature(path.string(), lineno, trim(header[c]));
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path.string(), lineno, 1, "no data rows");

  // Re-encode labels to [1, K0] by first appearance.
  std::vector<std::string> names;
  std::vector<int> labels;
  labels.reserve(raw_labels.size());
  for (const auto& raw : raw_labels) {
    auto it = std::find(names.begin(), names.end(), raw);
    if (it == names.end()) {
      names.push_back(raw);
      labels.push_back(static_cast<int>(names.size()));
    } else {
      labels.push_back(static_cast<int>(it - names.begin()) + 1);
    }
  }
  if (names.size() < 2) throw SingleClass();

  Dataset ds;
  ds.k0 = static_cast<int>(names.size());
  ds.labels = std::move(labels);
  ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  ds.validate();
  return CsvLoadResult{std::move(ds), std::move(names)};
}

void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const std::vector<std::string>& feature_names,
               const std::vector<std::string>& label_names, const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);  // binary: keep '\n' exact on all platforms
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  for (int j = 0; j < ds.d(); ++j) {
    if (j < static_cast<int>(feature_names.size())) {
      out << feature_names[static_cast<std::size_t>(j)];
    } else {
      out << "x" << (j + 1);
    }
    out << ',';
  }
  out << label_column << '\n';
  for (int i = 0; i < ds.n(); ++i) {
    for (int j = 0; j < ds.d(); ++j) {
      out << format_double(ds.features(i, j)) << ',';
    }
    const int y = ds.labels[static_cast<std::size_t>(i)];
    if (!label_names.empty()) {
      out << label_names[static_cast<std::size_t>(y - 1)];
    } else {
      out << y;
    }
    out << '\n';
  }
}

std::vector<double> class_proportions(const Dataset& ds) {
  std::vector<double> p(static_cast<std::size_t>(ds.k0), 0.0);
  for (int y : ds.labels) p[static_cast<std::size_t>(y - 1)] += 1.0;
  for (auto& v : p) v /= static_cast<double>(ds.n());
  return p;
}

std::vector<int> FoldPlan::eval_indices(int fold) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

FoldPlan stratified_folds(const Dataset& ds, int r, std::uint64_t seed) {
  if (r < 2) throw ConfigError("stratified_folds: r must be >= 2");
  if (ds.n() < r) throw TooFewPoints(ds.n(), r);

  FoldPlan plan;
  plan.r = r;
  plan.seed = seed;
  plan.assignment.assign(static_cast<std::size_t>(ds.n()), -1);

  // Per class: shuffle the class's rows, then deal them to folds
  // round-robin starting where the previous class stopped. The rotating
  // start spreads the per-class remainders, keeping overall fold sizes
  // within one of each other.
  Rng rng(mix_seed(seed, 0x666f6c6473ULL));  // "folds"
  int start = 0;
  for (int c = 1; c <= ds.k0; ++c) {
    std::vector<int> rows;
    for (int i = 0; i < ds.n(); ++i) {
      if (ds.labels[static_cast<std::size_t>(i)] == c) rows.push_back(i);
    }
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[rng.next_below(i)]);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      plan.assignment[static_cast<std::size_t>(rows[i])] =
          (start + static_cast<int>(i)) % r;
    }
    start = (start + static_cast<int>(rows.size())) % r;
  }
  return plan;
}

void SimulationConfig::validate() const {
  if (k0 < 1) throw ConfigError("simulate: k0 must be positive");
  if (true_partition.k0() != k0) {
    throw ConfigError("simulate: true_partition is over " +
                      std::to_string(true_partition.k0()) + " classes, expected " +
                      std::to_string(k0));
  }
  if (step_length <= 0.0 && true_partition.k() > 1) {
    throw ConfigError("simulate: step_length must be positive");
  }
  if (sigma <= 0.0) throw ConfigError("simulate: sigma must be positive");
  if (n < 1 || d < 1) throw ConfigError("simulate: n and d must be positive");
  if (max_center_attempts < 1) throw ConfigError("simulate: max_center_attempts must be positive");
}

namespace {

// Direction uniform on the unit sphere: normalized standard Gaussian draw.
Eigen::VectorXd random_unit_vector(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.next_normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

double min_pairwise_distance(const Eigen::MatrixXd& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < centers.rows(); ++j) {
      best = std::min(best, (centers.row(i) - centers.row(j)).norm());
    }
  }
  return best;
}

}  // namespace

SimulationResult simulate(const SimulationConfig& cfg) {
  cfg.validate();
  const int k_star = cfg.true_partition.k();
  Rng rng(mix_seed(cfg.seed, 0x73696dULL));  // "sim"

  // Walk centers; a violation of the separation constraint restarts the
  // whole walk, preserving the walk law conditioned on separation.
  Eigen::MatrixXd centers(k_star, cfg.d);
  int attempts = 0;
  for (;;) {
    ++attempts;
    centers.row(0).setZero();
    for (int k = 1; k < k_star; ++k) {
      centers.row(k) = centers.row(k - 1) +
                       cfg.step_length * random_unit_vector(rng, cfg.d).transpose();
    }
    if (k_star < 2 || min_pairwise_distance(centers) > cfg.sigma) break;
    if (attempts >= cfg.max_center_attempts) throw CenterGenerationTimeout(attempts);
  }

  const auto groups = cfg.true_partition.groups();
  SimulationResult out;
  out.centers = centers;
  out.true_labels.resize(static_cast<std::size_t>(cfg.n));
  out.dataset.k0 = cfg.k0;
  out.dataset.labels.resize(static_cast<std::size_t>(cfg.n));
  out.dataset.features.resize(cfg.n, cfg.d);
  for (int i = 0; i < cfg.n; ++i) {
    const int y_star = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k_star))) + 1;
    const auto& members = groups[static_cast<std::size_t>(y_star - 1)];
    const int y = members[rng.next_below(members.size())];
    out.true_labels[static_cast<std::size_t>(i)] = y_star;
    out.dataset.labels[static_cast<std::size_t>(i)] = y;
    for (int j = 0; j < cfg.d; ++j) {
      out.dataset.features(i, j) = centers(y_star - 1, j) + cfg.sigma * rng.next_normal();
    }
  }
  // Small n can miss a class entirely; resample the labels until every
  // observed class appears (features are tied to Y*, so redrawing the
  // class within the same true class preserves the model).
  for (int c = 1; c <= cfg.k0; ++c) {
    const bool present = std::find(out.dataset.labels.begin(), out.dataset.labels.end(), c) !=
                         out.dataset.labels.end();
    if (!present) {
      const int y_star = cfg.true_partition.apply(c);
      for (int i = 0; i < cfg.n; ++i) {
        if (out.true_labels[static_cast<std::size_t>(i)] == y_star) {
          out.dataset.labels[static_cast<std::size_t>(i)] = c;
          break;
        }
      }
    }
  }
  out.dataset.validate();
  return out;
}

Dataset subset(const Dataset& ds, const std::vector<int>& indices) {
  Dataset out;
  out.k0 = ds.k0;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), ds.d());
  out.labels.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(indices[i]);
    out.labels[i] = ds.labels[static_cast<std::size_t>(indices[i])];
  }
  return out;
}

}  // namespace itca
