#include "itca/reports.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "itca/errors.hpp"

namespace itca {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

RunManifest RunManifest::create(const std::string& command) {
  RunManifest m;
  m.data["tool_version"] = kToolVersion;
  m.data["command"] = command;
  const auto now = std::chrono::system_clock::now();
  m.data["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  return m;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out << data.dump(2) << '\n';
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  RunManifest m;
  try {
    in >> m.data;
  } catch (const nlohmann::json::exception& e) {
    throw ParseFailure("manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void write_trace_jsonl(const SearchTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  for (const auto& entry : trace.evaluated) {
    nlohmann::json line{{"partition", entry.partition.text()},
                        {"k", entry.partition.k()},
                        {"criterion", entry.report.name},
                        {"per_fold", entry.report.per_fold},
                        {"mean", entry.report.mean},
                        {"stderr", entry.report.stderr_}};
    out << line.dump() << '\n';
  }
}

nlohmann::json search_summary(const SearchTrace& trace) {
  nlohmann::json pruned = nlohmann::json::array();
  for (const auto& p : trace.pruned) {
    pruned.push_back({{"partition", p.partition.text()}, {"reason", p.reason}});
  }
  // Reported count: evaluated combinations beyond the identity
  // baseline, next to the raw count.
  const std::size_t reported =
      trace.evaluation_count > 0 ? trace.evaluation_count - 1 : 0;
  return nlohmann::json{{"best_partition", trace.best.text()},
                        {"best_k", trace.best.k()},
                        {"best_value", trace.best_value},
                        {"evaluated_total", trace.evaluation_count},
                        {"combinations_evaluated", reported},
                        {"pruned", pruned}};
}

namespace {

// Best mean per K with its stderr.
std::map<int, std::pair<double, double>> best_per_k(const SearchTrace& trace) {
  std::map<int, std::pair<double, double>> best;
  for (const auto& entry : trace.evaluated) {
    const int k = entry.partition.k();
    const auto it = best.find(k);
    if (it == best.end() || entry.report.mean > it->second.first) {
      best[k] = {entry.report.mean, entry.report.stderr_};
    }
  }
  return best;
}

}  // namespace

void write_criterion_vs_k_csv(const SearchTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out << "k,best_mean,stderr\n";
  for (const auto& [k, value] : best_per_k(trace)) {
    out << k << ',' << format_double(value.first) << ',' << format_double(value.second) << '\n';
  }
}

void write_criterion_vs_k_svg(const SearchTrace& trace, const std::filesystem::path& path) {
  const auto best = best_per_k(trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());

  constexpr double width = 480.0;
  constexpr double height = 320.0;
  constexpr double margin = 48.0;
  double lo = 0.0;
  double hi = 1.0;
  int k_min = 1;
  int k_max = 2;
  if (!best.empty()) {
    lo = hi = best.begin()->second.first;
    k_min = best.begin()->first;
    k_max = best.rbegin()->first;
    for (const auto& [k, v] : best) {
      lo = std::min(lo, v.first);
      hi = std::max(hi, v.first);
    }
    if (hi == lo) hi = lo + 1.0;
  }
  const auto x_of = [&](int k) {
    if (k_max == k_min) return width / 2.0;
    return margin + (width - 2 * margin) * (k - k_min) / static_cast<double>(k_max - k_min);
  };
  const auto y_of = [&](double v) {
    return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& [k, v] : best) {
    out << format_double(x_of(k)) << ',' << format_double(y_of(v.first)) << ' ';
  }
  out << "\"/>\n";
  for (const auto& [k, v] : best) {
    out << "<circle cx=\"" << format_double(x_of(k)) << "\" cy=\""
        << format_double(y_of(v.first)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    out << "<text x=\"" << format_double(x_of(k)) << "\" y=\"" << height - margin + 16.0
        << "\" font-size=\"11\" text-anchor=\"middle\">" << k << "</text>\n";
  }
  out << "<text x=\"" << width / 2.0 << "\" y=\"" << height - 8.0
      << "\" font-size=\"12\" text-anchor=\"middle\">K</text>\n";
  out << "</svg>\n";
}

void write_region_csv(const RegionGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out << "p1,p2,delta\n";
  for (const auto& cell : grid.cells) {
    out << format_double(cell.p1) << ',' << format_double(cell.p2) << ','
        << format_double(cell.delta) << '\n';
  }
}

void write_region_svg(const RegionGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());

  constexpr double size = 480.0;
  constexpr double margin = 40.0;
  const double plot = size - 2 * margin;
  const double cell_px = plot / static_cast<double>(grid.resolution);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& cell : grid.cells) {
    // Blue where merging improves the criterion, orange where it hurts.
    const char* color = cell.delta > 0.0 ? "#4878cf" : "#f4a259";
    const double x = margin + (cell.p1 - 0.5 / grid.resolution) * plot;
    const double y = size - margin - (cell.p2 + 0.5 / grid.resolution) * plot;
    out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
        << format_double(cell_px) << "\" height=\"" << format_double(cell_px) << "\" fill=\""
        << color << "\"/>\n";
  }
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot
      << "\" height=\"" << plot << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << size / 2.0 << "\" y=\"" << size - 10.0
      << "\" font-size=\"12\" text-anchor=\"middle\">p1</text>\n";
  out << "<text x=\"12\" y=\"" << size / 2.0
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
      << size / 2.0 << ")\">p2</text>\n";
  out << "<text x=\"" << size - margin << "\" y=\"" << margin - 8.0
      << "\" font-size=\"12\" text-anchor=\"end\">area " << format_double(grid.area_fraction)
      << "</text>\n</svg>\n";
}

}  // namespace itca
