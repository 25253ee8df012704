#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "itca/search.hpp"
#include "itca/theory.hpp"

namespace itca {

inline constexpr const char* kToolVersion = "0.1.0";

// Everything needed to reproduce a run bit-exactly (timestamps excluded
// from that guarantee). Stored as plain JSON so new fields stay readable.
struct RunManifest {
  nlohmann::json data;

  static RunManifest create(const std::string& command);
  void write(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);
};

// One evaluated partition per line, streamed in evaluation order.
void write_trace_jsonl(const SearchTrace& trace, const std::filesystem::path& path);

// Summary of a finished search: best partition, per-K curve, prune log.
nlohmann::json search_summary(const SearchTrace& trace);

// Best criterion value per K among evaluated partitions: "k,mean,stderr".
void write_criterion_vs_k_csv(const SearchTrace& trace, const std::filesystem::path& path);
void write_criterion_vs_k_svg(const SearchTrace& trace, const std::filesystem::path& path);

// Region grids: "p1,p2,delta" rows and a two-color heatmap.
void write_region_csv(const RegionGrid& grid, const std::filesystem::path& path);
void write_region_svg(const RegionGrid& grid, const std::filesystem::path& path);

std::string format_double(double v);  // shortest round-trip

}  // namespace itca
