#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace regada::io {

// Loss components of one epoch (weighted sum already applied in total).
struct LossBreakdown {
  double action = 0.0;
  double adverb = 0.0;
  double regression = 0.0;
  double total = 0.0;
};

// The three retrieval metrics plus per-adverb detail. Acc_A is absent when
// the vocabulary has no antonym map. Adverbs without any query carry no AP.
struct MetricValues {
  double map_w = 0.0;
  double map_m = 0.0;
  std::optional<double> acc_a;
  std::vector<std::pair<std::string, std::optional<double>>> per_adverb_ap;
  std::size_t query_count = 0;
  std::size_t skipped_queries = 0;
};

struct EpochEntry {
  std::size_t epoch = 0;
  std::optional<LossBreakdown> loss;
  std::optional<MetricValues> metrics;
};

// Per-run series plus the provenance block. The serialized document adds a
// "best" section holding each metric's maximum over the series together
// with the epoch it came from; maxima are taken per metric independently,
// so they may point at different epochs.
struct RunReport {
  nlohmann::ordered_json config;
  std::vector<EpochEntry> epochs;
};

nlohmann::ordered_json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::ordered_json& j);

// Serializes with stable key order. Throws ValidationError when the epoch
// series is empty or contains no metric entry.
void save_report(const std::filesystem::path& path, const RunReport& report);
RunReport load_report(const std::filesystem::path& path);

}  // namespace regada::io
