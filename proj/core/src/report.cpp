#include "regada/io/report.hpp"

#include <cmath>
#include <fstream>

#include "regada/errors.hpp"

namespace regada::io {

using nlohmann::ordered_json;

namespace {

ordered_json metrics_to_json(const MetricValues& m) {
  ordered_json j;
  j["mAP_W"] = m.map_w;
  j["mAP_M"] = m.map_m;
  if (m.acc_a.has_value()) {
    j["Acc_A"] = *m.acc_a;
  } else {
    j["Acc_A"] = nullptr;
  }
  ordered_json table = ordered_json::object();
  for (const auto& [label, ap] : m.per_adverb_ap) {
    if (ap.has_value()) {
      table[label] = *ap;
    } else {
      table[label] = nullptr;
    }
  }
  j["per_adverb_AP"] = table;
  j["query_count"] = m.query_count;
  j["skipped_queries"] = m.skipped_queries;
  return j;
}

MetricValues metrics_from_json(const ordered_json& j) {
  MetricValues m;
  m.map_w = j.at("mAP_W").get<double>();
  m.map_m = j.at("mAP_M").get<double>();
  if (!j.at("Acc_A").is_null()) m.acc_a = j.at("Acc_A").get<double>();
  for (const auto& [label, ap] : j.at("per_adverb_AP").items()) {
    m.per_adverb_ap.emplace_back(
        label, ap.is_null() ? std::nullopt : std::optional<double>(ap.get<double>()));
  }
  m.query_count = j.at("query_count").get<std::size_t>();
  m.skipped_queries = j.at("skipped_queries").get<std::size_t>();
  return m;
}

struct Best {
  double value = -1.0;
  std::size_t epoch = 0;
  bool seen = false;
};

ordered_json best_to_json(const Best& b) {
  ordered_json j;
  j["value"] = b.value;
  j["epoch"] = b.epoch;
  return j;
}

}  // namespace

ordered_json report_to_json(const RunReport& report) {
  if (report.epochs.empty()) {
    throw ValidationError("report: epoch series is empty");
  }
  Best best_w, best_m, best_a;
  bool any_metrics = false;
  for (const EpochEntry& e : report.epochs) {
    if (!e.metrics.has_value()) continue;
    any_metrics = true;
    const MetricValues& m = *e.metrics;
    if (!best_w.seen || m.map_w > best_w.value) best_w = {m.map_w, e.epoch, true};
    if (!best_m.seen || m.map_m > best_m.value) best_m = {m.map_m, e.epoch, true};
    if (m.acc_a.has_value() && (!best_a.seen || *m.acc_a > best_a.value)) {
      best_a = {*m.acc_a, e.epoch, true};
    }
  }
  if (!any_metrics) {
    throw ValidationError("report: no epoch carries metrics");
  }

  ordered_json j;
  j["schema_version"] = 1;
  j["config"] = report.config;
  ordered_json epochs = ordered_json::array();
  for (const EpochEntry& e : report.epochs) {
    ordered_json je;
    je["epoch"] = e.epoch;
    if (e.loss.has_value()) {
      ordered_json jl;
      jl["action"] = e.loss->action;
      jl["adverb"] = e.loss->adverb;
      jl["regression"] = e.loss->regression;
      jl["total"] = e.loss->total;
      je["loss"] = jl;
    } else {
      je["loss"] = nullptr;
    }
    je["metrics"] = e.metrics.has_value() ? metrics_to_json(*e.metrics)
                                          : ordered_json(nullptr);
    epochs.push_back(je);
  }
  j["epochs"] = epochs;
  ordered_json best;
  best["mAP_W"] = best_to_json(best_w);
  best["mAP_M"] = best_to_json(best_m);
  best["Acc_A"] = best_a.seen ? best_to_json(best_a) : ordered_json(nullptr);
  j["best"] = best;
  return j;
}

RunReport report_from_json(const ordered_json& j) {
  RunReport report;
  report.config = j.at("config");
  for (const auto& je : j.at("epochs")) {
    EpochEntry e;
    e.epoch = je.at("epoch").get<std::size_t>();
    if (!je.at("loss").is_null()) {
      const auto& jl = je.at("loss");
      e.loss = LossBreakdown{jl.at("action").get<double>(), jl.at("adverb").get<double>(),
                             jl.at("regression").get<double>(),
                             jl.at("total").get<double>()};
    }
    if (!je.at("metrics").is_null()) e.metrics = metrics_from_json(je.at("metrics"));
    report.epochs.push_back(std::move(e));
  }
  return report;
}

void save_report(const std::filesystem::path& path, const RunReport& report) {
  const ordered_json j = report_to_json(report);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw Error(path.string() + ": write failed");
}

RunReport load_report(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  ordered_json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace regada::io
