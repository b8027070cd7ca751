// Copyright 2026 The livecase Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Safety Performance Indicators: definitions, telemetry accumulation, and
// statistically qualified evaluation against thresholds. A lagging SPI
// measures residual risk directly in operation; a leading SPI is measured
// earlier in the lifecycle and sits deeper in the argument. Both may trace
// to autonomy behaviour or to the safety management system.

#ifndef LIVECASE_SPI_HPP
#define LIVECASE_SPI_HPP

#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "livecase/diagnostics.hpp"
#include "livecase/stats.hpp"
#include "livecase/time_util.hpp"

namespace livecase {

enum class Unit { hour, km, mission };
enum class Direction { at_most, at_least };
enum class Timing { leading, lagging };
enum class TraceKind { behavioral, operational };
enum class Phase { simulation, road_test, deployment };

inline const char* to_string(Unit u) {
  switch (u) {
    case Unit::hour: return "hour";
    case Unit::km: return "km";
    default: return "mission";
  }
}
inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::simulation: return "simulation";
    case Phase::road_test: return "road_test";
    default: return "deployment";
  }
}
inline const char* to_string(Timing t) { return t == Timing::leading ? "leading" : "lagging"; }
inline const char* to_string(TraceKind t) {
  return t == TraceKind::behavioral ? "behavioral" : "operational";
}

inline std::optional<Unit> unit_from_string(const std::string& s) {
  if (s == "hour") return Unit::hour;
  if (s == "km") return Unit::km;
  if (s == "mission") return Unit::mission;
  return std::nullopt;
}
inline std::optional<Phase> phase_from_string(const std::string& s) {
  if (s == "simulation") return Phase::simulation;
  if (s == "road_test") return Phase::road_test;
  if (s == "deployment") return Phase::deployment;
  return std::nullopt;
}

/// A monitored metric with a threshold that detects situations where the
/// attached claim might be false.
struct SpiDefinition {
  std::string id;
  std::string claim_id;
  std::string metric;
  double threshold = 0.0;
  Unit unit = Unit::hour;
  Direction direction = Direction::at_most;
  Timing timing = Timing::leading;
  TraceKind trace = TraceKind::behavioral;
  double confidence_target = 0.95;
};

struct TelemetryRecord {
  UtcSeconds ts{};
  std::string metric;
  std::uint64_t count = 0;
  double exposure = 0.0;
  Unit unit = Unit::hour;
  Phase phase = Phase::deployment;
};

struct IngestResult {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<Diagnostic> diagnostics;  // one per rejected line, with line number
};

/// Append-only store of telemetry records. Evaluation reads an immutable
/// snapshot; ingestion order never affects evaluation results.
class TelemetryStore {
 public:
  void add(TelemetryRecord rec) {
    if (!(rec.exposure > 0.0)) throw InvalidInput("telemetry record: exposure must be > 0");
    records_.push_back(std::move(rec));
  }

  /// Reads line-delimited records, one JSON object per line with fields
  /// ts, metric, count, exposure, unit, phase. Malformed lines are counted
  /// and reported with their line number, never silently dropped.
  IngestResult ingest_jsonl(std::istream& in) {
    IngestResult result;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto reject = [&](const std::string& why) {
        ++result.rejected;
        result.diagnostics.push_back(
            {{line_no, 1, static_cast<int>(line.size())}, Severity::error, why});
      };
      nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object()) {
        reject("not a JSON object");
        continue;
      }
      TelemetryRecord rec;
      if (!obj.contains("ts") || !obj["ts"].is_string()) {
        reject("missing or non-string field: ts");
        continue;
      }
      auto ts = parse_utc(obj["ts"].get<std::string>());
      if (!ts) {
        reject("field ts is not an ISO-8601 UTC timestamp");
        continue;
      }
      rec.ts = *ts;
      if (!obj.contains("metric") || !obj["metric"].is_string()) {
        reject("missing or non-string field: metric");
        continue;
      }
      rec.metric = obj["metric"].get<std::string>();
      if (!obj.contains("count") || !obj["count"].is_number_unsigned()) {
        reject("missing or negative field: count");
        continue;
      }
      rec.count = obj["count"].get<std::uint64_t>();
      if (!obj.contains("exposure") || !obj["exposure"].is_number()) {
        reject("missing or non-numeric field: exposure");
        continue;
      }
      rec.exposure = obj["exposure"].get<double>();
      if (!(rec.exposure > 0.0)) {
        reject("field exposure must be > 0");
        continue;
      }
      auto unit = obj.contains("unit") && obj["unit"].is_string()
                      ? unit_from_string(obj["unit"].get<std::string>())
                      : std::nullopt;
      if (!unit) {
        reject("field unit must be one of hour|km|mission");
        continue;
      }
      rec.unit = *unit;
      auto phase = obj.contains("phase") && obj["phase"].is_string()
                       ? phase_from_string(obj["phase"].get<std::string>())
                       : std::nullopt;
      if (!phase) {
        reject("field phase must be one of simulation|road_test|deployment");
        continue;
      }
      rec.phase = *phase;
      add(std::move(rec));
      ++result.accepted;
    }
    return result;
  }

  const std::vector<TelemetryRecord>& records() const { return records_; }

  struct Totals {
    std::uint64_t events = 0;
    double exposure = 0.0;
  };

  /// Per (metric, phase, unit) totals over everything ingested so far.
  std::map<std::tuple<std::string, Phase, Unit>, Totals> totals_by_group() const {
    std::map<std::tuple<std::string, Phase, Unit>, Totals> out;
    for (const auto& r : records_) {
      auto& t = out[{r.metric, r.phase, r.unit}];
      t.events += r.count;
      t.exposure += r.exposure;
    }
    return out;
  }

 private:
  std::vector<TelemetryRecord> records_;
};

/// Phase filter plus optional closed time range. Default: every phase, all
/// of time.
struct Window {
  std::set<Phase> phases{Phase::simulation, Phase::road_test, Phase::deployment};
  std::optional<std::pair<UtcSeconds, UtcSeconds>> range;

  bool contains(const TelemetryRecord& r) const {
    if (!phases.count(r.phase)) return false;
    if (range && (r.ts < range->first || r.ts > range->second)) return false;
    return true;
  }
};

enum class SpiStatus { pass, pass_low_confidence, violated, no_data };

inline const char* to_string(SpiStatus s) {
  switch (s) {
    case SpiStatus::pass: return "pass";
    case SpiStatus::pass_low_confidence: return "pass_low_confidence";
    case SpiStatus::violated: return "violated";
    default: return "no_data";
  }
}

struct SpiEvaluation {
  std::string spi_id;
  Unit unit = Unit::hour;
  std::uint64_t total_events = 0;
  double total_exposure = 0.0;
  double point_rate = 0.0;
  /// One-sided credible bound toward the threshold: an upper bound for
  /// at_most SPIs, a lower bound for at_least SPIs.
  double credible_bound = std::numeric_limits<double>::quiet_NaN();
  SpiStatus status = SpiStatus::no_data;
  bool confidence_met = false;
};

/// Evaluates one SPI over a telemetry window. Events are modelled as a
/// Poisson process; the credible bound comes from the Gamma posterior at the
/// definition's confidence target. A record whose unit differs from the
/// SPI's is a contract violation, not a finding.
inline SpiEvaluation evaluate(const SpiDefinition& spi, const TelemetryStore& store,
                              const Window& window = {},
                              std::optional<double> confidence_override = std::nullopt) {
  const double confidence = confidence_override.value_or(spi.confidence_target);
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw InvalidInput("evaluate: confidence target must be in (0,1)");
  }
  SpiEvaluation eval;
  eval.spi_id = spi.id;
  eval.unit = spi.unit;
  for (const auto& rec : store.records()) {
    if (rec.metric != spi.metric || !window.contains(rec)) continue;
    if (rec.unit != spi.unit) {
      throw InvalidInput("evaluate: telemetry unit " + std::string(to_string(rec.unit)) +
                         " does not match SPI unit " + to_string(spi.unit) + " for metric " +
                         spi.metric);
    }
    eval.total_events += rec.count;
    eval.total_exposure += rec.exposure;
  }
  if (!(eval.total_exposure > 0.0)) {
    eval.status = SpiStatus::no_data;
    return eval;
  }
  eval.point_rate = static_cast<double>(eval.total_events) / eval.total_exposure;
  if (spi.direction == Direction::at_most) {
    eval.credible_bound =
        stats::poisson_rate_upper_bound(eval.total_events, eval.total_exposure, confidence);
    eval.confidence_met = eval.credible_bound <= spi.threshold;
    if (eval.point_rate > spi.threshold) {
      eval.status = SpiStatus::violated;
    } else if (eval.confidence_met) {
      eval.status = SpiStatus::pass;
    } else {
      eval.status = SpiStatus::pass_low_confidence;
    }
  } else {
    eval.credible_bound =
        stats::poisson_rate_lower_bound(eval.total_events, eval.total_exposure, confidence);
    eval.confidence_met = eval.credible_bound >= spi.threshold;
    if (eval.point_rate < spi.threshold) {
      eval.status = SpiStatus::violated;
    } else if (eval.confidence_met) {
      eval.status = SpiStatus::pass;
    } else {
      eval.status = SpiStatus::pass_low_confidence;
    }
  }
  return eval;
}

struct DeviationResult {
  bool deviating = false;
  double p_value = 1.0;
};

/// Validation-versus-field deviation trigger: exact conditional binomial
/// comparison of two Poisson samples. (k1, t1) is the validation sample,
/// (k2, t2) the field sample.
inline DeviationResult deviation_test(std::uint64_t k1, double t1, std::uint64_t k2, double t2,
                                      double alpha = 0.05) {
  const auto r = stats::poisson_two_sample_test(k1, t1, k2, t2, alpha);
  return {r.deviating, r.p_value};
}

}  // namespace livecase

#endif  // LIVECASE_SPI_HPP
