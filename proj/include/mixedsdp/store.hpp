#pragma once

// Append-only JSON-lines store of computed bounds, keyed by (n2, n3, d, k).
// Reads return the most recent record for a key.

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mixedsdp/errors.hpp"
#include "mixedsdp/solver.hpp"

namespace mixedsdp {

struct SolverStats {
  double dual_objective = 0.0;
  double gap = 0.0;
  double guard = 0.0;
  double feasibility_residual = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string provenance = "solver";
};

struct BoundRecord {
  ProblemSpec spec;
  double sdp_objective = 0.0;
  long long certified_bound = 0;
  SolverStats stats;
};

using StoreKey = std::tuple<int, int, int, int>;

inline StoreKey key_of(const ProblemSpec& spec) { return {spec.n2, spec.n3, spec.d, spec.k}; }

inline BoundRecord make_record(const ProblemSpec& spec, const Solution& s, const CertifiedBound& c) {
  return {spec,
          s.objective,
          c.value,
          {s.dual_objective, s.gap, c.guard, s.feasibility_residual(), s.iterations, s.seconds,
           to_string(c.provenance)}};
}

inline nlohmann::json to_json(const BoundRecord& r) {
  return {{"n2", r.spec.n2},
          {"n3", r.spec.n3},
          {"d", r.spec.d},
          {"k", r.spec.k},
          {"sdpObjective", r.sdp_objective},
          {"certifiedBound", r.certified_bound},
          {"solverStats",
           {{"dualObjective", r.stats.dual_objective},
            {"gap", r.stats.gap},
            {"guard", r.stats.guard},
            {"feasibilityResidual", r.stats.feasibility_residual},
            {"iterations", r.stats.iterations},
            {"seconds", r.stats.seconds},
            {"provenance", r.stats.provenance}}}};
}

inline BoundRecord record_from_json(const nlohmann::json& j) {
  try {
    BoundRecord r;
    r.spec = ProblemSpec{j.at("n2").get<int>(), j.at("n3").get<int>(), j.at("d").get<int>(),
                         j.at("k").get<int>()};
    r.spec.validate();
    r.sdp_objective = j.at("sdpObjective").get<double>();
    r.certified_bound = j.at("certifiedBound").get<long long>();
    const auto& s = j.at("solverStats");
    r.stats.dual_objective = s.value("dualObjective", 0.0);
    r.stats.gap = s.value("gap", 0.0);
    r.stats.guard = s.value("guard", 0.0);
    r.stats.feasibility_residual = s.value("feasibilityResidual", 0.0);
    r.stats.iterations = s.value("iterations", 0);
    r.stats.seconds = s.value("seconds", 0.0);
    r.stats.provenance = s.value("provenance", std::string("solver"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad bound record: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(std::string("bad bound record: ") + e.what());
  }
}

class ResultsStore {
 public:
  explicit ResultsStore(std::string path) : path_(std::move(path)) {}

  // $MIXEDSDP_STORE, or mixedsdp_results.jsonl in the working directory.
  static ResultsStore open_default() {
    const char* env = std::getenv("MIXEDSDP_STORE");
    return ResultsStore(env && *env ? env : "mixedsdp_results.jsonl");
  }

  const std::string& path() const { return path_; }

  void append(const BoundRecord& r) {
    const std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot open results store " + path_);
    out << to_json(r).dump() << "\n";
    out.flush();
    if (!out) throw Error("write to results store failed: " + path_);
  }

  // Every record in file order; a missing file is an empty store.
  std::vector<BoundRecord> all() const {
    const std::lock_guard<std::mutex> lock(mutex_);
    std::vector<BoundRecord> out;
    std::ifstream in(path_);
    if (!in) return out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path_ + ":" + std::to_string(number) + ": " + e.what());
      }
      out.push_back(record_from_json(j));
    }
    return out;
  }

  std::map<StoreKey, BoundRecord> latest_all() const {
    std::map<StoreKey, BoundRecord> out;
    for (auto& r : all()) out.insert_or_assign(key_of(r.spec), r);
    return out;
  }

  std::optional<BoundRecord> latest(const ProblemSpec& spec) const {
    auto records = latest_all();
    auto it = records.find(key_of(spec));
    if (it == records.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::string path_;
  mutable std::mutex mutex_;
};

}  // namespace mixedsdp
