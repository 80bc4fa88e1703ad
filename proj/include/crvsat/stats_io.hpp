#pragma once

// Flat serialization of RunStats. Schema version 1: field names follow the
// statistic names (d, c, s, m, c_s, c_m, PDSC, GLR, aLBD_mc, count_2, ...).
// Ratios with a zero denominator are null in JSON and empty in CSV.

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crvsat/analytics.hpp"
#include "json.hpp"

namespace crvsat {

inline constexpr int kStatsSchemaVersion = 1;

using StatValue = std::variant<std::uint64_t, std::optional<double>, std::string>;
using StatField = std::pair<std::string, StatValue>;

// Every field in schema order. wall_time is last so deterministic outputs
// can drop it.
inline std::vector<StatField> stat_fields(const RunStats& st, bool with_time = true) {
  std::vector<StatField> f;
  auto u = [&](const char* name, std::uint64_t v) { f.emplace_back(name, v); };
  auto r = [&](const char* name, std::optional<double> v) { f.emplace_back(name, v); };
  f.emplace_back("outcome", std::string(to_string(st.outcome)));
  u("d", st.d);
  u("c", st.c);
  u("s", st.s);
  u("m", st.m);
  u("c_s", st.c_s);
  u("c_m", st.c_m);
  u("g", st.glue);
  u("sumLBD", st.sum_lbd);
  u("sumLBD_sc", st.sum_lbd_sc);
  u("sumLBD_mc", st.sum_lbd_mc);
  u("sum_min_LBD_mc", st.sum_min_lbd_mc);
  r("PDSC", st.pdsc());
  r("PDMC", st.pdmc());
  r("GLR", st.glr());
  r("G2L", st.g2l());
  r("aLBD", st.albd());
  r("aLBD_sc", st.albd_sc());
  r("aLBD_mc", st.albd_mc());
  r("avg_min_LBD_mc", st.avg_min_lbd_mc());
  r("avgBurst", st.avg_burst());
  u("maxBurst", st.max_burst);
  for (std::uint32_t b = 2; b <= st.max_tracked_burst(); ++b) {
    u(("count_" + std::to_string(b)).c_str(), st.count(b));
  }
  u("bursts_above_cap_conflicts", st.burst_sum_untracked);
  r("mean_cp_mc", st.mean_cp_mc());
  r("mean_cp_sc", st.mean_cp_sc());
  u("n_cp_mc", st.cp_count(DecisionKind::Multi));
  u("n_cp_sc", st.cp_count(DecisionKind::Single));
  u("chain_pairs", st.chain_pairs);
  u("chain_violations", st.chain_violations);
  u("chain_level_violations", st.chain_level_violations);
  u("propagations", st.propagations);
  u("restarts", st.restarts);
  u("reductions", st.reductions);
  u("deleted_clauses", st.deleted_clauses);
  u("poor_mc_decisions", st.poor_mc_decisions);
  u("crv_flags", st.crv_flags);
  u("crv_reductions", st.crv_reductions);
  u("invariant_violations", st.invariant_violations);
  if (with_time) r("wall_time", st.wall_time);
  return f;
}

inline nlohmann::ordered_json stats_to_json(const RunStats& st, bool with_time = true) {
  nlohmann::ordered_json j;
  j["schema_version"] = kStatsSchemaVersion;
  for (auto& [name, value] : stat_fields(st, with_time)) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::optional<double>>) {
            if (v) j[name] = *v;
            else j[name] = nullptr;
          } else {
            j[name] = v;
          }
        },
        value);
  }
  return j;
}

// Doubles print with 17 significant digits so rows round-trip exactly.
inline std::string format_stat(const StatValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (!v) return "";
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", *v);
          return buf;
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      value);
}

inline std::string stats_csv_header(const RunStats& st, bool with_time = true) {
  std::string out;
  for (const auto& [name, value] : stat_fields(st, with_time)) {
    if (!out.empty()) out += ',';
    out += name;
  }
  return out;
}

inline std::string stats_csv_row(const RunStats& st, bool with_time = true) {
  std::string out;
  bool first = true;
  for (const auto& [name, value] : stat_fields(st, with_time)) {
    if (!first) out += ',';
    first = false;
    out += format_stat(value);
  }
  return out;
}

}  // namespace crvsat
