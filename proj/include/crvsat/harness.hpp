#pragma once

// Benchmark harness: runs instances under a budget, scores them with PAR-2,
// pairs baseline and CRVR runs, and writes CSV/JSON/SVG reports.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "crvsat/cnf.hpp"
#include "crvsat/errors.hpp"
#include "crvsat/solver.hpp"
#include "crvsat/stats_io.hpp"
#include "crvsat/svg.hpp"
#include "json.hpp"

namespace crvsat {

namespace fs = std::filesystem;

struct RunSpec {
  std::vector<fs::path> instances;
  double timeout_seconds = 60.0;
  SolverConfig solver;  // budget and proof fields are set per run
  std::optional<fs::path> proof_dir;
  unsigned jobs = 1;

  void validate() const {
    require(timeout_seconds > 0.0, "timeout must be positive");
    require(jobs >= 1, "worker count must be at least 1");
    solver.validate();
  }
};

struct ReportRow {
  std::string instance;
  std::string config;
  Outcome outcome = Outcome::Unknown;
  double wall_time = 0.0;
  bool model_verified = false;
  std::string error;  // non-empty when the instance could not be run
  RunStats stats;

  bool solved() const { return error.empty() && outcome != Outcome::Unknown; }
};

// Sum of runtimes of solved rows plus 2 * timeout per unsolved row.
inline double par2(std::span<const ReportRow> rows, double timeout) {
  double total = 0.0;
  for (const auto& r : rows) total += r.solved() ? r.wall_time : 2.0 * timeout;
  return total;
}

struct Aggregate {
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::size_t unsolved = 0;
  std::size_t errors = 0;
  double par2 = 0.0;

  std::size_t combined() const { return sat + unsat; }
};

struct BenchmarkReport {
  std::string config;
  double timeout = 0.0;
  std::vector<ReportRow> rows;

  Aggregate aggregate() const {
    Aggregate a;
    for (const auto& r : rows) {
      if (!r.error.empty()) ++a.errors;
      if (!r.solved()) ++a.unsolved;
      else if (r.outcome == Outcome::Sat) ++a.sat;
      else ++a.unsat;
    }
    a.par2 = par2(rows, timeout);
    return a;
  }
};

inline std::vector<fs::path> list_instances(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".cnf" || ext == ".dimacs") out.push_back(entry.path());
  }
  if (out.empty()) throw IoError("no .cnf instances in " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

inline Formula read_formula(const fs::path& path, std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_dimacs(in, warnings);
}

inline ReportRow run_instance(const RunSpec& spec, const fs::path& instance,
                              const std::string& config = "default") {
  ReportRow row;
  row.instance = instance.filename().string();
  row.config = config;
  Formula f;
  try {
    f = read_formula(instance);
  } catch (const std::exception& e) {
    row.error = e.what();
    return row;
  }

  SolverConfig cfg = spec.solver;
  cfg.time_budget_seconds = spec.timeout_seconds;
  std::ofstream proof;
  fs::path proof_path;
  if (spec.proof_dir) {
    fs::create_directories(*spec.proof_dir);
    proof_path = *spec.proof_dir / (instance.stem().string() + "." + config + ".drat");
    proof.open(proof_path);
    if (!proof) throw IoError("cannot write " + proof_path.string());
    cfg.proof = &proof;
  } else {
    cfg.proof = nullptr;
  }

  Solver solver(cfg);
  const SolveResult res = solver.solve(f);
  row.outcome = res.outcome;
  row.stats = res.stats;
  row.wall_time = res.stats.wall_time;
  row.model_verified = res.model && check_model(f, *res.model);
  if (spec.proof_dir) {
    proof.close();
    if (res.outcome != Outcome::Unsat) fs::remove(proof_path);
  }
  return row;
}

inline BenchmarkReport run_benchmark(const RunSpec& spec, const std::string& config = "default") {
  spec.validate();
  require(!spec.instances.empty(), "benchmark without instances");
  BenchmarkReport report;
  report.config = config;
  report.timeout = spec.timeout_seconds;
  report.rows.resize(spec.instances.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < spec.instances.size();) {
      report.rows[i] = run_instance(spec, spec.instances[i], config);
    }
  };
  const unsigned n = std::min<std::size_t>(spec.jobs, spec.instances.size());
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return report;
}

struct InstanceDelta {
  std::string instance;
  Outcome baseline = Outcome::Unknown;
  Outcome crvr = Outcome::Unknown;
  double time_delta = 0.0;  // crvr - baseline, unsolved counted at 2 * timeout
  bool contradiction = false;
};

struct Comparison {
  BenchmarkReport baseline;
  BenchmarkReport crvr;
  std::vector<InstanceDelta> deltas;

  bool consistent() const {
    return std::none_of(deltas.begin(), deltas.end(),
                        [](const InstanceDelta& d) { return d.contradiction; });
  }
  bool same_instances() const {
    if (baseline.rows.size() != crvr.rows.size()) return false;
    for (std::size_t i = 0; i < baseline.rows.size(); ++i) {
      if (baseline.rows[i].instance != crvr.rows[i].instance) return false;
    }
    return true;
  }
};

inline Comparison compare(BenchmarkReport baseline, BenchmarkReport crvr) {
  Comparison cmp{std::move(baseline), std::move(crvr), {}};
  require(cmp.same_instances(), "paired reports must cover the same instances");
  const double timeout = cmp.baseline.timeout;
  for (std::size_t i = 0; i < cmp.baseline.rows.size(); ++i) {
    const auto& a = cmp.baseline.rows[i];
    const auto& b = cmp.crvr.rows[i];
    InstanceDelta d;
    d.instance = a.instance;
    d.baseline = a.solved() ? a.outcome : Outcome::Unknown;
    d.crvr = b.solved() ? b.outcome : Outcome::Unknown;
    const double ta = a.solved() ? a.wall_time : 2.0 * timeout;
    const double tb = b.solved() ? b.wall_time : 2.0 * timeout;
    d.time_delta = tb - ta;
    d.contradiction = a.solved() && b.solved() && a.outcome != b.outcome;
    cmp.deltas.push_back(d);
  }
  return cmp;
}

inline Comparison run_comparison(const RunSpec& spec) {
  RunSpec base = spec;
  base.solver.crvr_enabled = false;
  RunSpec with = spec;
  with.solver.crvr_enabled = true;
  return compare(run_benchmark(base, "baseline"), run_benchmark(with, "crvr"));
}

// Solved-count table in the layout: Systems | SAT | UNSAT | Combined | PAR-2,
// with the CRVR row carrying signed deltas against the baseline.
inline std::string comparison_table(const Comparison& cmp) {
  const Aggregate a = cmp.baseline.aggregate();
  const Aggregate b = cmp.crvr.aggregate();
  auto signed_delta = [](long d) {
    return std::string(" (") + (d >= 0 ? "+" : "") + std::to_string(d) + ")";
  };
  auto par = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::ostringstream o;
  o << "| Systems | SAT | UNSAT | Combined | PAR-2 |\n";
  o << "|---|---|---|---|---|\n";
  o << "| baseline | " << a.sat << " | " << a.unsat << " | " << a.combined() << " | "
    << par(a.par2) << " |\n";
  o << "| crvr | " << b.sat << signed_delta(long(b.sat) - long(a.sat)) << " | " << b.unsat
    << signed_delta(long(b.unsat) - long(a.unsat)) << " | " << b.combined()
    << signed_delta(long(b.combined()) - long(a.combined())) << " | " << par(b.par2) << " |\n";
  return o.str();
}

// Rows without wall-clock fields: identical specs give identical bytes.
inline std::string rows_csv(std::span<const ReportRow> rows) {
  std::ostringstream o;
  RunStats blank;
  blank.count_b.assign(rows.empty() ? 11 : rows.front().stats.count_b.size(), 0);
  o << "instance,config,error,model_verified," << stats_csv_header(blank, false) << '\n';
  for (const auto& r : rows) {
    RunStats st = r.stats;
    if (st.count_b.empty()) st.count_b = blank.count_b;
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    o << r.instance << ',' << r.config << ',' << err << ',' << (r.model_verified ? 1 : 0) << ','
      << stats_csv_row(st, false) << '\n';
  }
  return o.str();
}

inline std::string timing_csv(std::span<const ReportRow> rows) {
  std::ostringstream o;
  o << "instance,config,outcome,wall_time\n";
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.wall_time);
    o << r.instance << ',' << r.config << ',' << (r.solved() ? to_string(r.outcome) : "UNKNOWN")
      << ',' << buf << '\n';
  }
  return o.str();
}

inline std::string deltas_csv(const Comparison& cmp) {
  std::ostringstream o;
  o << "instance,baseline,crvr,time_delta,contradiction\n";
  for (const auto& d : cmp.deltas) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", d.time_delta);
    o << d.instance << ',' << to_string(d.baseline) << ',' << to_string(d.crvr) << ',' << buf
      << ',' << (d.contradiction ? 1 : 0) << '\n';
  }
  return o.str();
}

inline nlohmann::ordered_json report_json(const BenchmarkReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kStatsSchemaVersion;
  j["config"] = r.config;
  j["timeout"] = r.timeout;
  const Aggregate a = r.aggregate();
  j["aggregate"] = {{"sat", a.sat},           {"unsat", a.unsat}, {"combined", a.combined()},
                    {"unsolved", a.unsolved}, {"errors", a.errors}, {"par2", a.par2}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json x;
    x["instance"] = row.instance;
    x["config"] = row.config;
    x["error"] = row.error;
    x["model_verified"] = row.model_verified;
    x["wall_time"] = row.wall_time;
    x["stats"] = stats_to_json(row.stats);
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline nlohmann::ordered_json comparison_json(const Comparison& cmp) {
  nlohmann::ordered_json j;
  j["schema_version"] = kStatsSchemaVersion;
  j["baseline"] = report_json(cmp.baseline);
  j["crvr"] = report_json(cmp.crvr);
  auto deltas = nlohmann::ordered_json::array();
  for (const auto& d : cmp.deltas) {
    deltas.push_back({{"instance", d.instance},
                      {"baseline", to_string(d.baseline)},
                      {"crvr", to_string(d.crvr)},
                      {"time_delta", d.time_delta},
                      {"contradiction", d.contradiction}});
  }
  j["deltas"] = std::move(deltas);
  const Aggregate a = cmp.baseline.aggregate(), b = cmp.crvr.aggregate();
  j["solved_delta"] = {{"sat", long(b.sat) - long(a.sat)},
                       {"unsat", long(b.unsat) - long(a.unsat)},
                       {"combined", long(b.combined()) - long(a.combined())},
                       {"par2", b.par2 - a.par2}};
  return j;
}

// ---- plots ----------------------------------------------------------------

// Per-instance aLBD_sc, aLBD_mc and avg_min_LBD_mc on a log axis, instances
// ordered by aLBD_mc.
inline std::string plot_clause_quality(std::span<const ReportRow> rows) {
  std::vector<const RunStats*> usable;
  for (const auto& r : rows) {
    if (r.error.empty() && r.stats.albd_sc() && r.stats.albd_mc()) usable.push_back(&r.stats);
  }
  std::stable_sort(usable.begin(), usable.end(), [](const RunStats* a, const RunStats* b) {
    return *a->albd_mc() < *b->albd_mc();
  });
  svg::Series sc{"aLBD_sc", "#ee7733", {}}, mc{"aLBD_mc", "#0077bb", {}},
      mn{"avg_min_LBD_mc", "#009988", {}};
  for (std::size_t i = 0; i < usable.size(); ++i) {
    const double x = static_cast<double>(i + 1);
    sc.points.emplace_back(x, *usable[i]->albd_sc());
    mc.points.emplace_back(x, *usable[i]->albd_mc());
    mn.points.emplace_back(x, *usable[i]->avg_min_lbd_mc());
  }
  return svg::Chart("Clause quality in conflict generating decisions", "instance", "LBD (log)")
      .log_y()
      .add(std::move(mc))
      .add(std::move(sc))
      .add(std::move(mn))
      .render();
}

// Mean count_b over instances for b = 2..10, log axis.
inline std::string plot_burst_histogram(std::span<const ReportRow> rows, std::uint32_t max_b = 10) {
  std::vector<svg::Bar> bars;
  std::size_t n = 0;
  std::vector<double> sums(max_b + 1, 0.0);
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    ++n;
    for (std::uint32_t b = 2; b <= max_b; ++b) sums[b] += static_cast<double>(r.stats.count(b));
  }
  for (std::uint32_t b = 2; b <= max_b; ++b) {
    bars.push_back({std::to_string(b), n ? sums[b] / static_cast<double>(n) : 0.0});
  }
  return svg::Chart("Mean count of mc decisions by burst size", "burst b", "mean count_b (log)")
      .log_y()
      .bars(std::move(bars), "#4477aa")
      .render();
}

// Per-instance mean cp over mc and over sc conflict sequences.
inline std::string plot_proximity(std::span<const ReportRow> rows) {
  svg::Series mc{"cp mc", "#0077bb", {}}, sc{"cp sc", "#ee7733", {}};
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (!r.error.empty() || !r.stats.mean_cp_mc() || !r.stats.mean_cp_sc()) continue;
    ++i;
    mc.points.emplace_back(static_cast<double>(i), *r.stats.mean_cp_mc());
    sc.points.emplace_back(static_cast<double>(i), *r.stats.mean_cp_sc());
  }
  return svg::Chart("ConflictsProximity of reason clauses: mc vs sc", "instance", "mean cp")
      .y_range(0.0, 1.0)
      .add(std::move(mc))
      .add(std::move(sc))
      .render();
}

// Step curve of (#solved by crvr) - (#solved by baseline) up to time t.
inline std::vector<std::pair<double, double>> solved_delta_curve(const Comparison& cmp) {
  std::vector<std::pair<double, int>> events;
  for (const auto& r : cmp.crvr.rows) {
    if (r.solved()) events.emplace_back(r.wall_time, +1);
  }
  for (const auto& r : cmp.baseline.rows) {
    if (r.solved()) events.emplace_back(r.wall_time, -1);
  }
  std::sort(events.begin(), events.end());
  std::vector<std::pair<double, double>> curve{{0.0, 0.0}};
  int level = 0;
  for (const auto& [t, step] : events) {
    level += step;
    if (curve.back().first == t) curve.back().second = level;
    else curve.emplace_back(t, level);
  }
  curve.emplace_back(cmp.baseline.timeout, level);
  return curve;
}

inline std::string plot_solved_delta(const Comparison& cmp) {
  svg::Series s{"crvr - baseline", "#0077bb", solved_delta_curve(cmp), true};
  svg::Series zero{"zero", "#999999", {{0.0, 0.0}, {cmp.baseline.timeout, 0.0}}};
  return svg::Chart("Solved-instance difference over time", "time (s)", "solved(crvr) - solved(baseline)")
      .add(std::move(s))
      .add(std::move(zero))
      .render();
}

inline void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw IoError("cannot write " + path.string());
}

struct ReportOutputs {
  std::optional<fs::path> csv;
  std::optional<fs::path> json;
  std::optional<fs::path> plots;
};

inline fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

inline void emit_report(const BenchmarkReport& report, const ReportOutputs& out) {
  if (out.csv) {
    write_file(*out.csv, rows_csv(report.rows));
    write_file(sibling(*out.csv, ".timing.csv"), timing_csv(report.rows));
  }
  if (out.json) write_file(*out.json, report_json(report).dump(2) + "\n");
  if (out.plots) {
    write_file(*out.plots / "clause_quality.svg", plot_clause_quality(report.rows));
    write_file(*out.plots / "burst_histogram.svg", plot_burst_histogram(report.rows));
    write_file(*out.plots / "proximity.svg", plot_proximity(report.rows));
  }
}

inline void emit_report(const Comparison& cmp, const ReportOutputs& out) {
  std::vector<ReportRow> all = cmp.baseline.rows;
  all.insert(all.end(), cmp.crvr.rows.begin(), cmp.crvr.rows.end());
  if (out.csv) {
    write_file(*out.csv, rows_csv(all));
    write_file(sibling(*out.csv, ".timing.csv"), timing_csv(all));
    write_file(sibling(*out.csv, ".deltas.csv"), deltas_csv(cmp));
    write_file(sibling(*out.csv, ".table.md"), comparison_table(cmp));
  }
  if (out.json) write_file(*out.json, comparison_json(cmp).dump(2) + "\n");
  if (out.plots) {
    write_file(*out.plots / "clause_quality.svg", plot_clause_quality(cmp.baseline.rows));
    write_file(*out.plots / "burst_histogram.svg", plot_burst_histogram(cmp.baseline.rows));
    write_file(*out.plots / "proximity.svg", plot_proximity(cmp.baseline.rows));
    write_file(*out.plots / "solved_delta.svg", plot_solved_delta(cmp));
    write_file(*out.plots / "table.md", comparison_table(cmp));
  }
}

}  // namespace crvsat
