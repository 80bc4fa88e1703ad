// crvsat command line: solve single instances, run benchmark directories,
// and generate the desk-scale suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "crvsat/harness.hpp"
#include "crvsat/solver.hpp"
#include "crvsat/stats_io.hpp"
#include "crvsat/suite.hpp"

namespace {

using namespace crvsat;

struct CommonOptions {
  bool crvr = false;
  std::uint32_t k = 50;
  double q = 0.1;
  double timeout = 60.0;
  std::optional<std::uint64_t> conflicts;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_flag("--crvr", o.crvr, "Enable common reason variable reduction");
  app->add_option("--k", o.k, "CRVR window of recent learned clauses")->check(CLI::PositiveNumber);
  app->add_option("--q", o.q, "CRVR activity reduction factor, 0 < Q < 1")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--timeout", o.timeout, "Time budget per instance in seconds")
      ->check(CLI::PositiveNumber);
  app->add_option("--conflicts", o.conflicts, "Conflict budget per instance");
  app->add_option("--seed", o.seed, "Seed for initial activities (0 = none)");
}

SolverConfig to_config(const CommonOptions& o) {
  SolverConfig cfg;
  cfg.crvr_enabled = o.crvr;
  cfg.crvr_k = o.k;
  cfg.crvr_q = o.q;
  cfg.seed = o.seed;
  cfg.conflict_budget = o.conflicts;
  cfg.time_budget_seconds = o.timeout;
  return cfg;
}

void print_model(const Model& m) {
  std::string line = "v";
  for (Var v = 1; v <= m.num_vars(); ++v) {
    const std::string lit = " " + std::to_string(m.value(v) ? long(v) : -long(v));
    if (line.size() + lit.size() > 78) {
      std::cout << line << '\n';
      line = "v";
    }
    line += lit;
  }
  std::cout << line << " 0\n";
}

int run_solve(const std::string& file, const CommonOptions& o,
              const std::optional<std::string>& proof_file,
              const std::optional<std::string>& stats_file) {
  std::vector<std::string> warnings;
  Formula f;
  try {
    f = read_formula(file, &warnings);
  } catch (const std::exception& e) {
    std::cerr << "c error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& w : warnings) std::cout << "c warning: " << w << '\n';
  std::cout << "c " << f.num_vars << " variables, " << f.clauses.size() << " clauses\n";

  SolverConfig cfg = to_config(o);
  std::ofstream proof;
  if (proof_file) {
    proof.open(*proof_file);
    if (!proof) {
      std::cerr << "c error: cannot write " << *proof_file << '\n';
      return 1;
    }
    cfg.proof = &proof;
  }
  SolveResult res;
  try {
    Solver solver(cfg);
    res = solver.solve(f);
  } catch (const IoError& e) {
    std::cerr << "c error: " << e.what() << '\n';
    return 1;
  }

  const RunStats& st = res.stats;
  std::printf("c decisions %llu conflicts %llu sc %llu mc %llu time %.3fs\n",
              (unsigned long long)st.d, (unsigned long long)st.c, (unsigned long long)st.s,
              (unsigned long long)st.m, st.wall_time);
  if (stats_file) {
    const bool csv = stats_file->size() >= 4 && stats_file->substr(stats_file->size() - 4) == ".csv";
    write_file(*stats_file, csv ? stats_csv_header(st) + "\n" + stats_csv_row(st) + "\n"
                                : stats_to_json(st).dump(2) + "\n");
  }
  switch (res.outcome) {
    case Outcome::Sat:
      std::cout << "s SATISFIABLE\n";
      print_model(*res.model);
      return 10;
    case Outcome::Unsat:
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    case Outcome::Unknown:
      std::cout << "s UNKNOWN\n";
      return 0;
  }
  return 0;
}

void print_summary(const BenchmarkReport& r) {
  const Aggregate a = r.aggregate();
  std::printf("%s: SAT %zu UNSAT %zu combined %zu unsolved %zu errors %zu PAR-2 %.2f\n",
              r.config.c_str(), a.sat, a.unsat, a.combined(), a.unsolved, a.errors, a.par2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CDCL SAT solver with conflict analytics and CRVR branching"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::string solve_file;
  std::optional<std::string> proof_file, stats_file;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one DIMACS CNF instance");
  solve_cmd->add_option("file", solve_file, "DIMACS CNF file")->required();
  add_common(solve_cmd, solve_opts);
  solve_cmd->add_option("--proof", proof_file, "Write a DRAT proof to FILE");
  solve_cmd->add_option("--stats", stats_file, "Write run statistics (JSON, or CSV by extension)");

  CommonOptions bench_opts;
  std::string bench_dir;
  bool compare_crvr = false;
  unsigned jobs = 1;
  std::optional<std::string> csv, json, plots, proof_dir;
  auto* bench_cmd = app.add_subcommand("bench", "Run every .cnf file in a directory");
  bench_cmd->add_option("dir", bench_dir, "Directory of DIMACS CNF files")->required();
  add_common(bench_cmd, bench_opts);
  bench_cmd->add_flag("--compare-crvr", compare_crvr, "Run baseline and CRVR and compare them");
  bench_cmd->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", csv, "Per-instance statistics CSV");
  bench_cmd->add_option("--json", json, "Full report JSON");
  bench_cmd->add_option("--plots", plots, "Directory for SVG plots");
  bench_cmd->add_option("--proof-dir", proof_dir, "Keep DRAT proofs of UNSAT runs here");

  std::string gen_dir;
  std::size_t per_side = 25;
  std::uint64_t gen_seed = 2021;
  auto* gen_cmd = app.add_subcommand("gen", "Write the desk-scale benchmark suite");
  gen_cmd->add_option("dir", gen_dir, "Output directory")->required();
  gen_cmd->add_option("--per-side", per_side, "uf100 and uuf100 instances each");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve_file, solve_opts, proof_file, stats_file);

    if (*bench_cmd) {
      RunSpec spec;
      spec.instances = list_instances(bench_dir);
      spec.timeout_seconds = bench_opts.timeout;
      spec.solver = to_config(bench_opts);
      spec.jobs = jobs;
      if (proof_dir) spec.proof_dir = *proof_dir;
      ReportOutputs out;
      if (csv) out.csv = *csv;
      if (json) out.json = *json;
      if (plots) out.plots = *plots;
      if (compare_crvr) {
        const Comparison cmp = run_comparison(spec);
        print_summary(cmp.baseline);
        print_summary(cmp.crvr);
        std::cout << comparison_table(cmp);
        if (!cmp.consistent()) std::cout << "WARNING: contradicting outcomes between configurations\n";
        emit_report(cmp, out);
      } else {
        const BenchmarkReport report = run_benchmark(spec, bench_opts.crvr ? "crvr" : "baseline");
        print_summary(report);
        emit_report(report, out);
      }
      return 0;
    }

    if (*gen_cmd) {
      const auto paths = suite::write_suite(suite::desk_suite(per_side, gen_seed), gen_dir);
      std::cout << "wrote " << paths.size() << " instances to " << gen_dir << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
