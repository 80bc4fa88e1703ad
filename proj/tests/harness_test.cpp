#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "crvsat/generators.hpp"
#include "crvsat/harness.hpp"
#include "crvsat/suite.hpp"
#include "gtest/gtest.h"

using namespace crvsat;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("crvsat-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

fs::path write_cnf(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

ReportRow row(const std::string& name, Outcome o, double t) {
  ReportRow r;
  r.instance = name;
  r.outcome = o;
  r.wall_time = t;
  return r;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(CRVSAT_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Par2Test, UnsolvedCountTwiceTheTimeout) {
  const std::vector<ReportRow> rows{row("a", Outcome::Sat, 10), row("b", Outcome::Unsat, 20),
                                    row("c", Outcome::Unknown, 3)};
  EXPECT_DOUBLE_EQ(par2(rows, 100), 230.0);
}

TEST(Par2Test, AllSolvedIsTotalRuntime) {
  const std::vector<ReportRow> rows{row("a", Outcome::Sat, 1.5), row("b", Outcome::Unsat, 2.5)};
  EXPECT_DOUBLE_EQ(par2(rows, 100), 4.0);
  ReportRow broken = row("c", Outcome::Sat, 1);
  broken.error = "line 1: bad";
  const std::vector<ReportRow> with_error{broken};
  EXPECT_DOUBLE_EQ(par2(with_error, 50), 100.0);
}

TEST(RunInstanceTest, UnsatSatAndBudget) {
  TempDir dir("run");
  RunSpec spec;
  spec.timeout_seconds = 30;
  const auto unsat = run_instance(spec, write_cnf(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n"));
  EXPECT_EQ(unsat.outcome, Outcome::Unsat);
  EXPECT_TRUE(unsat.solved());

  const auto sat = run_instance(spec, write_cnf(dir.path(), "s.cnf", "p cnf 2 1\n1 2 0\n"));
  EXPECT_EQ(sat.outcome, Outcome::Sat);
  EXPECT_TRUE(sat.model_verified);

  std::ostringstream php;
  write_dimacs(php, gen::pigeonhole(9, 8));
  spec.solver.conflict_budget = 10;
  const auto budget = run_instance(spec, write_cnf(dir.path(), "php.cnf", php.str()));
  EXPECT_EQ(budget.outcome, Outcome::Unknown);
  EXPECT_FALSE(budget.solved());
  EXPECT_TRUE(budget.error.empty());
}

TEST(RunInstanceTest, ParseErrorBecomesRowError) {
  TempDir dir("bad");
  RunSpec spec;
  const auto r = run_instance(spec, write_cnf(dir.path(), "bad.cnf", "p cnf 1 1\n2 0\n"));
  EXPECT_FALSE(r.error.empty());
  EXPECT_FALSE(r.solved());
  EXPECT_NE(r.error.find("line 2"), std::string::npos);
}

TEST(RunInstanceTest, ProofKeptOnlyForUnsat) {
  TempDir dir("proof");
  RunSpec spec;
  spec.proof_dir = dir.path() / "proofs";
  run_instance(spec, write_cnf(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n"), "base");
  run_instance(spec, write_cnf(dir.path(), "s.cnf", "p cnf 1 1\n1 0\n"), "base");
  EXPECT_TRUE(fs::exists(dir.path() / "proofs" / "u.base.drat"));
  EXPECT_FALSE(fs::exists(dir.path() / "proofs" / "s.base.drat"));
}

TEST(ListInstancesTest, EmptyDirectoryThrows) {
  TempDir dir("empty");
  EXPECT_THROW(list_instances(dir.path()), IoError);
  EXPECT_THROW(list_instances(dir.path() / "missing"), IoError);
  write_cnf(dir.path(), "b.cnf", "p cnf 1 1\n1 0\n");
  write_cnf(dir.path(), "a.cnf", "p cnf 1 1\n1 0\n");
  write_cnf(dir.path(), "notes.txt", "x");
  const auto found = list_instances(dir.path());
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].filename(), "a.cnf");
}

TEST(ReportTest, CsvHasHeaderAndOneRowPerInstance) {
  TempDir dir("csv");
  RunSpec spec;
  spec.instances = {write_cnf(dir.path(), "one.cnf", "p cnf 2 2\n1 2 0\n-1 0\n")};
  const auto report = run_benchmark(spec);
  const std::string csv = rows_csv(report.rows);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(line.begin(), line.end(), ','));
  EXPECT_NE(header.find("count_10"), std::string::npos);
  EXPECT_EQ(header.find("wall_time"), std::string::npos);
  EXPECT_EQ(line.rfind("one.cnf,", 0), 0u);
  EXPECT_FALSE(std::getline(in, line));
}

TEST(ReportTest, StatsJsonUsesNullForAbsentValues) {
  RunStats st;
  st.count_b.assign(11, 0);
  const auto j = stats_to_json(st);
  EXPECT_TRUE(j["aLBD_mc"].is_null());
  EXPECT_EQ(j["d"], 0);
  EXPECT_EQ(j["schema_version"], kStatsSchemaVersion);
  EXPECT_TRUE(j.contains("count_2"));
  EXPECT_TRUE(j.contains("count_10"));
}

TEST(ReportTest, OutputsAreDeterministic) {
  TempDir dir("det");
  const auto suite = suite::crafted(3);
  std::vector<fs::path> paths;
  for (std::size_t i = 0; i < 4; ++i) {
    std::ostringstream text;
    write_dimacs(text, suite[i + 4].formula);
    paths.push_back(write_cnf(dir.path(), suite[i + 4].name + ".cnf", text.str()));
  }
  RunSpec spec;
  spec.instances = paths;
  spec.solver.seed = 7;
  const auto a = run_benchmark(spec);
  spec.jobs = 3;
  const auto b = run_benchmark(spec);
  EXPECT_EQ(rows_csv(a.rows), rows_csv(b.rows));
  EXPECT_EQ(stats_to_json(a.rows[0].stats, false).dump(), stats_to_json(b.rows[0].stats, false).dump());
}

TEST(ComparisonTest, TableAndDeltaCurve) {
  BenchmarkReport base{"baseline", 10.0, {row("a", Outcome::Sat, 1), row("b", Outcome::Unknown, 10)}};
  BenchmarkReport crvr{"crvr", 10.0, {row("a", Outcome::Sat, 2), row("b", Outcome::Unsat, 4)}};
  const Comparison cmp = compare(base, crvr);
  EXPECT_TRUE(cmp.consistent());
  const std::string table = comparison_table(cmp);
  EXPECT_NE(table.find("| Systems | SAT | UNSAT | Combined | PAR-2 |"), std::string::npos);
  EXPECT_NE(table.find("| crvr | 1 (+0) | 1 (+1) | 2 (+1) | 6.00 |"), std::string::npos);
  EXPECT_NE(table.find("| baseline | 1 | 0 | 1 | 21.00 |"), std::string::npos);

  const auto curve = solved_delta_curve(cmp);
  ASSERT_FALSE(curve.empty());
  EXPECT_EQ(curve.front(), (std::pair<double, double>{0.0, 0.0}));
  EXPECT_EQ(curve.back().second, 1.0);
  EXPECT_DOUBLE_EQ(cmp.deltas[1].time_delta, 4.0 - 20.0);
}

TEST(ComparisonTest, ContradictionIsReported) {
  BenchmarkReport base{"baseline", 10.0, {row("a", Outcome::Sat, 1)}};
  BenchmarkReport crvr{"crvr", 10.0, {row("a", Outcome::Unsat, 1)}};
  EXPECT_FALSE(compare(base, crvr).consistent());
  BenchmarkReport other{"crvr", 10.0, {row("z", Outcome::Sat, 1)}};
  EXPECT_THROW(compare(base, other), ContractViolation);
}

TEST(PlotTest, BurstHistogramCoversTrackedRange) {
  ReportRow r = row("a", Outcome::Sat, 1);
  r.stats.count_b.assign(11, 0);
  for (std::uint32_t b = 2; b <= 10; ++b) r.stats.count_b[b] = 11 - b;
  const std::vector<ReportRow> rows{r};
  const std::string svg = plot_burst_histogram(rows);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  for (int b = 2; b <= 10; ++b) {
    EXPECT_NE(svg.find(">" + std::to_string(b) + "<"), std::string::npos) << b;
  }
}

TEST(PlotTest, EmitComparisonWritesAllArtifacts) {
  TempDir dir("emit");
  BenchmarkReport base{"baseline", 10.0, {row("a", Outcome::Sat, 1)}};
  BenchmarkReport crvr{"crvr", 10.0, {row("a", Outcome::Sat, 2)}};
  ReportOutputs out;
  out.csv = dir.path() / "rows.csv";
  out.json = dir.path() / "report.json";
  out.plots = dir.path() / "plots";
  emit_report(compare(base, crvr), out);
  for (const char* f : {"rows.csv", "rows.timing.csv", "rows.deltas.csv", "rows.table.md",
                        "report.json", "plots/clause_quality.svg", "plots/burst_histogram.svg",
                        "plots/proximity.svg", "plots/solved_delta.svg", "plots/table.md"}) {
    EXPECT_TRUE(fs::exists(dir.path() / f)) << f;
  }
  std::ifstream j(dir.path() / "report.json");
  const auto parsed = nlohmann::json::parse(j);
  EXPECT_EQ(parsed["deltas"].size(), 1u);
}

TEST(CliTest, ExitCodes) {
  TempDir dir("cli");
  const auto sat = write_cnf(dir.path(), "s.cnf", "p cnf 2 1\n1 2 0\n");
  const auto unsat = write_cnf(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  const auto bad = write_cnf(dir.path(), "b.cnf", "p cnf 1 1\n5 0\n");
  std::ostringstream php;
  write_dimacs(php, gen::pigeonhole(9, 8));
  const auto hard = write_cnf(dir.path(), "h.cnf", php.str());
  EXPECT_EQ(run_cli("solve " + sat.string()), 10);
  EXPECT_EQ(run_cli("solve --crvr " + unsat.string()), 20);
  EXPECT_EQ(run_cli("solve --conflicts 3 " + hard.string()), 0);
  EXPECT_EQ(run_cli("solve " + bad.string()), 1);
  EXPECT_NE(run_cli("solve --q 2 " + sat.string()), 0);

  const auto stats = dir.path() / "stats.json";
  EXPECT_EQ(run_cli("solve --stats " + stats.string() + " " + unsat.string()), 20);
  std::ifstream in(stats);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["outcome"], "UNSAT");
}
