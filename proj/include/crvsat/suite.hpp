#pragma once

// The desk-scale benchmark suite: uf100/uuf100-style random 3-SAT (100
// variables, 430 clauses, split by satisfiability) plus crafted families.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "crvsat/cnf.hpp"
#include "crvsat/errors.hpp"
#include "crvsat/generators.hpp"
#include "crvsat/solver.hpp"

namespace crvsat::suite {

struct NamedFormula {
  std::string name;
  Formula formula;
};

inline std::string numbered(const std::string& prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return prefix + buf;
}

// Random 3-SAT at 100 variables / 430 clauses, drawn from consecutive seeds
// and sorted into sat and unsat instances until each side has `per_side`.
inline std::vector<NamedFormula> uf100(std::size_t per_side, std::uint64_t seed = 2021) {
  std::vector<NamedFormula> sat, unsat;
  for (std::uint64_t s = seed; sat.size() < per_side || unsat.size() < per_side; ++s) {
    Formula f = gen::random_ksat(100, 430, 3, s);
    const Outcome o = solve(f).outcome;
    if (o == Outcome::Sat && sat.size() < per_side) {
      sat.push_back({numbered("uf100-", sat.size() + 1), std::move(f)});
    } else if (o == Outcome::Unsat && unsat.size() < per_side) {
      unsat.push_back({numbered("uuf100-", unsat.size() + 1), std::move(f)});
    }
  }
  sat.insert(sat.end(), std::make_move_iterator(unsat.begin()),
             std::make_move_iterator(unsat.end()));
  return sat;
}

inline std::vector<NamedFormula> crafted(std::uint64_t seed = 2021) {
  std::vector<NamedFormula> out;
  for (unsigned holes = 4; holes <= 7; ++holes) {
    out.push_back({"php-" + std::to_string(holes + 1) + "-" + std::to_string(holes),
                   gen::pigeonhole(holes + 1, holes)});
  }
  for (unsigned i = 0; i < 6; ++i) {
    out.push_back({numbered("flat50-115-", i + 1), gen::graph_coloring(50, 115, 3, seed + i)});
  }
  for (unsigned n : {10u, 14u}) {
    out.push_back({"parity-" + std::to_string(n), gen::parity_contradiction(n, seed + n)});
  }
  return out;
}

inline std::vector<NamedFormula> desk_suite(std::size_t per_side = 25, std::uint64_t seed = 2021) {
  auto all = uf100(per_side, seed);
  auto extra = crafted(seed);
  all.insert(all.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  return all;
}

inline std::vector<std::filesystem::path> write_suite(const std::vector<NamedFormula>& suite,
                                                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& nf : suite) {
    const auto path = dir / (nf.name + ".cnf");
    std::ofstream out(path);
    out << "c " << nf.name << '\n';
    write_dimacs(out, nf.formula);
    if (!out) throw IoError("cannot write " + path.string());
    paths.push_back(path);
  }
  return paths;
}

}  // namespace crvsat::suite
