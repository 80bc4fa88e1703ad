#pragma once

// Reference implementations that the tests check the library against. None
// of this shares code with the solver or the analytics layer.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "crvsat/cnf.hpp"

namespace crvsat::oracle {

// Exhaustive satisfiability check for up to 26 variables, 64 assignments
// per word: variables 1..6 vary inside the word, the rest per block.
inline std::optional<std::uint64_t> brute_force_model(const Formula& f) {
  const unsigned n = f.num_vars;
  if (n > 26) return std::nullopt;
  static constexpr std::uint64_t kLow[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const unsigned high = n > 6 ? n - 6 : 0;
  const std::uint64_t used_mask = n >= 6 ? ~0ull : ((1ull << (1u << n)) - 1);
  for (std::uint64_t block = 0; block < (1ull << high); ++block) {
    std::uint64_t alive = used_mask;
    for (const Clause& c : f.clauses) {
      std::uint64_t sat = 0;
      for (Literal l : c.literals) {
        const unsigned v = l.var() - 1;
        std::uint64_t truth;
        if (v < 6) truth = kLow[v];
        else truth = ((block >> (v - 6)) & 1) ? ~0ull : 0ull;
        sat |= l.positive() ? truth : ~truth;
      }
      alive &= sat;
      if (!alive) break;
    }
    if (alive) {
      const unsigned bit = static_cast<unsigned>(__builtin_ctzll(alive));
      return (block << 6) | bit;
    }
  }
  return std::nullopt;
}

inline bool brute_force_sat(const Formula& f) { return brute_force_model(f).has_value(); }

// Naive set algebra over std::set.
struct NaiveProximity {
  std::size_t common = 0;
  std::size_t all = 0;
};

inline NaiveProximity naive_proximity(const std::vector<std::vector<std::uint32_t>>& seq) {
  std::set<std::uint32_t> all;
  for (const auto& s : seq) all.insert(s.begin(), s.end());
  std::size_t common = 0;
  for (std::uint32_t x : all) {
    bool everywhere = true;
    for (const auto& s : seq) {
      bool found = false;
      for (std::uint32_t y : s) found |= y == x;
      everywhere &= found;
    }
    common += everywhere;
  }
  return {common, all.size()};
}

}  // namespace crvsat::oracle
