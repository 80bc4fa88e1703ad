#pragma once

// Instance generators for tests and benchmark suites.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "crvsat/cnf.hpp"

namespace crvsat::gen {

// Uniform random k-SAT: each clause draws k distinct variables and random
// signs (the model used for the SATLIB uf/uuf families).
inline Formula random_ksat(Var num_vars, std::size_t num_clauses, unsigned k,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Var> pick(1, num_vars);
  std::bernoulli_distribution sign(0.5);
  Formula f;
  f.num_vars = num_vars;
  f.clauses.reserve(num_clauses);
  for (std::size_t i = 0; i < num_clauses; ++i) {
    std::vector<Literal> lits;
    while (lits.size() < k) {
      const Var v = pick(rng);
      bool dup = false;
      for (Literal l : lits) dup |= l.var() == v;
      if (!dup) lits.emplace_back(v, sign(rng));
    }
    f.clauses.emplace_back(std::move(lits));
  }
  return f;
}

// Pigeons into holes; unsatisfiable whenever pigeons > holes.
inline Formula pigeonhole(unsigned pigeons, unsigned holes) {
  Formula f;
  f.num_vars = pigeons * holes;
  auto x = [holes](unsigned p, unsigned h) { return Literal(p * holes + h + 1, true); };
  for (unsigned p = 0; p < pigeons; ++p) {
    std::vector<Literal> some_hole;
    for (unsigned h = 0; h < holes; ++h) some_hole.push_back(x(p, h));
    f.clauses.emplace_back(std::move(some_hole));
  }
  for (unsigned h = 0; h < holes; ++h) {
    for (unsigned p = 0; p < pigeons; ++p) {
      for (unsigned q = p + 1; q < pigeons; ++q) {
        f.clauses.push_back(Clause({~x(p, h), ~x(q, h)}));
      }
    }
  }
  return f;
}

// Graph colouring of a random graph with the given vertex and edge counts.
// Planting a hidden colouring keeps the instance satisfiable.
inline Formula graph_coloring(unsigned vertices, unsigned edges, unsigned colors,
                              std::uint64_t seed, bool planted = true) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> vdist(0, vertices - 1);
  std::uniform_int_distribution<unsigned> cdist(0, colors - 1);
  std::vector<unsigned> hidden(vertices);
  for (auto& c : hidden) c = cdist(rng);

  Formula f;
  f.num_vars = vertices * colors;
  auto x = [colors](unsigned v, unsigned c) { return Literal(v * colors + c + 1, true); };
  for (unsigned v = 0; v < vertices; ++v) {
    std::vector<Literal> some;
    for (unsigned c = 0; c < colors; ++c) some.push_back(x(v, c));
    f.clauses.emplace_back(std::move(some));
    for (unsigned c = 0; c < colors; ++c) {
      for (unsigned d = c + 1; d < colors; ++d) f.clauses.push_back(Clause({~x(v, c), ~x(v, d)}));
    }
  }
  std::vector<std::pair<unsigned, unsigned>> used;
  unsigned attempts = 0;
  while (used.size() < edges && attempts++ < edges * 1000) {
    unsigned a = vdist(rng), b = vdist(rng);
    if (a == b) continue;
    if (planted && hidden[a] == hidden[b]) continue;
    if (a > b) std::swap(a, b);
    bool dup = false;
    for (const auto& e : used) dup |= e.first == a && e.second == b;
    if (dup) continue;
    used.emplace_back(a, b);
    for (unsigned c = 0; c < colors; ++c) f.clauses.push_back(Clause({~x(a, c), ~x(b, c)}));
  }
  return f;
}

// Parity chain x1 ^ ... ^ xn = 1 together with the negated chain through
// fresh Tseitin variables; unsatisfiable, and hard for resolution-based
// search when n grows.
inline Formula parity_contradiction(unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Formula f;
  f.num_vars = n;
  auto fresh = [&f]() { return ++f.num_vars; };
  auto xor_def = [&f](Literal out, Literal a, Literal b) {
    f.clauses.push_back(Clause({~out, a, b}));
    f.clauses.push_back(Clause({~out, ~a, ~b}));
    f.clauses.push_back(Clause({out, ~a, b}));
    f.clauses.push_back(Clause({out, a, ~b}));
  };
  auto chain = [&](const std::vector<Var>& order) {
    Literal acc(order[0], true);
    for (std::size_t i = 1; i < order.size(); ++i) {
      const Literal out(fresh(), true);
      xor_def(out, acc, Literal(order[i], true));
      acc = out;
    }
    return acc;
  };
  std::vector<Var> order(n);
  for (unsigned i = 0; i < n; ++i) order[i] = i + 1;
  const Literal first = chain(order);
  std::shuffle(order.begin(), order.end(), rng);
  const Literal second = chain(order);
  f.clauses.push_back(Clause({first}));
  f.clauses.push_back(Clause({~second}));
  return f;
}

}  // namespace crvsat::gen
