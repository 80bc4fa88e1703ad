#pragma once

// CNF value types, DIMACS reading/writing and model verification.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crvsat/errors.hpp"

namespace crvsat {

using Var = std::uint32_t;

// A variable index (>= 1) paired with a polarity. Encoded as 2*var + sign so
// literals can index flat per-literal arrays directly.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(Var var, bool positive)
      : code_(2 * var + (positive ? 0u : 1u)) {}

  static constexpr Literal from_code(std::uint32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }
  static Literal from_dimacs(long value) {
    require(value != 0, "literal 0 is a clause terminator");
    return Literal(static_cast<Var>(value < 0 ? -value : value), value > 0);
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool positive() const { return (code_ & 1u) == 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr bool valid() const { return var() != 0; }
  long to_dimacs() const {
    return positive() ? static_cast<long>(var()) : -static_cast<long>(var());
  }

  constexpr Literal operator~() const { return from_code(code_ ^ 1u); }
  constexpr auto operator<=>(const Literal&) const = default;

 private:
  std::uint32_t code_ = 0;
};

struct Clause {
  std::vector<Literal> literals;
  bool tautology = false;

  Clause() = default;
  Clause(std::initializer_list<Literal> lits) : literals(lits) { normalize(); }
  explicit Clause(std::vector<Literal> lits) : literals(std::move(lits)) {
    normalize();
  }

  // Drops repeated literals (first occurrence wins) and flags l/~l pairs.
  void normalize() {
    std::vector<Literal> out;
    out.reserve(literals.size());
    tautology = false;
    for (Literal l : literals) {
      if (std::find(out.begin(), out.end(), l) != out.end()) continue;
      if (std::find(out.begin(), out.end(), ~l) != out.end()) tautology = true;
      out.push_back(l);
    }
    literals = std::move(out);
  }

  std::size_t size() const { return literals.size(); }
  bool empty() const { return literals.empty(); }
  auto begin() const { return literals.begin(); }
  auto end() const { return literals.end(); }
};

inline Clause make_clause(std::initializer_list<long> dimacs) {
  std::vector<Literal> lits;
  for (long x : dimacs) lits.push_back(Literal::from_dimacs(x));
  return Clause(std::move(lits));
}

struct Formula {
  Var num_vars = 0;
  std::vector<Clause> clauses;

  bool has_empty_clause() const {
    return std::any_of(clauses.begin(), clauses.end(),
                       [](const Clause& c) { return c.empty(); });
  }
};

// Total assignment over variables 1..num_vars.
class Model {
 public:
  Model() = default;
  explicit Model(Var num_vars) : values_(num_vars + 1, false) {}

  Var num_vars() const {
    return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1);
  }
  bool value(Var v) const { return values_.at(v); }
  bool value(Literal l) const { return value(l.var()) == l.positive(); }
  void set(Var v, bool b) { values_.at(v) = b; }

 private:
  std::vector<bool> values_;
};

inline bool check_model(const Formula& f, const Model& m) {
  require(m.num_vars() >= f.num_vars, "model does not cover every variable");
  return std::all_of(f.clauses.begin(), f.clauses.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(),
                       [&](Literal l) { return m.value(l); });
  });
}

// Reads DIMACS CNF. Comment lines start with 'c'; a line starting with '%'
// ends the clause section (SATLIB convention). A clause count that differs
// from the header is reported through `warnings` rather than rejected.
inline Formula parse_dimacs(std::istream& in,
                            std::vector<std::string>* warnings = nullptr) {
  Formula f;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    view.remove_prefix(first);
    if (view.front() == 'c') continue;
    if (view.front() == '%') break;
    if (view.front() == 'p') {
      if (have_header) throw ParseError(line_no, "duplicate header");
      std::istringstream hs{std::string(view)};
      std::string p, fmt;
      long vars = -1, clauses = -1;
      std::string extra;
      if (!(hs >> p >> fmt >> vars >> clauses) || p != "p" || fmt != "cnf" ||
          vars < 0 || clauses < 0 || (hs >> extra)) {
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      f.num_vars = static_cast<Var>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before 'p cnf' header");

    std::istringstream ls{std::string(view)};
    std::string token;
    while (ls >> token) {
      char* end = nullptr;
      const long value = std::strtol(token.c_str(), &end, 10);
      if (end == token.c_str() || *end != '\0') {
        throw ParseError(line_no, "invalid literal '" + token + "'");
      }
      if (value == 0) {
        f.clauses.emplace_back(std::move(pending));
        pending.clear();
        continue;
      }
      const long var = value < 0 ? -value : value;
      if (var > static_cast<long>(f.num_vars)) {
        throw ParseError(line_no, "variable " + std::to_string(var) +
                                      " exceeds declared " +
                                      std::to_string(f.num_vars));
      }
      if (pending.empty()) pending_line = line_no;
      pending.push_back(Literal::from_dimacs(value));
    }
  }
  if (!pending.empty()) {
    throw ParseError(pending_line, "missing terminating 0");
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (warnings && f.clauses.size() != declared_clauses) {
    warnings->push_back("header declares " + std::to_string(declared_clauses) +
                        " clauses, found " + std::to_string(f.clauses.size()));
  }
  return f;
}

inline Formula parse_dimacs(std::string_view text,
                            std::vector<std::string>* warnings = nullptr) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, warnings);
}

inline void write_clause(std::ostream& out, const std::vector<Literal>& lits) {
  for (Literal l : lits) out << l.to_dimacs() << ' ';
  out << "0\n";
}

inline void write_dimacs(std::ostream& out, const Formula& f) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) write_clause(out, c.literals);
}

inline std::string to_dimacs(const Formula& f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

}  // namespace crvsat
