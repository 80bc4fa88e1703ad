#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "crvsat/cnf.hpp"
#include "crvsat/errors.hpp"

namespace crvsat {

using ClauseRef = std::uint32_t;
inline constexpr ClauseRef kNoClause = std::numeric_limits<ClauseRef>::max();

enum class LBool : std::uint8_t { False = 0, True = 1, Undef = 2 };

struct Reason {
  enum class Kind : std::uint8_t { Decision, Clause, Unit };

  Kind kind = Kind::Unit;
  ClauseRef clause = kNoClause;

  static constexpr Reason decision() { return {Kind::Decision, kNoClause}; }
  static constexpr Reason unit() { return {Kind::Unit, kNoClause}; }
  static constexpr Reason of(ClauseRef c) { return {Kind::Clause, c}; }

  bool is_decision() const { return kind == Kind::Decision; }
  bool is_clause() const { return kind == Kind::Clause; }
  bool operator==(const Reason&) const = default;
};

struct AssignmentRecord {
  Literal literal;
  std::uint32_t decision_level = 0;
  Reason reason;
  std::uint32_t trail_position = 0;
};

// The partial assignment: literals in assignment order, split into decision
// levels. Level d >= 1 starts with its decision literal; level 0 holds facts.
class Trail {
 public:
  Trail() = default;
  explicit Trail(Var num_vars) { resize(num_vars); }

  void resize(Var num_vars) {
    values_.resize(num_vars + 1, LBool::Undef);
    level_.resize(num_vars + 1, 0);
    reason_.resize(num_vars + 1);
    position_.resize(num_vars + 1, 0);
  }

  Var num_vars() const { return static_cast<Var>(values_.size()) - 1; }

  LBool value(Var v) const { return values_[v]; }
  LBool value(Literal l) const {
    const LBool v = values_[l.var()];
    if (v == LBool::Undef) return v;
    return (v == LBool::True) == l.positive() ? LBool::True : LBool::False;
  }
  bool is_true(Literal l) const { return value(l) == LBool::True; }
  bool is_false(Literal l) const { return value(l) == LBool::False; }
  bool assigned(Var v) const { return values_[v] != LBool::Undef; }

  std::uint32_t level(Var v) const { return level_[v]; }
  const Reason& reason(Var v) const { return reason_[v]; }
  std::uint32_t position(Var v) const { return position_[v]; }

  AssignmentRecord record(Var v) const {
    require(assigned(v), "record of an unassigned variable");
    const Literal lit(v, values_[v] == LBool::True);
    return {lit, level_[v], reason_[v], position_[v]};
  }

  std::uint32_t current_level() const {
    return static_cast<std::uint32_t>(level_starts_.size());
  }
  std::size_t size() const { return lits_.size(); }
  Literal operator[](std::size_t i) const { return lits_[i]; }
  std::span<const Literal> literals() const { return lits_; }

  // Index of the first trail entry of level dl (dl >= 1).
  std::size_t level_start(std::uint32_t dl) const {
    require(dl >= 1 && dl <= current_level(), "level not on the trail");
    return level_starts_[dl - 1];
  }

  Var decision_var(std::uint32_t dl) const {
    require(dl >= 1 && dl <= current_level(),
            "decision variable requested for level 0 or an unoccupied level");
    return lits_[level_starts_[dl - 1]].var();
  }

  void decide(Literal l) {
    level_starts_.push_back(lits_.size());
    assign(l, Reason::decision());
  }

  void assign(Literal l, Reason reason) {
    const Var v = l.var();
    values_[v] = l.positive() ? LBool::True : LBool::False;
    level_[v] = current_level();
    reason_[v] = reason;
    position_[v] = static_cast<std::uint32_t>(lits_.size());
    lits_.push_back(l);
  }

  // Removes every level above bl; on_unassign(literal) sees each undone
  // assignment, most recent first.
  template <class OnUnassign>
  void backjump(std::uint32_t bl, OnUnassign&& on_unassign) {
    require(bl <= current_level(), "backjump above the current level");
    if (bl == current_level()) return;
    const std::size_t keep = level_starts_[bl];
    for (std::size_t i = lits_.size(); i-- > keep;) {
      const Literal l = lits_[i];
      values_[l.var()] = LBool::Undef;
      on_unassign(l);
    }
    lits_.resize(keep);
    level_starts_.resize(bl);
  }
  void backjump(std::uint32_t bl) {
    backjump(bl, [](Literal) {});
  }

  // Level monotonicity, one decision per level, no duplicate variables.
  bool well_formed() const {
    std::vector<bool> seen(values_.size(), false);
    std::uint32_t lvl = 0;
    std::size_t next_start = 0;
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      const Var v = lits_[i].var();
      if (seen[v] || value(lits_[i]) != LBool::True) return false;
      seen[v] = true;
      while (next_start < level_starts_.size() &&
             level_starts_[next_start] == i) {
        ++next_start;
        ++lvl;
      }
      if (level_[v] != lvl || position_[v] != i) return false;
      const bool starts_level = lvl > 0 && level_starts_[lvl - 1] == i;
      if (reason_[v].is_decision() != starts_level) return false;
    }
    for (Var v = 1; v < values_.size(); ++v) {
      if (assigned(v) && !seen[v]) return false;
    }
    return next_start == level_starts_.size();
  }

 private:
  std::vector<LBool> values_{LBool::Undef};
  std::vector<std::uint32_t> level_{0};
  std::vector<Reason> reason_{Reason{}};
  std::vector<std::uint32_t> position_{0};
  std::vector<Literal> lits_;
  std::vector<std::size_t> level_starts_;
};

}  // namespace crvsat
