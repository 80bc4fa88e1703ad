#pragma once

// CDCL engine: watched-literal propagation, first-UIP learning with
// recursive minimization, non-chronological backjumping, Luby restarts and
// LBD-keyed clause database reduction. Every decision and learned clause is
// reported to an Analytics collector.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "crvsat/analytics.hpp"
#include "crvsat/branching.hpp"
#include "crvsat/cnf.hpp"
#include "crvsat/drat.hpp"
#include "crvsat/errors.hpp"
#include "crvsat/luby.hpp"
#include "crvsat/trail.hpp"

namespace crvsat {

struct SolverConfig {
  std::uint64_t luby_unit = 128;
  std::uint64_t reduce_first = 2000;
  std::uint64_t reduce_increment = 300;
  double clause_decay = 0.999;
  bool minimize = true;

  bool crvr_enabled = false;
  std::uint32_t crvr_k = 50;
  double crvr_q = 0.1;

  std::uint64_t seed = 0;
  std::optional<std::uint64_t> conflict_budget;
  std::optional<double> time_budget_seconds;
  std::uint32_t max_tracked_burst = 10;

  std::ostream* proof = nullptr;
  bool record_decisions = false;
  // Re-validates the watch, trail and assertion invariants as the search
  // runs. Quadratic; meant for tests on small formulas.
  bool check_invariants = false;

  void validate() const {
    CrvrParams{crvr_k, crvr_q}.validate();
    require(luby_unit >= 1, "Luby unit must be positive");
    require(clause_decay > 0.0 && clause_decay <= 1.0, "clause decay must lie in (0, 1]");
  }
};

struct SolveResult {
  Outcome outcome = Outcome::Unknown;
  std::optional<Model> model;
  RunStats stats;
  std::vector<Literal> decisions;  // filled when record_decisions is set
};

struct LearnedClause {
  Clause clause;
  std::uint32_t lbd = 0;
  std::uint64_t birth_conflict_index = 0;

  bool glue() const { return lbd == 2; }
};

struct ConflictAnalysisResult {
  LearnedClause learned;       // ~f first, then the reason literals
  std::vector<Literal> reason_clause;
  Literal fuip;                // true on the trail at analysis time
  std::uint32_t backjump_level = 0;
  LevelSet reason_level_set;
  std::vector<Var> seen_variables;  // every variable resolved on or collected
  std::vector<std::pair<std::uint32_t, Var>> level_decision_vars;
  std::uint32_t fuip_level = 0;
  std::uint32_t fuip_position = 0;
};

inline std::uint32_t compute_lbd(std::span<const Literal> c, const Trail& trail) {
  return static_cast<std::uint32_t>(level_set(c, trail).size());
}

struct LearnedClauseInfo {
  std::uint32_t lbd = 0;
  double activity = 0.0;
  bool locked = false;
};

// Indices of the clauses one reduction removes: glue (lbd <= 2) and locked
// clauses stay; of the rest, the worse half by (lbd desc, activity asc) goes.
inline std::vector<std::size_t> select_for_deletion(std::span<const LearnedClauseInfo> db) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (db[i].lbd > 2 && !db[i].locked) candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (db[a].lbd != db[b].lbd) return db[a].lbd > db[b].lbd;
    return db[a].activity < db[b].activity;
  });
  candidates.resize(candidates.size() / 2);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

template <class Branching>
class BasicSolver {
 public:
  explicit BasicSolver(SolverConfig cfg = {})
      : cfg_(std::move(cfg)),
        restarts_(cfg_.luby_unit),
        analytics_(cfg_.max_tracked_burst),
        proof_(cfg_.proof) {
    cfg_.validate();
    next_reduce_ = cfg_.reduce_first;
  }

  BasicSolver(const BasicSolver&) = delete;
  BasicSolver& operator=(const BasicSolver&) = delete;

  // Loads a formula into an empty solver. Returns false when the formula is
  // already refuted at level 0 (empty clause or clashing units).
  bool load(const Formula& f) {
    require(num_vars_ == 0 && clauses_.empty(), "load called twice");
    num_vars_ = f.num_vars;
    trail_.resize(num_vars_);
    watches_.resize(2 * (std::size_t{num_vars_} + 1));
    seen_.assign(num_vars_ + 1, 0);
    phase_.assign(num_vars_ + 1, false);
    brancher_.init(num_vars_, cfg_);

    for (const Clause& c : f.clauses) {
      if (c.empty()) return ok_ = false;
      if (c.tautology || c.size() == 1) continue;
      attach(store(c.literals, false, 0));
    }
    for (const Clause& c : f.clauses) {
      if (c.tautology || c.size() != 1) continue;
      const Literal l = c.literals.front();
      if (trail_.is_false(l)) return ok_ = false;
      if (!trail_.is_true(l)) trail_.assign(l, Reason::unit());
    }
    return ok_;
  }

  // Unit propagation to fixpoint. Returns the first clause found falsified.
  std::optional<ClauseRef> propagate() {
    std::optional<ClauseRef> conflict;
    while (qhead_ < trail_.size()) {
      const Literal false_lit = ~trail_[qhead_++];
      ++propagations_;
      auto& ws = watches_[false_lit.code()];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (trail_.is_true(w.blocker)) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& lits = clauses_[w.cref].lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        ++i;
        const Literal first = lits[0];
        const Watcher keep{w.cref, first};
        if (first != w.blocker && trail_.is_true(first)) {
          ws[j++] = keep;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (!trail_.is_false(lits[k])) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1].code()].push_back(keep);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = keep;
        if (trail_.is_false(first)) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          trail_.assign(first, Reason::of(w.cref));
        }
      }
      ws.resize(j);
      if (conflict) break;
    }
    return conflict;
  }

  // First-UIP analysis of a falsified clause. nullopt means the conflict is
  // at level 0, i.e. the formula is unsatisfiable.
  std::optional<ConflictAnalysisResult> analyze_conflict(ClauseRef conflict) {
    if (trail_.current_level() == 0) return std::nullopt;
    const std::uint32_t current = trail_.current_level();
    ConflictAnalysisResult res;
    std::vector<Literal> out{Literal{}};
    std::size_t path = 0;
    std::size_t index = trail_.size();
    Literal p{};
    ClauseRef cref = conflict;

    for (;;) {
      StoredClause& c = clauses_[cref];
      if (c.learned) bump_clause(c);
      for (Literal q : c.lits) {
        if (p.valid() && q == p) continue;
        const Var v = q.var();
        if (seen_[v] || trail_.level(v) == 0) continue;
        seen_[v] = 1;
        res.seen_variables.push_back(v);
        if (trail_.level(v) == current) ++path;
        else out.push_back(q);
      }
      // Next literal to resolve: the latest seen one on the trail.
      do {
        --index;
      } while (!seen_[trail_[index].var()]);
      p = trail_[index];
      seen_[p.var()] = 0;
      if (--path == 0) break;
      cref = trail_.reason(p.var()).clause;
    }
    out[0] = ~p;

    // Literals still marked are the level < current part of the clause.
    std::vector<Var> to_clear;
    for (std::size_t i = 1; i < out.size(); ++i) to_clear.push_back(out[i].var());
    if (cfg_.minimize && out.size() > 1) minimize(out, to_clear);
    for (Var v : to_clear) seen_[v] = 0;
    for (Var v : res.seen_variables) seen_[v] = 0;

    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i) {
        if (trail_.level(out[i].var()) > trail_.level(out[max_i].var())) max_i = i;
      }
      std::swap(out[1], out[max_i]);
      res.backjump_level = trail_.level(out[1].var());
    }

    res.fuip = p;
    res.fuip_level = current;
    res.fuip_position = trail_.position(p.var());
    res.reason_clause.assign(out.begin() + 1, out.end());
    res.reason_level_set = level_set(res.reason_clause, trail_);
    for (std::uint32_t dl : res.reason_level_set) {
      res.level_decision_vars.emplace_back(dl, trail_.decision_var(dl));
    }
    res.learned.lbd = compute_lbd(out, trail_);
    res.learned.birth_conflict_index = conflicts_;
    res.learned.clause.literals = std::move(out);
    return res;
  }

  void backjump(std::uint32_t bl) {
    require(bl <= trail_.current_level(), "backjump above the current level");
    trail_.backjump(bl, [&](Literal l) {
      phase_[l.var()] = l.positive();
      brancher_.on_unassigned(l.var());
    });
    qhead_ = std::min(qhead_, trail_.size());
  }

  // Adds the learned clause, backjumps and asserts ~f. Returns the trail
  // position of the asserted literal.
  std::uint32_t learn(const ConflictAnalysisResult& res) {
    const auto& lits = res.learned.clause.literals;
    proof_.learn(lits);
    backjump(res.backjump_level);
    if (cfg_.check_invariants && !asserting_after_backjump(lits)) ++invariant_violations_;
    const auto pos = static_cast<std::uint32_t>(trail_.size());
    if (lits.size() == 1) {
      trail_.assign(lits[0], Reason::unit());
    } else {
      const ClauseRef cref = store(lits, true, res.learned.lbd);
      clauses_[cref].birth = res.learned.birth_conflict_index;
      attach(cref);
      learned_.push_back(cref);
      trail_.assign(lits[0], Reason::of(cref));
    }
    return pos;
  }

  // Applies one reduction to the learned clause store.
  void reduce_clause_db() {
    std::vector<LearnedClauseInfo> info;
    info.reserve(learned_.size());
    for (ClauseRef cref : learned_) {
      const StoredClause& c = clauses_[cref];
      info.push_back({c.lbd, c.activity, locked(cref)});
    }
    const auto doomed = select_for_deletion(info);
    std::vector<bool> drop(learned_.size(), false);
    for (std::size_t i : doomed) drop[i] = true;
    std::vector<ClauseRef> kept;
    kept.reserve(learned_.size() - doomed.size());
    for (std::size_t i = 0; i < learned_.size(); ++i) {
      StoredClause& c = clauses_[learned_[i]];
      if (!drop[i]) {
        kept.push_back(learned_[i]);
        continue;
      }
      proof_.remove(c.lits);
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    }
    learned_.swap(kept);
    for (auto& ws : watches_) {
      std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
    }
    ++reductions_;
    deleted_ += doomed.size();
    if (cfg_.check_invariants && !reasons_alive()) ++invariant_violations_;
  }

  void restart() {
    backjump(0);
    ++restart_count_;
  }

  // Opens a new decision level with l. Low-level hook for tests and solve().
  void decide(Literal l) {
    require(!trail_.assigned(l.var()), "deciding an assigned variable");
    trail_.decide(l);
    analytics_.on_decision();
    if (cfg_.record_decisions) decisions_.push_back(l);
  }

  SolveResult solve(const Formula& f) {
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    Outcome outcome = Outcome::Unknown;
    if (!load(f)) {
      proof_.empty_clause();
      outcome = Outcome::Unsat;
    } else {
      outcome = search(elapsed);
    }

    SolveResult result;
    result.outcome = outcome;
    if (outcome == Outcome::Sat) {
      Model m(num_vars_);
      for (Var v = 1; v <= num_vars_; ++v) m.set(v, trail_.value(v) == LBool::True);
      if (!check_model(f, m)) throw std::logic_error("solver produced a non-model");
      result.model = std::move(m);
    }
    result.stats = finish_stats(outcome, elapsed());
    result.decisions = std::move(decisions_);
    return result;
  }

  // Watch invariant: every clause not yet satisfied watches two non-false
  // literals. Meaningful at a propagation fixpoint.
  bool watches_consistent() const {
    for (ClauseRef cref = 0; cref < clauses_.size(); ++cref) {
      const StoredClause& c = clauses_[cref];
      if (c.deleted) continue;
      const bool satisfied = std::any_of(c.lits.begin(), c.lits.end(),
                                         [&](Literal l) { return trail_.is_true(l); });
      if (satisfied) continue;
      if (trail_.is_false(c.lits[0]) || trail_.is_false(c.lits[1])) return false;
      for (int k = 0; k < 2; ++k) {
        const auto& ws = watches_[c.lits[k].code()];
        const bool listed = std::any_of(ws.begin(), ws.end(),
                                        [&](const Watcher& w) { return w.cref == cref; });
        if (!listed) return false;
      }
    }
    return true;
  }

  const Trail& trail() const { return trail_; }
  const Analytics& analytics() const { return analytics_; }
  Analytics& analytics() { return analytics_; }
  const Branching& brancher() const { return brancher_; }
  Branching& brancher() { return brancher_; }
  const SolverConfig& config() const { return cfg_; }
  std::span<const Literal> clause(ClauseRef cref) const { return clauses_[cref].lits; }
  std::size_t num_learned() const { return learned_.size(); }
  std::uint64_t num_conflicts() const { return conflicts_; }
  std::uint64_t invariant_violations() const { return invariant_violations_; }

 private:
  struct StoredClause {
    std::vector<Literal> lits;
    bool learned = false;
    bool deleted = false;
    std::uint32_t lbd = 0;
    double activity = 0.0;
    std::uint64_t birth = 0;
  };
  struct Watcher {
    ClauseRef cref;
    Literal blocker;
  };

  ClauseRef store(const std::vector<Literal>& lits, bool learned, std::uint32_t lbd) {
    clauses_.push_back({lits, learned, false, lbd, 0.0, 0});
    return static_cast<ClauseRef>(clauses_.size() - 1);
  }

  void attach(ClauseRef cref) {
    const auto& lits = clauses_[cref].lits;
    watches_[lits[0].code()].push_back({cref, lits[1]});
    watches_[lits[1].code()].push_back({cref, lits[0]});
  }

  bool locked(ClauseRef cref) const {
    const auto& lits = clauses_[cref].lits;
    const Reason& r = trail_.reason(lits[0].var());
    return trail_.is_true(lits[0]) && r.is_clause() && r.clause == cref;
  }

  void bump_clause(StoredClause& c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
      for (ClauseRef cref : learned_) clauses_[cref].activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  std::uint32_t abstract_level(Var v) const {
    return 1u << (trail_.level(v) & 31u);
  }

  // Recursive minimization: drops literals implied by the rest of the clause.
  void minimize(std::vector<Literal>& out, std::vector<Var>& to_clear) {
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < out.size(); ++i) levels |= abstract_level(out[i].var());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      const Var v = out[i].var();
      if (!trail_.reason(v).is_clause() || !redundant(out[i], levels, to_clear)) {
        out[j++] = out[i];
      }
    }
    out.resize(j);
  }

  bool redundant(Literal p, std::uint32_t levels, std::vector<Var>& to_clear) {
    std::vector<Literal> stack{p};
    const std::size_t top = to_clear.size();
    while (!stack.empty()) {
      const Literal q = stack.back();
      stack.pop_back();
      for (Literal l : clauses_[trail_.reason(q.var()).clause].lits) {
        const Var v = l.var();
        if (v == q.var() || seen_[v] || trail_.level(v) == 0) continue;
        if (trail_.reason(v).is_clause() && (abstract_level(v) & levels) != 0) {
          seen_[v] = 1;
          stack.push_back(l);
          to_clear.push_back(v);
        } else {
          for (std::size_t k = top; k < to_clear.size(); ++k) seen_[to_clear[k]] = 0;
          to_clear.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  bool asserting_after_backjump(const std::vector<Literal>& lits) const {
    if (trail_.value(lits[0]) != LBool::Undef) return false;
    return std::all_of(lits.begin() + 1, lits.end(),
                       [&](Literal l) { return trail_.is_false(l); });
  }

  bool reasons_alive() const {
    for (std::size_t i = 0; i < trail_.size(); ++i) {
      const Reason& r = trail_.reason(trail_[i].var());
      if (r.is_clause() && clauses_[r.clause].deleted) return false;
    }
    return true;
  }

  template <class Elapsed>
  Outcome search(Elapsed&& elapsed) {
    const auto is_free = [this](Var v) { return !trail_.assigned(v); };
    for (;;) {
      const auto conflict = propagate();
      if (conflict) {
        auto res = analyze_conflict(*conflict);
        if (!res) {
          proof_.empty_clause();
          return Outcome::Unsat;
        }
        brancher_.on_conflict_vars(res->seen_variables);
        clause_inc_ /= cfg_.clause_decay;
        const std::uint32_t asserted_at = learn(*res);
        ++conflicts_;

        ConflictEvent e;
        e.lbd = res->learned.lbd;
        e.reason_level_set = std::move(res->reason_level_set);
        e.fuip_variable = res->fuip.var();
        e.level_decision_vars = std::move(res->level_decision_vars);
        e.fuip_level = res->fuip_level;
        e.fuip_position = res->fuip_position;
        e.asserted_level = res->backjump_level;
        e.asserted_position = asserted_at;
        analytics_.on_conflict(std::move(e));
        brancher_.on_learned(res->learned.lbd);

        if (cfg_.conflict_budget && conflicts_ >= *cfg_.conflict_budget) {
          return Outcome::Unknown;
        }
        if (cfg_.time_budget_seconds && conflicts_ % 1024 == 0 &&
            elapsed() >= *cfg_.time_budget_seconds) {
          return Outcome::Unknown;
        }
        continue;
      }

      if (cfg_.check_invariants && (!watches_consistent() || !trail_.well_formed())) {
        ++invariant_violations_;
      }
      if (restarts_.restart_check(conflicts_)) restart();
      if (conflicts_ >= next_reduce_) {
        reduce_clause_db();
        next_reduce_ = conflicts_ + cfg_.reduce_first + cfg_.reduce_increment * reductions_;
      }
      if (const DecisionRecord* rec = analytics_.on_decision_end()) {
        brancher_.on_decision_end(*rec);
      }
      const Var v = brancher_.pick(is_free);
      if (v == 0) return Outcome::Sat;
      decide(Literal(v, phase_[v]));
    }
  }

  RunStats finish_stats(Outcome outcome, double wall_time) {
    if (const DecisionRecord* rec = analytics_.on_decision_end()) {
      brancher_.on_decision_end(*rec);
    }
    RunStats s = analytics_.finalize(outcome, wall_time);
    s.propagations = propagations_;
    s.restarts = restart_count_;
    s.reductions = reductions_;
    s.deleted_clauses = deleted_;
    s.invariant_violations = invariant_violations_;
    const BranchingCounters bc = brancher_.counters();
    s.poor_mc_decisions = bc.poor_mc_decisions;
    s.crv_flags = bc.crv_flags;
    s.crv_reductions = bc.crv_reductions;
    return s;
  }

  SolverConfig cfg_;
  LubyRestarts restarts_;
  Analytics analytics_;
  DratWriter proof_;
  Branching brancher_;
  Trail trail_;

  Var num_vars_ = 0;
  bool ok_ = true;
  std::vector<StoredClause> clauses_;
  std::vector<ClauseRef> learned_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<char> seen_;
  std::vector<bool> phase_;
  std::size_t qhead_ = 0;
  double clause_inc_ = 1.0;

  std::uint64_t conflicts_ = 0;
  std::uint64_t propagations_ = 0;
  std::uint64_t restart_count_ = 0;
  std::uint64_t reductions_ = 0;
  std::uint64_t deleted_ = 0;
  std::uint64_t next_reduce_ = 0;
  std::uint64_t invariant_violations_ = 0;
  std::vector<Literal> decisions_;
};

using Solver = BasicSolver<CrvrBranching>;
using VsidsSolver = BasicSolver<VsidsBranching>;

inline SolveResult solve(const Formula& f, const SolverConfig& cfg = {}) {
  Solver solver(cfg);
  return solver.solve(f);
}

}  // namespace crvsat
