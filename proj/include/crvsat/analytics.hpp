#pragma once

// Conflict analytics: sc/mc decision classification, burst statistics, LBD
// aggregates, literal-block proximity between reason clauses, and the
// learned-clause chain check for multi-conflict decisions.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <iterator>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crvsat/cnf.hpp"
#include "crvsat/errors.hpp"
#include "crvsat/trail.hpp"

namespace crvsat {

// Sorted, duplicate-free set of decision levels.
using LevelSet = std::vector<std::uint32_t>;

enum class Outcome : std::uint8_t { Sat, Unsat, Unknown };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Sat: return "SAT";
    case Outcome::Unsat: return "UNSAT";
    case Outcome::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

// Exact non-negative fraction; equality compares values, not representations.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio& o) const { return num * o.den == o.num * den; }
};

// Distinct decision levels of the literals in r.
inline LevelSet level_set(std::span<const Literal> r, const Trail& trail) {
  LevelSet out;
  out.reserve(r.size());
  for (Literal l : r) {
    require(trail.assigned(l.var()), "level_set over an unassigned literal");
    out.push_back(trail.level(l.var()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Literal block proximity: the levels shared by every set in seq.
inline LevelSet lbp(std::span<const LevelSet> seq) {
  require(!seq.empty(), "lbp of an empty sequence");
  LevelSet acc = seq.front();
  LevelSet tmp;
  for (std::size_t i = 1; i < seq.size() && !acc.empty(); ++i) {
    tmp.clear();
    std::set_intersection(acc.begin(), acc.end(), seq[i].begin(), seq[i].end(),
                          std::back_inserter(tmp));
    acc.swap(tmp);
  }
  return acc;
}

inline LevelSet level_union(std::span<const LevelSet> seq) {
  LevelSet acc;
  LevelSet tmp;
  for (const LevelSet& s : seq) {
    tmp.clear();
    std::set_union(acc.begin(), acc.end(), s.begin(), s.end(), std::back_inserter(tmp));
    acc.swap(tmp);
  }
  return acc;
}

// |intersection| / |union|; nullopt when the union is empty.
inline std::optional<Ratio> conflicts_proximity(std::span<const LevelSet> seq) {
  require(!seq.empty(), "conflicts_proximity of an empty sequence");
  const std::size_t u = level_union(seq).size();
  if (u == 0) return std::nullopt;
  return Ratio{lbp(seq).size(), u};
}

struct ConflictEvent {
  std::uint64_t conflict_index = 0;
  std::uint32_t lbd = 0;
  LevelSet reason_level_set;
  Var fuip_variable = 0;
  // Decision variable of each level in reason_level_set, captured at analysis.
  std::vector<std::pair<std::uint32_t, Var>> level_decision_vars;

  // Chain certificate: where f sat on the trail when the conflict was
  // analyzed, and where ~f landed after the backjump.
  std::uint32_t fuip_level = 0;
  std::uint32_t fuip_position = 0;
  std::uint32_t asserted_level = 0;
  std::uint32_t asserted_position = 0;

  std::optional<Var> decision_var_at(std::uint32_t dl) const {
    for (const auto& [level, var] : level_decision_vars) {
      if (level == dl) return var;
    }
    return std::nullopt;
  }
};

enum class DecisionKind : std::uint8_t { None, Single, Multi };

struct DecisionRecord {
  std::uint64_t decision_index = 0;
  std::vector<ConflictEvent> conflicts;

  std::size_t burst() const { return conflicts.size(); }
  DecisionKind kind() const {
    return burst() == 0 ? DecisionKind::None
                        : burst() == 1 ? DecisionKind::Single : DecisionKind::Multi;
  }
  std::uint32_t min_lbd() const {
    require(!conflicts.empty(), "min_lbd of a conflict-free decision");
    std::uint32_t best = conflicts.front().lbd;
    for (const auto& e : conflicts) best = std::min(best, e.lbd);
    return best;
  }
  std::vector<LevelSet> reason_level_sets() const {
    std::vector<LevelSet> out;
    out.reserve(conflicts.size());
    for (const auto& e : conflicts) out.push_back(e.reason_level_set);
    return out;
  }
};

// Consecutive learned clauses of one decision are chained when f_{i+1} was
// assigned in the block that unit propagation of ~f_i produced: same level,
// at or after ~f_i on the trail.
inline bool chain_link_holds(const ConflictEvent& prev, const ConflictEvent& next) {
  return next.fuip_level == prev.asserted_level &&
         next.fuip_position >= prev.asserted_position;
}

// Weaker form: f_{i+1} belongs to the level ~f_i was asserted at, with no
// branching decision in between. The strict form above fails whenever the
// first UIP of conflict i+1 lies among that level's older assignments,
// which the level-bl literals of R_i make common.
inline bool chain_level_holds(const ConflictEvent& prev, const ConflictEvent& next) {
  return next.fuip_level == prev.asserted_level;
}

// Reason level sets of the most recent conflicts from sc decisions.
class ScWindow {
 public:
  explicit ScWindow(std::size_t capacity) : capacity_(capacity) {}

  void push(const ConflictEvent& e) {
    if (capacity_ == 0) return;
    if (entries_.size() == capacity_) entries_.pop_front();
    entries_.push_back({e.conflict_index, e.reason_level_set});
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

  // The last x level sets, oldest first.
  std::vector<LevelSet> last(std::size_t x) const {
    require(x <= entries_.size(), "window holds fewer entries than requested");
    std::vector<LevelSet> out;
    out.reserve(x);
    for (auto it = entries_.end() - static_cast<std::ptrdiff_t>(x); it != entries_.end(); ++it) {
      out.push_back(it->second);
    }
    return out;
  }

  bool ordered() const {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i - 1].first >= entries_[i].first) return false;
    }
    return true;
  }

 private:
  std::size_t capacity_;
  std::deque<std::pair<std::uint64_t, LevelSet>> entries_;
};

struct ProximitySample {
  DecisionKind kind = DecisionKind::Multi;
  std::uint32_t burst = 0;
  std::uint32_t lbp_size = 0;
  std::uint32_t union_size = 0;

  Ratio cp() const { return {lbp_size, union_size}; }
};

// Proximity of an mc decision's reason clauses, plus the same measure over
// the last x sc conflicts when the window has that many.
inline std::vector<ProximitySample> sample_proximity(const DecisionRecord& mc,
                                                     const ScWindow& window,
                                                     std::size_t max_tracked_burst) {
  const std::size_t x = mc.burst();
  require(x >= 2, "proximity sampling needs an mc decision");
  std::vector<ProximitySample> out;
  if (x > max_tracked_burst) return out;

  auto make = [&](DecisionKind kind, const std::vector<LevelSet>& sets) {
    const std::size_t u = level_union(sets).size();
    if (u == 0) return;
    out.push_back({kind, static_cast<std::uint32_t>(x),
                   static_cast<std::uint32_t>(lbp(sets).size()),
                   static_cast<std::uint32_t>(u)});
  };
  make(DecisionKind::Multi, mc.reason_level_sets());
  if (window.size() >= x) make(DecisionKind::Single, window.last(x));
  return out;
}

// Raw counters of one run. Ratios are derived on demand and are nullopt
// when their denominator is zero.
struct RunStats {
  std::uint64_t d = 0;    // decisions
  std::uint64_t c = 0;    // conflicts (learned clauses)
  std::uint64_t s = 0;    // sc decisions
  std::uint64_t m = 0;    // mc decisions
  std::uint64_t c_s = 0;
  std::uint64_t c_m = 0;
  std::uint64_t sum_lbd = 0;
  std::uint64_t sum_lbd_sc = 0;
  std::uint64_t sum_lbd_mc = 0;
  std::uint64_t sum_min_lbd_mc = 0;
  std::uint64_t glue = 0;
  std::uint64_t max_burst = 0;
  // count_b[b] for 2 <= b <= max_tracked_burst; indices 0 and 1 unused.
  std::vector<std::uint64_t> count_b;
  std::uint64_t burst_sum_tracked = 0;    // sum of b * count_b
  std::uint64_t burst_sum_untracked = 0;  // conflicts of bursts above the cap
  std::vector<ProximitySample> cp_samples;
  std::uint64_t chain_pairs = 0;
  std::uint64_t chain_violations = 0;
  std::uint64_t chain_level_violations = 0;

  // Engine-side counters.
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t reductions = 0;
  std::uint64_t deleted_clauses = 0;
  std::uint64_t poor_mc_decisions = 0;
  std::uint64_t crv_flags = 0;
  std::uint64_t crv_reductions = 0;
  std::uint64_t invariant_violations = 0;

  Outcome outcome = Outcome::Unknown;
  double wall_time = 0.0;

  std::uint32_t max_tracked_burst() const {
    return count_b.empty() ? 0 : static_cast<std::uint32_t>(count_b.size() - 1);
  }
  std::uint64_t count(std::uint32_t b) const {
    return b < count_b.size() ? count_b[b] : 0;
  }

  static std::optional<double> ratio(double num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return num / static_cast<double>(den);
  }
  std::optional<double> pdsc() const { return ratio(static_cast<double>(s), d); }
  std::optional<double> pdmc() const { return ratio(static_cast<double>(m), d); }
  std::optional<double> glr() const { return ratio(static_cast<double>(c), d); }
  std::optional<double> g2l() const { return ratio(static_cast<double>(glue), c); }
  std::optional<double> albd() const { return ratio(static_cast<double>(sum_lbd), c); }
  std::optional<double> albd_sc() const { return ratio(static_cast<double>(sum_lbd_sc), c_s); }
  std::optional<double> albd_mc() const { return ratio(static_cast<double>(sum_lbd_mc), c_m); }
  std::optional<double> avg_min_lbd_mc() const {
    return ratio(static_cast<double>(sum_min_lbd_mc), m);
  }
  std::optional<double> avg_burst() const { return ratio(static_cast<double>(c_m), m); }

  std::uint64_t cp_count(DecisionKind kind) const {
    return static_cast<std::uint64_t>(std::count_if(
        cp_samples.begin(), cp_samples.end(),
        [&](const ProximitySample& p) { return p.kind == kind; }));
  }
  std::optional<double> mean_cp(DecisionKind kind) const {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (const auto& p : cp_samples) {
      if (p.kind != kind) continue;
      sum += p.cp().value();
      ++n;
    }
    return ratio(sum, n);
  }
  std::optional<double> mean_cp_mc() const { return mean_cp(DecisionKind::Multi); }
  std::optional<double> mean_cp_sc() const { return mean_cp(DecisionKind::Single); }

  // The bookkeeping identities every run must satisfy.
  bool accounting_holds() const {
    if (c != c_s + c_m || c_s != s) return false;
    if (burst_sum_tracked + burst_sum_untracked != c_m) return false;
    if (m > 0 && max_burst < 2) return false;
    if (s + m > d) return false;
    return std::all_of(cp_samples.begin(), cp_samples.end(), [](const ProximitySample& p) {
      return p.union_size > 0 && p.lbp_size <= p.union_size;
    });
  }
};

// Collects decision and conflict events from the engine. Events must arrive
// as: on_decision, zero or more on_conflict, on_decision_end, ...
class Analytics {
 public:
  explicit Analytics(std::uint32_t max_tracked_burst = 10)
      : max_tracked_(max_tracked_burst), window_(max_tracked_burst) {
    stats_.count_b.assign(max_tracked_burst + 1, 0);
  }

  void on_decision() {
    require(!open_, "on_decision while the previous decision is still open");
    open_ = true;
    current_.decision_index = stats_.d++;
    current_.conflicts.clear();
  }

  void on_conflict(ConflictEvent e) {
    require(open_, "on_conflict outside a decision");
    e.conflict_index = stats_.c++;
    stats_.sum_lbd += e.lbd;
    if (e.lbd == 2) ++stats_.glue;
    if (!current_.conflicts.empty()) {
      ++stats_.chain_pairs;
      if (!chain_link_holds(current_.conflicts.back(), e)) ++stats_.chain_violations;
      if (!chain_level_holds(current_.conflicts.back(), e)) ++stats_.chain_level_violations;
    }
    current_.conflicts.push_back(std::move(e));
  }

  // Closes the open decision and returns it; nullptr when none was open.
  // The record stays valid until the next on_decision.
  const DecisionRecord* on_decision_end() {
    if (!open_) return nullptr;
    open_ = false;
    const std::size_t x = current_.burst();
    if (x == 1) {
      const ConflictEvent& e = current_.conflicts.front();
      ++stats_.s;
      ++stats_.c_s;
      stats_.sum_lbd_sc += e.lbd;
      window_.push(e);
    } else if (x >= 2) {
      ++stats_.m;
      stats_.c_m += x;
      stats_.max_burst = std::max<std::uint64_t>(stats_.max_burst, x);
      stats_.sum_min_lbd_mc += current_.min_lbd();
      for (const auto& e : current_.conflicts) stats_.sum_lbd_mc += e.lbd;
      if (x <= max_tracked_) {
        ++stats_.count_b[x];
        stats_.burst_sum_tracked += x;
      } else {
        stats_.burst_sum_untracked += x;
      }
      for (auto& sample : sample_proximity(current_, window_, max_tracked_)) {
        stats_.cp_samples.push_back(sample);
      }
    }
    return &current_;
  }

  bool decision_open() const { return open_; }
  const DecisionRecord& current() const { return current_; }
  const ScWindow& sc_window() const { return window_; }
  const RunStats& stats() const { return stats_; }
  RunStats& mutable_stats() { return stats_; }

  // Ends the open decision (if any) and hands back the counters.
  RunStats finalize(Outcome outcome, double wall_time) {
    on_decision_end();
    stats_.outcome = outcome;
    stats_.wall_time = wall_time;
    return stats_;
  }

 private:
  std::uint32_t max_tracked_;
  ScWindow window_;
  DecisionRecord current_;
  bool open_ = false;
  RunStats stats_;
};

}  // namespace crvsat
