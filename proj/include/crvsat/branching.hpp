#pragma once

// Activity-based variable selection and the common reason variable
// reduction (CRVR) layer on top of it.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "crvsat/activity.hpp"
#include "crvsat/analytics.hpp"
#include "crvsat/errors.hpp"

namespace crvsat {

struct CrvrParams {
  std::uint32_t k = 50;  // window of recent learned clauses
  double q = 0.1;        // activity reduction factor

  void validate() const {
    require(k >= 1, "CRVR window k must be at least 1");
    require(q > 0.0 && q < 1.0, "CRVR reduction factor must lie in (0, 1)");
  }
};

// LBD values of the most recent k learned clauses.
class LbdWindow {
 public:
  explicit LbdWindow(std::uint32_t k = 50) : values_(k, 0) {}

  void push(std::uint32_t lbd) {
    if (count_ == values_.size()) sum_ -= values_[next_];
    else ++count_;
    values_[next_] = lbd;
    sum_ += lbd;
    next_ = (next_ + 1) % values_.size();
  }

  std::size_t size() const { return count_; }
  std::size_t capacity() const { return values_.size(); }

  // Mean over what is held (all clauses so far until k exist).
  std::optional<double> mean() const {
    if (count_ == 0) return std::nullopt;
    return static_cast<double>(sum_) / static_cast<double>(count_);
  }

 private:
  std::vector<std::uint32_t> values_;
  std::size_t next_ = 0;
  std::size_t count_ = 0;
  std::uint64_t sum_ = 0;
};

class PoorCrvFlags {
 public:
  void resize(Var num_vars) { flags_.resize(num_vars + 1, false); }

  bool test(Var v) const { return v < flags_.size() && flags_[v]; }
  // Returns true when the flag was previously clear.
  bool set(Var v) {
    const bool fresh = !flags_[v];
    flags_[v] = true;
    return fresh;
  }
  void clear(Var v) { flags_[v] = false; }

  std::size_t count() const {
    std::size_t n = 0;
    for (bool b : flags_) n += b;
    return n;
  }

 private:
  std::vector<bool> flags_;
};

// Marks the decision variables of the levels common to every reason clause
// of a poor mc decision (one whose best clause has LBD above theta).
// Returns how many flags went from clear to set. Level 0 has no decision
// variable and never gets flagged.
inline std::size_t detect_poor_crv(const DecisionRecord& mc, double theta,
                                   PoorCrvFlags& flags) {
  require(mc.burst() >= 2, "DetectPoorCRV runs only at the end of an mc decision");
  if (!(static_cast<double>(mc.min_lbd()) > theta)) return 0;
  const auto sets = mc.reason_level_sets();
  const LevelSet common = lbp(sets);
  const ConflictEvent& snapshot = mc.conflicts.back();
  std::size_t flagged = 0;
  for (std::uint32_t dl : common) {
    if (dl == 0) continue;
    const auto v = snapshot.decision_var_at(dl);
    require(v.has_value(), "no decision variable snapshot for a common level");
    if (flags.set(*v)) ++flagged;
  }
  return flagged;
}

inline std::size_t detect_poor_crv(const DecisionRecord& mc, const LbdWindow& window,
                                   PoorCrvFlags& flags) {
  const auto theta = window.mean();
  if (!theta) return 0;
  return detect_poor_crv(mc, *theta, flags);
}

// Highest-activity free variable that is not flagged. A flagged top
// variable loses a fraction q of its activity and its flag, then the
// selection repeats. The chosen variable leaves the order heap.
template <class IsFree>
Var crvr_branch(ActivityState& state, PoorCrvFlags& flags, double q, IsFree&& is_free,
                std::uint64_t* reductions = nullptr) {
  for (;;) {
    const Var y = state.peek_free(is_free);
    require(y != 0, "crvr_branch called with no free variable");
    if (flags.test(y)) {
      state.scale(y, 1.0 - q);
      flags.clear(y);
      if (reductions) ++*reductions;
      continue;
    }
    state.remove(y);
    return y;
  }
}

inline void seed_activities(ActivityState& state, std::uint64_t seed) {
  if (seed == 0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1e-5);
  for (Var v = 1; v <= state.num_vars(); ++v) state.set_activity(v, dist(rng));
}

struct BranchingCounters {
  std::uint64_t poor_mc_decisions = 0;
  std::uint64_t crv_flags = 0;
  std::uint64_t crv_reductions = 0;
};

// Plain EVSIDS selection.
class VsidsBranching {
 public:
  template <class Config>
  void init(Var num_vars, const Config& cfg) {
    activity_.resize(num_vars);
    for (Var v = 1; v <= num_vars; ++v) activity_.make_free(v);
    seed_activities(activity_, cfg.seed);
  }

  void on_conflict_vars(std::span<const Var> vars) { activity_.bump_and_decay(vars); }
  void on_learned(std::uint32_t) {}
  void on_unassigned(Var v) { activity_.make_free(v); }
  void on_decision_end(const DecisionRecord&) {}

  template <class IsFree>
  Var pick(IsFree&& is_free) {
    const Var v = activity_.peek_free(is_free);
    if (v != 0) activity_.remove(v);
    return v;
  }

  ActivityState& activity() { return activity_; }
  const ActivityState& activity() const { return activity_; }
  BranchingCounters counters() const { return {}; }

 private:
  ActivityState activity_;
};

// EVSIDS with CRVR. With CRVR disabled it takes exactly the decisions of
// VsidsBranching.
class CrvrBranching {
 public:
  template <class Config>
  void init(Var num_vars, const Config& cfg) {
    enabled_ = cfg.crvr_enabled;
    params_ = CrvrParams{cfg.crvr_k, cfg.crvr_q};
    params_.validate();
    window_ = LbdWindow(params_.k);
    activity_.resize(num_vars);
    flags_.resize(num_vars);
    for (Var v = 1; v <= num_vars; ++v) activity_.make_free(v);
    seed_activities(activity_, cfg.seed);
  }

  void on_conflict_vars(std::span<const Var> vars) { activity_.bump_and_decay(vars); }
  void on_learned(std::uint32_t lbd) {
    if (enabled_) window_.push(lbd);
  }
  void on_unassigned(Var v) { activity_.make_free(v); }

  void on_decision_end(const DecisionRecord& record) {
    if (!enabled_ || record.burst() < 2) return;
    const auto theta = window_.mean();
    if (!theta) return;
    if (static_cast<double>(record.min_lbd()) > *theta) ++counters_.poor_mc_decisions;
    counters_.crv_flags += detect_poor_crv(record, *theta, flags_);
  }

  template <class IsFree>
  Var pick(IsFree&& is_free) {
    if (!enabled_) {
      const Var v = activity_.peek_free(is_free);
      if (v != 0) activity_.remove(v);
      return v;
    }
    if (activity_.peek_free(is_free) == 0) return 0;
    return crvr_branch(activity_, flags_, params_.q, is_free, &counters_.crv_reductions);
  }

  bool enabled() const { return enabled_; }
  const CrvrParams& params() const { return params_; }
  const LbdWindow& window() const { return window_; }
  const PoorCrvFlags& flags() const { return flags_; }
  PoorCrvFlags& flags() { return flags_; }
  ActivityState& activity() { return activity_; }
  const ActivityState& activity() const { return activity_; }
  BranchingCounters counters() const { return counters_; }

 private:
  bool enabled_ = false;
  CrvrParams params_;
  LbdWindow window_;
  PoorCrvFlags flags_;
  ActivityState activity_;
  BranchingCounters counters_;
};

}  // namespace crvsat
