#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crvsat/cnf.hpp"

namespace crvsat {

// Binary max-heap over variables keyed by an external score vector.
class ActivityHeap {
 public:
  explicit ActivityHeap(const std::vector<double>& scores) : scores_(&scores) {}

  void grow(Var num_vars) { index_.resize(num_vars + 1, kAbsent); }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(Var v) const { return v < index_.size() && index_[v] != kAbsent; }
  Var top() const { return heap_.front(); }

  void insert(Var v) {
    if (contains(v)) return;
    index_[v] = static_cast<std::uint32_t>(heap_.size());
    heap_.push_back(v);
    sift_up(index_[v]);
  }

  Var pop() {
    const Var v = heap_.front();
    remove_at(0);
    return v;
  }

  void remove(Var v) {
    if (contains(v)) remove_at(index_[v]);
  }

  // Restore order after v's score changed in either direction.
  void update(Var v) {
    if (!contains(v)) return;
    sift_up(index_[v]);
    sift_down(index_[v]);
  }

  bool is_heap() const {
    for (std::size_t i = 1; i < heap_.size(); ++i) {
      if (less(heap_[(i - 1) / 2], heap_[i])) return false;
    }
    return true;
  }

 private:
  static constexpr std::uint32_t kAbsent = UINT32_MAX;

  bool less(Var a, Var b) const { return (*scores_)[a] < (*scores_)[b]; }

  void remove_at(std::uint32_t i) {
    const Var v = heap_[i];
    const Var last = heap_.back();
    heap_.pop_back();
    index_[v] = kAbsent;
    if (i < heap_.size()) {
      heap_[i] = last;
      index_[last] = i;
      sift_up(i);
      sift_down(index_[last]);
    }
  }

  void sift_up(std::uint32_t i) {
    const Var v = heap_[i];
    while (i > 0) {
      const std::uint32_t parent = (i - 1) / 2;
      if (!less(heap_[parent], v)) break;
      heap_[i] = heap_[parent];
      index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    index_[v] = i;
  }

  void sift_down(std::uint32_t i) {
    const Var v = heap_[i];
    const std::size_t n = heap_.size();
    for (;;) {
      std::size_t child = 2 * std::size_t{i} + 1;
      if (child >= n) break;
      if (child + 1 < n && less(heap_[child], heap_[child + 1])) ++child;
      if (!less(v, heap_[child])) break;
      heap_[i] = heap_[child];
      index_[heap_[i]] = i;
      i = static_cast<std::uint32_t>(child);
    }
    heap_[i] = v;
    index_[v] = i;
  }

  const std::vector<double>* scores_;
  std::vector<Var> heap_;
  std::vector<std::uint32_t> index_;
};

// EVSIDS activity scores: bumps grow geometrically instead of decaying every
// score, with a uniform rescale once any value passes the limit.
class ActivityState {
 public:
  static constexpr double kDecay = 0.95;
  static constexpr double kRescaleLimit = 1e100;
  static constexpr double kRescaleFactor = 1e-100;

  // The heap refers to activity_, so the state stays put.
  ActivityState() : order_(activity_) {}
  ActivityState(const ActivityState&) = delete;
  ActivityState& operator=(const ActivityState&) = delete;

  void resize(Var num_vars) {
    activity_.resize(num_vars + 1, 0.0);
    order_.grow(num_vars);
  }

  Var num_vars() const { return static_cast<Var>(activity_.size()) - 1; }
  double activity(Var v) const { return activity_[v]; }
  double increment() const { return increment_; }
  const ActivityHeap& order() const { return order_; }

  void set_activity(Var v, double a) {
    activity_[v] = a;
    order_.update(v);
  }

  void scale(Var v, double factor) { set_activity(v, activity_[v] * factor); }

  void make_free(Var v) { order_.insert(v); }
  void remove(Var v) { order_.remove(v); }

  void bump(Var v) {
    activity_[v] += increment_;
    if (activity_[v] > kRescaleLimit) rescale();
    order_.update(v);
  }

  void decay() { increment_ /= kDecay; }

  void bump_and_decay(std::span<const Var> vars) {
    for (Var v : vars) bump(v);
    decay();
  }

  // Pops assigned variables off the top until a free one (per is_free) is
  // the maximum; returns 0 when none is left.
  template <class IsFree>
  Var peek_free(IsFree&& is_free) {
    while (!order_.empty()) {
      const Var v = order_.top();
      if (is_free(v)) return v;
      order_.pop();
    }
    return 0;
  }

 private:
  void rescale() {
    for (double& a : activity_) a *= kRescaleFactor;
    increment_ *= kRescaleFactor;
  }

  std::vector<double> activity_{0.0};
  ActivityHeap order_;
  double increment_ = 1.0;
};

}  // namespace crvsat
