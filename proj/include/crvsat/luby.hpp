#pragma once

#include <cstdint>

namespace crvsat {

// i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 1 1 2 ...
inline std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1;
  std::uint32_t seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::uint64_t{1} << seq;
}

// Restarts after unit * luby(0), unit * luby(1), ... conflicts.
class LubyRestarts {
 public:
  explicit LubyRestarts(std::uint64_t unit = 128) : unit_(unit), next_(unit * luby(0)) {}

  // True once the cumulative conflict count reaches the next restart point;
  // the schedule then advances.
  bool restart_check(std::uint64_t conflicts) {
    if (conflicts < next_) return false;
    ++index_;
    next_ = conflicts + unit_ * luby(index_);
    return true;
  }

  std::uint64_t next_restart() const { return next_; }

 private:
  std::uint64_t unit_;
  std::uint64_t index_ = 0;
  std::uint64_t next_;
};

}  // namespace crvsat
