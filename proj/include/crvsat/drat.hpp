#pragma once

#include <ostream>
#include <span>

#include "crvsat/cnf.hpp"
#include "crvsat/errors.hpp"

namespace crvsat {

// DRAT text proof: one lemma per line, deletions prefixed with "d".
class DratWriter {
 public:
  DratWriter() = default;
  explicit DratWriter(std::ostream* sink) : sink_(sink) {}

  bool enabled() const { return sink_ != nullptr; }

  void learn(std::span<const Literal> clause) { write(clause, false); }
  void remove(std::span<const Literal> clause) { write(clause, true); }
  void empty_clause() { write({}, false); }

 private:
  void write(std::span<const Literal> clause, bool deletion) {
    if (!sink_) return;
    std::ostream& out = *sink_;
    if (deletion) out << "d ";
    for (Literal l : clause) out << l.to_dimacs() << ' ';
    out << "0\n";
    if (!out) throw IoError("failed to write DRAT proof");
  }

  std::ostream* sink_ = nullptr;
};

}  // namespace crvsat
