// SPDX-License-Identifier: Apache-2.0

// Bit-parallel clause evaluation for the exhaustive checkers. Variables are
// mapped to bit positions of a 64-bit word in the order given.

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "bafsynth/error.hpp"
#include "bafsynth/literal.hpp"

namespace bafsynth::detail {

struct BitClause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool satisfied(std::uint64_t word) const { return ((word & pos) | (~word & neg)) != 0; }
};

class BitLayout {
 public:
  BitLayout() = default;
  explicit BitLayout(std::span<const Var> order) {
    if (order.size() > 63) throw ResourceLimitExceeded("more than 63 variables in a bit layout");
    for (std::size_t i = 0; i < order.size(); ++i) bit_[order[i]] = static_cast<unsigned>(i);
  }

  /// Variables missing from the layout are rejected.
  BitClause compile(std::span<const Lit> clause) const {
    BitClause out;
    for (Lit lit : clause) {
      auto it = bit_.find(lit.var());
      if (it == bit_.end()) throw ContractViolation("literal outside the bit layout");
      (lit.negative() ? out.neg : out.pos) |= std::uint64_t{1} << it->second;
    }
    return out;
  }

  std::vector<BitClause> compile_all(std::span<const Clause> clauses) const {
    std::vector<BitClause> out;
    out.reserve(clauses.size());
    for (const Clause& c : clauses) out.push_back(compile(c));
    return out;
  }

 private:
  std::unordered_map<Var, unsigned> bit_;
};

inline bool all_satisfied(const std::vector<BitClause>& clauses, std::uint64_t word) {
  for (const BitClause& c : clauses) {
    if (!c.satisfied(word)) return false;
  }
  return true;
}

}  // namespace bafsynth::detail
