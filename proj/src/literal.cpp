// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/literal.hpp"

#include <algorithm>
#include <string>

#include "bafsynth/error.hpp"

namespace bafsynth {

Clause make_clause(std::initializer_list<int> dimacs) {
  Clause clause;
  clause.reserve(dimacs.size());
  for (int value : dimacs) {
    if (value == 0) throw ContractViolation("literal 0 is not a literal");
    clause.push_back(Lit::from_dimacs(value));
  }
  return clause;
}

bool normalize_clause(Clause& clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i) {
    if (clause[i - 1].var() == clause[i].var()) return false;
  }
  return true;
}

Assignment::Assignment(std::vector<Var> variables) : vars_(std::move(variables)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  values_.assign(vars_.size(), 0);
  Var max_var = vars_.empty() ? 0 : vars_.back();
  slot_.assign(static_cast<std::size_t>(max_var) + 1, 0);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] == 0) throw ContractViolation("variable id 0 is invalid");
    slot_[vars_[i]] = static_cast<std::uint32_t>(i + 1);
  }
}

Assignment Assignment::from_bits(std::span<const Var> variables, std::uint64_t bits) {
  Assignment out(std::vector<Var>(variables.begin(), variables.end()));
  for (std::size_t i = 0; i < variables.size(); ++i) {
    out.set(variables[i], ((bits >> i) & 1u) != 0);
  }
  return out;
}

bool Assignment::value(Var var) const {
  if (!defines(var)) {
    throw ContractViolation("assignment does not define variable " + std::to_string(var));
  }
  return values_[slot_[var] - 1] != 0;
}

void Assignment::set(Var var, bool value) {
  if (!defines(var)) {
    throw ContractViolation("assignment does not define variable " + std::to_string(var));
  }
  values_[slot_[var] - 1] = value ? 1 : 0;
}

bool Assignment::satisfies(std::span<const Lit> clause) const {
  return std::any_of(clause.begin(), clause.end(),
                     [this](Lit lit) { return satisfies(lit); });
}

Assignment Assignment::restrict_to(std::span<const Var> variables) const {
  Assignment out(std::vector<Var>(variables.begin(), variables.end()));
  for (Var var : out.vars_) out.set(var, value(var));
  return out;
}

}  // namespace bafsynth
