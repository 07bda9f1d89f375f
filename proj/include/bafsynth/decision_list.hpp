// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bafsynth/index_set.hpp"
#include "bafsynth/literal.hpp"
#include "bafsynth/spec_model.hpp"

namespace bafsynth {

/// One `if guard then output` step. The guard is the conjunction of the
/// x-parts of the listed clauses; an empty guard is always true.
struct Decision {
  ClauseIndexSet guard;
  Assignment output;

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Ordered decisions evaluated first-match. Guards index into the clauses of
/// the specification identified by `spec_digest`.
struct DecisionList {
  std::vector<Var> inputs;
  std::vector<Var> outputs;
  std::vector<Decision> decisions;
  std::string spec_digest;

  std::size_t size() const { return decisions.size(); }
  friend bool operator==(const DecisionList&, const DecisionList&) = default;
};

/// Decision i gets guard = complement of mss_list[i] and output witnesses[i].
/// Throws ContractViolation if a witness misses a clause of its MSS or is
/// not total over the outputs.
DecisionList build_decision_list(const Specification& spec,
                                 const std::vector<ClauseIndexSet>& mss_list,
                                 const std::vector<Assignment>& witnesses);

/// True iff every guard clause's x-part holds under `inputs`.
bool guard_holds(const Specification& spec, const ClauseIndexSet& guard,
                 const Assignment& inputs);

/// Output of the first firing decision, or nullopt when none fires.
std::optional<Assignment> evaluate(const Specification& spec, const DecisionList& list,
                                   const Assignment& inputs);

/// Per-component decision lists over disjoint output sets, plus defaults
/// (false) for outputs no component mentions.
class CombinedImplementation {
 public:
  struct Part {
    Specification spec;
    DecisionList list;
  };

  /// Throws ContractViolation when output sets overlap or a list mentions an
  /// output the full specification lacks.
  CombinedImplementation(std::vector<Part> parts, const Specification& full_spec);

  const std::vector<Part>& parts() const { return parts_; }
  const Assignment& defaults() const { return defaults_; }
  std::size_t total_decisions() const;

  /// Union of the component outputs and the defaults; nullopt if any
  /// component leaves the input uncovered.
  std::optional<Assignment> evaluate(const Assignment& inputs) const;

 private:
  std::vector<Part> parts_;
  std::vector<Var> outputs_;
  Assignment defaults_;
};

CombinedImplementation combine(std::vector<CombinedImplementation::Part> parts,
                               const Specification& full_spec);

/// Line-oriented text form:
///
///   dl 1
///   spec <hex digest>
///   in <ids>
///   out <ids>
///   d <guard indices, 1-based> | <var>=<bit> ...
///
/// LF line endings, single spaces, no trailing whitespace.
std::string serialize(const DecisionList& list);

/// Parses one document. Throws ParseError.
DecisionList parse_decision_list(std::string_view text);

/// Parses a file holding one or more concatenated documents (one per
/// partition component).
std::vector<DecisionList> parse_decision_lists(std::string_view text);

nlohmann::ordered_json to_json(const DecisionList& list);

}  // namespace bafsynth
