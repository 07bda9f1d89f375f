// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bafsynth/decision_list.hpp"
#include "bafsynth/spec_model.hpp"
#include "bafsynth/synth.hpp"
#include "bafsynth/verify.hpp"

namespace bafsynth {

enum class SynthMode { kBackAndForth, kMfsEnumeration, kMssEnumeration };

std::string_view to_string(SynthMode mode);
/// Accepts "back-and-forth", "mfs-enum", "mss-enum".
std::optional<SynthMode> parse_mode(std::string_view text);

struct PipelineConfig {
  SynthMode mode = SynthMode::kBackAndForth;
  bool partition = true;
  bool verify = true;
  /// Worker threads for independent components.
  std::size_t jobs = 1;
  SynthesisOptions synthesis;
};

enum class RunStatus { kRealizable, kUnrealizable, kTimeout, kLimit, kVerificationFailed };

std::string_view to_string(RunStatus status);

struct ComponentResult {
  Specification spec;
  /// Index in the original specification of each component clause.
  std::vector<std::size_t> original_indices;
  DecisionList list;
  SynthesisStats stats;
};

struct PipelineResult {
  RunStatus status = RunStatus::kRealizable;
  std::vector<ComponentResult> components;
  SynthesisStats stats;
  bool verified = false;
  /// Unrealizable: the failing component, its witness MFS mapped back to
  /// original clause indices, and an input with no valid output.
  std::optional<std::size_t> failed_component;
  ClauseIndexSet witness_mfs;
  std::optional<Assignment> witness_input;
  /// Verification failure.
  std::optional<Counterexample> counterexample;
  /// Human-readable detail for timeout, limit and failure statuses.
  std::string message;

  std::size_t total_decisions() const;
  /// Meaningful when every component produced a list.
  CombinedImplementation implementation(const Specification& full_spec) const;
};

/// Partition (optional), per-component synthesis, then verification
/// (optional). A specification whose clauses form at most one component is
/// synthesized whole, so its list keeps the full specification's digest.
/// Cancellation and enumeration limits become statuses, not exceptions.
PipelineResult run_pipeline(const Specification& spec, const PipelineConfig& config);

}  // namespace bafsynth
