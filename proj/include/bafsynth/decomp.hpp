// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bafsynth/decision_list.hpp"
#include "bafsynth/spec_model.hpp"
#include "bafsynth/synth.hpp"

namespace bafsynth {

/// Sequential decomposition of a CNF spec through one fresh variable z_i per
/// clause: F1(x, z) states z_i <-> not x_part(i); F2(z, y) is the conjunction
/// of (not z_i or y_part(i)).
struct DecomposedPair {
  std::vector<Var> inputs;
  std::vector<Var> outputs;
  /// z_i is num_vars + 1 + i for clause i.
  std::vector<Var> z_vars;
  std::vector<Clause> f1;
  /// Inputs z, outputs y.
  Specification f2;
};

DecomposedPair cnf_decompose(const Specification& spec);

struct GoodDecompositionReport {
  /// F(x, y) == exists z. F1(x, z) and F2(z, y), for all x, y.
  bool equivalent = true;
  /// Every z reachable through F1 from an x in Dom(F) lies in Dom(F2).
  bool image_in_domain = true;
  /// Every x has exactly one z with F1(x, z).
  bool functional = true;
  /// First (x, y) where equivalence fails, over inputs and outputs.
  std::optional<Assignment> equivalence_witness;
  /// First (x, z) where the image condition fails, over inputs and z.
  std::optional<Assignment> image_witness;

  bool good() const { return equivalent && image_in_domain; }
};

/// Exhaustive check; throws ResourceLimitExceeded when inputs + outputs + z
/// exceed `max_vars`.
GoodDecompositionReport check_good_decomposition(const Specification& spec,
                                                 const DecomposedPair& pair,
                                                 std::size_t max_vars = 30);

/// z_i := not x_part(i) under `inputs`; the unique F1 image.
Assignment g1(const Specification& spec, const DecomposedPair& pair, const Assignment& inputs);

enum class CompositionStatus { kVerified, kCounterexample, kDecompositionUnrealizable };

struct CompositionReport {
  CompositionStatus status = CompositionStatus::kVerified;
  /// Decision list for F2 from back-and-forth, or from MSS enumeration when
  /// F2 is unrealizable.
  DecisionList g2;
  /// Set when F2 is unrealizable over all z.
  std::optional<Assignment> f2_witness;
  /// When F2 is unrealizable: whether the partial MSS-enumeration g2 still
  /// composes into an implementation of F.
  bool fallback_verified = false;
  /// Input on which g2(g1(x)) is missing or wrong.
  std::optional<Assignment> counterexample;
};

/// Builds g2 for F2 and checks g2(g1(x)) against F on every input.
CompositionReport compose_and_verify(const Specification& spec,
                                     const SynthesisOptions& options = {},
                                     std::size_t max_inputs = 20);

}  // namespace bafsynth
