// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/decomp.hpp"

#include <algorithm>
#include <unordered_map>

#include "bafsynth/error.hpp"
#include "bitcnf.hpp"

namespace bafsynth {

namespace {

std::vector<Var> concat(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Assignment merge(const Assignment& a, const Assignment& b) {
  std::vector<Var> vars = concat(a.variables(), b.variables());
  std::sort(vars.begin(), vars.end());
  Assignment out(vars);
  for (Var v : a.variables()) out.set(v, a.value(v));
  for (Var v : b.variables()) out.set(v, b.value(v));
  return out;
}

// Exhaustive: some output satisfies the spec under this input.
bool in_domain(const Specification& spec, const Assignment& input) {
  std::vector<Clause> required;
  for (const SplitClause& c : spec.clauses()) {
    if (!input.satisfies(c.x_part)) required.push_back(c.y_part);
  }
  const detail::BitLayout layout(spec.outputs());
  const auto compiled = layout.compile_all(required);
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << spec.outputs().size()); ++y) {
    if (detail::all_satisfied(compiled, y)) return true;
  }
  return false;
}

}  // namespace

DecomposedPair cnf_decompose(const Specification& spec) {
  DecomposedPair pair;
  pair.inputs = spec.inputs();
  pair.outputs = spec.outputs();
  const std::size_t k = spec.size();
  std::vector<SplitClause> f2_clauses;
  for (std::size_t i = 0; i < k; ++i) {
    const Var z = spec.num_vars() + 1 + static_cast<Var>(i);
    pair.z_vars.push_back(z);
    const Clause& x = spec.clause(i).x_part;
    Clause back{Lit::pos(z)};
    for (Lit lit : x) {
      pair.f1.push_back({Lit::neg(z), ~lit});
      back.push_back(lit);
    }
    pair.f1.push_back(std::move(back));
    f2_clauses.push_back(SplitClause{{Lit::neg(z)}, spec.clause(i).y_part});
  }
  pair.f2 = Specification::from_split(spec.num_vars() + static_cast<Var>(k), pair.z_vars,
                                      spec.outputs(), std::move(f2_clauses));
  return pair;
}

GoodDecompositionReport check_good_decomposition(const Specification& spec,
                                                 const DecomposedPair& pair,
                                                 std::size_t max_vars) {
  const std::size_t m = pair.inputs.size();
  const std::size_t n = pair.outputs.size();
  const std::size_t kz = pair.z_vars.size();
  if (m + n + kz > max_vars || m + kz > 40 || n > 40) {
    throw ResourceLimitExceeded("decomposition check limited to " + std::to_string(max_vars) +
                                " variables, got " + std::to_string(m + n + kz));
  }

  const std::vector<Var> xz_vars = concat(pair.inputs, pair.z_vars);
  const std::vector<Var> zy_vars = concat(pair.z_vars, pair.outputs);
  const std::vector<Var> xy_vars = concat(pair.inputs, pair.outputs);
  const auto f1 = detail::BitLayout(xz_vars).compile_all(pair.f1);
  std::vector<Clause> f2_full;
  for (std::size_t i = 0; i < pair.f2.size(); ++i) f2_full.push_back(pair.f2.full_clause(i));
  const auto f2 = detail::BitLayout(zy_vars).compile_all(f2_full);
  std::vector<Clause> f_full;
  for (std::size_t i = 0; i < spec.size(); ++i) f_full.push_back(spec.full_clause(i));
  const auto f = detail::BitLayout(xy_vars).compile_all(f_full);

  std::unordered_map<std::uint64_t, bool> f2_domain;
  auto z_in_domain = [&](std::uint64_t z) {
    auto it = f2_domain.find(z);
    if (it != f2_domain.end()) return it->second;
    bool found = false;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n) && !found; ++y) {
      found = detail::all_satisfied(f2, z | (y << kz));
    }
    f2_domain.emplace(z, found);
    return found;
  };

  GoodDecompositionReport report;
  std::vector<std::uint64_t> images;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    images.clear();
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << kz); ++z) {
      if (detail::all_satisfied(f1, x | (z << m))) images.push_back(z);
    }
    if (images.size() != 1) report.functional = false;

    bool x_in_domain = false;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
      const bool direct = detail::all_satisfied(f, x | (y << m));
      x_in_domain = x_in_domain || direct;
      bool composed = false;
      for (std::uint64_t z : images) {
        if (detail::all_satisfied(f2, z | (y << kz))) {
          composed = true;
          break;
        }
      }
      if (direct != composed && report.equivalent) {
        report.equivalent = false;
        report.equivalence_witness = Assignment::from_bits(xy_vars, x | (y << m));
      }
    }
    if (!x_in_domain) continue;
    for (std::uint64_t z : images) {
      if (!z_in_domain(z) && report.image_in_domain) {
        report.image_in_domain = false;
        report.image_witness = Assignment::from_bits(xz_vars, x | (z << m));
      }
    }
  }
  return report;
}

Assignment g1(const Specification& spec, const DecomposedPair& pair, const Assignment& inputs) {
  Assignment z(pair.z_vars);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    z.set(pair.z_vars[i], !inputs.satisfies(spec.clause(i).x_part));
  }
  return z;
}

CompositionReport compose_and_verify(const Specification& spec, const SynthesisOptions& options,
                                     std::size_t max_inputs) {
  const std::size_t m = spec.inputs().size();
  if (m > max_inputs || m > 63) {
    throw ResourceLimitExceeded("composition check limited to " + std::to_string(max_inputs) +
                                " inputs");
  }
  const DecomposedPair pair = cnf_decompose(spec);
  CompositionReport report;
  SynthesisOutcome f2_outcome = back_and_forth(pair.f2, options);
  if (f2_outcome.realizable()) {
    report.g2 = std::move(f2_outcome.decision_list);
  } else {
    report.status = CompositionStatus::kDecompositionUnrealizable;
    report.f2_witness = f2_outcome.witness_input;
    report.g2 = synth_by_mss_enumeration(pair.f2, options);
  }

  std::optional<Assignment> counterexample;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m) && !counterexample; ++bits) {
    options.interrupt.check();
    Assignment x = Assignment::from_bits(spec.inputs(), bits);
    if (!in_domain(spec, x)) continue;
    auto y = evaluate(pair.f2, report.g2, g1(spec, pair, x));
    if (!y || !spec.evaluate(merge(x, *y))) counterexample = std::move(x);
  }

  if (report.status == CompositionStatus::kDecompositionUnrealizable) {
    report.fallback_verified = !counterexample.has_value();
  } else if (counterexample) {
    report.status = CompositionStatus::kCounterexample;
  }
  report.counterexample = std::move(counterexample);
  return report;
}

}  // namespace bafsynth
