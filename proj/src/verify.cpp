// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/verify.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "bafsynth/error.hpp"
#include "bafsynth/sat_solver.hpp"
#include "bitcnf.hpp"

namespace bafsynth {

namespace {

void check_binding(const Specification& spec, const DecisionList& list) {
  if (list.spec_digest != spec.digest()) {
    throw ContractViolation("decision list was built for a different specification (digest " +
                            list.spec_digest + ")");
  }
  if (list.inputs != spec.inputs() || list.outputs != spec.outputs()) {
    throw ContractViolation("decision list variables do not match the specification");
  }
  for (const Decision& d : list.decisions) {
    if (!d.guard.empty() && d.guard.back() >= spec.size()) {
      throw ContractViolation("guard index out of range");
    }
  }
}

std::optional<std::size_t> violated_clause(const Specification& spec, const Assignment& input,
                                           const Assignment& output) {
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const SplitClause& c = spec.clause(j);
    if (!input.satisfies(c.x_part) && !output.satisfies(c.y_part)) return j;
  }
  return std::nullopt;
}

std::vector<ClauseIndexSet> maximal_sets(const std::unordered_set<std::uint64_t>& seen) {
  std::vector<std::uint64_t> masks(seen.begin(), seen.end());
  std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a);
    int pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  std::vector<std::uint64_t> kept;
  for (std::uint64_t m : masks) {
    bool dominated = std::any_of(kept.begin(), kept.end(),
                                 [m](std::uint64_t k) { return (m & ~k) == 0; });
    if (!dominated) kept.push_back(m);
  }
  std::vector<ClauseIndexSet> out;
  out.reserve(kept.size());
  for (std::uint64_t m : kept) {
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < 64; ++i) {
      if ((m >> i) & 1u) items.push_back(i);
    }
    out.emplace_back(std::move(items));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

VerificationReport verify_decision_list(const Specification& spec, const DecisionList& list,
                                        const Interrupt& interrupt) {
  check_binding(spec, list);
  VerificationReport report;

  for (std::size_t i = 0; i < list.size(); ++i) {
    const Decision& d = list.decisions[i];
    SatSolver solver(interrupt);
    solver.ensure_vars(spec.num_vars());
    for (std::size_t g : d.guard) solver.add_clause(spec.clause(g).x_part);
    for (std::size_t j = 0; j < spec.size(); ++j) {
      // A guard clause cannot be falsified where the guard holds.
      if (d.guard.contains(j) || d.output.satisfies(spec.clause(j).y_part)) continue;
      std::vector<Lit> falsify;
      for (Lit lit : spec.clause(j).x_part) falsify.push_back(~lit);
      SatResult r = solver.solve(falsify);
      if (r.satisfiable()) {
        report.status = VerificationStatus::kCounterexample;
        report.counterexample = Counterexample{Counterexample::Kind::kSoundness,
                                               r.model.restrict_to(spec.inputs()), i, j};
        return report;
      }
    }
  }

  // Coverage: b_g forces x_part(g) false; each decision needs some b_g.
  SatSolver solver(interrupt);
  solver.ensure_vars(spec.num_vars());
  std::vector<Var> selector(spec.size(), 0);
  for (const Decision& d : list.decisions) {
    Clause some_fails;
    for (std::size_t g : d.guard) {
      if (selector[g] == 0) {
        selector[g] = solver.new_var();
        for (Lit lit : spec.clause(g).x_part) solver.add_clause({Lit::neg(selector[g]), ~lit});
      }
      some_fails.push_back(Lit::pos(selector[g]));
    }
    solver.add_clause(some_fails);
  }
  SatResult r = solver.solve();
  if (r.satisfiable()) {
    report.status = VerificationStatus::kCounterexample;
    report.counterexample =
        Counterexample{Counterexample::Kind::kCoverageGap, r.model.restrict_to(spec.inputs()), 0, 0};
  }
  return report;
}

VerificationReport verify_by_enumeration(const Specification& spec, const DecisionList& list,
                                         std::size_t max_inputs) {
  check_binding(spec, list);
  const std::size_t m = spec.inputs().size();
  if (m > max_inputs || m > 63) {
    throw ResourceLimitExceeded("too many inputs for enumeration: " + std::to_string(m));
  }
  VerificationReport report;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    Assignment input = Assignment::from_bits(spec.inputs(), bits);
    bool fired = false;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Decision& d = list.decisions[i];
      if (!guard_holds(spec, d.guard, input)) continue;
      fired = true;
      if (auto j = violated_clause(spec, input, d.output)) {
        report.status = VerificationStatus::kCounterexample;
        report.counterexample =
            Counterexample{Counterexample::Kind::kSoundness, std::move(input), i, *j};
        return report;
      }
    }
    if (!fired) {
      report.status = VerificationStatus::kCounterexample;
      report.counterexample =
          Counterexample{Counterexample::Kind::kCoverageGap, std::move(input), 0, 0};
      return report;
    }
  }
  return report;
}

bool replay(const Specification& spec, const DecisionList& list, const Counterexample& cex) {
  if (cex.kind == Counterexample::Kind::kCoverageGap) {
    return !evaluate(spec, list, cex.input).has_value();
  }
  if (cex.decision >= list.size() || cex.clause >= spec.size()) return false;
  const Decision& d = list.decisions[cex.decision];
  const SplitClause& c = spec.clause(cex.clause);
  return guard_holds(spec, d.guard, cex.input) && !cex.input.satisfies(c.x_part) &&
         !d.output.satisfies(c.y_part);
}

bool BruteForceTable::realizable() const {
  return std::all_of(outputs.begin(), outputs.end(),
                     [](const std::optional<Assignment>& o) { return o.has_value(); });
}

BruteForceTable brute_force_synthesize(const Specification& spec, std::size_t max_vars) {
  const std::size_t m = spec.inputs().size();
  const std::size_t n = spec.outputs().size();
  if (m + n > max_vars || m + n > 62) {
    throw ResourceLimitExceeded("brute-force synthesis limited to " + std::to_string(max_vars) +
                                " variables, got " + std::to_string(m + n));
  }
  const detail::BitLayout in_layout(spec.inputs());
  const detail::BitLayout out_layout(spec.outputs());
  std::vector<detail::BitClause> x_parts;
  std::vector<detail::BitClause> y_parts;
  for (const SplitClause& c : spec.clauses()) {
    x_parts.push_back(in_layout.compile(c.x_part));
    y_parts.push_back(out_layout.compile(c.y_part));
  }

  BruteForceTable table;
  table.outputs.resize(std::size_t{1} << m);
  std::vector<detail::BitClause> required;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    required.clear();
    for (std::size_t i = 0; i < x_parts.size(); ++i) {
      if (!x_parts[i].satisfied(x)) required.push_back(y_parts[i]);
    }
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
      if (detail::all_satisfied(required, y)) {
        table.outputs[x] = Assignment::from_bits(spec.outputs(), y);
        break;
      }
    }
  }
  return table;
}

MfsMss brute_force_mfs_mss(const Specification& spec, std::size_t max_clauses,
                           std::size_t max_block_vars) {
  const std::size_t k = spec.size();
  const std::size_t m = spec.inputs().size();
  const std::size_t n = spec.outputs().size();
  if (k > max_clauses || k > 64) {
    throw ResourceLimitExceeded("brute-force MFS/MSS limited to " + std::to_string(max_clauses) +
                                " clauses, got " + std::to_string(k));
  }
  if (m > max_block_vars || n > max_block_vars) {
    throw ResourceLimitExceeded("brute-force MFS/MSS limited to " +
                                std::to_string(max_block_vars) + " variables per block");
  }
  const detail::BitLayout in_layout(spec.inputs());
  const detail::BitLayout out_layout(spec.outputs());
  std::vector<detail::BitClause> x_parts;
  std::vector<detail::BitClause> y_parts;
  for (const SplitClause& c : spec.clauses()) {
    x_parts.push_back(in_layout.compile(c.x_part));
    y_parts.push_back(out_layout.compile(c.y_part));
  }

  std::unordered_set<std::uint64_t> falsified;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!x_parts[i].satisfied(x)) mask |= std::uint64_t{1} << i;
    }
    falsified.insert(mask);
  }
  std::unordered_set<std::uint64_t> satisfied;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (y_parts[i].satisfied(y)) mask |= std::uint64_t{1} << i;
    }
    satisfied.insert(mask);
  }
  return MfsMss{maximal_sets(falsified), maximal_sets(satisfied)};
}

}  // namespace bafsynth
