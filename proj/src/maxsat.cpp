// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/maxsat.hpp"

#include <algorithm>

#include "bafsynth/sat_solver.hpp"

namespace bafsynth {

namespace {

std::size_t falsified_count(const Assignment& model, const std::vector<Clause>& soft) {
  return static_cast<std::size_t>(std::count_if(
      soft.begin(), soft.end(), [&](const Clause& c) { return !model.satisfies(c); }));
}

// Sequential counter over `inputs` up to `width`: returns at_least[j-1]
// which is forced true whenever at least j inputs are true.
std::vector<Lit> build_counter(SatSolver& solver, const std::vector<Lit>& inputs,
                               std::size_t width) {
  std::vector<Lit> prev;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::size_t levels = std::min(i + 1, width);
    std::vector<Lit> cur(levels);
    for (std::size_t j = 0; j < levels; ++j) cur[j] = Lit::pos(solver.new_var());
    solver.add_clause({~inputs[i], cur[0]});
    for (std::size_t j = 0; j < prev.size() && j < levels; ++j) {
      solver.add_clause({~prev[j], cur[j]});
    }
    for (std::size_t j = 1; j < levels && j - 1 < prev.size(); ++j) {
      solver.add_clause({~inputs[i], ~prev[j - 1], cur[j]});
    }
    prev = std::move(cur);
  }
  return prev;
}

}  // namespace

MaxSatResult solve_partial_maxsat(const MaxSatInstance& instance, MaxSatStrategy strategy,
                                  const Interrupt& interrupt) {
  std::vector<Var> vars = instance.variables;
  for (const auto* group : {&instance.hard, &instance.soft}) {
    for (const Clause& c : *group) {
      for (Lit lit : c) vars.push_back(lit.var());
    }
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  MaxSatResult result;
  SatSolver solver(interrupt);
  solver.ensure_vars(vars.empty() ? 0 : vars.back());
  for (const Clause& c : instance.hard) solver.add_clause(c);

  std::vector<Lit> relax;
  relax.reserve(instance.soft.size());
  for (const Clause& c : instance.soft) {
    Lit r = Lit::pos(solver.new_var());
    Clause relaxed = c;
    relaxed.push_back(r);
    solver.add_clause(relaxed);
    relax.push_back(r);
  }

  SatResult first = solver.solve();
  ++result.sat_calls;
  if (!first.satisfiable()) return result;
  Assignment best = std::move(first.model);

  if (strategy == MaxSatStrategy::kMaximum) {
    std::size_t cost = falsified_count(best, instance.soft);
    if (cost > 0) {
      const std::vector<Lit> at_least = build_counter(solver, relax, cost);
      while (cost > 0) {
        SatResult next = solver.solve({~at_least[cost - 1]});
        ++result.sat_calls;
        if (!next.satisfiable()) break;
        best = std::move(next.model);
        cost = falsified_count(best, instance.soft);
      }
    }
  } else {
    std::vector<Lit> kept;
    for (std::size_t i = 0; i < instance.soft.size(); ++i) {
      if (best.satisfies(instance.soft[i])) {
        kept.push_back(~relax[i]);
        continue;
      }
      kept.push_back(~relax[i]);
      SatResult next = solver.solve(kept);
      ++result.sat_calls;
      if (next.satisfiable()) {
        best = std::move(next.model);
      } else {
        kept.pop_back();
      }
    }
  }

  std::vector<std::size_t> satisfied;
  for (std::size_t i = 0; i < instance.soft.size(); ++i) {
    if (best.satisfies(instance.soft[i])) satisfied.push_back(i);
  }
  result.status = MaxSatStatus::kOptimal;
  result.model = best.restrict_to(vars);
  result.satisfied_soft = ClauseIndexSet(std::move(satisfied));
  return result;
}

}  // namespace bafsynth
