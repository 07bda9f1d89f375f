// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/synth.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "bafsynth/error.hpp"

namespace bafsynth {

namespace {

using Clock = std::chrono::steady_clock;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

SynthesisOutcome unrealizable(const Specification& spec, const ClauseIndexSet& mfs) {
  SynthesisOutcome out;
  out.status = SynthesisStatus::kUnrealizable;
  out.witness_mfs = mfs;
  out.witness_input = falsifying_input(spec, mfs);
  return out;
}

}  // namespace

SynthesisStats& SynthesisStats::operator+=(const SynthesisStats& other) {
  iterations += other.iterations;
  sat_calls += other.sat_calls;
  maxsat_calls += other.maxsat_calls;
  mss_recorded += other.mss_recorded;
  partitions += other.partitions;
  wall_time += other.wall_time;
  return *this;
}

Assignment falsifying_input(const Specification& spec, const ClauseIndexSet& clauses) {
  Assignment input(spec.inputs());
  for (std::size_t i : clauses) {
    for (Lit lit : spec.clause(i).x_part) input.set(lit.var(), lit.negative());
  }
  for (std::size_t i : clauses) {
    if (input.satisfies(spec.clause(i).x_part)) {
      throw ContractViolation("clause set is not simultaneously falsifiable");
    }
  }
  return input;
}

CoverageQuery::CoverageQuery(const ConflictGraph& graph, Interrupt interrupt)
    : solver_(std::move(interrupt)), clause_count_(graph.vertex_count()) {
  solver_.ensure_vars(static_cast<Var>(clause_count_));
  for (auto [a, b] : graph.edges()) {
    solver_.add_clause({Lit::neg(selector(a)), Lit::neg(selector(b))});
  }
}

std::optional<ClauseIndexSet> CoverageQuery::next_uncovered_mfs(const ConflictGraph& graph) {
  SatResult result = solver_.solve();
  ++sat_calls_;
  if (!result.satisfiable()) return std::nullopt;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < clause_count_; ++i) {
    if (result.model.value(selector(i))) chosen.push_back(i);
  }
  return extend_to_mis(graph, ClauseIndexSet(std::move(chosen)));
}

void CoverageQuery::record_mss(const ClauseIndexSet& mss) {
  Clause clause;
  for (std::size_t i : mss.complement(clause_count_)) clause.push_back(Lit::pos(selector(i)));
  solver_.add_clause(clause);
  coverage_.push_back(std::move(clause));
}

CoverResult covering_mss(const Specification& spec, const ClauseIndexSet& mfs,
                         const SynthesisOptions& options) {
  MaxSatInstance instance;
  instance.variables = spec.outputs();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    (mfs.contains(i) ? instance.hard : instance.soft).push_back(spec.clause(i).y_part);
  }
  MaxSatResult result = solve_partial_maxsat(instance, options.maxsat, options.interrupt);
  CoverResult out;
  if (!result.optimal()) return out;
  out.realizable = true;
  out.witness = result.model.restrict_to(spec.outputs());
  std::vector<std::size_t> satisfied;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (out.witness.satisfies(spec.clause(i).y_part)) satisfied.push_back(i);
  }
  out.mss = ClauseIndexSet(std::move(satisfied));
  return out;
}

SynthesisOutcome back_and_forth(const Specification& spec, const SynthesisOptions& options) {
  const auto start = Clock::now();
  const ConflictGraph graph = build_conflict_graph(spec);

  const ClauseIndexSet constant_clauses = spec.empty_output_clauses();
  if (!constant_clauses.empty()) {
    SynthesisOutcome out =
        unrealizable(spec, extend_to_mis(graph, ClauseIndexSet{*constant_clauses.begin()}));
    out.stats.wall_time = Clock::now() - start;
    return out;
  }

  CoverageQuery query(graph, options.interrupt);
  SynthesisStats stats;
  std::vector<ClauseIndexSet> mss_list;
  std::vector<ClauseIndexSet> mfs_list;
  std::vector<Assignment> witnesses;

  while (auto mfs = query.next_uncovered_mfs(graph)) {
    options.interrupt.check();
    ++stats.iterations;
    mfs_list.push_back(*mfs);
    CoverResult cover = covering_mss(spec, *mfs, options);
    ++stats.maxsat_calls;
    if (!cover.realizable) {
      SynthesisOutcome out = unrealizable(spec, *mfs);
      stats.sat_calls = query.sat_calls();
      stats.wall_time = Clock::now() - start;
      out.stats = stats;
      out.generated_mfs = std::move(mfs_list);
      out.recorded_mss = std::move(mss_list);
      return out;
    }
    query.record_mss(cover.mss);
    mss_list.push_back(std::move(cover.mss));
    witnesses.push_back(std::move(cover.witness));
  }

  SynthesisOutcome out;
  out.status = SynthesisStatus::kRealizable;
  out.decision_list = build_decision_list(spec, mss_list, witnesses);
  stats.sat_calls = query.sat_calls();
  stats.mss_recorded = mss_list.size();
  stats.wall_time = Clock::now() - start;
  out.stats = stats;
  out.generated_mfs = std::move(mfs_list);
  out.recorded_mss = std::move(mss_list);
  return out;
}

SynthesisOutcome synth_by_mfs_enumeration(const Specification& spec,
                                          const SynthesisOptions& options) {
  const auto start = Clock::now();
  const ConflictGraph graph = build_conflict_graph(spec);
  MisEnumeration all = enumerate_mis(graph, options.mis_limit, options.interrupt);
  if (all.overflow) {
    throw ResourceLimitExceeded("more than " + std::to_string(options.mis_limit) +
                                " maximal falsifiable subsets");
  }

  SynthesisStats stats;
  DecisionList list;
  list.inputs = spec.inputs();
  list.outputs = spec.outputs();
  list.spec_digest = spec.digest();
  const Var max_output = spec.outputs().empty() ? 0 : spec.outputs().back();
  for (const ClauseIndexSet& mfs : all.sets) {
    options.interrupt.check();
    ++stats.iterations;
    SatSolver solver(options.interrupt);
    solver.ensure_vars(max_output);
    for (std::size_t i : mfs) solver.add_clause(spec.clause(i).y_part);
    SatResult result = solver.solve();
    ++stats.sat_calls;
    if (!result.satisfiable()) {
      SynthesisOutcome out = unrealizable(spec, mfs);
      stats.wall_time = Clock::now() - start;
      out.stats = stats;
      out.generated_mfs = all.sets;
      return out;
    }
    list.decisions.push_back(
        Decision{mfs.complement(spec.size()), result.model.restrict_to(spec.outputs())});
  }

  SynthesisOutcome out;
  out.status = SynthesisStatus::kRealizable;
  out.decision_list = std::move(list);
  stats.wall_time = Clock::now() - start;
  out.stats = stats;
  out.generated_mfs = std::move(all.sets);
  return out;
}

DecisionList synth_by_mss_enumeration(const Specification& spec, const SynthesisOptions& options,
                                      SynthesisStats* stats) {
  const auto start = Clock::now();
  const std::size_t k = spec.size();
  const auto selector = [&](std::size_t i) { return Lit::pos(spec.num_vars() + 1 + static_cast<Var>(i)); };

  MaxSatInstance instance;
  instance.variables = spec.outputs();
  for (std::size_t i = 0; i < k; ++i) {
    Clause link = spec.clause(i).y_part;
    link.push_back(~selector(i));
    instance.hard.push_back(std::move(link));
    instance.soft.push_back(spec.clause(i).y_part);
  }

  std::vector<ClauseIndexSet> mss_list;
  std::vector<Assignment> witnesses;
  SynthesisStats local;
  for (;;) {
    options.interrupt.check();
    MaxSatResult result = solve_partial_maxsat(instance, options.maxsat, options.interrupt);
    ++local.maxsat_calls;
    local.sat_calls += result.sat_calls;
    if (!result.optimal()) break;
    if (mss_list.size() >= options.mss_limit) {
      throw ResourceLimitExceeded("more than " + std::to_string(options.mss_limit) +
                                  " maximal satisfiable subsets");
    }
    ++local.iterations;
    // Block every subset of this MSS: later ones must satisfy some part outside it.
    Clause block;
    for (std::size_t i : result.satisfied_soft.complement(k)) block.push_back(selector(i));
    instance.hard.push_back(std::move(block));
    mss_list.push_back(result.satisfied_soft);
    witnesses.push_back(result.model.restrict_to(spec.outputs()));
  }

  DecisionList list = build_decision_list(spec, mss_list, witnesses);
  local.mss_recorded = mss_list.size();
  local.wall_time = Clock::now() - start;
  if (stats != nullptr) *stats = local;
  return list;
}

std::vector<Component> partition_by_output_variables(const Specification& spec) {
  if (!spec.empty_output_clauses().empty()) {
    throw ContractViolation("cannot partition a specification with an empty output part");
  }
  const std::size_t k = spec.size();
  UnionFind uf(k);
  std::map<Var, std::size_t> first_clause;
  for (std::size_t i = 0; i < k; ++i) {
    for (Lit lit : spec.clause(i).y_part) {
      auto [it, inserted] = first_clause.emplace(lit.var(), i);
      if (!inserted) uf.unite(it->second, i);
    }
  }

  std::map<std::size_t, std::size_t> component_of_root;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t root = uf.find(i);
    auto [it, inserted] = component_of_root.emplace(root, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::vector<Component> out;
  out.reserve(groups.size());
  for (auto& group : groups) {
    std::vector<Var> outputs;
    std::vector<SplitClause> clauses;
    for (std::size_t i : group) {
      for (Lit lit : spec.clause(i).y_part) outputs.push_back(lit.var());
      clauses.push_back(spec.clause(i));
    }
    Component component;
    component.spec = Specification::from_split(spec.num_vars(), spec.inputs(), std::move(outputs),
                                               std::move(clauses));
    component.original_indices = std::move(group);
    out.push_back(std::move(component));
  }
  return out;
}

}  // namespace bafsynth
