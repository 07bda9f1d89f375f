// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <numeric>
#include <thread>

#include "bafsynth/error.hpp"
#include "bafsynth/graph.hpp"

namespace bafsynth {

namespace {

struct ComponentRun {
  ComponentResult result;
  bool realizable = true;
  ClauseIndexSet witness_mfs;
  std::optional<Assignment> witness_input;
  std::optional<VerificationReport> verification;
  std::exception_ptr error;
};

void synthesize_component(ComponentRun& run, const PipelineConfig& config) {
  const Specification& spec = run.result.spec;
  if (config.mode == SynthMode::kMssEnumeration) {
    run.result.list = synth_by_mss_enumeration(spec, config.synthesis, &run.result.stats);
    // Enumeration never fails outright; uncovered inputs show unrealizability.
    VerificationReport report = verify_decision_list(spec, run.result.list, config.synthesis.interrupt);
    if (!report.verified() &&
        report.counterexample->kind == Counterexample::Kind::kCoverageGap) {
      run.realizable = false;
      run.witness_input = report.counterexample->input;
      run.witness_mfs =
          extend_to_mis(build_conflict_graph(spec), fals(spec, *run.witness_input));
      return;
    }
    if (config.verify) run.verification = std::move(report);
    return;
  }

  SynthesisOutcome outcome = config.mode == SynthMode::kBackAndForth
                                 ? back_and_forth(spec, config.synthesis)
                                 : synth_by_mfs_enumeration(spec, config.synthesis);
  run.result.stats = outcome.stats;
  if (!outcome.realizable()) {
    run.realizable = false;
    run.witness_mfs = outcome.witness_mfs;
    run.witness_input = outcome.witness_input;
    return;
  }
  run.result.list = std::move(outcome.decision_list);
  if (config.verify) {
    run.verification = verify_decision_list(spec, run.result.list, config.synthesis.interrupt);
  }
}

std::vector<ComponentRun> make_runs(const Specification& spec, bool partition) {
  std::vector<ComponentRun> runs;
  if (partition && spec.empty_output_clauses().empty()) {
    for (Component& c : partition_by_output_variables(spec)) {
      ComponentRun run;
      run.result.spec = std::move(c.spec);
      run.result.original_indices = std::move(c.original_indices);
      runs.push_back(std::move(run));
    }
  }
  if (runs.size() <= 1) {
    runs.clear();
    ComponentRun run;
    run.result.spec = spec;
    run.result.original_indices.resize(spec.size());
    std::iota(run.result.original_indices.begin(), run.result.original_indices.end(), 0);
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace

std::string_view to_string(SynthMode mode) {
  switch (mode) {
    case SynthMode::kBackAndForth:
      return "back-and-forth";
    case SynthMode::kMfsEnumeration:
      return "mfs-enum";
    case SynthMode::kMssEnumeration:
      return "mss-enum";
  }
  return "unknown";
}

std::optional<SynthMode> parse_mode(std::string_view text) {
  for (SynthMode mode :
       {SynthMode::kBackAndForth, SynthMode::kMfsEnumeration, SynthMode::kMssEnumeration}) {
    if (text == to_string(mode)) return mode;
  }
  return std::nullopt;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kRealizable:
      return "realizable";
    case RunStatus::kUnrealizable:
      return "unrealizable";
    case RunStatus::kTimeout:
      return "timeout";
    case RunStatus::kLimit:
      return "limit";
    case RunStatus::kVerificationFailed:
      return "verification-failed";
  }
  return "unknown";
}

std::size_t PipelineResult::total_decisions() const {
  std::size_t total = 0;
  for (const ComponentResult& c : components) total += c.list.size();
  return total;
}

CombinedImplementation PipelineResult::implementation(const Specification& full_spec) const {
  std::vector<CombinedImplementation::Part> parts;
  for (const ComponentResult& c : components) parts.push_back({c.spec, c.list});
  return combine(std::move(parts), full_spec);
}

PipelineResult run_pipeline(const Specification& spec, const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult result;
  std::vector<ComponentRun> runs;
  try {
    runs = make_runs(spec, config.partition);
  } catch (const Cancelled& e) {
    result.status = RunStatus::kTimeout;
    result.message = e.what();
    return result;
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.jobs, runs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        synthesize_component(runs[i], config);
      } catch (...) {
        runs[i].error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  // Reported in component order so the outcome does not depend on scheduling.
  result.verified = config.verify;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    ComponentRun& run = runs[i];
    result.stats += run.result.stats;
    if (run.error) {
      try {
        std::rethrow_exception(run.error);
      } catch (const Cancelled& e) {
        result.status = RunStatus::kTimeout;
        result.message = e.what();
      } catch (const ResourceLimitExceeded& e) {
        result.status = RunStatus::kLimit;
        result.message = e.what();
      }
      result.verified = false;
      break;
    }
    if (!run.realizable) {
      result.status = RunStatus::kUnrealizable;
      result.failed_component = i;
      std::vector<std::size_t> original;
      for (std::size_t j : run.witness_mfs) original.push_back(run.result.original_indices[j]);
      result.witness_mfs = ClauseIndexSet(std::move(original));
      result.witness_input = run.witness_input;
      result.verified = false;
      break;
    }
    if (run.verification && !run.verification->verified()) {
      result.status = RunStatus::kVerificationFailed;
      result.failed_component = i;
      result.counterexample = run.verification->counterexample;
      result.message = "decision list for component " + std::to_string(i + 1) +
                       " failed verification";
      result.verified = false;
      break;
    }
  }
  for (ComponentRun& run : runs) result.components.push_back(std::move(run.result));
  result.stats.partitions = result.components.size();
  result.stats.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace bafsynth
