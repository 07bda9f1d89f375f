// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bafsynth/decomp.hpp"
#include "bafsynth/error.hpp"
#include "bafsynth/graph.hpp"
#include "bafsynth/pipeline.hpp"
#include "bafsynth/verify.hpp"

namespace bafsynth::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kSchemaVersion = 1;

struct SynthFlags {
  std::string mode = "back-and-forth";
  std::string maxsat = "maximum";
  bool no_partition = false;
  bool no_verify = false;
  double timeout = 0;
  std::size_t jobs = 1;
  std::size_t mis_limit = 100000;
  std::size_t mss_limit = 100000;
};

double millis(std::chrono::nanoseconds d) {
  return std::round(std::chrono::duration<double, std::milli>(d).count() * 1000.0) / 1000.0;
}

Interrupt make_interrupt(double timeout_seconds) {
  if (timeout_seconds <= 0) return Interrupt{};
  return Interrupt::after(std::chrono::duration<double>(timeout_seconds));
}

PipelineConfig to_config(const SynthFlags& flags) {
  PipelineConfig config;
  config.mode = *parse_mode(flags.mode);
  config.partition = !flags.no_partition;
  config.verify = !flags.no_verify;
  config.jobs = flags.jobs;
  config.synthesis.maxsat =
      flags.maxsat == "maximal" ? MaxSatStrategy::kMaximal : MaxSatStrategy::kMaximum;
  config.synthesis.mis_limit = flags.mis_limit;
  config.synthesis.mss_limit = flags.mss_limit;
  config.synthesis.interrupt = make_interrupt(flags.timeout);
  return config;
}

void add_synth_flags(CLI::App* cmd, SynthFlags& flags) {
  cmd->add_option("--mode", flags.mode, "Synthesis procedure")
      ->check(CLI::IsMember({"back-and-forth", "mfs-enum", "mss-enum"}))
      ->envname("BAFSYNTH_MODE")
      ->capture_default_str();
  cmd->add_option("--maxsat", flags.maxsat, "Covering MSS strategy")
      ->check(CLI::IsMember({"maximum", "maximal"}))
      ->envname("BAFSYNTH_MAXSAT")
      ->capture_default_str();
  cmd->add_flag("--no-partition", flags.no_partition,
                "Synthesize the whole specification instead of output-disjoint components");
  cmd->add_flag("--no-verify", flags.no_verify, "Skip verification of the decision list");
  cmd->add_option("--jobs", flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_JOBS")
      ->capture_default_str();
  cmd->add_option("--mis-limit", flags.mis_limit, "Maximum MFS count in mfs-enum mode")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_MIS_LIMIT")
      ->capture_default_str();
  cmd->add_option("--mss-limit", flags.mss_limit, "Maximum MSS count in mss-enum mode")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_MSS_LIMIT")
      ->capture_default_str();
}

Json assignment_json(const Assignment& a) {
  Json out = Json::object();
  for (Var v : a.variables()) out[std::to_string(v)] = a.value(v) ? 1 : 0;
  return out;
}

Json index_json(const ClauseIndexSet& set) {
  Json out = Json::array();
  for (std::size_t i : set) out.push_back(i + 1);
  return out;
}

Json counterexample_json(const Counterexample& cex) {
  Json out;
  out["kind"] = cex.kind == Counterexample::Kind::kSoundness ? "soundness" : "coverage-gap";
  if (cex.kind == Counterexample::Kind::kSoundness) {
    out["decision"] = cex.decision + 1;
    out["clause"] = cex.clause + 1;
  }
  out["input"] = assignment_json(cex.input);
  return out;
}

Json stats_record(const std::string& instance, std::string_view mode, std::string_view status,
                  const PipelineResult* result) {
  Json j;
  j["schema"] = "bafsynth-stats";
  j["version"] = kSchemaVersion;
  j["instance"] = instance;
  j["mode"] = mode;
  j["status"] = status;
  const SynthesisStats stats = result != nullptr ? result->stats : SynthesisStats{};
  j["decisions"] = result != nullptr ? result->total_decisions() : 0;
  j["iterations"] = stats.iterations;
  j["sat_calls"] = stats.sat_calls;
  j["maxsat_calls"] = stats.maxsat_calls;
  j["mss_recorded"] = stats.mss_recorded;
  j["partitions"] = stats.partitions;
  j["time_ms"] = millis(stats.wall_time);
  j["verified"] = result != nullptr && result->verified;
  j["witness"] = nullptr;
  if (result != nullptr && result->status == RunStatus::kUnrealizable) {
    Json w;
    w["component"] = *result->failed_component + 1;
    w["mfs"] = index_json(result->witness_mfs);
    w["input"] = result->witness_input ? assignment_json(*result->witness_input) : Json(nullptr);
    j["witness"] = std::move(w);
  } else if (result != nullptr && result->counterexample) {
    j["witness"] = counterexample_json(*result->counterexample);
  }
  return j;
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::kRealizable:
      return kOk;
    case RunStatus::kUnrealizable:
      return kUnrealizable;
    case RunStatus::kTimeout:
    case RunStatus::kLimit:
      return kTimeoutOrLimit;
    case RunStatus::kVerificationFailed:
      return kVerificationFailed;
  }
  return kUsage;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << text;
  if (!file) throw Error("failed writing " + path);
}

std::string read_text(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::string serialize_all(const PipelineResult& result) {
  std::string text;
  for (const ComponentResult& c : result.components) text += serialize(c.list);
  return text;
}

int cmd_synth(const std::string& file, const SynthFlags& flags, const std::string& dl_path,
              const std::string& json_path, std::ostream& out, std::ostream& err) {
  const Specification spec = read_qdimacs_file(file);
  const PipelineResult result = run_pipeline(spec, to_config(flags));
  const std::string instance = fs::path(file).filename().string();

  if (result.status == RunStatus::kRealizable) write_text(dl_path, serialize_all(result), out);
  if (!json_path.empty()) {
    write_text(json_path,
               stats_record(instance, flags.mode, to_string(result.status), &result).dump(2) + "\n",
               out);
  }

  err << instance << ": " << to_string(result.status);
  if (result.status == RunStatus::kRealizable) {
    err << ", " << result.total_decisions() << " decisions, " << result.stats.iterations
        << " iterations, " << result.stats.partitions << " partitions"
        << (result.verified ? ", verified" : "");
  } else if (result.status == RunStatus::kUnrealizable) {
    err << ", witness MFS " << result.witness_mfs;
  } else if (!result.message.empty()) {
    err << ": " << result.message;
  }
  err << '\n';
  return exit_code(result.status);
}

int cmd_analyze(const std::string& file, std::uint64_t budget, double timeout,
                const std::string& json_path, std::ostream& out) {
  const auto start = Clock::now();
  const Specification spec = read_qdimacs_file(file);
  const ConflictGraph graph = build_conflict_graph(spec);
  const CliqueCountReport report = analyze_structure(graph, budget, make_interrupt(timeout));

  Json j;
  j["schema"] = "bafsynth-analysis";
  j["version"] = kSchemaVersion;
  j["instance"] = fs::path(file).filename().string();
  j["clauses"] = spec.size();
  j["inputs"] = spec.inputs().size();
  j["outputs"] = spec.outputs().size();
  j["conflict_edges"] = graph.edge_count();
  j["budget"] = report.budget;
  j["maximal_cliques"] = report.count ? Json(*report.count) : Json(nullptr);
  j["budget_exceeded"] = report.budget_exceeded();
  j["consensus_chordal"] = report.chordal;
  j["fragment"] = report.chordal || !report.budget_exceeded() ? "yes" : "unknown";
  j["time_ms"] = millis(Clock::now() - start);
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!json_path.empty() && json_path != "-") write_text(json_path, text, out);
  return kOk;
}

int cmd_verify(const std::string& file, const std::string& dl_file, double timeout,
               const std::string& json_path, std::ostream& out) {
  const Specification spec = read_qdimacs_file(file);
  const std::vector<DecisionList> lists = parse_decision_lists(read_text(dl_file));
  const Interrupt interrupt = make_interrupt(timeout);

  // Each document is bound to the whole spec or to one partition component.
  std::vector<Specification> candidates{spec};
  if (spec.empty_output_clauses().empty()) {
    for (Component& c : partition_by_output_variables(spec)) candidates.push_back(std::move(c.spec));
  }
  std::vector<bool> bound(candidates.size(), false);
  std::optional<Counterexample> cex;
  std::string problem;
  for (std::size_t d = 0; d < lists.size() && !cex && problem.empty(); ++d) {
    auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Specification& s) {
      return s.digest() == lists[d].spec_digest;
    });
    if (it == candidates.end()) {
      throw ContractViolation("document " + std::to_string(d + 1) +
                              " does not match the specification or any of its components");
    }
    const std::size_t index = static_cast<std::size_t>(it - candidates.begin());
    if (bound[index]) problem = "duplicate document for one component";
    bound[index] = true;
    VerificationReport report = verify_decision_list(*it, lists[d], interrupt);
    if (!report.verified()) cex = report.counterexample;
  }
  const bool whole = bound[0] && lists.size() == 1;
  const bool all_parts = std::all_of(bound.begin() + 1, bound.end(), [](bool b) { return b; }) &&
                         !bound[0] && candidates.size() > 1;
  if (!cex && problem.empty() && !whole && !all_parts) {
    problem = "documents do not cover every clause of the specification";
  }

  const bool ok = !cex && problem.empty();
  Json j;
  j["schema"] = "bafsynth-verify";
  j["version"] = kSchemaVersion;
  j["instance"] = fs::path(file).filename().string();
  j["documents"] = lists.size();
  j["status"] = ok ? "verified" : "counterexample";
  j["counterexample"] = cex ? counterexample_json(*cex) : Json(nullptr);
  j["message"] = problem;
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!json_path.empty() && json_path != "-") write_text(json_path, text, out);
  return ok ? kOk : kVerificationFailed;
}

std::string f1_dimacs(const Specification& spec, const DecomposedPair& pair) {
  std::ostringstream os;
  os << "c F1 over inputs and z; z_i <-> not x-part of clause i\n";
  os << "c inputs";
  for (Var v : pair.inputs) os << ' ' << v;
  os << "\nc z";
  for (Var v : pair.z_vars) os << ' ' << v;
  os << "\np cnf " << spec.num_vars() + pair.z_vars.size() << ' ' << pair.f1.size() << '\n';
  for (const Clause& c : pair.f1) {
    for (Lit lit : c) os << lit.to_dimacs() << ' ';
    os << "0\n";
  }
  return os.str();
}

int cmd_decompose(const std::string& file, const std::string& out_dir, std::size_t max_vars,
                  double timeout, const std::string& json_path, std::ostream& out) {
  const auto start = Clock::now();
  const Specification spec = read_qdimacs_file(file);
  const DecomposedPair pair = cnf_decompose(spec);
  const std::string stem = fs::path(file).stem().string();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text((fs::path(out_dir) / (stem + ".f1.cnf")).string(), f1_dimacs(spec, pair), out);
    write_text((fs::path(out_dir) / (stem + ".f2.qdimacs")).string(), to_qdimacs(pair.f2), out);
  }

  Json j;
  j["schema"] = "bafsynth-decompose";
  j["version"] = kSchemaVersion;
  j["instance"] = fs::path(file).filename().string();
  j["clauses"] = spec.size();
  j["z_vars"] = pair.z_vars.size();
  j["f1_clauses"] = pair.f1.size();
  j["f2_clauses"] = pair.f2.size();
  int code = kOk;
  const std::size_t total = spec.inputs().size() + spec.outputs().size() + pair.z_vars.size();
  if (total <= max_vars) {
    const GoodDecompositionReport good = check_good_decomposition(spec, pair, max_vars);
    j["good"] = {{"checked", true},
                 {"equivalent", good.equivalent},
                 {"image_in_domain", good.image_in_domain},
                 {"functional", good.functional}};
    SynthesisOptions options;
    options.interrupt = make_interrupt(timeout);
    const CompositionReport comp = compose_and_verify(spec, options, max_vars);
    const char* status = comp.status == CompositionStatus::kVerified       ? "verified"
                         : comp.status == CompositionStatus::kCounterexample ? "counterexample"
                                                                             : "decomposition-unrealizable";
    j["composition"] = {{"status", status},
                        {"g2_decisions", comp.g2.size()},
                        {"fallback_verified", comp.fallback_verified}};
    if (!good.good() || comp.status == CompositionStatus::kCounterexample) {
      code = kVerificationFailed;
    }
  } else {
    j["good"] = {{"checked", false}};
    j["composition"] = nullptr;
  }
  j["time_ms"] = millis(Clock::now() - start);
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!json_path.empty() && json_path != "-") write_text(json_path, text, out);
  return code;
}

std::string family_of(const std::string& name, const std::vector<std::string>& table) {
  std::string best;
  std::size_t best_len = 0;
  bool matched = false;
  for (const std::string& entry : table) {
    const auto eq = entry.find('=');
    const std::string prefix = entry.substr(0, eq);
    if (name.starts_with(prefix) && (!matched || prefix.size() > best_len)) {
      best = eq == std::string::npos ? prefix : entry.substr(eq + 1);
      best_len = prefix.size();
      matched = true;
    }
  }
  return matched ? best : "other";
}

int cmd_bench(const std::string& dir, const SynthFlags& flags,
              const std::vector<std::string>& families, const std::string& json_path,
              std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && !name.starts_with(".")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Json> records(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = files[i].filename().string();
      Json record;
      try {
        const Specification spec = read_qdimacs_file(files[i]);
        PipelineConfig config = to_config(flags);
        config.jobs = 1;
        const PipelineResult result = run_pipeline(spec, config);
        record = stats_record(name, flags.mode, to_string(result.status), &result);
      } catch (const Error& e) {
        record = stats_record(name, flags.mode, "error", nullptr);
        record["message"] = e.what();
      }
      record["schema"] = "bafsynth-bench";
      record["family"] = family_of(name, families);
      records[i] = std::move(record);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(flags.jobs, files.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  std::map<std::string, std::map<std::string, std::uint64_t>> summary;
  std::string text;
  for (const Json& record : records) {
    auto& fam = summary[record["family"].get<std::string>()];
    const std::string status = record["status"].get<std::string>();
    for (const char* key : {"instances", "solved", "realizable", "unrealizable", "timeout", "limit",
                            "verification-failed", "error"}) {
      fam.emplace(key, 0);
    }
    ++fam["instances"];
    ++fam[status];
    if (status == "realizable" || status == "unrealizable") ++fam["solved"];
    text += record.dump() + "\n";
    if (status == "error") err << "warning: " << record["instance"].get<std::string>() << ": "
                               << record["message"].get<std::string>() << '\n';
  }
  Json families_json = Json::object();
  for (const auto& [name, counts] : summary) {
    Json c = Json::object();
    for (const char* key : {"instances", "solved", "realizable", "unrealizable", "timeout", "limit",
                            "verification-failed", "error"}) {
      c[key] = counts.at(key);
    }
    families_json[name] = std::move(c);
  }
  Json total;
  total["schema"] = "bafsynth-bench-summary";
  total["version"] = kSchemaVersion;
  total["instances"] = records.size();
  total["families"] = std::move(families_json);
  text += total.dump() + "\n";
  write_text(json_path, text, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boolean functional synthesis from CNF specifications", "bafsynth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bafsynth 0.1.0");

  std::string file;
  std::string dl_path;
  std::string json_path;
  double timeout = 0;
  SynthFlags flags;

  auto* synth = app.add_subcommand("synth", "Synthesize a decision list for a 2QBF specification");
  synth->add_option("file", file, "QDIMACS specification")->required();
  add_synth_flags(synth, flags);
  synth->add_option("--timeout", flags.timeout, "Wall-clock limit in seconds")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_TIMEOUT");
  synth->add_option("--dl", dl_path, "Decision-list output path (default: stdout)");
  synth->add_option("--json", json_path, "JSON statistics path ('-' for stdout)")
      ->envname("BAFSYNTH_JSON");

  std::uint64_t budget = 1000;
  auto* analyze = app.add_subcommand("analyze", "Report conflict-graph structure");
  analyze->add_option("file", file, "QDIMACS specification")->required();
  analyze->add_option("--budget", budget, "Maximal-clique counting budget")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_BUDGET")
      ->capture_default_str();
  analyze->add_option("--timeout", timeout, "Wall-clock limit in seconds")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_TIMEOUT");
  analyze->add_option("--json", json_path, "Also write the report here");

  std::string dl_input;
  auto* verify = app.add_subcommand("verify", "Check a decision-list file against a specification");
  verify->add_option("file", file, "QDIMACS specification")->required();
  verify->add_option("dl", dl_input, "Decision-list file")->required();
  verify->add_option("--timeout", timeout, "Wall-clock limit in seconds")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_TIMEOUT");
  verify->add_option("--json", json_path, "Also write the report here");

  std::string out_dir;
  std::size_t max_vars = 24;
  auto* decompose = app.add_subcommand("decompose", "CNF sequential decomposition experiment");
  decompose->add_option("file", file, "QDIMACS specification")->required();
  decompose->add_option("--out-dir", out_dir, "Directory for the F1/F2 files");
  decompose->add_option("--max-vars", max_vars,
                        "Largest inputs+outputs+z count checked exhaustively")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  decompose->add_option("--timeout", timeout, "Wall-clock limit in seconds")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_TIMEOUT");
  decompose->add_option("--json", json_path, "Also write the report here");

  std::string bench_dir;
  std::vector<std::string> families;
  SynthFlags bench_flags;
  bench_flags.timeout = 60;
  auto* bench = app.add_subcommand("bench", "Run every instance in a directory");
  bench->add_option("dir", bench_dir, "Directory of QDIMACS files")->required();
  add_synth_flags(bench, bench_flags);
  bench->add_option("--timeout", bench_flags.timeout, "Per-instance wall-clock limit in seconds")
      ->check(CLI::PositiveNumber)
      ->envname("BAFSYNTH_TIMEOUT")
      ->capture_default_str();
  bench->add_option("--family", families, "PREFIX=NAME family classification (repeatable)");
  bench->add_option("--json", json_path, "JSON-lines output path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(file, flags, dl_path, json_path, out, err);
    if (*analyze) return cmd_analyze(file, budget, timeout, json_path, out);
    if (*verify) return cmd_verify(file, dl_input, timeout, json_path, out);
    if (*decompose) return cmd_decompose(file, out_dir, max_vars, timeout, json_path, out);
    if (*bench) return cmd_bench(bench_dir, bench_flags, families, json_path, out, err);
  } catch (const Cancelled&) {
    err << "error: timeout\n";
    return kTimeoutOrLimit;
  } catch (const ResourceLimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kTimeoutOrLimit;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace bafsynth::cli
