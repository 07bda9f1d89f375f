// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/decision_list.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "bafsynth/error.hpp"

namespace bafsynth {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(' ', pos);
    if (next == std::string_view::npos) next = line.size();
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::uint64_t parse_number(std::string_view token, const std::string& context) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(context + ": expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<Var> parse_var_line(std::string_view line, std::string_view keyword) {
  auto tokens = split_spaces(line);
  if (tokens.empty() || tokens[0] != keyword) {
    throw ParseError("expected '" + std::string(keyword) + "' line, got '" + std::string(line) + "'");
  }
  std::vector<Var> vars;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto v = parse_number(tokens[i], std::string(keyword) + " line");
    if (v == 0 || v > 0xFFFFFFFFu) throw ParseError("variable id out of range");
    vars.push_back(static_cast<Var>(v));
  }
  if (!std::is_sorted(vars.begin(), vars.end()) ||
      std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw ParseError(std::string(keyword) + " variables must be strictly increasing");
  }
  return vars;
}

// Splits into lines, requiring the text to end with LF.
std::vector<std::string_view> split_lines(std::string_view text) {
  if (text.empty()) throw ParseError("empty decision-list document");
  if (text.back() != '\n') throw ParseError("truncated document: missing final newline");
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

DecisionList parse_document(const std::vector<std::string_view>& lines) {
  if (lines.size() < 4) throw ParseError("truncated document: header incomplete");
  if (lines[0] != "dl 1") throw ParseError("unsupported document header '" + std::string(lines[0]) + "'");
  DecisionList list;
  if (lines[1] == "spec") {
    list.spec_digest.clear();
  } else if (lines[1].starts_with("spec ")) {
    list.spec_digest = std::string(lines[1].substr(5));
    if (list.spec_digest.empty() ||
        !std::all_of(list.spec_digest.begin(), list.spec_digest.end(),
                     [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; })) {
      throw ParseError("malformed spec digest");
    }
  } else {
    throw ParseError("expected 'spec' line");
  }
  list.inputs = parse_var_line(lines[2], "in");
  list.outputs = parse_var_line(lines[3], "out");

  for (std::size_t li = 4; li < lines.size(); ++li) {
    const std::string context = "decision line " + std::to_string(li + 1);
    auto tokens = split_spaces(lines[li]);
    if (tokens.empty() || tokens[0] != "d") throw ParseError(context + ": expected 'd'");
    auto bar = std::find(tokens.begin(), tokens.end(), std::string_view("|"));
    if (bar == tokens.end()) throw ParseError(context + ": missing '|'");
    std::vector<std::size_t> guard;
    for (auto it = tokens.begin() + 1; it != bar; ++it) {
      auto index = parse_number(*it, context);
      if (index == 0) throw ParseError(context + ": guard indices are 1-based");
      guard.push_back(static_cast<std::size_t>(index - 1));
    }
    Decision decision;
    decision.guard = ClauseIndexSet(guard);
    if (decision.guard.size() != guard.size()) throw ParseError(context + ": duplicate guard index");
    decision.output = Assignment(list.outputs);
    std::size_t expected = 0;
    for (auto it = bar + 1; it != tokens.end(); ++it) {
      auto eq = it->find('=');
      if (eq == std::string_view::npos) throw ParseError(context + ": expected var=bit");
      auto var = parse_number(it->substr(0, eq), context);
      auto bit = it->substr(eq + 1);
      if (expected >= list.outputs.size() || var != list.outputs[expected]) {
        throw ParseError(context + ": outputs must list every 'out' variable in order");
      }
      if (bit != "0" && bit != "1") throw ParseError(context + ": bit must be 0 or 1");
      decision.output.set(static_cast<Var>(var), bit == "1");
      ++expected;
    }
    if (expected != list.outputs.size()) {
      throw ParseError(context + ": output assignment is incomplete");
    }
    list.decisions.push_back(std::move(decision));
  }
  return list;
}

}  // namespace

DecisionList build_decision_list(const Specification& spec,
                                 const std::vector<ClauseIndexSet>& mss_list,
                                 const std::vector<Assignment>& witnesses) {
  if (mss_list.size() != witnesses.size()) {
    throw ContractViolation("one witness per MSS is required");
  }
  DecisionList list;
  list.inputs = spec.inputs();
  list.outputs = spec.outputs();
  list.spec_digest = spec.digest();
  for (std::size_t i = 0; i < mss_list.size(); ++i) {
    const ClauseIndexSet& mss = mss_list[i];
    if (!mss.empty() && mss.back() >= spec.size()) {
      throw ContractViolation("MSS index out of range");
    }
    for (Var v : spec.outputs()) {
      if (!witnesses[i].defines(v)) throw ContractViolation("witness is not total over outputs");
    }
    for (std::size_t j : mss) {
      if (!witnesses[i].satisfies(spec.clause(j).y_part)) {
        throw ContractViolation("witness does not satisfy its MSS");
      }
    }
    list.decisions.push_back(
        Decision{mss.complement(spec.size()), witnesses[i].restrict_to(spec.outputs())});
  }
  return list;
}

bool guard_holds(const Specification& spec, const ClauseIndexSet& guard,
                 const Assignment& inputs) {
  return std::all_of(guard.begin(), guard.end(), [&](std::size_t i) {
    return inputs.satisfies(spec.clause(i).x_part);
  });
}

std::optional<Assignment> evaluate(const Specification& spec, const DecisionList& list,
                                   const Assignment& inputs) {
  for (Var v : list.inputs) {
    if (!inputs.defines(v)) throw ContractViolation("input assignment is not total");
  }
  for (const Decision& d : list.decisions) {
    if (guard_holds(spec, d.guard, inputs)) return d.output;
  }
  return std::nullopt;
}

CombinedImplementation::CombinedImplementation(std::vector<Part> parts,
                                               const Specification& full_spec)
    : parts_(std::move(parts)), outputs_(full_spec.outputs()) {
  std::vector<Var> used;
  for (const Part& part : parts_) {
    for (Var v : part.list.outputs) {
      if (!full_spec.is_output(v)) {
        throw ContractViolation("component output " + std::to_string(v) +
                                " is not an output of the specification");
      }
      used.push_back(v);
    }
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
    throw ContractViolation("component output sets overlap");
  }
  std::vector<Var> rest;
  std::set_difference(outputs_.begin(), outputs_.end(), used.begin(), used.end(),
                      std::back_inserter(rest));
  defaults_ = Assignment(rest);
}

std::size_t CombinedImplementation::total_decisions() const {
  std::size_t total = 0;
  for (const Part& part : parts_) total += part.list.size();
  return total;
}

std::optional<Assignment> CombinedImplementation::evaluate(const Assignment& inputs) const {
  Assignment out(outputs_);
  for (const Part& part : parts_) {
    auto partial = bafsynth::evaluate(part.spec, part.list, inputs);
    if (!partial) return std::nullopt;
    for (Var v : part.list.outputs) out.set(v, partial->value(v));
  }
  for (Var v : defaults_.variables()) out.set(v, defaults_.value(v));
  return out;
}

CombinedImplementation combine(std::vector<CombinedImplementation::Part> parts,
                               const Specification& full_spec) {
  return CombinedImplementation(std::move(parts), full_spec);
}

std::string serialize(const DecisionList& list) {
  std::ostringstream out;
  out << "dl 1\n";
  out << "spec" << (list.spec_digest.empty() ? "" : " ") << list.spec_digest << '\n';
  out << "in";
  for (Var v : list.inputs) out << ' ' << v;
  out << "\nout";
  for (Var v : list.outputs) out << ' ' << v;
  out << '\n';
  for (const Decision& d : list.decisions) {
    out << 'd';
    for (std::size_t i : d.guard) out << ' ' << i + 1;
    out << " |";
    for (Var v : list.outputs) out << ' ' << v << '=' << (d.output.value(v) ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

DecisionList parse_decision_list(std::string_view text) {
  return parse_document(split_lines(text));
}

std::vector<DecisionList> parse_decision_lists(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<DecisionList> out;
  std::vector<std::string_view> current;
  for (std::string_view line : lines) {
    if (line.starts_with("dl ") && !current.empty()) {
      out.push_back(parse_document(current));
      current.clear();
    }
    current.push_back(line);
  }
  if (current.empty()) throw ParseError("empty decision-list file");
  out.push_back(parse_document(current));
  return out;
}

nlohmann::ordered_json to_json(const DecisionList& list) {
  nlohmann::ordered_json decisions = nlohmann::ordered_json::array();
  for (const Decision& d : list.decisions) {
    nlohmann::ordered_json guard = nlohmann::ordered_json::array();
    for (std::size_t i : d.guard) guard.push_back(i + 1);
    nlohmann::ordered_json output = nlohmann::ordered_json::object();
    for (Var v : list.outputs) output[std::to_string(v)] = d.output.value(v) ? 1 : 0;
    decisions.push_back({{"guard", guard}, {"output", output}});
  }
  return {{"format", "dl"},
          {"version", 1},
          {"spec", list.spec_digest},
          {"inputs", list.inputs},
          {"outputs", list.outputs},
          {"decisions", decisions}};
}

}  // namespace bafsynth
