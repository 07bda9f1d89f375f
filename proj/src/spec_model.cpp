// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/spec_model.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "bafsynth/error.hpp"

namespace bafsynth {

namespace {

std::vector<Var> sorted_unique(std::vector<Var> vars) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

long long parse_int(std::string_view token, std::size_t line_no) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

}  // namespace

Specification Specification::from_clauses(Var num_vars, std::vector<Var> inputs,
                                          std::vector<Var> outputs,
                                          std::span<const Clause> clauses) {
  std::vector<std::uint8_t> role(static_cast<std::size_t>(num_vars) + 1, kNone);
  for (Var v : inputs) {
    if (v == 0 || v > num_vars) throw ContractViolation("input variable out of range");
    role[v] = kInput;
  }
  for (Var v : outputs) {
    if (v == 0 || v > num_vars) throw ContractViolation("output variable out of range");
    if (role[v] == kInput) {
      throw ContractViolation("variable " + std::to_string(v) + " is both input and output");
    }
    role[v] = kOutput;
  }
  std::vector<SplitClause> split;
  split.reserve(clauses.size());
  for (const Clause& clause : clauses) {
    SplitClause sc;
    for (Lit lit : clause) {
      if (lit.var() == 0 || lit.var() > num_vars || role[lit.var()] == kNone) {
        throw ContractViolation("clause uses variable " + std::to_string(lit.var()) +
                                " outside the input/output partition");
      }
      (role[lit.var()] == kInput ? sc.x_part : sc.y_part).push_back(lit);
    }
    split.push_back(std::move(sc));
  }
  return from_split(num_vars, std::move(inputs), std::move(outputs), std::move(split));
}

Specification Specification::from_split(Var num_vars, std::vector<Var> inputs,
                                        std::vector<Var> outputs,
                                        std::vector<SplitClause> clauses) {
  Specification spec;
  spec.num_vars_ = num_vars;
  spec.inputs_ = sorted_unique(std::move(inputs));
  spec.outputs_ = sorted_unique(std::move(outputs));
  spec.role_.assign(static_cast<std::size_t>(num_vars) + 1, kNone);
  for (Var v : spec.inputs_) {
    if (v == 0 || v > num_vars) throw ContractViolation("input variable out of range");
    spec.role_[v] = kInput;
  }
  for (Var v : spec.outputs_) {
    if (v == 0 || v > num_vars) throw ContractViolation("output variable out of range");
    if (spec.role_[v] == kInput) {
      throw ContractViolation("variable " + std::to_string(v) + " is both input and output");
    }
    spec.role_[v] = kOutput;
  }

  std::set<SplitClause> seen;
  for (SplitClause& sc : clauses) {
    for (Lit lit : sc.x_part) {
      if (!spec.is_input(lit.var())) throw ContractViolation("x-part uses a non-input variable");
    }
    for (Lit lit : sc.y_part) {
      if (!spec.is_output(lit.var())) throw ContractViolation("y-part uses a non-output variable");
    }
    // Parts have disjoint variables, so the clause is a tautology iff a part is.
    if (!normalize_clause(sc.x_part) || !normalize_clause(sc.y_part)) continue;
    if (!seen.insert(sc).second) continue;
    spec.clauses_.push_back(std::move(sc));
  }
  return spec;
}

ClauseIndexSet Specification::empty_output_clauses() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (clauses_[i].y_part.empty()) out.push_back(i);
  }
  return ClauseIndexSet(std::move(out));
}

Clause Specification::full_clause(std::size_t index) const {
  const SplitClause& sc = clause(index);
  Clause out = sc.x_part;
  out.insert(out.end(), sc.y_part.begin(), sc.y_part.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool Specification::evaluate(const Assignment& assignment) const {
  for (const SplitClause& sc : clauses_) {
    if (!assignment.satisfies(sc.x_part) && !assignment.satisfies(sc.y_part)) return false;
  }
  return true;
}

std::string Specification::digest() const {
  const std::string text = to_qdimacs(*this);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
  return hex.str();
}

Specification parse_qdimacs(std::string_view text) {
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  std::vector<std::pair<char, std::vector<Var>>> blocks;
  std::vector<Clause> clauses;
  Clause pending;
  bool pending_open = false;
  bool in_matrix = false;
  std::vector<std::uint8_t> declared;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };

    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0] == "c" || tokens[0][0] == 'c') continue;

    if (tokens[0] == "p") {
      if (have_header) throw ParseError(where() + "duplicate header");
      if (tokens.size() != 4 || tokens[1] != "cnf") {
        throw ParseError(where() + "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      declared_vars = parse_int(tokens[2], line_no);
      declared_clauses = parse_int(tokens[3], line_no);
      if (declared_vars < 0 || declared_clauses < 0 || declared_vars > (1 << 28)) {
        throw ParseError(where() + "malformed header counts");
      }
      declared.assign(static_cast<std::size_t>(declared_vars) + 1, 0);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(where() + "content before 'p cnf' header");

    if (tokens[0] == "a" || tokens[0] == "e") {
      if (in_matrix) throw ParseError(where() + "quantifier line after clauses");
      const char quant = tokens[0][0];
      if (tokens.back() != "0") throw ParseError(where() + "quantifier line not terminated by 0");
      if (blocks.empty() || blocks.back().first != quant) {
        if (!blocks.empty() && blocks.back().first == 'e' && quant == 'a') {
          throw ParseError(where() +
                           "universal block must precede existential block (expected 2QBF a-then-e)");
        }
        if (blocks.size() == 2) {
          throw ParseError(where() + "more than one quantifier alternation");
        }
        blocks.emplace_back(quant, std::vector<Var>{});
      }
      for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
        long long v = parse_int(tokens[i], line_no);
        if (v <= 0 || v > declared_vars) {
          throw ParseError(where() + "quantified variable " + std::string(tokens[i]) +
                           " out of range");
        }
        if (declared[static_cast<std::size_t>(v)] != 0) {
          throw ParseError(where() + "variable " + std::string(tokens[i]) + " quantified twice");
        }
        declared[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(quant);
        blocks.back().second.push_back(static_cast<Var>(v));
      }
      continue;
    }

    in_matrix = true;
    for (std::string_view token : tokens) {
      long long value = parse_int(token, line_no);
      if (value == 0) {
        clauses.push_back(std::move(pending));
        pending.clear();
        pending_open = false;
        continue;
      }
      long long var = value < 0 ? -value : value;
      if (var > declared_vars || declared[static_cast<std::size_t>(var)] == 0) {
        throw ParseError(where() + "literal " + std::string(token) +
                         " references an undeclared variable");
      }
      pending.push_back(Lit::from_dimacs(static_cast<int>(value)));
      pending_open = true;
    }
  }

  if (!have_header) throw ParseError("empty input: no 'p cnf' header");
  if (pending_open) throw ParseError("last clause is not terminated by 0");
  if (static_cast<long long>(clauses.size()) != declared_clauses) {
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(clauses.size()));
  }

  std::vector<Var> inputs;
  std::vector<Var> outputs;
  for (auto& [quant, vars] : blocks) {
    auto& target = quant == 'a' ? inputs : outputs;
    target.insert(target.end(), vars.begin(), vars.end());
  }
  return Specification::from_clauses(static_cast<Var>(declared_vars), std::move(inputs),
                                     std::move(outputs), clauses);
}

Specification read_qdimacs_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_qdimacs(buffer.str());
}

std::string to_qdimacs(const Specification& spec) {
  std::ostringstream out;
  out << "p cnf " << spec.num_vars() << ' ' << spec.size() << '\n';
  if (!spec.inputs().empty()) {
    out << 'a';
    for (Var v : spec.inputs()) out << ' ' << v;
    out << " 0\n";
  }
  if (!spec.outputs().empty()) {
    out << 'e';
    for (Var v : spec.outputs()) out << ' ' << v;
    out << " 0\n";
  }
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (Lit lit : spec.full_clause(i)) out << lit.to_dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

ClauseIndexSet fals(const Specification& spec, const Assignment& inputs) {
  for (Var v : spec.inputs()) {
    if (!inputs.defines(v)) {
      throw ContractViolation("input assignment is not total: missing variable " +
                              std::to_string(v));
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!inputs.satisfies(spec.clause(i).x_part)) out.push_back(i);
  }
  return ClauseIndexSet(std::move(out));
}

ClauseIndexSet must_sat(const Specification& spec, const Assignment& inputs) {
  return fals(spec, inputs);
}

}  // namespace bafsynth
