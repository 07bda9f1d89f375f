// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/graph.hpp"

#include <algorithm>
#include <bit>

#include "bafsynth/error.hpp"

namespace bafsynth {

namespace {

// Row-major bit matrix holding the consensus graph (complement of the
// conflict graph, without self-loops).
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t out = 0;
    for (std::uint64_t w : words_) out += static_cast<std::size_t>(std::popcount(w));
    return out;
  }
  std::size_t count_and(const Bitset& other) const {
    std::size_t out = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      out += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    }
    return out;
  }
  Bitset operator&(const Bitset& other) const {
    Bitset out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
    return out;
  }
  Bitset operator|(const Bitset& other) const {
    Bitset out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= other.words_[i];
    return out;
  }
  Bitset and_not(const Bitset& other) const {
    Bitset out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~other.words_[i];
    return out;
  }
  bool subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    }
    return true;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        int bit = std::countr_zero(word);
        f(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

std::vector<Bitset> consensus_rows(const ConflictGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<Bitset> rows(n, Bitset(n));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) rows[v].set(u);
    }
    for (std::size_t u : graph.neighbors(v)) rows[v].reset(u);
  }
  return rows;
}

class CliqueCounter {
 public:
  CliqueCounter(const std::vector<Bitset>& rows, std::uint64_t budget, const Interrupt& interrupt)
      : rows_(rows), budget_(budget), interrupt_(interrupt) {}

  // Returns false once the budget is exceeded.
  bool run(Bitset candidates, Bitset excluded) {
    if (++calls_ % 1024 == 0) interrupt_.check();
    if (candidates.none()) {
      if (excluded.none() && ++count_ > budget_) return false;
      return true;
    }
    // Tomita pivot: the vertex of P u X with most neighbours in P.
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool have_pivot = false;
    (candidates | excluded).for_each([&](std::size_t u) {
      std::size_t c = candidates.count_and(rows_[u]);
      if (!have_pivot || c > best) {
        pivot = u;
        best = c;
        have_pivot = true;
      }
    });
    std::vector<std::size_t> branch;
    candidates.and_not(rows_[pivot]).for_each([&](std::size_t v) { branch.push_back(v); });
    for (std::size_t v : branch) {
      if (!run(candidates & rows_[v], excluded & rows_[v])) return false;
      candidates.reset(v);
      excluded.set(v);
    }
    return true;
  }

  std::uint64_t count() const { return count_; }

 private:
  const std::vector<Bitset>& rows_;
  std::uint64_t budget_;
  const Interrupt& interrupt_;
  std::uint64_t count_ = 0;
  std::uint64_t calls_ = 0;
};

class MisSearch {
 public:
  MisSearch(const ConflictGraph& graph, std::size_t limit, const Interrupt& interrupt)
      : graph_(graph),
        limit_(limit),
        interrupt_(interrupt),
        n_(graph.vertex_count()),
        blocked_(n_, 0),
        chosen_(n_, 0) {}

  MisEnumeration run() {
    recurse(0);
    return std::move(result_);
  }

 private:
  // Every unchosen, unblocked vertex before `pos` still needs a neighbour
  // that can be chosen later, otherwise the set cannot become maximal.
  bool feasible(std::size_t pos) const {
    for (std::size_t u = 0; u < pos; ++u) {
      if (chosen_[u] || blocked_[u] > 0) continue;
      const auto& nbrs = graph_.neighbors(u);
      bool rescuable = std::any_of(nbrs.begin(), nbrs.end(), [&](std::size_t w) {
        return w >= pos && blocked_[w] == 0;
      });
      if (!rescuable) return false;
    }
    return true;
  }

  void recurse(std::size_t pos) {
    if (++nodes_ % 1024 == 0) interrupt_.check();
    if (result_.overflow || !feasible(pos)) return;
    if (pos == n_) {
      if (result_.sets.size() >= limit_) {
        result_.overflow = true;
        return;
      }
      std::vector<std::size_t> members;
      for (std::size_t v = 0; v < n_; ++v) {
        if (chosen_[v]) members.push_back(v);
      }
      result_.sets.emplace_back(std::move(members));
      return;
    }
    if (blocked_[pos] == 0) {
      chosen_[pos] = 1;
      for (std::size_t w : graph_.neighbors(pos)) ++blocked_[w];
      recurse(pos + 1);
      for (std::size_t w : graph_.neighbors(pos)) --blocked_[w];
      chosen_[pos] = 0;
    }
    recurse(pos + 1);
  }

  const ConflictGraph& graph_;
  std::size_t limit_;
  const Interrupt& interrupt_;
  std::size_t n_;
  std::vector<std::size_t> blocked_;
  std::vector<std::uint8_t> chosen_;
  std::uint64_t nodes_ = 0;
  MisEnumeration result_;
};

}  // namespace

ConflictGraph::ConflictGraph(std::size_t vertices,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : adjacency_(vertices) {
  for (auto [a, b] : edges) {
    if (a >= vertices || b >= vertices) throw ContractViolation("edge endpoint out of range");
    if (a == b) throw ContractViolation("self-loop in conflict graph");
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

std::size_t ConflictGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

bool ConflictGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto& list = adjacency_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<std::pair<std::size_t, std::size_t>> ConflictGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    for (std::size_t b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

bool ConflictGraph::is_independent(const ClauseIndexSet& set) const {
  for (std::size_t v : set) {
    if (v >= vertex_count()) return false;
    for (std::size_t u : adjacency_[v]) {
      if (set.contains(u)) return false;
    }
  }
  return true;
}

ConflictGraph build_conflict_graph(const Specification& spec) {
  const std::size_t n = spec.size();
  std::vector<std::vector<std::size_t>> occurrences(2 * (static_cast<std::size_t>(spec.num_vars()) + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (Lit lit : spec.clause(i).x_part) occurrences[lit.index()].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (Lit lit : spec.clause(i).x_part) {
      for (std::size_t j : occurrences[(~lit).index()]) {
        if (i < j) edges.emplace_back(i, j);
      }
    }
  }
  return ConflictGraph(n, edges);
}

ClauseIndexSet extend_to_mis(const ConflictGraph& graph, const ClauseIndexSet& seed) {
  if (!graph.is_independent(seed)) {
    throw ContractViolation("seed is not an independent set of the conflict graph");
  }
  const std::size_t n = graph.vertex_count();
  std::vector<std::uint8_t> blocked(n, 0);
  std::vector<std::size_t> members(seed.begin(), seed.end());
  for (std::size_t v : seed) {
    blocked[v] = 1;
    for (std::size_t u : graph.neighbors(v)) blocked[u] = 1;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (blocked[v]) continue;
    members.push_back(v);
    blocked[v] = 1;
    for (std::size_t u : graph.neighbors(v)) blocked[u] = 1;
  }
  return ClauseIndexSet(std::move(members));
}

MisEnumeration enumerate_mis(const ConflictGraph& graph, std::size_t limit,
                             const Interrupt& interrupt) {
  if (limit == 0) throw ContractViolation("MIS limit must be positive");
  return MisSearch(graph, limit, interrupt).run();
}

bool consensus_graph_is_chordal(const ConflictGraph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n < 4) return true;
  const std::vector<Bitset> rows = consensus_rows(graph);

  // Maximum cardinality search; ties go to the smallest index.
  std::vector<std::size_t> weight(n, 0);
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::size_t> position(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!visited[v] && (pick == n || weight[v] > weight[pick])) pick = v;
    }
    visited[pick] = 1;
    position[pick] = step;
    order.push_back(pick);
    rows[pick].for_each([&](std::size_t u) {
      if (!visited[u]) ++weight[u];
    });
  }

  // The reverse visiting order is a perfect elimination ordering iff, for
  // every vertex, its earlier-visited neighbours minus the latest of them
  // are all adjacent to that latest one.
  Bitset before(n);
  for (std::size_t v : order) {
    Bitset earlier = rows[v] & before;
    std::size_t parent = n;
    earlier.for_each([&](std::size_t u) {
      if (parent == n || position[u] > position[parent]) parent = u;
    });
    if (parent != n) {
      Bitset rest = earlier;
      rest.reset(parent);
      if (!rest.subset_of(rows[parent])) return false;
    }
    before.set(v);
  }
  return true;
}

CliqueCountReport analyze_structure(const ConflictGraph& graph, std::uint64_t budget,
                                    const Interrupt& interrupt) {
  if (budget == 0) throw ContractViolation("clique budget must be positive");
  const std::size_t n = graph.vertex_count();
  const std::vector<Bitset> rows = consensus_rows(graph);
  Bitset all(n);
  for (std::size_t v = 0; v < n; ++v) all.set(v);

  CliqueCountReport report;
  report.budget = budget;
  CliqueCounter counter(rows, budget, interrupt);
  if (counter.run(all, Bitset(n))) report.count = counter.count();
  report.chordal = consensus_graph_is_chordal(graph);
  return report;
}

}  // namespace bafsynth
