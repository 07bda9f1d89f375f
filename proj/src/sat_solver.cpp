// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/sat_solver.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <ostream>
#include <string>

#include "bafsynth/error.hpp"

namespace bafsynth {

namespace {

using CRef = std::uint32_t;
constexpr CRef kNoReason = std::numeric_limits<CRef>::max();

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartUnit = 100;
constexpr double kLearntGrowth = 1.1;
constexpr std::uint64_t kInterruptPeriod = 256;

// Luby sequence value for restart number `x` (0-based), base 2.
double luby(std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double out = 1.0;
  for (int i = 0; i < seq; ++i) out *= 2.0;
  return out;
}

struct ClauseData {
  std::vector<Lit> lits;
  double activity = 0.0;
  bool learnt = false;
  bool deleted = false;
};

struct Watcher {
  CRef cref;
  Lit blocker;
};

// Binary max-heap over variables keyed by activity; ties go to the smaller id.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& activity) : activity_(activity) {}

  bool empty() const { return heap_.empty(); }
  bool contains(Var v) const { return v < pos_.size() && pos_[v] >= 0; }

  void grow(Var max_var) {
    if (pos_.size() < static_cast<std::size_t>(max_var) + 1) pos_.resize(max_var + 1, -1);
  }

  void insert(Var v) {
    grow(v);
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(heap_.size() - 1);
  }

  void increased(Var v) {
    if (contains(v)) sift_up(static_cast<std::size_t>(pos_[v]));
  }

  Var pop() {
    Var top = heap_.front();
    heap_.front() = heap_.back();
    pos_[heap_.front()] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) sift_down(0);
    return top;
  }

 private:
  bool before(Var a, Var b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }

  void sift_up(std::size_t i) {
    Var v = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = static_cast<int>(i);
  }

  void sift_down(std::size_t i) {
    Var v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) break;
      if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    pos_[v] = static_cast<int>(i);
  }

  const std::vector<double>& activity_;
  std::vector<Var> heap_;
  std::vector<int> pos_;
};

enum class SearchResult { kSat, kUnsat, kRestart };

}  // namespace

struct SatSolver::Impl {
  explicit Impl(Interrupt interrupt) : interrupt(std::move(interrupt)), heap(activity) {
    ensure_vars(0);
  }

  Interrupt interrupt;
  Statistics stats;
  bool ok = true;
  Var nvars = 0;

  std::vector<ClauseData> clauses;
  std::vector<CRef> learnts;
  std::vector<Clause> originals;
  std::vector<std::vector<Watcher>> watches;  // indexed by Lit::index()

  std::vector<std::int8_t> assigns;  // -1 undef, 0 false, 1 true
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<std::uint8_t> phase;  // saved polarity, 1 = negative
  std::vector<double> activity;
  std::vector<std::uint8_t> seen;
  std::vector<Lit> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  VarHeap heap;
  double var_inc = 1.0;
  double cla_inc = 1.0;
  double max_learnts = 0.0;

  std::vector<Lit> assumptions;

  // -1 undef, 0 false, 1 true
  int value(Lit lit) const {
    int a = assigns[lit.var()];
    if (a < 0) return -1;
    return (a == 1) != lit.negative() ? 1 : 0;
  }

  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void ensure_vars(Var max_var) {
    if (max_var <= nvars && !assigns.empty()) return;
    std::size_t n = static_cast<std::size_t>(std::max(max_var, nvars)) + 1;
    assigns.resize(n, -1);
    level.resize(n, 0);
    reason.resize(n, kNoReason);
    phase.resize(n, 1);
    activity.resize(n, 0.0);
    seen.resize(n, 0);
    watches.resize(2 * n);
    heap.grow(static_cast<Var>(n - 1));
    for (Var v = nvars + 1; v <= max_var; ++v) heap.insert(v);
    nvars = std::max(nvars, max_var);
  }

  void enqueue(Lit lit, CRef from) {
    assigns[lit.var()] = lit.negative() ? 0 : 1;
    level[lit.var()] = decision_level();
    reason[lit.var()] = from;
    trail.push_back(lit);
  }

  void attach(CRef cref) {
    const ClauseData& c = clauses[cref];
    watches[(~c.lits[0]).index()].push_back({cref, c.lits[1]});
    watches[(~c.lits[1]).index()].push_back({cref, c.lits[0]});
  }

  void cancel_until(int target) {
    if (decision_level() <= target) return;
    for (std::size_t i = trail.size(); i-- > trail_lim[static_cast<std::size_t>(target)];) {
      Var v = trail[i].var();
      assigns[v] = -1;
      reason[v] = kNoReason;
      phase[v] = trail[i].negative() ? 1 : 0;
      heap.insert(v);
    }
    trail.resize(trail_lim[static_cast<std::size_t>(target)]);
    trail_lim.resize(static_cast<std::size_t>(target));
    qhead = trail.size();
  }

  CRef propagate() {
    CRef conflict = kNoReason;
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      Lit false_lit = ~p;
      std::vector<Watcher>& ws = watches[p.index()];
      ++stats.propagations;
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        ClauseData& c = clauses[w.cref];
        if (c.deleted) {
          ++i;
          continue;
        }
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        ++i;
        Lit first = c.lits[0];
        Watcher kept{w.cref, first};
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = kept;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != 0) {
            std::swap(c.lits[1], c.lits[k]);
            watches[(~c.lits[1]).index()].push_back(kept);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = kept;
        if (value(first) == 0) {
          conflict = w.cref;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void bump_var(Var v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (Var u = 1; u <= nvars; ++u) activity[u] *= 1e-100;
      var_inc *= 1e-100;
    }
    heap.increased(v);
  }

  void bump_clause(ClauseData& c) {
    c.activity += cla_inc;
    if (c.activity > 1e20) {
      for (CRef r : learnts) clauses[r].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  bool redundant(Lit lit) const {
    CRef r = reason[lit.var()];
    if (r == kNoReason) return false;
    const ClauseData& c = clauses[r];
    for (std::size_t k = 1; k < c.lits.size(); ++k) {
      Var v = c.lits[k].var();
      if (!seen[v] && level[v] > 0) return false;
    }
    return true;
  }

  void analyze(CRef conflict, std::vector<Lit>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(Lit());
    int path = 0;
    Lit p;
    bool have_p = false;
    std::size_t index = trail.size();
    std::vector<Var> to_clear;

    do {
      ClauseData& c = clauses[conflict];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        Var v = q.var();
        if (!seen[v] && level[v] > 0) {
          bump_var(v);
          seen[v] = 1;
          to_clear.push_back(v);
          if (level[v] >= decision_level()) {
            ++path;
          } else {
            learnt.push_back(q);
          }
        }
      }
      do {
        --index;
      } while (!seen[trail[index].var()]);
      p = trail[index];
      have_p = true;
      conflict = reason[p.var()];
      seen[p.var()] = 0;
      --path;
    } while (path > 0);
    learnt[0] = ~p;

    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      if (!redundant(learnt[k])) learnt[keep++] = learnt[k];
    }
    learnt.resize(keep);

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level[learnt[k].var()] > level[learnt[max_i].var()]) max_i = k;
      }
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level[learnt[1].var()];
    }
    for (Var v : to_clear) seen[v] = 0;
  }

  bool locked(CRef cref) const {
    const ClauseData& c = clauses[cref];
    Var v = c.lits[0].var();
    return reason[v] == cref && value(c.lits[0]) == 1;
  }

  void reduce_db() {
    std::vector<CRef> order = learnts;
    std::sort(order.begin(), order.end(), [this](CRef a, CRef b) {
      if (clauses[a].activity != clauses[b].activity) {
        return clauses[a].activity < clauses[b].activity;
      }
      return a < b;
    });
    std::size_t target = order.size() / 2;
    std::size_t removed = 0;
    for (CRef r : order) {
      if (removed >= target) break;
      ClauseData& c = clauses[r];
      if (c.lits.size() > 2 && !locked(r)) {
        c.deleted = true;
        ++removed;
      }
    }
    if (removed == 0) return;
    for (auto& ws : watches) {
      std::erase_if(ws, [this](const Watcher& w) { return clauses[w.cref].deleted; });
    }
    std::erase_if(learnts, [this](CRef r) {
      if (!clauses[r].deleted) return false;
      clauses[r].lits = {};
      return true;
    });
  }

  Var pick_branch() {
    while (!heap.empty()) {
      Var v = heap.pop();
      if (assigns[v] < 0) return v;
    }
    return 0;
  }

  SearchResult search(int conflict_budget) {
    int conflicts_here = 0;
    std::vector<Lit> learnt;
    for (;;) {
      CRef conflict = propagate();
      if (conflict != kNoReason) {
        ++stats.conflicts;
        ++conflicts_here;
        if (stats.conflicts % kInterruptPeriod == 0) interrupt.check();
        if (decision_level() == 0) {
          ok = false;
          return SearchResult::kUnsat;
        }
        int backtrack_level = 0;
        analyze(conflict, learnt, backtrack_level);
        cancel_until(backtrack_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          CRef cref = static_cast<CRef>(clauses.size());
          clauses.push_back(ClauseData{learnt, 0.0, true, false});
          learnts.push_back(cref);
          attach(cref);
          bump_clause(clauses[cref]);
          enqueue(learnt[0], cref);
        }
        var_inc /= kVarDecay;
        cla_inc /= kClauseDecay;
        continue;
      }

      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return SearchResult::kRestart;
      }
      if (static_cast<double>(learnts.size()) -
              static_cast<double>(trail.size()) >= max_learnts) {
        reduce_db();
      }

      Lit next;
      bool have_next = false;
      while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
        Lit a = assumptions[static_cast<std::size_t>(decision_level())];
        int val = value(a);
        if (val == 1) {
          trail_lim.push_back(trail.size());
        } else if (val == 0) {
          return SearchResult::kUnsat;
        } else {
          next = a;
          have_next = true;
          break;
        }
      }
      if (!have_next) {
        ++stats.decisions;
        if (stats.decisions % (16 * kInterruptPeriod) == 0) interrupt.check();
        Var v = pick_branch();
        if (v == 0) return SearchResult::kSat;
        next = Lit(v, phase[v] != 0);
      }
      trail_lim.push_back(trail.size());
      enqueue(next, kNoReason);
    }
  }

  void check_model(const Assignment& model) const {
    for (const Clause& c : originals) {
      if (!model.satisfies(c)) throw Error("internal SAT error: model violates a clause");
    }
    for (Lit a : assumptions) {
      if (!model.satisfies(a)) throw Error("internal SAT error: model violates an assumption");
    }
  }
};

SatSolver::SatSolver(Interrupt interrupt) : impl_(std::make_unique<Impl>(std::move(interrupt))) {}
SatSolver::~SatSolver() = default;
SatSolver::SatSolver(SatSolver&&) noexcept = default;
SatSolver& SatSolver::operator=(SatSolver&&) noexcept = default;

Var SatSolver::new_var() {
  impl_->ensure_vars(impl_->nvars + 1);
  return impl_->nvars;
}

void SatSolver::ensure_vars(Var max_var) { impl_->ensure_vars(max_var); }

Var SatSolver::num_vars() const { return impl_->nvars; }

bool SatSolver::okay() const { return impl_->ok; }

const SatSolver::Statistics& SatSolver::statistics() const { return impl_->stats; }

void SatSolver::add_clause(std::span<const Lit> lits) {
  Impl& s = *impl_;
  Clause clause(lits.begin(), lits.end());
  Var max_var = 0;
  for (Lit lit : clause) {
    if (lit.var() == 0) throw ContractViolation("variable id 0 in clause");
    max_var = std::max(max_var, lit.var());
  }
  s.ensure_vars(max_var);
  s.originals.push_back(clause);
  if (!s.ok) return;
  if (!normalize_clause(clause)) return;

  std::size_t keep = 0;
  for (Lit lit : clause) {
    int val = s.value(lit);
    if (val == 1) return;
    if (val < 0) clause[keep++] = lit;
  }
  clause.resize(keep);

  if (clause.empty()) {
    s.ok = false;
  } else if (clause.size() == 1) {
    s.enqueue(clause[0], kNoReason);
    if (s.propagate() != kNoReason) s.ok = false;
  } else {
    CRef cref = static_cast<CRef>(s.clauses.size());
    s.clauses.push_back(ClauseData{std::move(clause), 0.0, false, false});
    s.attach(cref);
  }
}

SatResult SatSolver::solve(std::span<const Lit> assumptions) {
  Impl& s = *impl_;
  ++s.stats.solves;
  SatResult result;
  for (Lit a : assumptions) s.ensure_vars(a.var());
  if (!s.ok) return result;

  s.assumptions.assign(assumptions.begin(), assumptions.end());
  s.max_learnts = std::max(1000.0, static_cast<double>(s.clauses.size()) / 3.0);

  SearchResult status = SearchResult::kRestart;
  try {
    for (std::uint64_t restart = 0; status == SearchResult::kRestart; ++restart) {
      s.interrupt.check();
      int budget = static_cast<int>(luby(restart) * kRestartUnit);
      status = s.search(budget);
      if (status == SearchResult::kRestart) {
        ++s.stats.restarts;
        s.max_learnts *= kLearntGrowth;
      }
    }
  } catch (...) {
    s.cancel_until(0);
    s.assumptions.clear();
    throw;
  }

  if (status == SearchResult::kSat) {
    std::vector<Var> vars(s.nvars);
    for (Var v = 1; v <= s.nvars; ++v) vars[v - 1] = v;
    Assignment model(std::move(vars));
    for (Var v = 1; v <= s.nvars; ++v) model.set(v, s.assigns[v] == 1);
    s.check_model(model);
    result.status = SatStatus::kSatisfiable;
    result.model = std::move(model);
  }
  s.cancel_until(0);
  s.assumptions.clear();
  return result;
}

void SatSolver::write_dimacs(std::ostream& os) const {
  os << "p cnf " << impl_->nvars << ' ' << impl_->originals.size() << '\n';
  for (const Clause& c : impl_->originals) {
    for (Lit lit : c) os << lit.to_dimacs() << ' ';
    os << "0\n";
  }
}

}  // namespace bafsynth
