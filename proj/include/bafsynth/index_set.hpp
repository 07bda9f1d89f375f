// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace bafsynth {

/// Sorted, duplicate-free set of 0-based clause indices. This is the single
/// representation for Fals, MustSat, MFS and MSS, so mapping an input-clause
/// set to its output-clause counterpart is the identity.
class ClauseIndexSet {
 public:
  using const_iterator = std::vector<std::size_t>::const_iterator;

  ClauseIndexSet() = default;
  ClauseIndexSet(std::initializer_list<std::size_t> indices)
      : ClauseIndexSet(std::vector<std::size_t>(indices)) {}
  explicit ClauseIndexSet(std::vector<std::size_t> indices) : items_(std::move(indices)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  /// {0, ..., n-1}
  static ClauseIndexSet all(std::size_t n) {
    ClauseIndexSet out;
    out.items_.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.items_[i] = i;
    return out;
  }

  bool contains(std::size_t index) const {
    return std::binary_search(items_.begin(), items_.end(), index);
  }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  std::size_t back() const { return items_.back(); }
  const std::vector<std::size_t>& items() const { return items_; }

  bool is_subset_of(const ClauseIndexSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(),
                         items_.end());
  }

  /// {0..n-1} minus this set.
  ClauseIndexSet complement(std::size_t n) const {
    ClauseIndexSet out;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pos < items_.size() && items_[pos] == i) {
        ++pos;
      } else {
        out.items_.push_back(i);
      }
    }
    return out;
  }

  void insert(std::size_t index) {
    auto it = std::lower_bound(items_.begin(), items_.end(), index);
    if (it == items_.end() || *it != index) items_.insert(it, index);
  }

  /// Lexicographic on the sorted sequences.
  auto operator<=>(const ClauseIndexSet&) const = default;

 private:
  std::vector<std::size_t> items_;
};

/// Prints 1-based indices, e.g. "{1,3,4}".
std::ostream& operator<<(std::ostream& os, const ClauseIndexSet& set);

}  // namespace bafsynth
