// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/index_set.hpp"

#include <ostream>

namespace bafsynth {

std::ostream& operator<<(std::ostream& os, const ClauseIndexSet& set) {
  os << '{';
  bool first = true;
  for (std::size_t index : set) {
    if (!first) os << ',';
    os << index + 1;
    first = false;
  }
  return os << '}';
}

}  // namespace bafsynth
