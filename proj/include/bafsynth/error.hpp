// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace bafsynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed QDIMACS or decision-list text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (e.g. a witness that does not
/// satisfy its MSS, a seed that is not independent).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An enumeration or brute-force limit was exceeded.
class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// The run was cancelled (deadline reached or stop requested).
class Cancelled : public Error {
 public:
  Cancelled() : Error("cancelled") {}
};

}  // namespace bafsynth
