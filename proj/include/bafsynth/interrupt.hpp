// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <stop_token>

#include "bafsynth/error.hpp"

namespace bafsynth {

/// Cooperative cancellation: a stop token plus an optional wall-clock
/// deadline. Long-running loops poll it and throw Cancelled.
class Interrupt {
 public:
  using Clock = std::chrono::steady_clock;

  Interrupt() = default;
  explicit Interrupt(std::stop_token token,
                     std::optional<Clock::time_point> deadline = std::nullopt)
      : token_(std::move(token)), deadline_(deadline) {}

  static Interrupt after(std::chrono::duration<double> timeout,
                         std::stop_token token = {}) {
    return Interrupt(std::move(token),
                     Clock::now() + std::chrono::duration_cast<Clock::duration>(timeout));
  }

  bool requested() const {
    if (token_.stop_requested()) return true;
    return deadline_ && Clock::now() >= *deadline_;
  }

  void check() const {
    if (requested()) throw Cancelled();
  }

 private:
  std::stop_token token_;
  std::optional<Clock::time_point> deadline_;
};

}  // namespace bafsynth
