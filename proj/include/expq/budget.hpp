#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "expq/formula.hpp"

namespace expq {

struct Limits {
  std::uint64_t maxDisjuncts = 1'000'000;
  std::uint64_t maxCoeffBits = 1'000'000;
  double maxSeconds = 300.0;
};

// Shared accounting for one solve. Subroutines charge every formula they
// produce; exceeding any limit throws ResourceExceeded.
class Budget {
 public:
  explicit Budget(Limits limits = {});

  const Limits& limits() const { return limits_; }
  std::uint64_t disjuncts() const { return disjuncts_; }
  double elapsedSeconds() const;

  void charge(std::uint64_t n = 1);
  // Throws if expanding `n` more members at once would exceed the cap.
  void reserve(const Integer& n, const std::string& what) const;
  void checkTime() const;
  void checkCoefficients(const Formula& f) const;

 private:
  Limits limits_;
  std::uint64_t disjuncts_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// Callback receiving produced formulas; returning false stops the producer.
using Emit = std::function<bool(const Formula&)>;

}  // namespace expq
