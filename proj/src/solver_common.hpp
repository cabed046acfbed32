#pragma once

#include <chrono>
#include <vector>

#include "mteq/solvers.hpp"

namespace mteq::detail {

inline constexpr double kMinStep = 1e-16;

/// Initial x0 in the dimension of `eq`. Explicit points of a different
/// length are projected through `complement` when given.
std::vector<double> initial_point(const InitialPoint& policy, std::size_t n,
                                  const std::vector<std::size_t>* complement = nullptr);

bool strictly_positive(const std::vector<double>& v);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mteq::detail
