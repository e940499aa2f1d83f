#pragma once

#include <cstddef>
#include <random>

#include "twosided/core.hpp"

namespace twosided::testing {

struct RandomInstanceOptions {
  std::size_t min_packets = 1;
  std::size_t max_packets = 6;
  // Probability that a packet gets a finite pre- / post-delay.
  double pre_probability = 0.7;
  double post_probability = 0.7;
  // Probability that a bound sits exactly on the hidden witness schedule.
  double tight_probability = 0.3;
  // Number of forced-idle segments; 1 gives an instance that needs no split.
  std::size_t segments = 1;
};

// Builds a hidden valid schedule first and places every bound around it, so
// the instance is feasible by construction.
ProblemInstance random_feasible_instance(std::mt19937_64& rng, const RandomInstanceOptions& options);

}  // namespace twosided::testing
