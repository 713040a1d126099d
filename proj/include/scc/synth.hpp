#pragma once

// Random architectures and scenarios for property tests and benchmarks.

#include <cstddef>
#include <random>

#include "scc/model.hpp"
#include "scc/sim.hpp"

namespace scc::synth {

struct Options {
  std::size_t min_components = 3;
  std::size_t max_components = 12;
  /// When false, operators may also name later operators (and so form
  /// cycles); the result then need not pass the checks.
  bool acyclic = true;
};

/// Single value type `Data`. Acyclic results are consistent,
/// deterministic and well typed.
Architecture random_architecture(std::mt19937_64& rng, const Options& options = {});

/// Publishes on random sources and pulls random pull-contract operators.
Scenario random_scenario(std::mt19937_64& rng, const Architecture& arch, std::size_t max_steps);

}  // namespace scc::synth
