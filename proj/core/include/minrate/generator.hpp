// Seeded random instances for batch comparison.
#pragma once

#include <cstdint>
#include <random>

#include "minrate/instance.hpp"

namespace minrate {

struct GeneratorBounds {
  std::size_t max_jobs = 4;
  std::size_t max_speeds = 3;
  int max_time = 8;            ///< releases and deadlines are integers in [0, max_time]
  int work_denominator = 4;
  bool infeasible = false;     ///< draw instances whose density exceeds the top speed instead
  /// Each job independently gets either a long window spanning most of the horizon or a
  /// short one of length 1-2; at least two jobs. Far more instances leave the YDS rate.
  bool mixed_windows = false;
};

/// Uniform integer in [lo, hi] by plain modulo, so sequences match across standard libraries.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

/// Well-separated profile with random Delta_1 and ratio c in {2, 3}; jobs resampled until
/// the instance is feasible (or infeasible, per bounds).
Instance generate_instance(std::mt19937_64& rng, const GeneratorBounds& bounds = {});

}  // namespace minrate
