// Energy-optimal peeling of critical intervals inside a time window.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"

namespace minrate {

class YdsError : public std::runtime_error {
 public:
  enum class Kind { InfeasibleDensity };
  YdsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Job restricted to a window, with work that may move linearly in a homotopy parameter.
struct WindowJob {
  int id = 0;
  Rational release;
  Rational deadline;
  Affine work;
};

using TimePiece = std::pair<Rational, Rational>;

struct CriticalInterval {
  std::vector<TimePiece> pieces;  ///< disjoint real-time pieces, increasing
  Rational length;
  std::vector<int> jobs;  ///< ids, increasing deadline
  Affine work;
  Affine density;
};

struct YdsPeeling {
  /// Extraction order; densities are non-increasing.
  std::vector<CriticalInterval> intervals;
  /// First parameter value at which some rival window catches up with an extracted
  /// interval, i.e. the structure is valid on [0, stable_until). nullopt: never.
  std::optional<Rational> stable_until;
};

/// Peels critical intervals for the perturbed workload at parameter 0+. Jobs with zero
/// work are ignored. Ties: leftmost, then longest. Throws YdsError if a positive workload
/// has no room.
YdsPeeling yds_peel(const std::vector<WindowJob>& jobs, const Rational& lo, const Rational& hi);

/// Same as yds_peel, but additionally throws if some density exceeds the top speed.
YdsPeeling yds_peel_capped(const SpeedProfile& profile, const std::vector<WindowJob>& jobs, const Rational& lo,
                           const Rational& hi);

struct YdsFragment {
  Schedule schedule;  ///< runs and segments inside the window; idle-filled from lo to hi
  std::vector<CriticalInterval> intervals;
};

/// Classic YDS on [lo, hi) with windows clipped; EDF inside each critical interval.
YdsFragment yds_window(const SpeedProfile& profile, const std::vector<Job>& jobs, const Rational& lo,
                       const Rational& hi);

Rational yds_energy(const SpeedProfile& profile, const std::vector<Job>& jobs, const Rational& lo, const Rational& hi);

/// EDF runs of a critical interval's jobs at its (unperturbed) density.
std::vector<Run> edf_runs(const CriticalInterval& ci, const std::vector<WindowJob>& jobs);

/// Global YDS over [0, horizon).
YdsFragment yds_global(const Instance& instance);

}  // namespace minrate
