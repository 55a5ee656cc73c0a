// Engine state: labeled depletion points, per-interval workload, speed levels, and the
// schedule derived from them by per-interval YDS.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "minrate/certificate.hpp"
#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"
#include "minrate/yds.hpp"

namespace minrate {

/// Work rates per (job, interval): how the allocation moves per unit of the homotopy parameter.
using Perturbation = std::map<JobInterval, Rational>;

struct WorkState {
  Rational rate;
  std::vector<Rational> points;
  std::map<JobInterval, Rational> work;  ///< strictly positive entries only
  SpeedLevelTable levels;

  [[nodiscard]] DepletionStructure structure() const { return DepletionStructure{points}; }
  [[nodiscard]] std::size_t interval_count() const { return points.size() + 1; }
  [[nodiscard]] Rational work_of(int job, std::size_t interval) const;

  friend bool operator==(const WorkState&, const WorkState&) = default;
  /// Total order for visited-state sets.
  friend bool operator<(const WorkState& a, const WorkState& b) {
    if (a.rate != b.rate) return a.rate < b.rate;
    if (a.points != b.points) return std::lexicographical_compare(a.points.begin(), a.points.end(), b.points.begin(),
                                                                  b.points.end(), [](const Rational& x, const Rational& y) { return x < y; });
    if (a.work != b.work) return std::lexicographical_compare(a.work.begin(), a.work.end(), b.work.begin(), b.work.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first < y.first : x.second < y.second;
      });
    return a.levels.entries() < b.levels.entries();
  }
};

/// Right end of interval l; the last interval ends at the horizon.
Rational interval_end(const Instance& instance, const WorkState& state, std::size_t l);

/// Jobs whose window meets interval l, clipped, with work w + theta * dw.
std::vector<WindowJob> interval_jobs(const Instance& instance, const WorkState& state, std::size_t l,
                                     const Perturbation& dw = {});

YdsPeeling interval_peel(const Instance& instance, const WorkState& state, std::size_t l,
                         const Perturbation& dw = {});

/// Concrete schedule of the state: YDS per interval, EDF inside critical intervals.
Schedule realize(const Instance& instance, const WorkState& state);

/// Allocation advanced by theta along dw. Throws std::logic_error on negative work.
WorkState advanced(const WorkState& state, const Perturbation& dw, const Rational& theta);

/// Marginal energy per unit work for a critical interval moving in the direction of
/// its rate: the slope of the envelope segment entered.
Rational directional_slope(const SpeedProfile& profile, const Affine& density);

/// Energy used in interval l, as an affine function of the parameter.
Affine interval_energy(const Instance& instance, const YdsPeeling& peel);

/// Cumulative energy use E_used(t) at every critical-interval piece endpoint and interval
/// boundary, affine in the parameter; pairs sorted by time.
std::vector<std::pair<Rational, Affine>> cumulative_use(const Instance& instance, const WorkState& state,
                                                        const std::vector<YdsPeeling>& peels);

/// Zero-rate initial state: global YDS at its least feasible rate, every zero-energy
/// breakpoint labeled, lowest admissible levels with no jumps.
WorkState initial_state(const Instance& instance);

/// Admissibility of every processed job's level at parameter 0+ given the peelings.
std::optional<std::string> levels_admissible(const Instance& instance, const WorkState& state,
                                             const std::vector<std::size_t>& intervals,
                                             const std::vector<YdsPeeling>& peels);

/// Full consistency check of a state: work conservation, feasibility, labels at zero,
/// per-interval YDS and the SLR. Returns the first problem found.
std::optional<std::string> state_problem(const Instance& instance, const WorkState& state,
                                         SlrMode mode = SlrMode::Pointwise);

}  // namespace minrate
