// Discrete schedules, the battery trace, feasibility, depletion points and weak EDF.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minrate/instance.hpp"

namespace minrate {

class ScheduleError : public std::runtime_error {
 public:
  enum class Kind { NonConstantSpeed, Malformed };
  ScheduleError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Constant-speed piece of a schedule. An idle segment has no job and speed index 0.
struct Segment {
  Rational start;
  Rational end;
  std::optional<int> job;
  std::size_t speed_index = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// A stretch during which one job is served at a constant average speed. Realized as
/// one or two segments by interpolation (lower speed first).
struct Run {
  Rational start;
  Rational end;
  int job = 0;
  Rational speed;

  friend bool operator==(const Run&, const Run&) = default;
};

struct Schedule {
  std::vector<Segment> segments;
  /// Average-speed view. Empty for schedules loaded without it; see runs_or_derived().
  std::vector<Run> runs;

  /// Realizes runs by interpolation and fills gaps with idle up to `horizon`.
  static Schedule from_runs(const SpeedProfile& profile, std::vector<Run> runs, const Rational& horizon) {
    return from_runs(profile, std::move(runs), Rational(0), horizon);
  }
  /// Same, covering [start, horizon) only.
  static Schedule from_runs(const SpeedProfile& profile, std::vector<Run> runs, const Rational& start,
                            const Rational& horizon);

  [[nodiscard]] Rational end_time() const { return segments.empty() ? Rational(0) : segments.back().end; }
  [[nodiscard]] bool empty() const;
  /// The stored runs, or maximal same-job blocks of segments when none are stored.
  [[nodiscard]] std::vector<Run> runs_or_derived(const SpeedProfile& profile) const;
  /// Work of `job` processed within [lo, hi).
  [[nodiscard]] Rational work_in(const SpeedProfile& profile, int job, const Rational& lo, const Rational& hi) const;
  [[nodiscard]] Rational energy(const SpeedProfile& profile) const;
};

struct EnergyPoint {
  Rational time;
  Rational energy;

  friend bool operator==(const EnergyPoint&, const EnergyPoint&) = default;
};

/// Battery level E(t) at every segment endpoint; linear in between.
struct EnergyTrace {
  Rational rate;
  std::vector<EnergyPoint> breakpoints;

  [[nodiscard]] Rational at(const Rational& t) const;
  [[nodiscard]] Rational minimum() const;
};

EnergyTrace energy_trace(const Schedule& schedule, const SpeedProfile& profile, const Rational& rate);

/// Least rate under which the schedule never runs the battery negative.
Rational min_feasible_rate(const Schedule& schedule, const SpeedProfile& profile);

std::vector<Violation> feasibility_check(const Schedule& schedule, const Instance& instance, const Rational& rate);

/// Every breakpoint t > 0 with E(t) = 0.
std::vector<Rational> depletion_points(const Schedule& schedule, const SpeedProfile& profile, const Rational& rate);

/// Labeled depletion points. Interval l (0-based) is [points[l-1], points[l]) with
/// points[-1] = 0; the last interval is unbounded.
struct DepletionStructure {
  std::vector<Rational> points;

  [[nodiscard]] std::size_t interval_count() const { return points.size() + 1; }
  [[nodiscard]] Rational lower(std::size_t l) const { return l == 0 ? Rational(0) : points.at(l - 1); }
  [[nodiscard]] std::optional<Rational> upper(std::size_t l) const {
    if (l < points.size()) return points[l];
    return std::nullopt;
  }
  [[nodiscard]] std::size_t interval_of(const Rational& t) const;
  /// Whether [r, d) meets interval l.
  [[nodiscard]] bool meets(std::size_t l, const Rational& r, const Rational& d) const;
};

using JobInterval = std::pair<int, std::size_t>;

/// s_{j,l}: average speed of j over its processing time inside each interval.
/// Throws ScheduleError(NonConstantSpeed) when runs of one job in one interval differ.
std::map<JobInterval, Rational> avg_speeds(const Schedule& schedule, const SpeedProfile& profile,
                                           const DepletionStructure& structure);

/// Work of each job inside each interval.
std::map<JobInterval, Rational> interval_work(const Schedule& schedule, const SpeedProfile& profile,
                                              const DepletionStructure& structure);

struct WeakEdfViolation {
  std::vector<int> sequence;  ///< first-run sequence as deadline ranks (1-based)
  int job_rank = 0;
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t offending = 0;
};

/// Deadline rank of every job: 1 for the earliest deadline, ties by id.
std::map<int, int> deadline_ranks(const Instance& instance);

/// Concatenated per-interval sequences of jobs ordered by first processing time.
std::vector<int> first_run_sequence(const Schedule& schedule, const Instance& instance,
                                    const DepletionStructure& structure);

/// Checks a first-run sequence of deadline ranks: every entry strictly between the first
/// and last appearance of j must have a smaller rank than j.
std::optional<WeakEdfViolation> weak_edf_sequence_check(const std::vector<int>& sequence);

std::optional<WeakEdfViolation> weak_edf_check(const Schedule& schedule, const Instance& instance,
                                               const DepletionStructure& structure);

}  // namespace minrate
