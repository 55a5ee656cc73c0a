// Problem data: discrete speed/power profile, jobs, and the convex power envelope.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minrate/rational.hpp"

namespace minrate {

/// Error raised by operations with a hard precondition on the input data.
class InstanceError : public std::runtime_error {
 public:
  enum class Kind { NotWellSeparated, SpeedOutOfRange, Invalid };
  InstanceError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Discrete speeds s_1 < ... < s_k with powers P_1 < ... < P_k. Speed index 0 is idle
/// (speed 0, power 0); indices 1..k address the listed speeds.
class SpeedProfile {
 public:
  SpeedProfile() = default;
  SpeedProfile(std::vector<Rational> speeds, std::vector<Rational> powers)
      : speeds_(std::move(speeds)), powers_(std::move(powers)) {}

  [[nodiscard]] std::size_t size() const { return speeds_.size(); }
  [[nodiscard]] bool empty() const { return speeds_.empty(); }

  /// Speed of index i in 0..k (0 is idle).
  [[nodiscard]] Rational speed(std::size_t i) const { return i == 0 ? Rational(0) : speeds_.at(i - 1); }
  [[nodiscard]] Rational power(std::size_t i) const { return i == 0 ? Rational(0) : powers_.at(i - 1); }
  [[nodiscard]] const Rational& max_speed() const { return speeds_.back(); }

  [[nodiscard]] const std::vector<Rational>& speeds() const { return speeds_; }
  [[nodiscard]] const std::vector<Rational>& powers() const { return powers_; }

  /// Marginal power slope of segment i (1-based): (P_i - P_{i-1}) / (s_i - s_{i-1}).
  [[nodiscard]] Rational slope(std::size_t i) const;

 private:
  std::vector<Rational> speeds_;
  std::vector<Rational> powers_;
};

struct Job {
  int id = 0;
  Rational release;
  Rational deadline;
  Rational work;

  [[nodiscard]] bool active_at(const Rational& t) const { return release <= t && t < deadline; }
};

struct Instance {
  SpeedProfile profile;
  std::vector<Job> jobs;

  [[nodiscard]] std::size_t job_count() const { return jobs.size(); }
  /// Latest deadline, 0 for an empty job set.
  [[nodiscard]] Rational horizon() const;
  /// Position of the job with the given id; throws std::out_of_range.
  [[nodiscard]] std::size_t index_of(int id) const;
};

struct Violation {
  std::string what;
  std::optional<std::size_t> index;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Reports every violated structural invariant; an empty list means the instance is usable.
/// Well-separation is reported like any other violation.
std::vector<Violation> validate(const Instance& instance);

/// Slopes Delta_1..Delta_k of the profile.
std::vector<Rational> delta_slopes(const SpeedProfile& profile);

/// The common ratio c of consecutive slopes, or nullopt for a single-speed profile.
/// Throws InstanceError(NotWellSeparated) if the ratios are not all equal.
std::optional<Rational> well_separation_constant(const SpeedProfile& profile);

/// Piecewise-linear interpolation of (s_i, P_i) evaluated at average speed s.
Rational envelope_power(const SpeedProfile& profile, const Rational& speed);

/// Index a such that speed lies in (s_{a-1}, s_a]; 0 for speed 0.
std::size_t envelope_segment(const SpeedProfile& profile, const Rational& speed);

struct SpeedRun {
  std::size_t speed_index = 0;
  Rational duration;

  friend bool operator==(const SpeedRun&, const SpeedRun&) = default;
};

/// Realizes average speed s over duration T with the two bracketing discrete speeds,
/// lower speed first. Returns one run when s is a discrete speed.
std::vector<SpeedRun> interpolate(const SpeedProfile& profile, const Rational& speed, const Rational& duration);

/// Energy consumed by a list of runs.
Rational runs_energy(const SpeedProfile& profile, const std::vector<SpeedRun>& runs);

}  // namespace minrate
