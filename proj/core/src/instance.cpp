#include "minrate/instance.hpp"

#include <algorithm>
#include <set>

namespace minrate {

Rational SpeedProfile::slope(std::size_t i) const {
  return Rational((power(i) - power(i - 1)) / (speed(i) - speed(i - 1)));
}

Rational Instance::horizon() const {
  Rational h = 0;
  for (const auto& job : jobs) h = std::max(h, job.deadline);
  return h;
}

std::size_t Instance::index_of(int id) const {
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (jobs[i].id == id) return i;
  throw std::out_of_range("unknown job id " + std::to_string(id));
}

std::vector<Violation> validate(const Instance& instance) {
  std::vector<Violation> out;
  const auto& speeds = instance.profile.speeds();
  const auto& powers = instance.profile.powers();
  if (speeds.empty()) out.push_back({"empty speed profile", std::nullopt});
  if (speeds.size() != powers.size()) out.push_back({"speeds and powers differ in length", std::nullopt});

  bool ordered = !speeds.empty() && speeds.size() == powers.size();
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    if (speeds[i] <= 0 && i == 0) {
      out.push_back({"speeds not positive", i});
      ordered = false;
    }
    if (i > 0 && speeds[i] <= speeds[i - 1]) {
      out.push_back({"speeds not increasing", i});
      ordered = false;
    }
  }
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (i == 0 && powers[i] <= 0) {
      out.push_back({"powers not positive", i});
      ordered = false;
    }
    if (i > 0 && powers[i] <= powers[i - 1]) {
      out.push_back({"powers not increasing", i});
      ordered = false;
    }
  }
  if (ordered) {
    const auto deltas = delta_slopes(instance.profile);
    bool convex = true;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      if (deltas[i] <= deltas[i - 1]) {
        out.push_back({"slopes not strictly increasing", i});
        convex = false;
      }
    }
    if (convex) {
      try {
        (void)well_separation_constant(instance.profile);
      } catch (const InstanceError&) {
        out.push_back({"slopes not well-separated", std::nullopt});
      }
    }
  }

  std::set<int> ids;
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    const auto& job = instance.jobs[j];
    if (!ids.insert(job.id).second) out.push_back({"duplicate job id", j});
    if (job.release < 0) out.push_back({"negative release", j});
    if (job.release >= job.deadline) out.push_back({"release not before deadline", j});
    if (job.work <= 0) out.push_back({"work not positive", j});
  }
  return out;
}

std::vector<Rational> delta_slopes(const SpeedProfile& profile) {
  std::vector<Rational> out;
  out.reserve(profile.size());
  for (std::size_t i = 1; i <= profile.size(); ++i) out.push_back(profile.slope(i));
  return out;
}

std::optional<Rational> well_separation_constant(const SpeedProfile& profile) {
  const auto deltas = delta_slopes(profile);
  if (deltas.size() < 2) return std::nullopt;
  const Rational c = deltas[1] / deltas[0];
  for (std::size_t i = 2; i < deltas.size(); ++i) {
    if (deltas[i] != c * deltas[i - 1])
      throw InstanceError(InstanceError::Kind::NotWellSeparated,
                          "slope ratios differ at index " + std::to_string(i));
  }
  if (c <= 1) throw InstanceError(InstanceError::Kind::NotWellSeparated, "slope ratio not above 1");
  return c;
}

std::size_t envelope_segment(const SpeedProfile& profile, const Rational& speed) {
  if (speed < 0 || speed > profile.max_speed())
    throw InstanceError(InstanceError::Kind::SpeedOutOfRange, "speed " + to_string(speed) + " out of range");
  if (speed == 0) return 0;
  std::size_t a = 1;
  while (profile.speed(a) < speed) ++a;
  return a;
}

Rational envelope_power(const SpeedProfile& profile, const Rational& speed) {
  const std::size_t a = envelope_segment(profile, speed);
  if (a == 0) return 0;
  return Rational(profile.power(a - 1) + profile.slope(a) * (speed - profile.speed(a - 1)));
}

std::vector<SpeedRun> interpolate(const SpeedProfile& profile, const Rational& speed, const Rational& duration) {
  const std::size_t a = envelope_segment(profile, speed);
  if (a == 0) return {SpeedRun{0, duration}};
  if (speed == profile.speed(a)) return {SpeedRun{a, duration}};
  const Rational lo = profile.speed(a - 1);
  const Rational hi = profile.speed(a);
  const Rational low_time = (hi - speed) / (hi - lo) * duration;
  return {SpeedRun{a - 1, low_time}, SpeedRun{a, Rational(duration - low_time)}};
}

Rational runs_energy(const SpeedProfile& profile, const std::vector<SpeedRun>& runs) {
  Rational e = 0;
  for (const auto& r : runs) e += profile.power(r.speed_index) * r.duration;
  return e;
}

}  // namespace minrate
