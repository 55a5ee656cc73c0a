// Fixtures and independent brute-force checkers shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "minrate/certificate.hpp"
#include "minrate/engine.hpp"
#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"
#include "minrate/transfer.hpp"
#include "minrate/work_state.hpp"
#include "minrate/yds.hpp"

namespace minrate::testing {

inline Rational Q(const char* text) { return parse_rational(text); }

inline SpeedProfile two_speed_profile() { return SpeedProfile({Rational(1), Rational(2)}, {Rational(1), Rational(4)}); }

/// Two jobs on speeds (1, 2) with powers (1, 4): j = (0, 4, 3) and j' = (1, 2, 2).
inline Instance worked_example() {
  Instance in;
  in.profile = two_speed_profile();
  in.jobs = {{1, Rational(0), Rational(4), Rational(3)}, {2, Rational(1), Rational(2), Rational(2)}};
  return in;
}

inline Instance single_job(const Rational& r, const Rational& d, const Rational& p) {
  Instance in;
  in.profile = two_speed_profile();
  in.jobs = {{1, r, d, p}};
  return in;
}

/// Profile with the given speeds, slope Delta_1 and ratio c.
inline SpeedProfile geometric_profile(const std::vector<Rational>& speeds, const Rational& delta1, const Rational& c) {
  std::vector<Rational> powers;
  Rational p = 0, prev = 0, delta = delta1;
  for (const auto& s : speeds) {
    p += delta * (s - prev);
    powers.push_back(p);
    prev = s;
    delta *= c;
  }
  return SpeedProfile(speeds, powers);
}

inline Schedule make_schedule(std::vector<Segment> segments) {
  Schedule s;
  s.segments = std::move(segments);
  return s;
}

inline Segment seg(const Rational& a, const Rational& b, std::optional<int> job, std::size_t speed) {
  return Segment{a, b, job, speed};
}

/// WorkState carried by an engine snapshot.
inline WorkState state_of(const Instance& instance, const StepSnapshot& snap) {
  WorkState s;
  s.rate = snap.rate;
  s.points = snap.structure.points;
  s.work = interval_work(snap.schedule, instance.profile, snap.structure);
  std::erase_if(s.work, [](const auto& kv) { return kv.second <= 0; });
  s.levels = snap.levels;
  return s;
}

// ---------------------------------------------------------------------------------------
// Brute-force transfer tester: every sequence of distinct intervals and distinct jobs is
// tried by actually moving delta work along each hop and re-checking the schedule.

struct BruteTransfer {
  std::vector<std::size_t> intervals;
  std::vector<int> jobs;
  bool active = false;
};

inline bool brute_nested(const std::vector<std::size_t>& iv, std::size_t a) {
  if (iv[a] < iv[a - 1]) return false;
  for (std::size_t b = 1; b < a; ++b)
    if (iv[b] < iv[b - 1] && iv[b] <= iv[a - 1] && iv[a] <= iv[b - 1]) return true;
  return false;
}

/// Whether moving `delta` of each hop's job keeps the schedule nice (top speed respected,
/// per-interval YDS, weak EDF) and intermediate speeds fixed; `active` also asks for the
/// SLR with the unchanged level table.
inline std::optional<bool> brute_try(const Instance& instance, const WorkState& state, const BruteTransfer& t,
                                     const Rational& delta, SlrMode mode) {
  const auto structure = state.structure();
  WorkState moved = state;
  for (std::size_t a = 1; a < t.intervals.size(); ++a) {
    const int j = t.jobs[a];
    const auto& job = instance.jobs[instance.index_of(j)];
    if (!structure.meets(t.intervals[a], job.release, job.deadline)) return std::nullopt;
    auto& from = moved.work[{j, t.intervals[a - 1]}];
    if (from < delta) return std::nullopt;
    from -= delta;
    moved.work[{j, t.intervals[a]}] += delta;
  }
  std::erase_if(moved.work, [](const auto& kv) { return kv.second == 0; });

  Schedule before, after;
  try {
    before = realize(instance, state);
    after = realize(instance, moved);
  } catch (const std::exception&) {
    return std::nullopt;  // density above the top speed
  }
  const auto speeds_before = avg_speeds(before, instance.profile, structure);
  const auto speeds_after = avg_speeds(after, instance.profile, structure);
  for (std::size_t a = 1; a + 1 < t.intervals.size(); ++a) {
    const auto l = t.intervals[a];
    for (const auto& [key, s] : speeds_before)
      if (key.second == l && (!speeds_after.count(key) || speeds_after.at(key) != s)) return std::nullopt;
    for (const auto& [key, s] : speeds_after)
      if (key.second == l && !speeds_before.count(key)) return std::nullopt;
  }
  if (weak_edf_check(after, instance, structure)) return std::nullopt;
  return !check_slr(after, instance, structure, state.levels, mode).has_value();
}

/// (source, destination) -> whether some valid transfer, and some active one, exists.
struct Reach {
  bool valid = false;
  bool active = false;
  friend bool operator==(const Reach&, const Reach&) = default;
};

inline std::map<std::pair<std::size_t, std::size_t>, Reach> brute_reach(const Instance& instance,
                                                                        const WorkState& state,
                                                                        const Rational& delta = Rational(1, 64),
                                                                        SlrMode mode = SlrMode::Pointwise) {
  std::map<std::pair<std::size_t, std::size_t>, Reach> out;
  const std::size_t L = state.interval_count();
  std::vector<std::size_t> intervals;
  std::vector<int> hop_jobs;
  std::function<void()> extend = [&] {
    if (!hop_jobs.empty()) {
      BruteTransfer t{intervals, {hop_jobs.front()}};
      t.jobs.insert(t.jobs.end(), hop_jobs.begin(), hop_jobs.end());
      if (auto r = brute_try(instance, state, t, delta, mode)) {
        auto& reach = out[{intervals.front(), intervals.back()}];
        reach.valid = true;
        reach.active = reach.active || *r;
      }
    }
    if (intervals.size() == L) return;
    for (const auto& job : instance.jobs) {
      if (std::find(hop_jobs.begin(), hop_jobs.end(), job.id) != hop_jobs.end()) continue;
      for (std::size_t l = 0; l < L; ++l) {
        if (std::find(intervals.begin(), intervals.end(), l) != intervals.end()) continue;
        intervals.push_back(l);
        hop_jobs.push_back(job.id);
        if (!brute_nested(intervals, intervals.size() - 1)) extend();
        intervals.pop_back();
        hop_jobs.pop_back();
      }
    }
  };
  for (std::size_t src = 0; src < L; ++src) {
    intervals = {src};
    extend();
  }
  return out;
}

/// The same map from enumerate_transfers.
inline std::map<std::pair<std::size_t, std::size_t>, Reach> engine_reach(const Instance& instance,
                                                                         const WorkState& state,
                                                                         SlrMode mode = SlrMode::Pointwise) {
  std::map<std::pair<std::size_t, std::size_t>, Reach> out;
  TransferContext ctx{instance, state, {}, mode};
  for (std::size_t src = 0; src < state.interval_count(); ++src)
    for (const auto& t : enumerate_transfers(ctx, src)) out[{t.source(), t.destination()}] = {true, t.active};
  return out;
}

}  // namespace minrate::testing
