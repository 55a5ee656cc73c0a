#include "minrate/schedule.hpp"

#include <algorithm>
#include <set>

namespace minrate {

Schedule Schedule::from_runs(const SpeedProfile& profile, std::vector<Run> runs, const Rational& start,
                             const Rational& horizon) {
  std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.start < b.start; });
  Schedule out;
  Rational t = start;
  auto idle_until = [&](const Rational& until) {
    if (t < until) out.segments.push_back({t, until, std::nullopt, 0});
  };
  for (const auto& run : runs) {
    if (run.start < t) throw ScheduleError(ScheduleError::Kind::Malformed, "overlapping runs");
    idle_until(run.start);
    t = run.start;
    for (const auto& piece : interpolate(profile, run.speed, Rational(run.end - run.start))) {
      if (piece.duration == 0) continue;
      Rational end = t + piece.duration;
      if (piece.speed_index == 0)
        out.segments.push_back({t, end, std::nullopt, 0});
      else
        out.segments.push_back({t, end, run.job, piece.speed_index});
      t = end;
    }
  }
  idle_until(horizon);
  // Adjacent idle pieces come from a gap followed by a lower-first interpolation.
  std::vector<Segment> merged;
  for (auto& seg : out.segments) {
    if (!merged.empty() && merged.back().end == seg.start && merged.back().job == seg.job &&
        merged.back().speed_index == seg.speed_index) {
      merged.back().end = seg.end;
    } else {
      merged.push_back(std::move(seg));
    }
  }
  out.segments = std::move(merged);
  out.runs = std::move(runs);
  return out;
}

bool Schedule::empty() const {
  return std::none_of(segments.begin(), segments.end(), [](const Segment& s) { return s.job.has_value(); });
}

std::vector<Run> Schedule::runs_or_derived(const SpeedProfile& profile) const {
  if (!runs.empty() || empty()) return runs;
  std::vector<Run> out;
  Rational work = 0;
  for (const auto& seg : segments) {
    if (!seg.job) continue;
    const Rational w = profile.speed(seg.speed_index) * (seg.end - seg.start);
    if (!out.empty() && out.back().job == *seg.job && out.back().end == seg.start) {
      out.back().end = seg.end;
      work += w;
    } else {
      if (!out.empty()) out.back().speed = work / (out.back().end - out.back().start);
      out.push_back({seg.start, seg.end, *seg.job, 0});
      work = w;
    }
  }
  if (!out.empty()) out.back().speed = work / (out.back().end - out.back().start);
  return out;
}

Rational Schedule::work_in(const SpeedProfile& profile, int job, const Rational& lo, const Rational& hi) const {
  Rational w = 0;
  for (const auto& seg : segments) {
    if (seg.job != job) continue;
    const Rational a = std::max(seg.start, lo);
    const Rational b = std::min(seg.end, hi);
    if (a < b) w += profile.speed(seg.speed_index) * (b - a);
  }
  return w;
}

Rational Schedule::energy(const SpeedProfile& profile) const {
  Rational e = 0;
  for (const auto& seg : segments) e += profile.power(seg.speed_index) * (seg.end - seg.start);
  return e;
}

Rational EnergyTrace::at(const Rational& t) const {
  if (breakpoints.empty()) return Rational(rate * t);
  if (t >= breakpoints.back().time) return Rational(breakpoints.back().energy + rate * (t - breakpoints.back().time));
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const auto& a = breakpoints[i - 1];
    const auto& b = breakpoints[i];
    if (t <= b.time) return Rational(a.energy + (b.energy - a.energy) * (t - a.time) / (b.time - a.time));
  }
  return breakpoints.back().energy;
}

Rational EnergyTrace::minimum() const {
  Rational m = 0;
  for (const auto& p : breakpoints) m = std::min(m, p.energy);
  return m;
}

EnergyTrace energy_trace(const Schedule& schedule, const SpeedProfile& profile, const Rational& rate) {
  EnergyTrace trace;
  trace.rate = rate;
  trace.breakpoints.push_back({0, 0});
  Rational used = 0;
  for (const auto& seg : schedule.segments) {
    used += profile.power(seg.speed_index) * (seg.end - seg.start);
    trace.breakpoints.push_back({seg.end, Rational(rate * seg.end - used)});
  }
  return trace;
}

Rational min_feasible_rate(const Schedule& schedule, const SpeedProfile& profile) {
  Rational best = 0;
  Rational used = 0;
  for (const auto& seg : schedule.segments) {
    used += profile.power(seg.speed_index) * (seg.end - seg.start);
    if (seg.end > 0) best = std::max(best, Rational(used / seg.end));
  }
  return best;
}

std::vector<Violation> feasibility_check(const Schedule& schedule, const Instance& instance, const Rational& rate) {
  std::vector<Violation> out;
  const auto& profile = instance.profile;
  Rational t = 0;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const auto& seg = schedule.segments[i];
    if (seg.start < t) out.push_back({"segments overlap or are unsorted", i});
    if (seg.start >= seg.end) out.push_back({"empty segment", i});
    if (seg.job.has_value() == (seg.speed_index == 0)) out.push_back({"idle marker and speed index disagree", i});
    if (seg.speed_index > profile.size()) out.push_back({"speed index out of range", i});
    t = seg.end;
  }
  if (!out.empty()) return out;

  std::map<int, Rational> done;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const auto& seg = schedule.segments[i];
    if (!seg.job) continue;
    std::size_t idx = 0;
    try {
      idx = instance.index_of(*seg.job);
    } catch (const std::out_of_range&) {
      out.push_back({"unknown job " + std::to_string(*seg.job), i});
      continue;
    }
    const auto& job = instance.jobs[idx];
    if (seg.start < job.release || seg.end > job.deadline)
      out.push_back({"job " + std::to_string(job.id) + " processed outside its window", i});
    done[job.id] += profile.speed(seg.speed_index) * (seg.end - seg.start);
  }
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    const auto& job = instance.jobs[j];
    const Rational got = done.count(job.id) ? done[job.id] : Rational(0);
    if (got < job.work) out.push_back({"work deficit for job " + std::to_string(job.id), j});
    if (got > job.work) out.push_back({"work excess for job " + std::to_string(job.id), j});
  }
  for (const auto& p : energy_trace(schedule, profile, rate).breakpoints) {
    if (p.energy < 0) {
      out.push_back({"battery negative at t = " + to_string(p.time), std::nullopt});
      break;
    }
  }
  return out;
}

std::vector<Rational> depletion_points(const Schedule& schedule, const SpeedProfile& profile, const Rational& rate) {
  std::vector<Rational> out;
  for (const auto& p : energy_trace(schedule, profile, rate).breakpoints)
    if (p.time > 0 && p.energy == 0 && (out.empty() || out.back() != p.time)) out.push_back(p.time);
  return out;
}

std::size_t DepletionStructure::interval_of(const Rational& t) const {
  return static_cast<std::size_t>(std::upper_bound(points.begin(), points.end(), t) - points.begin());
}

bool DepletionStructure::meets(std::size_t l, const Rational& r, const Rational& d) const {
  const auto hi = upper(l);
  return std::max(r, lower(l)) < (hi ? std::min(d, *hi) : d);
}

namespace {

// Runs cut at depletion points so that each piece lies in one interval.
std::vector<std::pair<std::size_t, Run>> runs_by_interval(const Schedule& schedule, const SpeedProfile& profile,
                                                          const DepletionStructure& structure) {
  std::vector<std::pair<std::size_t, Run>> out;
  for (auto run : schedule.runs_or_derived(profile)) {
    std::size_t l = structure.interval_of(run.start);
    while (true) {
      const auto hi = structure.upper(l);
      if (!hi || run.end <= *hi) {
        out.emplace_back(l, run);
        break;
      }
      Run head = run;
      head.end = *hi;
      out.emplace_back(l, head);
      run.start = *hi;
      ++l;
    }
  }
  return out;
}

}  // namespace

std::map<JobInterval, Rational> avg_speeds(const Schedule& schedule, const SpeedProfile& profile,
                                           const DepletionStructure& structure) {
  std::map<JobInterval, Rational> out;
  for (const auto& [l, run] : runs_by_interval(schedule, profile, structure)) {
    const JobInterval key{run.job, l};
    auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, run.speed);
    } else if (it->second != run.speed) {
      throw ScheduleError(ScheduleError::Kind::NonConstantSpeed,
                          "job " + std::to_string(run.job) + " runs at speeds " + to_string(it->second) + " and " +
                              to_string(run.speed) + " in interval " + std::to_string(l + 1));
    }
  }
  return out;
}

std::map<JobInterval, Rational> interval_work(const Schedule& schedule, const SpeedProfile& profile,
                                              const DepletionStructure& structure) {
  std::map<JobInterval, Rational> out;
  for (const auto& seg : schedule.segments) {
    if (!seg.job) continue;
    Rational a = seg.start;
    while (a < seg.end) {
      const std::size_t l = structure.interval_of(a);
      const auto hi = structure.upper(l);
      const Rational b = hi ? std::min(seg.end, *hi) : seg.end;
      out[{*seg.job, l}] += profile.speed(seg.speed_index) * (b - a);
      a = b;
    }
  }
  return out;
}

std::map<int, int> deadline_ranks(const Instance& instance) {
  std::vector<const Job*> order;
  for (const auto& job : instance.jobs) order.push_back(&job);
  std::sort(order.begin(), order.end(), [](const Job* a, const Job* b) {
    if (a->deadline != b->deadline) return a->deadline < b->deadline;
    return a->id < b->id;
  });
  std::map<int, int> out;
  for (std::size_t i = 0; i < order.size(); ++i) out[order[i]->id] = static_cast<int>(i + 1);
  return out;
}

std::vector<int> first_run_sequence(const Schedule& schedule, const Instance& instance,
                                    const DepletionStructure& structure) {
  const auto ranks = deadline_ranks(instance);
  std::vector<int> out;
  std::set<JobInterval> seen;
  for (const auto& seg : schedule.segments) {
    if (!seg.job) continue;
    Rational a = seg.start;
    while (a < seg.end) {
      const std::size_t l = structure.interval_of(a);
      if (seen.insert({*seg.job, l}).second) out.push_back(ranks.at(*seg.job));
      const auto hi = structure.upper(l);
      if (!hi || seg.end <= *hi) break;
      a = *hi;
    }
  }
  return out;
}

std::optional<WeakEdfViolation> weak_edf_sequence_check(const std::vector<int>& sequence) {
  std::map<int, std::pair<std::size_t, std::size_t>> span;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    auto [it, fresh] = span.try_emplace(sequence[i], i, i);
    if (!fresh) it->second.second = i;
  }
  for (const auto& [job, fl] : span) {
    for (std::size_t i = fl.first + 1; i < fl.second; ++i) {
      if (sequence[i] > job) return WeakEdfViolation{sequence, job, fl.first, fl.second, i};
    }
  }
  return std::nullopt;
}

std::optional<WeakEdfViolation> weak_edf_check(const Schedule& schedule, const Instance& instance,
                                               const DepletionStructure& structure) {
  return weak_edf_sequence_check(first_run_sequence(schedule, instance, structure));
}

}  // namespace minrate
