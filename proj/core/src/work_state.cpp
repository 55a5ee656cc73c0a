#include "minrate/work_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace minrate {

Rational WorkState::work_of(int job, std::size_t interval) const {
  auto it = work.find({job, interval});
  return it == work.end() ? Rational(0) : it->second;
}

Rational interval_end(const Instance& instance, const WorkState& state, std::size_t l) {
  if (auto hi = state.structure().upper(l)) return *hi;
  return std::max(instance.horizon(), state.structure().lower(l));
}

std::vector<WindowJob> interval_jobs(const Instance& instance, const WorkState& state, std::size_t l,
                                     const Perturbation& dw) {
  const auto structure = state.structure();
  const Rational lo = structure.lower(l);
  const Rational hi = interval_end(instance, state, l);
  std::vector<WindowJob> out;
  for (const auto& job : instance.jobs) {
    if (!structure.meets(l, job.release, job.deadline)) continue;
    Affine w(state.work_of(job.id, l));
    if (auto it = dw.find({job.id, l}); it != dw.end()) w.rate = it->second;
    if (w == Affine()) continue;
    out.push_back({job.id, std::max(job.release, lo), std::min(job.deadline, hi), w});
  }
  return out;
}

YdsPeeling interval_peel(const Instance& instance, const WorkState& state, std::size_t l, const Perturbation& dw) {
  return yds_peel(interval_jobs(instance, state, l, dw), state.structure().lower(l), interval_end(instance, state, l));
}

Schedule realize(const Instance& instance, const WorkState& state) {
  std::vector<Run> runs;
  for (std::size_t l = 0; l < state.interval_count(); ++l) {
    const auto jobs = interval_jobs(instance, state, l);
    const auto peel = yds_peel_capped(instance.profile, jobs, state.structure().lower(l), interval_end(instance, state, l));
    for (const auto& ci : peel.intervals) {
      auto more = edf_runs(ci, jobs);
      runs.insert(runs.end(), more.begin(), more.end());
    }
  }
  Rational end = instance.horizon();
  for (const auto& p : state.points) end = std::max(end, p);
  return Schedule::from_runs(instance.profile, std::move(runs), end);
}

WorkState advanced(const WorkState& state, const Perturbation& dw, const Rational& theta) {
  WorkState out = state;
  out.rate -= theta;
  for (const auto& [key, rate] : dw) {
    Rational w = out.work_of(key.first, key.second) + theta * rate;
    if (w < 0) throw std::logic_error("allocation became negative");
    if (w == 0)
      out.work.erase(key);
    else
      out.work[key] = w;
  }
  return out;
}

Rational directional_slope(const SpeedProfile& profile, const Affine& density) {
  if (density.rate > 0) {
    std::size_t a = 1;
    while (a <= profile.size() && profile.speed(a) <= density.at) ++a;
    if (a > profile.size()) throw std::logic_error("speed pushed above the top speed");
    return profile.slope(a);
  }
  if (density.rate < 0) return profile.slope(envelope_segment(profile, density.at));
  return 0;
}

Affine interval_energy(const Instance& instance, const YdsPeeling& peel) {
  Affine e;
  for (const auto& ci : peel.intervals) {
    e.at += ci.length * envelope_power(instance.profile, ci.density.at);
    e.rate += ci.length * directional_slope(instance.profile, ci.density) * ci.density.rate;
  }
  return e;
}

std::vector<std::pair<Rational, Affine>> cumulative_use(const Instance& instance, const WorkState& state,
                                                        const std::vector<YdsPeeling>& peels) {
  struct Piece {
    Rational start, end;
    Affine power;
  };
  std::vector<Piece> pieces;
  std::vector<Rational> times{Rational(0)};
  for (std::size_t l = 0; l < peels.size(); ++l) {
    times.push_back(interval_end(instance, state, l));
    for (const auto& ci : peels[l].intervals) {
      const Affine power(envelope_power(instance.profile, ci.density.at),
                         directional_slope(instance.profile, ci.density) * ci.density.rate);
      for (const auto& [x, y] : ci.pieces) {
        pieces.push_back({x, y, power});
        times.push_back(x);
        times.push_back(y);
      }
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.start < b.start; });
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<std::pair<Rational, Affine>> out;
  Affine used;
  std::size_t p = 0;
  for (const auto& t : times) {
    // Pieces never straddle a listed time, so each lies wholly inside one step.
    while (p < pieces.size() && pieces[p].end <= t) {
      used += pieces[p].power * Rational(pieces[p].end - pieces[p].start);
      ++p;
    }
    out.emplace_back(t, used);
  }
  return out;
}

WorkState initial_state(const Instance& instance) {
  WorkState state;
  if (instance.jobs.empty()) return state;
  const auto fragment = yds_global(instance);
  state.rate = min_feasible_rate(fragment.schedule, instance.profile);
  state.points = depletion_points(fragment.schedule, instance.profile, state.rate);
  const auto structure = state.structure();
  state.work = interval_work(fragment.schedule, instance.profile, structure);
  std::erase_if(state.work, [](const auto& kv) { return kv.second == 0; });
  const auto speeds = avg_speeds(fragment.schedule, instance.profile, DepletionStructure{});
  for (const auto& job : instance.jobs) {
    const int level = admissible_levels(instance.profile, speeds.at({job.id, 0})).front();
    for (std::size_t l = 0; l < structure.interval_count(); ++l)
      if (structure.meets(l, job.release, job.deadline)) state.levels.set(job.id, l, level);
  }
  return state;
}

namespace {

std::vector<int> admissible_at(const SpeedProfile& profile, const Affine& g) {
  if (g.rate == 0) return admissible_levels(profile, g.at);
  const int k = static_cast<int>(profile.size());
  for (int i = 0; i <= k; ++i) {
    if (profile.speed(static_cast<std::size_t>(i)) == g.at) {
      if (g.rate > 0) return i + 1 <= k ? std::vector<int>{i + 1} : std::vector<int>{};
      return i >= 1 ? std::vector<int>{i} : std::vector<int>{};
    }
  }
  if (g.at > profile.max_speed()) return {};
  return {static_cast<int>(envelope_segment(profile, g.at))};
}

}  // namespace

std::optional<std::string> levels_admissible(const Instance& instance, const WorkState& state,
                                             const std::vector<std::size_t>& intervals,
                                             const std::vector<YdsPeeling>& peels) {
  for (std::size_t x = 0; x < intervals.size(); ++x) {
    for (const auto& ci : peels[x].intervals) {
      const auto ok = admissible_at(instance.profile, ci.density);
      for (int job : ci.jobs) {
        const auto level = state.levels.get(job, intervals[x]);
        if (!level || std::find(ok.begin(), ok.end(), *level) == ok.end())
          return "job " + std::to_string(job) + " in interval " + std::to_string(intervals[x] + 1) +
                 " leaves its speed level";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> state_problem(const Instance& instance, const WorkState& state, SlrMode mode) {
  const auto structure = state.structure();
  std::map<int, Rational> total;
  for (const auto& [key, w] : state.work) {
    if (w <= 0) return "nonpositive allocation entry";
    const auto& job = instance.jobs[instance.index_of(key.first)];
    if (key.second >= state.interval_count() || !structure.meets(key.second, job.release, job.deadline))
      return "job " + std::to_string(key.first) + " allocated outside its window";
    total[key.first] += w;
  }
  for (const auto& job : instance.jobs)
    if (total[job.id] != job.work) return "allocation of job " + std::to_string(job.id) + " does not sum to its work";

  std::vector<YdsPeeling> peels;
  for (std::size_t l = 0; l < state.interval_count(); ++l) {
    try {
      peels.push_back(yds_peel_capped(instance.profile, interval_jobs(instance, state, l),
                                      structure.lower(l), interval_end(instance, state, l)));
    } catch (const YdsError& e) {
      return std::string("interval ") + std::to_string(l + 1) + ": " + e.what();
    }
  }
  for (const auto& [t, used] : cumulative_use(instance, state, peels)) {
    const Rational e = state.rate * t - used.at;
    if (e < 0) return "battery negative at " + to_string(t);
    if (e != 0 && std::binary_search(state.points.begin(), state.points.end(), t))
      return "labeled point " + to_string(t) + " not depleted";
  }
  const auto schedule = realize(instance, state);
  if (auto v = check_slr(schedule, instance, structure, state.levels, mode))
    return std::string("SLR (") + v->clause + "): " + v->what;
  return std::nullopt;
}

}  // namespace minrate
