#include "minrate/yds.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace minrate {

namespace {

// Removed real-time pieces of [lo, hi), kept sorted and merged.
class Blocked {
 public:
  Blocked(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

  [[nodiscard]] Rational compress(const Rational& t) const {
    Rational c = std::clamp(t, lo_, hi_) - lo_;
    for (const auto& [a, b] : pieces_) {
      if (a >= t) break;
      c -= std::min(b, t) - a;
    }
    if (c < 0) c = 0;
    return c;
  }

  /// Real pieces whose compressed coordinates fall in [s, e).
  [[nodiscard]] std::vector<TimePiece> expand(const Rational& s, const Rational& e) const {
    std::vector<TimePiece> out;
    Rational c = 0;
    Rational x = lo_;
    auto take = [&](const Rational& from, const Rational& to) {
      if (from >= to) return;
      const Rational len = to - from;
      const Rational a = std::max(s, c);
      const Rational b = std::min(e, Rational(c + len));
      if (a < b) out.emplace_back(Rational(from + (a - c)), Rational(from + (b - c)));
      c += len;
    };
    for (const auto& [a, b] : pieces_) {
      take(x, a);
      x = b;
    }
    take(x, hi_);
    return out;
  }

  void add(const std::vector<TimePiece>& more) {
    for (const auto& p : more) pieces_.push_back(p);
    std::sort(pieces_.begin(), pieces_.end());
    std::vector<TimePiece> merged;
    for (const auto& p : pieces_) {
      if (!merged.empty() && merged.back().second >= p.first)
        merged.back().second = std::max(merged.back().second, p.second);
      else
        merged.push_back(p);
    }
    pieces_ = std::move(merged);
  }

 private:
  Rational lo_;
  Rational hi_;
  std::vector<TimePiece> pieces_;
};

struct Clipped {
  const WindowJob* job;
  Rational release;
  Rational deadline;
};

bool earlier_deadline(const WindowJob& a, const WindowJob& b) {
  if (a.deadline != b.deadline) return a.deadline < b.deadline;
  return a.id < b.id;
}

}  // namespace

YdsPeeling yds_peel(const std::vector<WindowJob>& jobs, const Rational& lo, const Rational& hi) {
  YdsPeeling out;
  std::vector<Clipped> left;
  for (const auto& job : jobs) {
    if (job.work == Affine()) continue;
    Clipped c{&job, std::max(job.release, lo), std::min(job.deadline, hi)};
    if (c.release >= c.deadline)
      throw YdsError(YdsError::Kind::InfeasibleDensity, "job " + std::to_string(job.id) + " has no room in window");
    left.push_back(c);
  }

  Blocked blocked(lo, hi);
  while (!left.empty()) {
    std::vector<Rational> cr(left.size());
    std::vector<Rational> cd(left.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
      cr[i] = blocked.compress(left[i].release);
      cd[i] = blocked.compress(left[i].deadline);
      if (cr[i] >= cd[i])
        throw YdsError(YdsError::Kind::InfeasibleDensity,
                       "job " + std::to_string(left[i].job->id) + " has no room left in window");
    }
    std::vector<Rational> starts(cr);
    std::vector<Rational> ends(cd);
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

    struct Candidate {
      Rational s, e;
      Affine density;
    };
    std::vector<Candidate> candidates;
    for (const auto& s : starts) {
      for (const auto& e : ends) {
        if (s >= e) continue;
        Affine w;
        bool any = false;
        for (std::size_t i = 0; i < left.size(); ++i) {
          if (cr[i] >= s && cd[i] <= e) {
            w += left[i].job->work;
            any = true;
          }
        }
        if (any) candidates.push_back({s, e, w / Rational(e - s)});
      }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      const auto& a = candidates[c];
      const auto& b = candidates[best];
      const auto cmp = a.density <=> b.density;
      if (cmp > 0 || (cmp == 0 && (a.s < b.s || (a.s == b.s && a.e > b.e)))) best = c;
    }
    const Candidate chosen = candidates[best];
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (c == best) continue;
      if (auto when = catch_up(candidates[c].density, chosen.density)) {
        if (*when > 0 && (!out.stable_until || *when < *out.stable_until)) out.stable_until = *when;
      }
    }

    CriticalInterval ci;
    ci.pieces = blocked.expand(chosen.s, chosen.e);
    ci.length = chosen.e - chosen.s;
    ci.density = chosen.density;
    std::vector<Clipped> rest;
    std::vector<const WindowJob*> members;
    for (std::size_t i = 0; i < left.size(); ++i) {
      if (cr[i] >= chosen.s && cd[i] <= chosen.e) {
        members.push_back(left[i].job);
        ci.work += left[i].job->work;
      } else {
        rest.push_back(left[i]);
      }
    }
    std::sort(members.begin(), members.end(), [](const WindowJob* a, const WindowJob* b) { return earlier_deadline(*a, *b); });
    for (const auto* m : members) ci.jobs.push_back(m->id);
    blocked.add(ci.pieces);
    out.intervals.push_back(std::move(ci));
    left = std::move(rest);
  }
  return out;
}

YdsPeeling yds_peel_capped(const SpeedProfile& profile, const std::vector<WindowJob>& jobs, const Rational& lo,
                           const Rational& hi) {
  auto out = yds_peel(jobs, lo, hi);
  for (const auto& ci : out.intervals) {
    if (ci.density.at > profile.max_speed())
      throw YdsError(YdsError::Kind::InfeasibleDensity,
                     "density " + to_string(ci.density.at) + " exceeds the top speed");
  }
  return out;
}

std::vector<Run> edf_runs(const CriticalInterval& ci, const std::vector<WindowJob>& jobs) {
  std::vector<Run> out;
  const Rational g = ci.density.at;
  if (g <= 0) return out;
  struct Pending {
    const WindowJob* job;
    Rational left;
  };
  std::vector<Pending> pending;
  for (int id : ci.jobs) {
    auto it = std::find_if(jobs.begin(), jobs.end(), [id](const WindowJob& j) { return j.id == id; });
    if (it == jobs.end()) throw std::logic_error("critical interval job missing from job list");
    if (it->work.at > 0) pending.push_back({&*it, it->work.at});
  }
  for (const auto& [x, y] : ci.pieces) {
    Rational t = x;
    while (t < y) {
      Pending* pick = nullptr;
      std::optional<Rational> next_release;
      for (auto& p : pending) {
        if (p.left == 0) continue;
        if (p.job->release <= t) {
          if (!pick || earlier_deadline(*p.job, *pick->job)) pick = &p;
        } else if (!next_release || p.job->release < *next_release) {
          next_release = p.job->release;
        }
      }
      Rational stop = y;
      if (next_release && *next_release < stop) stop = *next_release;
      if (!pick) {
        t = stop;
        continue;
      }
      const Rational finish = t + pick->left / g;
      if (finish < stop) stop = finish;
      pick->left -= g * (stop - t);
      if (stop > pick->job->deadline) throw std::logic_error("EDF run past deadline inside critical interval");
      if (!out.empty() && out.back().job == pick->job->id && out.back().end == t)
        out.back().end = stop;
      else
        out.push_back({t, stop, pick->job->id, g});
      t = stop;
    }
  }
  for (const auto& p : pending)
    if (p.left != 0) throw std::logic_error("EDF left work unfinished inside critical interval");
  return out;
}

YdsFragment yds_window(const SpeedProfile& profile, const std::vector<Job>& jobs, const Rational& lo,
                       const Rational& hi) {
  std::vector<WindowJob> wjobs;
  for (const auto& job : jobs)
    wjobs.push_back({job.id, std::max(job.release, lo), std::min(job.deadline, hi), Affine(job.work)});
  auto peel = yds_peel_capped(profile, wjobs, lo, hi);
  std::vector<Run> runs;
  for (const auto& ci : peel.intervals) {
    auto more = edf_runs(ci, wjobs);
    runs.insert(runs.end(), more.begin(), more.end());
  }
  YdsFragment out;
  out.schedule = Schedule::from_runs(profile, std::move(runs), lo, hi);
  out.intervals = std::move(peel.intervals);
  return out;
}

Rational yds_energy(const SpeedProfile& profile, const std::vector<Job>& jobs, const Rational& lo, const Rational& hi) {
  std::vector<WindowJob> wjobs;
  for (const auto& job : jobs)
    wjobs.push_back({job.id, std::max(job.release, lo), std::min(job.deadline, hi), Affine(job.work)});
  Rational e = 0;
  for (const auto& ci : yds_peel_capped(profile, wjobs, lo, hi).intervals)
    e += ci.length * envelope_power(profile, ci.density.at);
  return e;
}

YdsFragment yds_global(const Instance& instance) {
  return yds_window(instance.profile, instance.jobs, Rational(0), instance.horizon());
}

}  // namespace minrate
