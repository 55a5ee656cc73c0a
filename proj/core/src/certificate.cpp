#include "minrate/certificate.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "minrate/yds.hpp"

namespace minrate {

std::optional<int> SpeedLevelTable::get(int job, std::size_t interval) const {
  auto it = levels_.find({job, interval});
  if (it == levels_.end()) return std::nullopt;
  return it->second;
}

int SpeedLevelTable::at(int job, std::size_t interval) const {
  auto it = levels_.find({job, interval});
  if (it == levels_.end())
    throw std::out_of_range("no level for job " + std::to_string(job) + " in interval " + std::to_string(interval + 1));
  return it->second;
}

std::vector<int> admissible_levels(const SpeedProfile& profile, const Rational& speed) {
  const int k = static_cast<int>(profile.size());
  const int a = static_cast<int>(envelope_segment(profile, speed));
  if (a == 0) return {1};
  if (speed == profile.speed(static_cast<std::size_t>(a))) {
    if (a < k) return {a, a + 1};
    return {a};
  }
  return {a};
}

namespace {

std::string job_at(int job, std::size_t l) {
  return "job " + std::to_string(job) + " in interval " + std::to_string(l + 1);
}

// Active intervals of every job, ascending.
std::map<int, std::vector<std::size_t>> active_intervals(const Instance& instance, const DepletionStructure& structure) {
  std::map<int, std::vector<std::size_t>> out;
  for (const auto& job : instance.jobs) {
    auto& v = out[job.id];
    for (std::size_t l = 0; l < structure.interval_count(); ++l)
      if (structure.meets(l, job.release, job.deadline)) v.push_back(l);
  }
  return out;
}

// Processing pieces of each segment, cut at depletion points.
struct Piece {
  int job;
  std::size_t interval;
  Rational start;
  Rational end;
};

std::vector<Piece> processing_pieces(const Schedule& schedule, const DepletionStructure& structure) {
  std::vector<Piece> out;
  for (const auto& seg : schedule.segments) {
    if (!seg.job) continue;
    Rational a = seg.start;
    while (a < seg.end) {
      const std::size_t l = structure.interval_of(a);
      const auto hi = structure.upper(l);
      const Rational b = hi ? std::min(seg.end, *hi) : seg.end;
      out.push_back({*seg.job, l, a, b});
      a = b;
    }
  }
  return out;
}

}  // namespace

std::optional<SlrViolation> check_slr(const Schedule& schedule, const Instance& instance,
                                      const DepletionStructure& structure, const SpeedLevelTable& table,
                                      SlrMode mode) {
  const auto& profile = instance.profile;
  const int k = static_cast<int>(profile.size());
  const auto active = active_intervals(instance, structure);

  for (const auto& [job, ls] : active) {
    for (std::size_t l : ls) {
      const auto level = table.get(job, l);
      if (!level) return SlrViolation{'a', "no level for " + job_at(job, l)};
      if (*level < 0 || *level > k) return SlrViolation{'a', "level out of range for " + job_at(job, l)};
    }
  }

  std::map<JobInterval, Rational> speeds;
  try {
    speeds = avg_speeds(schedule, profile, structure);
  } catch (const ScheduleError& e) {
    return SlrViolation{'a', e.what()};
  }
  for (const auto& [key, s] : speeds) {
    const auto level = table.get(key.first, key.second);
    if (!level) return SlrViolation{'a', "no level for processed " + job_at(key.first, key.second)};
    const auto ok = admissible_levels(profile, s);
    if (std::find(ok.begin(), ok.end(), *level) == ok.end()) {
      const bool boundary = ok.size() == 2 || std::find(profile.speeds().begin(), profile.speeds().end(), s) != profile.speeds().end();
      return SlrViolation{boundary ? 'b' : 'a', job_at(key.first, key.second) + " at speed " + to_string(s) +
                                                    " has level " + std::to_string(*level)};
    }
  }

  for (auto a = active.begin(); a != active.end(); ++a) {
    for (auto b = a; b != active.end(); ++b) {
      std::vector<std::size_t> common;
      std::set_intersection(a->second.begin(), a->second.end(), b->second.begin(), b->second.end(),
                            std::back_inserter(common));
      for (std::size_t x = 0; x < common.size(); ++x) {
        for (std::size_t y = x + 1; y < common.size(); ++y) {
          const int da = table.at(a->first, common[y]) - table.at(a->first, common[x]);
          const int db = table.at(b->first, common[y]) - table.at(b->first, common[x]);
          if (da != db || da < 0)
            return SlrViolation{'c', "jobs " + std::to_string(a->first) + " and " + std::to_string(b->first) +
                                         " jump " + std::to_string(da) + " and " + std::to_string(db) +
                                         " between intervals " + std::to_string(common[x] + 1) + " and " +
                                         std::to_string(common[y] + 1)};
        }
      }
    }
  }

  for (const auto& piece : processing_pieces(schedule, structure)) {
    const int mine = table.at(piece.job, piece.interval);
    const auto& self = instance.jobs[instance.index_of(piece.job)];
    Rational lo = piece.start;
    Rational hi = piece.end;
    if (mode == SlrMode::Strict) {
      lo = std::max(self.release, structure.lower(piece.interval));
      const auto up = structure.upper(piece.interval);
      hi = up ? std::min(self.deadline, *up) : self.deadline;
    }
    for (const auto& other : instance.jobs) {
      if (other.id == piece.job) continue;
      if (std::max(other.release, lo) >= std::min(other.deadline, hi)) continue;
      const int theirs = table.at(other.id, piece.interval);
      if (theirs > mine)
        return SlrViolation{'d', job_at(piece.job, piece.interval) + " has level " + std::to_string(mine) +
                                     " below active job " + std::to_string(other.id) + " at level " +
                                     std::to_string(theirs)};
    }
  }
  return std::nullopt;
}

std::optional<Rational> check_sdp(const Schedule& schedule, const Instance& instance,
                                  const DepletionStructure& structure) {
  for (const auto& tau : structure.points) {
    bool split = tau > 0;
    for (const auto& seg : schedule.segments) {
      if (!split || seg.start >= tau) break;
      if (seg.job && instance.jobs[instance.index_of(*seg.job)].deadline > tau) split = false;
    }
    if (split) return tau;
  }
  return std::nullopt;
}

std::vector<Violation> check_local_energy_opt(const Schedule& schedule, const Instance& instance,
                                              const DepletionStructure& structure) {
  std::vector<Violation> out;
  const auto& profile = instance.profile;
  const auto work = interval_work(schedule, profile, structure);
  const Rational end = std::max(schedule.end_time(), instance.horizon());
  for (std::size_t l = 0; l < structure.interval_count(); ++l) {
    const Rational lo = structure.lower(l);
    const Rational hi = structure.upper(l).value_or(end);
    if (lo >= hi) continue;
    std::vector<Job> jobs;
    for (const auto& [key, w] : work) {
      if (key.second != l || w == 0) continue;
      auto job = instance.jobs[instance.index_of(key.first)];
      job.work = w;
      jobs.push_back(job);
    }
    Rational used = 0;
    for (const auto& seg : schedule.segments) {
      const Rational a = std::max(seg.start, lo);
      const Rational b = std::min(seg.end, hi);
      if (a < b) used += profile.power(seg.speed_index) * (b - a);
    }
    try {
      const Rational best = yds_energy(profile, jobs, lo, hi);
      if (used != best)
        out.push_back({"interval " + std::to_string(l + 1) + " uses " + to_string(used) + " but YDS needs " +
                           to_string(best),
                       l});
    } catch (const YdsError& e) {
      out.push_back({"interval " + std::to_string(l + 1) + ": " + e.what(), l});
    }
  }
  return out;
}

std::vector<Violation> check_optimality_conditions(const Schedule& schedule, const Instance& instance, const Rational& rate,
                                      const DepletionStructure& structure, const SpeedLevelTable& table,
                                      SlrMode mode) {
  auto out = feasibility_check(schedule, instance, rate);
  if (!out.empty()) return out;
  for (const auto& tau : structure.points) {
    const Rational e = energy_trace(schedule, instance.profile, rate).at(tau);
    if (e != 0) out.push_back({"labeled point " + to_string(tau) + " has energy " + to_string(e), std::nullopt});
  }
  for (auto& v : check_local_energy_opt(schedule, instance, structure)) out.push_back(std::move(v));
  if (auto slr = check_slr(schedule, instance, structure, table, mode))
    out.push_back({std::string("SLR (") + slr->clause + "): " + slr->what, std::nullopt});
  if (!check_sdp(schedule, instance, structure)) out.push_back({"no split depletion point", std::nullopt});
  return out;
}

std::optional<SpeedLevelTable> infer_speed_levels(const Schedule& schedule, const Instance& instance,
                                                  const DepletionStructure& structure, SlrMode mode) {
  const auto& profile = instance.profile;
  const int k = static_cast<int>(profile.size());
  const auto active = active_intervals(instance, structure);
  std::map<JobInterval, Rational> speeds;
  try {
    speeds = avg_speeds(schedule, profile, structure);
  } catch (const ScheduleError&) {
    return std::nullopt;
  }

  const std::size_t boundaries = structure.points.size();
  std::vector<bool> straddled(boundaries, false);
  for (const auto& [job, ls] : active)
    for (std::size_t i = 1; i < ls.size(); ++i) straddled[ls[i - 1]] = true;

  std::vector<int> jumps(boundaries, 0);
  std::optional<SpeedLevelTable> best;
  long best_total = 0;

  std::function<void(std::size_t)> over_jumps = [&](std::size_t b) {
    if (b < boundaries) {
      const int top = straddled[b] ? k - 1 : 0;
      for (int a = 0; a <= top; ++a) {
        jumps[b] = a;
        over_jumps(b + 1);
      }
      jumps[b] = 0;
      return;
    }
    std::vector<int> offset(structure.interval_count(), 0);
    for (std::size_t l = 1; l < offset.size(); ++l) offset[l] = offset[l - 1] + jumps[l - 1];

    std::vector<std::pair<int, std::vector<int>>> choices;
    for (const auto& [job, ls] : active) {
      std::vector<int> bases;
      for (int base = 1 - k * static_cast<int>(offset.size()); base <= k; ++base) {
        bool ok = true;
        for (std::size_t l : ls) {
          const int level = base + offset[l];
          if (level < 0 || level > k) ok = false;
          auto it = speeds.find({job, l});
          if (ok && it != speeds.end()) {
            const auto adm = admissible_levels(profile, it->second);
            if (std::find(adm.begin(), adm.end(), level) == adm.end()) ok = false;
          }
          if (!ok) break;
        }
        if (ok) bases.push_back(base);
      }
      if (bases.empty()) return;
      choices.emplace_back(job, std::move(bases));
    }

    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      SpeedLevelTable table;
      long total = 0;
      for (std::size_t c = 0; c < choices.size(); ++c) {
        const int base = choices[c].second[pick[c]];
        for (std::size_t l : active.at(choices[c].first)) {
          table.set(choices[c].first, l, base + offset[l]);
          total += base + offset[l];
        }
      }
      if ((!best || total < best_total) && !check_slr(schedule, instance, structure, table, mode)) {
        best = table;
        best_total = total;
      }
      std::size_t c = 0;
      while (c < pick.size() && ++pick[c] == choices[c].second.size()) pick[c++] = 0;
      if (c == pick.size()) break;
    }
  };
  over_jumps(0);
  return best;
}

DualCertificate build_dual_certificate(const Schedule& schedule, const Instance& instance, const Rational& rate,
                                       const DepletionStructure& structure, const SpeedLevelTable& table) {
  const auto problems = check_optimality_conditions(schedule, instance, rate, structure, table);
  if (!problems.empty()) throw CertificateError(CertificateError::Kind::PreconditionFailed, problems.front().what);
  const auto& profile = instance.profile;
  const Rational split = *check_sdp(schedule, instance, structure);
  const auto split_at = static_cast<std::size_t>(
      std::find(structure.points.begin(), structure.points.end(), split) - structure.points.begin());
  const std::size_t kk = split_at + 1;

  DualCertificate cert;
  cert.points.assign(structure.points.begin(), structure.points.begin() + static_cast<std::ptrdiff_t>(kk));
  const Rational c = well_separation_constant(profile).value_or(Rational(1));
  const auto active = active_intervals(instance, structure);
  for (std::size_t l = 0; l + 1 < kk; ++l) {
    std::optional<int> jump;
    for (const auto& [job, ls] : active) {
      if (std::find(ls.begin(), ls.end(), l) == ls.end() || std::find(ls.begin(), ls.end(), l + 1) == ls.end())
        continue;
      const int a = table.at(job, l + 1) - table.at(job, l);
      if (jump && *jump != a)
        throw CertificateError(CertificateError::Kind::InconsistentJumps,
                               "jobs disagree on the level jump at " + to_string(structure.points[l]));
      jump = a;
    }
    cert.jumps.push_back(jump.value_or(0));
  }

  // Suffix sums B_l of beta: B_{k} = 1 before normalization, B_l = c^{a_l} B_{l+1}.
  std::vector<Rational> suffix(kk + 1, Rational(0));
  suffix[kk - 1] = 1;
  for (std::size_t l = kk - 1; l-- > 0;) {
    Rational factor = 1;
    for (int i = 0; i < cert.jumps[l]; ++i) factor *= c;
    suffix[l] = factor * suffix[l + 1];
  }
  Rational norm = 0;
  for (std::size_t l = 0; l < kk; ++l) norm += cert.points[l] * (suffix[l] - suffix[l + 1]);
  for (auto& s : suffix) s /= norm;
  for (std::size_t l = 0; l < kk; ++l) cert.beta.push_back(suffix[l] - suffix[l + 1]);
  auto suffix_of = [&](std::size_t l) { return l < kk ? suffix[l] : Rational(0); };

  const auto work = interval_work(schedule, profile, structure);
  for (const auto& job : instance.jobs) {
    std::optional<std::size_t> first;
    for (const auto& [key, w] : work)
      if (key.first == job.id && w > 0 && (!first || key.second < *first)) first = key.second;
    Rational alpha = 0;
    if (first) alpha = profile.slope(static_cast<std::size_t>(table.at(job.id, *first))) * suffix_of(*first);
    cert.alpha[job.id] = alpha;
  }

  std::set<Rational> cuts{Rational(0), std::max(schedule.end_time(), instance.horizon())};
  for (const auto& seg : schedule.segments) {
    cuts.insert(seg.start);
    cuts.insert(seg.end);
  }
  for (const auto& job : instance.jobs) {
    cuts.insert(job.release);
    cuts.insert(job.deadline);
  }
  for (const auto& p : structure.points) cuts.insert(p);
  std::vector<Rational> grid(cuts.begin(), cuts.end());
  std::size_t seg_index = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    DualSlot slot{grid[i - 1], grid[i], 0};
    while (seg_index < schedule.segments.size() && schedule.segments[seg_index].end <= slot.start) ++seg_index;
    if (seg_index < schedule.segments.size() && schedule.segments[seg_index].start <= slot.start &&
        schedule.segments[seg_index].job) {
      const int job = *schedule.segments[seg_index].job;
      const std::size_t l = structure.interval_of(slot.start);
      const auto level = static_cast<std::size_t>(table.at(job, l));
      slot.gamma = (cert.alpha.at(job) * profile.speed(level) - suffix_of(l) * profile.power(level)) *
                   (slot.end - slot.start);
    }
    cert.slots.push_back(slot);
  }

  for (const auto& job : instance.jobs) cert.objective += cert.alpha.at(job.id) * job.work;
  for (const auto& slot : cert.slots) cert.objective -= slot.gamma;
  return cert;
}

std::vector<Violation> verify_duality(const DualCertificate& certificate, const Instance& instance,
                                      const Rational& rate) {
  std::vector<Violation> out;
  const auto& profile = instance.profile;
  const auto& slots = certificate.slots;
  if (certificate.beta.size() != certificate.points.size()) {
    out.push_back({"beta and support differ in length", std::nullopt});
    return out;
  }

  std::set<Rational> boundaries;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].start >= slots[i].end) out.push_back({"empty dual slot", i});
    if (i > 0 && slots[i].start != slots[i - 1].end) out.push_back({"dual slots not contiguous", i});
    boundaries.insert(slots[i].start);
    boundaries.insert(slots[i].end);
  }
  if (!instance.jobs.empty() && (slots.empty() || slots.front().start != 0 || slots.back().end < instance.horizon()))
    out.push_back({"dual slots do not cover the horizon", std::nullopt});
  for (const auto& job : instance.jobs)
    if (!boundaries.count(job.release) || !boundaries.count(job.deadline))
      out.push_back({"job " + std::to_string(job.id) + " window not aligned with dual slots", std::nullopt});
  for (const auto& p : certificate.points)
    if (!boundaries.count(p)) out.push_back({"beta support " + to_string(p) + " not a slot boundary", std::nullopt});
  if (!out.empty()) return out;

  Rational normalization = 0;
  for (std::size_t l = 0; l < certificate.beta.size(); ++l) {
    if (certificate.beta[l] < 0) out.push_back({"beta negative at " + to_string(certificate.points[l]), l});
    normalization += certificate.beta[l] * certificate.points[l];
  }
  if (normalization != 1) out.push_back({"sum of beta_t * t is " + to_string(normalization) + ", not 1", std::nullopt});
  auto alpha_of = [&](int id) {
    auto it = certificate.alpha.find(id);
    return it == certificate.alpha.end() ? Rational(0) : it->second;
  };
  for (const auto& [id, a] : certificate.alpha)
    if (a < 0) out.push_back({"alpha negative for job " + std::to_string(id), std::nullopt});

  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto& slot = slots[s];
    if (slot.gamma < 0) out.push_back({"gamma negative on slot " + to_string(slot.start), s});
    Rational later = 0;
    for (std::size_t l = 0; l < certificate.points.size(); ++l)
      if (certificate.points[l] >= slot.end) later += certificate.beta[l];
    const Rational len = slot.end - slot.start;
    for (const auto& job : instance.jobs) {
      if (job.release > slot.start || slot.end > job.deadline) continue;
      const Rational a = alpha_of(job.id);
      for (std::size_t i = 1; i <= profile.size(); ++i) {
        const Rational lhs = (a * profile.speed(i) - later * profile.power(i)) * len - slot.gamma;
        if (lhs > 0)
          out.push_back({"dual constraint violated for job " + std::to_string(job.id) + ", speed " +
                             std::to_string(i) + ", slot [" + to_string(slot.start) + ", " + to_string(slot.end) +
                             ") by " + to_string(lhs),
                         s});
      }
    }
  }

  Rational objective = 0;
  for (const auto& job : instance.jobs) objective += alpha_of(job.id) * job.work;
  for (const auto& slot : slots) objective -= slot.gamma;
  if (objective != certificate.objective)
    out.push_back({"stated objective " + to_string(certificate.objective) + " differs from " + to_string(objective),
                   std::nullopt});
  if (objective != rate)
    out.push_back({"dual objective " + to_string(objective) + " differs from rate " + to_string(rate), std::nullopt});
  return out;
}

}  // namespace minrate
