#include "minrate/transfer.hpp"

#include <algorithm>
#include <sstream>

namespace minrate {

Perturbation EpsilonTransfer::perturbation() const {
  Perturbation dw;
  for (std::size_t a = 1; a < intervals.size(); ++a) {
    dw[{jobs[a], intervals[a - 1]}] -= 1;
    dw[{jobs[a], intervals[a]}] += 1;
  }
  std::erase_if(dw, [](const auto& kv) { return kv.second == 0; });
  return dw;
}

std::string EpsilonTransfer::describe() const {
  std::ostringstream out;
  out << "I" << intervals.front() + 1;
  for (std::size_t a = 1; a < intervals.size(); ++a) out << " -j" << jobs[a] << "-> I" << intervals[a] + 1;
  if (!active) out << " (inactive)";
  return out.str();
}

namespace {

bool window_meets(const TransferContext& ctx, int job, std::size_t l) {
  const auto& j = ctx.instance.jobs[ctx.instance.index_of(job)];
  return ctx.state.structure().meets(l, j.release, j.deadline);
}

bool all_rates_zero(const YdsPeeling& peel) {
  return std::all_of(peel.intervals.begin(), peel.intervals.end(),
                     [](const CriticalInterval& ci) { return ci.density.rate == 0; });
}

// Right hop a nested inside an earlier left hop.
bool nested_in_left(const EpsilonTransfer& t, std::size_t a) {
  if (t.direction(a) != Direction::Right) return false;
  for (std::size_t b = 1; b < a; ++b) {
    if (t.direction(b) != Direction::Left) continue;
    if (t.intervals[b] <= t.intervals[a - 1] && t.intervals[a] <= t.intervals[b - 1]) return true;
  }
  return false;
}

bool memory_allows(const TransferContext& ctx, int job, Direction d) {
  auto it = ctx.memory.find(job);
  return it == ctx.memory.end() || it->second == d;
}

std::optional<std::string> structural_problem(const TransferContext& ctx, const EpsilonTransfer& t) {
  if (t.intervals.size() < 2 || t.jobs.size() != t.intervals.size() || t.jobs[0] != t.jobs[1])
    return "malformed transfer";
  std::set<std::size_t> seen_intervals(t.intervals.begin(), t.intervals.end());
  std::set<int> seen_jobs(t.jobs.begin() + 1, t.jobs.end());
  if (seen_intervals.size() != t.intervals.size()) return "repeated interval";
  if (seen_jobs.size() != t.hops()) return "repeated job";
  for (std::size_t a = 1; a <= t.hops(); ++a) {
    if (t.intervals[a] >= ctx.state.interval_count()) return "interval out of range";
    if (ctx.state.work_of(t.jobs[a], t.intervals[a - 1]) <= 0) return "no work to move";
    if (!window_meets(ctx, t.jobs[a], t.intervals[a])) return "destination outside the job window";
    if (nested_in_left(t, a)) return "right hop inside an earlier left hop";
    if (!memory_allows(ctx, t.jobs[a], t.direction(a))) return "job reverses its direction";
  }
  return std::nullopt;
}

bool endpoint_feasible(const SpeedProfile& profile, const YdsPeeling& peel) {
  for (const auto& ci : peel.intervals) {
    if (ci.density.at > profile.max_speed()) return false;
    if (ci.density.at == profile.max_speed() && ci.density.rate > 0) return false;
  }
  return true;
}

WorkState probe_state(const TransferContext& ctx, const EpsilonTransfer& t, const Perturbation& dw,
                      const std::vector<YdsPeeling>& peels) {
  Rational bound = 1;
  for (std::size_t a = 1; a <= t.hops(); ++a) bound = std::min(bound, ctx.state.work_of(t.jobs[a], t.intervals[a - 1]));
  for (const auto& p : peels)
    if (p.stable_until) bound = std::min(bound, *p.stable_until);
  return advanced(ctx.state, dw, Rational(bound / 1024));
}

struct Evaluation {
  std::optional<std::string> problem;
  bool active = false;
};

Evaluation evaluate(const TransferContext& ctx, const EpsilonTransfer& t, bool want_activity) {
  Evaluation ev;
  if ((ev.problem = structural_problem(ctx, t))) return ev;
  const auto dw = t.perturbation();
  std::vector<YdsPeeling> peels;
  for (auto l : t.intervals) peels.push_back(interval_peel(ctx.instance, ctx.state, l, dw));
  for (std::size_t a = 1; a + 1 < t.intervals.size(); ++a)
    if (!all_rates_zero(peels[a])) return {"speeds change in an intermediate interval", false};
  if (!endpoint_feasible(ctx.instance.profile, peels.front()) || !endpoint_feasible(ctx.instance.profile, peels.back()))
    return {"speed exceeds the top speed", false};
  const auto probe = probe_state(ctx, t, dw, peels);
  const auto schedule = realize(ctx.instance, probe);
  const auto structure = probe.structure();
  if (auto v = weak_edf_check(schedule, ctx.instance, structure))
    return {"weak EDF broken", false};
  if (want_activity) {
    ev.active = !levels_admissible(ctx.instance, ctx.state, t.intervals, peels) &&
                !check_slr(schedule, ctx.instance, structure, ctx.state.levels, ctx.mode);
  }
  return ev;
}

void search(const TransferContext& ctx, EpsilonTransfer& cur, std::vector<EpsilonTransfer>& out) {
  const auto ev = evaluate(ctx, cur, true);
  if (!ev.problem) {
    out.push_back(cur);
    out.back().active = ev.active;
  }
  const std::size_t last = cur.intervals.back();
  const std::size_t a = cur.intervals.size();
  for (const auto& job : ctx.instance.jobs) {
    if (std::find(cur.jobs.begin() + 1, cur.jobs.end(), job.id) != cur.jobs.end()) continue;
    if (ctx.state.work_of(job.id, last) <= 0) continue;
    // The current last interval becomes intermediate: its speeds must stay put.
    Perturbation local{{{cur.jobs.back(), last}, Rational(1)}, {{job.id, last}, Rational(-1)}};
    if (!all_rates_zero(interval_peel(ctx.instance, ctx.state, last, local))) continue;
    for (std::size_t l = 0; l < ctx.state.interval_count(); ++l) {
      if (std::find(cur.intervals.begin(), cur.intervals.end(), l) != cur.intervals.end()) continue;
      if (!window_meets(ctx, job.id, l)) continue;
      cur.intervals.push_back(l);
      cur.jobs.push_back(job.id);
      if (!nested_in_left(cur, a) && memory_allows(ctx, job.id, cur.direction(a))) search(ctx, cur, out);
      cur.intervals.pop_back();
      cur.jobs.pop_back();
    }
  }
}

std::vector<EpsilonTransfer> best_per_destination(const TransferContext& ctx, std::size_t source,
                                                  std::size_t* fallbacks) {
  std::map<std::size_t, EpsilonTransfer> best;
  for (auto& t : all_transfers(ctx, source)) {
    auto it = best.find(t.destination());
    if (it == best.end()) {
      best.emplace(t.destination(), std::move(t));
      continue;
    }
    if (t.active != it->second.active) {
      if (t.active) it->second = std::move(t);
      continue;
    }
    const auto cmp = compare_priority(ctx.instance, t, it->second);
    if (cmp.basis == PriorityBasis::Fallback && fallbacks) ++*fallbacks;
    if (cmp.first_higher) it->second = std::move(t);
  }
  std::vector<EpsilonTransfer> out;
  for (auto& [dst, t] : best) out.push_back(std::move(t));
  return out;
}

}  // namespace

std::optional<std::string> transfer_problem(const TransferContext& ctx, const EpsilonTransfer& t) {
  return evaluate(ctx, t, false).problem;
}

bool is_active(const TransferContext& ctx, const EpsilonTransfer& t) {
  const auto ev = evaluate(ctx, t, true);
  return !ev.problem && ev.active;
}

std::vector<EpsilonTransfer> all_transfers(const TransferContext& ctx, std::size_t source) {
  std::vector<EpsilonTransfer> out;
  for (const auto& job : ctx.instance.jobs) {
    if (ctx.state.work_of(job.id, source) <= 0) continue;
    for (std::size_t l = 0; l < ctx.state.interval_count(); ++l) {
      if (l == source || !window_meets(ctx, job.id, l)) continue;
      EpsilonTransfer cur{{source, l}, {job.id, job.id}, false};
      if (!memory_allows(ctx, job.id, cur.direction(1))) continue;
      search(ctx, cur, out);
    }
  }
  return out;
}

std::vector<EpsilonTransfer> enumerate_transfers(const TransferContext& ctx, std::size_t source) {
  return best_per_destination(ctx, source, nullptr);
}

PriorityResult compare_priority(const Instance& instance, const EpsilonTransfer& t1, const EpsilonTransfer& t2) {
  if (t1.source() != t2.source() || t1.destination() != t2.destination())
    throw TransferError(TransferError::Kind::IncomparableInputs, "transfers have different endpoints");
  if (t1 == t2) throw TransferError(TransferError::Kind::IncomparableInputs, "transfers are identical");

  const std::size_t common = std::min(t1.intervals.size(), t2.intervals.size());
  std::optional<std::size_t> a1;
  for (std::size_t a = 0; a < common; ++a)
    if (t1.intervals[a] != t2.intervals[a]) {
      a1 = a;
      break;
    }
  if (a1) {
    const auto a = *a1;
    auto clause1 = [&](const EpsilonTransfer& x, const EpsilonTransfer& y) {
      return y.intervals[a] < x.intervals[a - 1] && x.intervals[a - 1] < x.intervals[a];
    };
    auto clause2 = [&](const EpsilonTransfer& x, const EpsilonTransfer& y) {
      return x.intervals[a] < y.intervals[a] &&
             (y.intervals[a] < x.intervals[a - 1] || x.intervals[a - 1] < x.intervals[a]);
    };
    if (clause1(t1, t2)) return {true, PriorityBasis::Clause1};
    if (clause1(t2, t1)) return {false, PriorityBasis::Clause1};
    if (clause2(t1, t2)) return {true, PriorityBasis::Clause2};
    if (clause2(t2, t1)) return {false, PriorityBasis::Clause2};
  } else if (t1.intervals == t2.intervals) {
    for (std::size_t a = 0; a < t1.jobs.size(); ++a) {
      if (t1.jobs[a] == t2.jobs[a]) continue;
      const auto d1 = instance.jobs[instance.index_of(t1.jobs[a])].deadline;
      const auto d2 = instance.jobs[instance.index_of(t2.jobs[a])].deadline;
      if (d1 != d2) return {d1 < d2, PriorityBasis::Clause3};
      break;
    }
  }
  if (t1.hops() != t2.hops()) return {t1.hops() < t2.hops(), PriorityBasis::Fallback};
  if (t1.intervals != t2.intervals) return {t1.intervals < t2.intervals, PriorityBasis::Fallback};
  return {t1.jobs < t2.jobs, PriorityBasis::Fallback};
}

DistributionGraph build_graph(const TransferContext& ctx) {
  DistributionGraph graph;
  graph.vertices = ctx.state.interval_count();
  for (std::size_t src = 0; src < graph.vertices; ++src) {
    for (auto& t : best_per_destination(ctx, src, &graph.fallback_comparisons)) {
      const std::pair key{t.source(), t.destination()};
      (t.active ? graph.edges : graph.inactive).emplace(key, std::move(t));
    }
  }
  return graph;
}

PathTree path_finding(const DistributionGraph& graph) {
  PathTree tree;
  if (graph.vertices == 0) return tree;
  tree.root = graph.vertices - 1;
  tree.reached.insert(tree.root);
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    auto better = [](std::pair<std::size_t, std::size_t> e, std::pair<std::size_t, std::size_t> f) {
      const bool er = e.first < e.second, fr = f.first < f.second;
      if (er != fr) return er;
      const auto le = er ? e.second - e.first : e.first - e.second;
      const auto lf = fr ? f.second - f.first : f.first - f.second;
      if (le != lf) return er ? le < lf : le > lf;
      return e.first > f.first;
    };
    for (const auto& [key, t] : graph.edges) {
      if (tree.reached.count(key.first) || !tree.reached.count(key.second)) continue;
      if (!pick || better(key, *pick)) pick = key;
    }
    if (!pick) break;
    tree.edges.push_back(*pick);
    tree.reached.insert(pick->first);
  }
  return tree;
}

bool edges_cross(std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b) {
  auto lo1 = std::min(a.first, a.second), hi1 = std::max(a.first, a.second);
  auto lo2 = std::min(b.first, b.second), hi2 = std::max(b.first, b.second);
  return (lo1 < lo2 && lo2 < hi1 && hi1 < hi2) || (lo2 < lo1 && lo1 < hi2 && hi2 < hi1);
}

}  // namespace minrate
