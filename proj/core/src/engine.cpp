#include "minrate/engine.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <sstream>

namespace minrate {

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::DepletionAppearance: return "depletion-appearance";
    case EventKind::EdgeInactive: return "edge-inactive";
    case EventKind::EdgeRemoval: return "edge-removal";
    case EventKind::CriticalMergeCandidate: return "critical-merge";
    case EventKind::MemoryReset: return "memory-reset";
    case EventKind::DepletionRemoval: return "depletion-removal";
    case EventKind::LevelRepair: return "level-repair";
    case EventKind::Optimal: return "optimal";
  }
  return "?";
}

namespace {

Rational interval_length(const Instance& instance, const WorkState& state, std::size_t l) {
  return interval_end(instance, state, l) - state.structure().lower(l);
}

Rational energy_rate(const Instance& instance, const WorkState& state, std::size_t l, const Perturbation& dw) {
  return interval_energy(instance, interval_peel(instance, state, l, dw)).rate;
}

std::set<std::size_t> touched_intervals(const Perturbation& dw) {
  std::set<std::size_t> out;
  for (const auto& [key, r] : dw) out.insert(key.second);
  return out;
}

}  // namespace

RateAssignment calculate_rates(const TransferContext& ctx, const DistributionGraph& graph, const PathTree& tree) {
  RateAssignment out;
  const auto& instance = ctx.instance;
  const auto& state = ctx.state;
  std::map<std::size_t, std::vector<std::size_t>> children;
  for (const auto& [u, v] : tree.edges) children[v].push_back(u);

  for (auto it = tree.edges.rbegin(); it != tree.edges.rend(); ++it) {
    const auto& transfer = graph.edges.at(*it);
    const std::size_t u = it->first;
    Rational need = interval_length(instance, state, u);
    for (auto c : children[u]) {
      const auto& inbound = graph.edges.at({c, u});
      need += out.flow.at(c) * energy_rate(instance, state, u, inbound.perturbation());
    }
    const Rational shed = -energy_rate(instance, state, u, transfer.perturbation());
    if (shed <= 0)
      throw EngineError(EngineError::Kind::SingularSystem,
                        "interval " + std::to_string(u + 1) + " cannot shed energy along " + transfer.describe());
    out.flow[u] = need / shed;
  }
  for (const auto& [u, v] : tree.edges) {
    for (const auto& [key, r] : graph.edges.at({u, v}).perturbation()) out.work_rates[key] += out.flow.at(u) * r;
  }
  std::erase_if(out.work_rates, [](const auto& kv) { return kv.second == 0; });
  for (auto l : touched_intervals(out.work_rates)) {
    const auto peel = interval_peel(instance, state, l, out.work_rates);
    for (const auto& ci : peel.intervals)
      for (int j : ci.jobs)
        if (ci.density.rate != 0) out.speed_rates[{j, l}] = ci.density.rate;
    out.energy_rates[l] = interval_energy(instance, peel).rate;
  }
  return out;
}

std::optional<std::string> rates_problem(const Instance& instance, const WorkState& state, const RateAssignment& rates) {
  for (std::size_t l = 0; l + 1 < state.interval_count(); ++l) {
    auto it = rates.energy_rates.find(l);
    const Rational e = it == rates.energy_rates.end() ? Rational(0) : it->second;
    if (e != -interval_length(instance, state, l))
      return "interval " + std::to_string(l + 1) + " energy rate " + to_string(e) + " does not match its length";
  }
  return std::nullopt;
}

namespace {

struct Candidate {
  Event event;
  int rank;
  Rational position;
};

bool earlier(const Candidate& a, const Candidate& b) {
  if (a.event.theta != b.event.theta) return a.event.theta < b.event.theta;
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.position < b.position;
}

}  // namespace

Event next_event(const Instance& instance, const WorkState& state, const RateAssignment& rates) {
  const auto structure = state.structure();
  std::vector<YdsPeeling> peels;
  for (std::size_t l = 0; l < state.interval_count(); ++l)
    peels.push_back(interval_peel(instance, state, l, rates.work_rates));

  std::optional<Candidate> best;
  auto offer = [&](Candidate c) {
    if (!best || earlier(c, *best)) best = std::move(c);
  };

  for (const auto& [t, used] : cumulative_use(instance, state, peels)) {
    if (t == 0 || std::binary_search(state.points.begin(), state.points.end(), t)) continue;
    const Rational e0 = state.rate * t - used.at;
    const Rational slope = -t - used.rate;
    if (slope >= 0) continue;
    Event ev{EventKind::DepletionAppearance, e0 / -slope, t, std::nullopt, "E(" + to_string(t) + ") reaches 0"};
    offer({ev, 0, t});
  }

  const auto& profile = instance.profile;
  for (std::size_t l = 0; l < peels.size(); ++l) {
    for (const auto& ci : peels[l].intervals) {
      const auto& g = ci.density;
      if (g.rate == 0) continue;
      std::optional<Rational> target;
      for (std::size_t i = 0; i <= profile.size(); ++i) {
        const Rational s = profile.speed(i);
        if (g.rate > 0 && s > g.at) {
          target = s;
          break;
        }
        if (g.rate < 0 && s < g.at) target = s;
      }
      if (!target) continue;
      Event ev{EventKind::EdgeInactive, (*target - g.at) / g.rate, std::nullopt, JobInterval{ci.jobs.front(), l},
               "speed reaches " + to_string(*target) + " in interval " + std::to_string(l + 1)};
      offer({ev, 1, ci.pieces.front().first});
    }
  }

  for (const auto& [key, r] : rates.work_rates) {
    if (r >= 0) continue;
    Event ev{EventKind::EdgeRemoval, state.work_of(key.first, key.second) / -r, std::nullopt, key,
             "job " + std::to_string(key.first) + " leaves interval " + std::to_string(key.second + 1)};
    offer({ev, 2, structure.lower(key.second)});
  }

  for (std::size_t l = 0; l < peels.size(); ++l) {
    if (!peels[l].stable_until) continue;
    Event ev{EventKind::CriticalMergeCandidate, *peels[l].stable_until, std::nullopt, std::nullopt,
             "critical intervals change in interval " + std::to_string(l + 1)};
    offer({ev, 3, structure.lower(l)});
  }

  if (!best) throw EngineError(EngineError::Kind::Unbounded, "no event bounds the motion");
  return best->event;
}

WorkState apply_event(const Instance& instance, const WorkState& state, const RateAssignment& rates,
                      const Event& event) {
  WorkState next = advanced(state, rates.work_rates, event.theta);
  if (event.kind != EventKind::DepletionAppearance) return next;

  const Rational t = *event.time;
  const auto old = next.structure();
  const std::size_t l = old.interval_of(t);
  const auto schedule = realize(instance, next);
  next.points.insert(std::upper_bound(next.points.begin(), next.points.end(), t), t);
  const auto split = next.structure();
  next.work = interval_work(schedule, instance.profile, split);
  std::erase_if(next.work, [](const auto& kv) { return kv.second == 0; });

  SpeedLevelTable levels;
  for (const auto& [key, level] : state.levels.entries()) {
    const auto [job, m] = key;
    if (m < l) {
      levels.set(job, m, level);
    } else if (m > l) {
      levels.set(job, m + 1, level);
    } else {
      const auto& j = instance.jobs[instance.index_of(job)];
      for (auto half : {l, l + 1})
        if (split.meets(half, j.release, j.deadline)) levels.set(job, half, level);
    }
  }
  next.levels = std::move(levels);
  return next;
}

std::optional<WorkState> remove_depletion_point(const Instance& instance, const WorkState& state, std::size_t index,
                                                SlrMode mode) {
  WorkState next = state;
  next.points.erase(next.points.begin() + static_cast<std::ptrdiff_t>(index));
  auto shift = [&](std::size_t m) { return m > index ? m - 1 : m; };
  next.work.clear();
  for (const auto& [key, w] : state.work) next.work[{key.first, shift(key.second)}] += w;

  const auto merged = interval_peel(instance, next, index);
  std::map<int, Rational> speed;
  for (const auto& ci : merged.intervals)
    for (int j : ci.jobs) speed[j] = ci.density.at;

  SpeedLevelTable levels;
  std::map<int, std::vector<int>> options;
  for (const auto& [key, level] : state.levels.entries()) {
    if (key.second == index || key.second == index + 1)
      options[key.first].push_back(level);
    else
      levels.set(key.first, shift(key.second), level);
  }
  for (const auto& [job, choices] : options) {
    int level = choices.front();
    if (auto it = speed.find(job); it != speed.end()) {
      const auto ok = admissible_levels(instance.profile, it->second);
      auto pick = std::find_first_of(choices.begin(), choices.end(), ok.begin(), ok.end());
      level = pick != choices.end() ? *pick : ok.front();
    }
    levels.set(job, index, level);
  }
  next.levels = std::move(levels);
  if (!state_problem(instance, next, mode)) return next;

  const auto schedule = realize(instance, next);
  if (auto inferred = infer_speed_levels(schedule, instance, next.structure(), mode)) {
    next.levels = std::move(*inferred);
    if (!state_problem(instance, next, mode)) return next;
  }
  return std::nullopt;
}

std::size_t event_budget(const Instance& instance) {
  std::size_t n = instance.jobs.size();
  std::size_t n6 = n * n * n * n * n * n;
  return 64 * instance.profile.size() * n6 + 64;
}

namespace {

using Memory = std::map<int, Direction>;

struct Plan {
  DistributionGraph graph;
  PathTree tree;
  std::optional<RateAssignment> rates;
  std::optional<Event> event;
};

struct Step {
  Event event;
  WorkState state;
};

struct Node {
  WorkState state;
  Memory memory;
  std::vector<Step> path;
};

class Runner {
 public:
  Runner(const Instance& instance, const EngineOptions& options) : instance_(instance), options_(options) {}

  SolveResult run();

 private:
  Plan make_plan(const WorkState& state, const Memory& memory);
  bool certified_optimal(const WorkState& state) const;
  std::vector<Node> successors(const Node& node, const Plan& plan);
  void add_level_repairs(const Node& node, const Plan& plan, std::vector<Node>& out);
  std::set<int> level_closure(const WorkState& state, std::set<int> group,
                              const std::function<bool(std::size_t)>& inside) const;
  Node repair(const WorkState& state, const Memory& memory, bool& optimal);
  void record(const Event& event, const Rational& before, const WorkState& after, const std::string& extra = {});

  const Instance& instance_;
  const EngineOptions& options_;
  SolveResult result_;
};

Plan Runner::make_plan(const WorkState& state, const Memory& memory) {
  Plan plan;
  const TransferContext ctx{instance_, state, memory, options_.mode};
  plan.graph = build_graph(ctx);
  ++result_.stats.graph_builds;
  result_.stats.fallback_comparisons += plan.graph.fallback_comparisons;
  plan.tree = path_finding(plan.graph);
  if (!plan.tree.spans(plan.graph.vertices)) return plan;
  try {
    auto rates = calculate_rates(ctx, plan.graph, plan.tree);
    if (rates_problem(instance_, state, rates)) return plan;
    plan.event = next_event(instance_, state, rates);
    plan.rates = std::move(rates);
  } catch (const EngineError&) {
    plan.event.reset();
  }
  return plan;
}

bool Runner::certified_optimal(const WorkState& state) const {
  const auto schedule = realize(instance_, state);
  const auto structure = state.structure();
  if (!check_optimality_conditions(schedule, instance_, state.rate, structure, state.levels, options_.mode).empty()) return false;
  try {
    const auto cert = build_dual_certificate(schedule, instance_, state.rate, structure, state.levels);
    return verify_duality(cert, instance_, state.rate).empty();
  } catch (const CertificateError&) {
    return false;
  }
}

// Grows a repair group until shifting it cannot break the SLR by itself: jobs straddling a
// border of U, critical-interval mates, and jobs the pointwise clause ties to a member
// (lowered inside U, raised outside).
std::set<int> Runner::level_closure(const WorkState& state, std::set<int> group,
                                    const std::function<bool(std::size_t)>& inside) const {
  const auto structure = state.structure();
  const auto schedule = realize(instance_, state);
  std::set<int> straddling;
  for (const auto& job : instance_.jobs) {
    bool in = false, out = false;
    for (const auto& [key, level] : state.levels.entries())
      if (key.first == job.id) (inside(key.second) ? in : out) = true;
    if (in && out) straddling.insert(job.id);
  }
  std::vector<std::vector<int>> mates;
  for (std::size_t l = 0; l < state.interval_count(); ++l)
    for (const auto& ci : interval_peel(instance_, state, l).intervals) mates.push_back(ci.jobs);
  auto member = [&](int j) { return group.count(j) > 0; };
  for (bool grew = true; grew;) {
    const auto before = group.size();
    if (std::any_of(straddling.begin(), straddling.end(), member)) group.insert(straddling.begin(), straddling.end());
    for (const auto& ci : mates)
      if (std::any_of(ci.begin(), ci.end(), member)) group.insert(ci.begin(), ci.end());
    for (const auto& seg : schedule.segments) {
      if (!seg.job) continue;
      const std::size_t l = structure.interval_of(seg.start);
      for (const auto& other : instance_.jobs) {
        if (other.release >= seg.end || other.deadline <= seg.start || !state.levels.get(other.id, l)) continue;
        if (inside(l) && member(*seg.job)) group.insert(other.id);
        if (!inside(l) && member(other.id)) group.insert(*seg.job);
      }
    }
    grew = group.size() != before;
  }
  return group;
}

void Runner::add_level_repairs(const Node& node, const Plan& plan, std::vector<Node>& out) {
  const TransferContext ctx{instance_, node.state, node.memory, options_.mode};
  std::vector<EpsilonTransfer> transfers;
  for (std::size_t src = 0; src < node.state.interval_count(); ++src) {
    auto more = all_transfers(ctx, src);
    transfers.insert(transfers.end(), more.begin(), more.end());
  }
  const int k = static_cast<int>(instance_.profile.size());
  std::map<JobInterval, Rational> speeds;
  for (std::size_t l = 0; l < node.state.interval_count(); ++l)
    for (const auto& ci : interval_peel(instance_, node.state, l).intervals)
      for (int j : ci.jobs)
        if (node.state.work_of(j, l) > 0) speeds[{j, l}] = ci.density.at;
  std::set<std::pair<std::size_t, std::size_t>> tried_spans;

  for (std::size_t v = plan.graph.vertices; v-- > 0;) {
    if (plan.tree.reached.count(v)) continue;
    std::set<std::size_t> reach{v};
    std::deque<std::size_t> todo{v};
    while (!todo.empty()) {
      auto x = todo.front();
      todo.pop_front();
      for (const auto& [key, t] : plan.graph.edges)
        if (key.first == x && reach.insert(key.second).second) todo.push_back(key.second);
    }
    const std::size_t lo = *reach.begin(), hi = *reach.rbegin();
    if (!tried_spans.insert({lo, hi}).second) continue;
    auto inside = [&](std::size_t l) { return lo <= l && l <= hi; };

    std::set<int> crossing;
    for (const auto& t : transfers) {
      if (t.active || !inside(t.source()) || inside(t.destination())) continue;
      for (std::size_t a = 1; a <= t.hops(); ++a)
        if (!inside(t.intervals[a])) {
          crossing.insert(t.jobs[a]);
          break;
        }
    }
    std::vector<std::set<int>> groups;
    for (int j : crossing) {
      std::set<int> group{j};
      for (const auto& t : transfers)
        if (std::find(t.jobs.begin(), t.jobs.end(), j) != t.jobs.end()) group.insert(t.jobs.begin(), t.jobs.end());
      groups.push_back(group);
    }
    if (groups.empty()) continue;
    if (groups.size() > 1) {
      std::set<int> all;
      for (const auto& g : groups) all.insert(g.begin(), g.end());
      groups.push_back(all);
    }
    std::set<int> everyone;
    for (const auto& job : instance_.jobs) everyone.insert(job.id);
    groups.push_back(everyone);

    std::vector<std::set<int>> variants;
    auto add_variant = [&](const std::set<int>& g) {
      if (std::find(variants.begin(), variants.end(), g) == variants.end()) variants.push_back(g);
    };
    for (const auto& g : groups) add_variant(g);
    for (const auto& g : groups) add_variant(level_closure(node.state, g, inside));

    // Lowering a job inside U and raising it outside shift its level differences the same
    // way, so the direction may be chosen per job.
    auto shifted = [&](int job, bool lower) {
      std::vector<std::pair<std::size_t, int>> out_levels;
      for (const auto& [key, level] : node.state.levels.entries()) {
        if (key.first != job || inside(key.second) != lower) continue;
        out_levels.emplace_back(key.second, lower ? level - 1 : level + 1);
      }
      return out_levels;
    };
    auto locally_ok = [&](int job, bool lower) {
      for (const auto& [l, level] : shifted(job, lower)) {
        if (level < 0 || level > k) return false;
        auto it = speeds.find({job, l});
        if (it != speeds.end()) {
          const auto adm = admissible_levels(instance_.profile, it->second);
          if (std::find(adm.begin(), adm.end(), level) == adm.end()) return false;
        }
      }
      return true;
    };
    for (const auto& group : variants) {
      for (int policy = 0; policy < 4; ++policy) {
        SpeedLevelTable levels = node.state.levels;
        bool ok = true, changed = false;
        std::set<int> lowered, raised;
        for (int job : group) {
          bool lower = policy == 0 || (policy == 2 && locally_ok(job, true)) || (policy == 3 && !locally_ok(job, false));
          for (const auto& [l, level] : shifted(job, lower)) {
            ok = ok && level >= 0 && level <= k;
            levels.set(job, l, level);
            changed = true;
            (lower ? lowered : raised).insert(job);
          }
        }
        if (!ok || !changed || levels == node.state.levels) continue;
        if (std::any_of(out.begin(), out.end(), [&](const Node& n) {
              return n.state.levels == levels && n.state.points == node.state.points;
            }))
          continue;
        Node child{node.state, {}, node.path};
        child.state.levels = std::move(levels);
        std::ostringstream what;
        auto list = [&](const std::set<int>& jobs) {
          std::string text;
          for (int j : jobs) text += (text.empty() ? "" : ",") + std::to_string(j);
          return "{" + text + "}";
        };
        if (!lowered.empty()) what << "lower " << list(lowered) << " inside";
        if (!lowered.empty() && !raised.empty()) what << ", ";
        if (!raised.empty()) what << "raise " << list(raised) << " outside";
        what << " I" << lo + 1 << "..I" << hi + 1;
        child.path.push_back({Event{EventKind::LevelRepair, 0, std::nullopt, std::nullopt, what.str()}, child.state});
        out.push_back(std::move(child));
      }
    }
  }
}

std::vector<Node> Runner::successors(const Node& node, const Plan& plan) {
  std::vector<Node> out;
  if (plan.event && plan.event->theta == 0) {
    Node child{apply_event(instance_, node.state, *plan.rates, *plan.event), node.memory, node.path};
    if (plan.event->kind == EventKind::EdgeInactive) child.memory.clear();
    child.path.push_back({*plan.event, child.state});
    out.push_back(std::move(child));
  }
  if (!node.memory.empty()) {
    Node child{node.state, {}, node.path};
    child.path.push_back({Event{EventKind::MemoryReset, 0, std::nullopt, std::nullopt, "direction memory cleared"},
                          child.state});
    out.push_back(std::move(child));
  }

  auto removal = [&](std::size_t index) {
    if (auto next = remove_depletion_point(instance_, node.state, index, options_.mode)) {
      Node child{std::move(*next), {}, node.path};
      child.path.push_back({Event{EventKind::DepletionRemoval, 0, node.state.points[index], std::nullopt,
                                  "unlabel " + to_string(node.state.points[index])},
                            child.state});
      out.push_back(std::move(child));
    }
  };
  std::set<std::size_t> targeted;
  for (std::size_t v = 0; v < plan.graph.vertices; ++v) {
    if (plan.tree.reached.count(v)) continue;
    bool exits = false;
    for (const auto* edges : {&plan.graph.edges, &plan.graph.inactive})
      for (const auto& [key, t] : *edges) exits = exits || key.first == v;
    if (exits) continue;
    if (v >= 1) targeted.insert(v - 1);
    if (v < node.state.points.size()) targeted.insert(v);
  }
  for (auto index : targeted) removal(index);

  add_level_repairs(node, plan, out);

  for (std::size_t index = 0; index < node.state.points.size(); ++index)
    if (!targeted.count(index)) removal(index);

  std::vector<Node> valid;
  for (auto& child : out) {
    const bool same_state = child.state == node.state;
    if (same_state || !state_problem(instance_, child.state, options_.mode)) valid.push_back(std::move(child));
  }
  return valid;
}

Node Runner::repair(const WorkState& state, const Memory& memory, bool& optimal) {
  std::deque<Node> queue{Node{state, memory, {}}};
  std::set<std::pair<WorkState, Memory>> seen{{state, memory}};
  std::size_t expanded = 0;
  while (!queue.empty() && expanded < options_.repair_node_limit) {
    Node node = std::move(queue.front());
    queue.pop_front();
    ++expanded;
    if (certified_optimal(node.state)) {
      optimal = true;
      return node;
    }
    const Plan plan = make_plan(node.state, node.memory);
    if (plan.event && plan.event->theta > 0 && !node.path.empty()) {
      optimal = false;
      return node;
    }
    for (auto& child : successors(node, plan)) {
      if (seen.insert({child.state, child.memory}).second) queue.push_back(std::move(child));
    }
  }
  throw EngineError(EngineError::Kind::Stalled, "no structural repair restores progress at R = " + to_string(state.rate));
}

void Runner::record(const Event& event, const Rational& before, const WorkState& after, const std::string& extra) {
  auto& stats = result_.stats;
  ++stats.events;
  if (event.theta == 0) ++stats.zero_length_events;
  if (event.kind == EventKind::LevelRepair) ++stats.level_repairs;
  if (event.kind == EventKind::DepletionRemoval) ++stats.depletion_removals;
  const std::size_t budget = options_.budget.value_or(event_budget(instance_));
  if (stats.events > budget)
    throw EngineError(EngineError::Kind::EventBudgetExceeded, "more than " + std::to_string(budget) + " events");

  std::ostringstream line;
  line << "step " << stats.events << " " << to_string(event.kind) << " theta=" << to_string(event.theta) << " R "
       << to_string(before) << " -> " << to_string(after.rate) << " | " << event.detail;
  if (!extra.empty()) line << " | " << extra;
  result_.trace.push_back(line.str());
  if (options_.trace) *options_.trace << line.str() << '\n';
  if (options_.observer) {
    options_.observer(StepSnapshot{stats.events, event, before, after.rate, realize(instance_, after),
                                   after.structure(), after.levels});
  }
}

SolveResult Runner::run() {
  if (instance_.jobs.empty()) {
    result_.schedule = Schedule{};
    return result_;
  }
  WorkState state = initial_state(instance_);
  Memory memory;
  {
    std::ostringstream line;
    line << "init R=" << to_string(state.rate) << " points={";
    for (std::size_t i = 0; i < state.points.size(); ++i) line << (i ? "," : "") << to_string(state.points[i]);
    line << "}";
    result_.trace.push_back(line.str());
    if (options_.trace) *options_.trace << line.str() << '\n';
  }

  for (;;) {
    const Plan plan = make_plan(state, memory);
    if (plan.event && plan.event->theta > 0) {
      WorkState next = apply_event(instance_, state, *plan.rates, *plan.event);
      std::string tree;
      for (const auto& edge : plan.tree.edges) {
        const auto& t = plan.graph.edges.at(edge);
        for (std::size_t a = 1; a <= t.hops(); ++a) memory[t.jobs[a]] = t.direction(a);
        tree += (tree.empty() ? "" : "; ") + t.describe();
      }
      if (plan.event->kind == EventKind::EdgeInactive) memory.clear();
      if (auto problem = state_problem(instance_, next, options_.mode))
        throw EngineError(EngineError::Kind::InvariantBroken, "after " + to_string(plan.event->kind) + ": " + *problem);
      record(*plan.event, state.rate, next, tree);
      state = std::move(next);
      continue;
    }
    ++result_.stats.cuts;
    bool optimal = false;
    Node found = repair(state, memory, optimal);
    Rational before = state.rate;
    for (const auto& step : found.path) {
      record(step.event, before, step.state);
      before = step.state.rate;
    }
    state = std::move(found.state);
    memory = std::move(found.memory);
    if (optimal) break;
  }

  result_.rate = state.rate;
  result_.schedule = realize(instance_, state);
  result_.structure = state.structure();
  result_.levels = state.levels;
  result_.certificate =
      build_dual_certificate(result_.schedule, instance_, state.rate, result_.structure, state.levels);
  return result_;
}

}  // namespace

SolveResult solve(const Instance& instance, const EngineOptions& options) {
  const auto violations = validate(instance);
  if (!violations.empty()) {
    const auto kind = violations.front().what == "slopes not well-separated" ? InstanceError::Kind::NotWellSeparated
                                                                                 : InstanceError::Kind::Invalid;
    throw InstanceError(kind, violations.front().what);
  }
  Runner runner(instance, options);
  return runner.run();
}

}  // namespace minrate
