#include "minrate/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace minrate {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t columns)
      : cells_(rows + 1, std::vector<Rational>(columns + 1)), basis_(rows, npos), columns_(columns) {}

  Rational& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  Rational& rhs(std::size_t r) { return cells_[r][columns_]; }
  Rational& cost(std::size_t c) { return cells_.back()[c]; }
  Rational& objective() { return cells_.back()[columns_]; }
  std::size_t rows() const { return basis_.size(); }
  std::size_t columns() const { return columns_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = cells_[r][c];
    auto& row = cells_[r];
    for (auto& v : row)
      if (sgn(v) != 0) v /= p;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i == r) continue;
      const Rational f = cells_[i][c];
      if (sgn(f) == 0) continue;
      auto& target = cells_[i];
      for (std::size_t k = 0; k <= columns_; ++k)
        if (sgn(row[k]) != 0) target[k] -= f * row[k];
    }
    basis_[r] = c;
  }

  /// Minimizes with Bland's rule over allowed entering columns. Returns false if unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    while (true) {
      std::size_t enter = npos;
      for (std::size_t c = 0; c < columns_; ++c) {
        if (allowed[c] && sgn(cells_.back()[c]) < 0) {
          enter = c;
          break;
        }
      }
      if (enter == npos) return true;
      std::size_t leave = npos;
      Rational best;
      for (std::size_t r = 0; r < rows(); ++r) {
        if (sgn(cells_[r][enter]) <= 0) continue;
        Rational ratio = cells_[r][columns_] / cells_[r][enter];
        if (leave == npos || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == npos) return false;
      pivot(leave, enter);
    }
  }

  /// Rewrites the objective row for costs c (objective value stored negated).
  void load_costs(const std::vector<Rational>& c) {
    auto& obj = cells_.back();
    for (std::size_t k = 0; k <= columns_; ++k) obj[k] = k < c.size() ? c[k] : Rational(0);
    for (std::size_t r = 0; r < rows(); ++r) {
      const Rational f = obj[basis_[r]];
      if (sgn(f) == 0) continue;
      for (std::size_t k = 0; k <= columns_; ++k)
        if (sgn(cells_[r][k]) != 0) obj[k] -= f * cells_[r][k];
    }
  }

  void drop_row(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<std::vector<Rational>> cells_;
  std::vector<std::size_t> basis_;
  std::size_t columns_;
};

bool divides(const Rational& h, const Rational& t) {
  const Rational q = t / h;
  return q.get_den() == 1;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.variables;
  // Column layout: originals, one slack/surplus per inequality row, one artificial per
  // row that lacks a natural basic column.
  std::vector<std::size_t> slack(m, npos);
  std::vector<std::size_t> artificial(m, npos);
  std::vector<int> flip(m, 1);
  std::vector<LinearProgram::Sense> effective(m);
  std::size_t next = n;
  for (std::size_t r = 0; r < m; ++r) {
    auto& sense = effective[r];
    sense = lp.rows[r].sense;
    if (lp.rows[r].rhs < 0) {
      flip[r] = -1;
      if (sense == LinearProgram::Sense::Le)
        sense = LinearProgram::Sense::Ge;
      else if (sense == LinearProgram::Sense::Ge)
        sense = LinearProgram::Sense::Le;
    }
    if (sense != LinearProgram::Sense::Eq) slack[r] = next++;
    if (sense != LinearProgram::Sense::Le) artificial[r] = npos - 1;
  }
  const std::size_t first_artificial = next;
  for (std::size_t r = 0; r < m; ++r)
    if (artificial[r] != npos) artificial[r] = next++;
  const std::size_t total = next;

  Tableau t(m, total);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    for (const auto& [c, v] : row.coefficients) t.at(r, c) += flip[r] * v;
    t.rhs(r) = flip[r] * row.rhs;
    if (slack[r] != npos) t.at(r, slack[r]) = effective[r] == LinearProgram::Sense::Le ? 1 : -1;
    if (artificial[r] != npos) {
      t.at(r, artificial[r]) = 1;
      t.basis()[r] = artificial[r];
    } else {
      t.basis()[r] = slack[r];
    }
  }

  std::vector<bool> allowed(total, true);
  if (first_artificial < total) {
    std::vector<Rational> phase1(total);
    for (std::size_t c = first_artificial; c < total; ++c) phase1[c] = 1;
    t.load_costs(phase1);
    t.optimize(allowed);
    if (sgn(t.objective()) != 0) throw OracleError(OracleError::Kind::Infeasible, "linear program is infeasible");
    for (std::size_t r = 0; r < t.rows();) {
      if (t.basis()[r] < first_artificial) {
        ++r;
        continue;
      }
      std::size_t c = 0;
      while (c < first_artificial && sgn(t.at(r, c)) == 0) ++c;
      if (c < first_artificial) {
        t.pivot(r, c);
        ++r;
      } else {
        t.drop_row(r);
      }
    }
    for (std::size_t c = first_artificial; c < total; ++c) allowed[c] = false;
  }

  std::vector<Rational> costs(total);
  for (std::size_t c = 0; c < n && c < lp.cost.size(); ++c) costs[c] = lp.cost[c];
  t.load_costs(costs);
  if (!t.optimize(allowed)) throw OracleError(OracleError::Kind::Unbounded, "linear program is unbounded");

  LpResult out;
  out.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (t.basis()[r] < n) out.x[t.basis()[r]] = t.rhs(r);
  for (std::size_t c = 0; c < n; ++c) out.objective += costs[c] * out.x[c];
  return out;
}

SlotLP discretize(const Instance& instance, const Rational& h) {
  if (h <= 0) throw OracleError(OracleError::Kind::IncompatibleSlot, "slot length must be positive");
  for (const auto& job : instance.jobs) {
    if (!divides(h, job.release) || !divides(h, job.deadline))
      throw OracleError(OracleError::Kind::IncompatibleSlot,
                        "slot " + to_string(h) + " does not divide the window of job " + std::to_string(job.id));
  }
  SlotLP lp;
  lp.slot_length = h;
  const Rational slots = instance.horizon() / h;
  lp.slot_count = slots.get_num().get_ui();
  const std::size_t k = instance.profile.size();
  auto& program = lp.program;

  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    const auto& job = instance.jobs[j];
    for (std::size_t i = 1; i <= k; ++i) {
      for (std::size_t t = 0; t < lp.slot_count; ++t) {
        const Rational start = h * static_cast<unsigned long>(t);
        const bool inside = job.release <= start && start < job.deadline;
        lp.x.push_back({j, i, t, inside});
        lp.column_of_x.push_back(inside ? program.variables++ : npos);
      }
    }
  }
  lp.rate_column = program.variables++;
  program.cost.assign(program.variables, Rational(0));
  program.cost[lp.rate_column] = 1;

  const auto& profile = instance.profile;
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    LinearProgram::Row row;
    row.sense = LinearProgram::Sense::Ge;
    row.rhs = instance.jobs[j].work / h;
    for (std::size_t v = 0; v < lp.x.size(); ++v)
      if (lp.x[v].job == j && lp.x[v].in_window) row.coefficients.emplace_back(lp.column_of_x[v], profile.speed(lp.x[v].speed));
    program.rows.push_back(std::move(row));
  }
  for (std::size_t t = 1; t <= lp.slot_count; ++t) {
    LinearProgram::Row row;
    row.sense = LinearProgram::Sense::Le;
    for (std::size_t v = 0; v < lp.x.size(); ++v)
      if (lp.x[v].in_window && lp.x[v].slot < t)
        row.coefficients.emplace_back(lp.column_of_x[v], profile.power(lp.x[v].speed));
    row.coefficients.emplace_back(lp.rate_column, Rational(-static_cast<long>(t)));
    program.rows.push_back(std::move(row));
  }
  for (std::size_t t = 0; t < lp.slot_count; ++t) {
    LinearProgram::Row row;
    row.sense = LinearProgram::Sense::Le;
    row.rhs = 1;
    for (std::size_t v = 0; v < lp.x.size(); ++v)
      if (lp.x[v].in_window && lp.x[v].slot == t) row.coefficients.emplace_back(lp.column_of_x[v], Rational(1));
    if (!row.coefficients.empty()) program.rows.push_back(std::move(row));
  }
  return lp;
}

SlotSolution lp_min_rate(const SlotLP& lp) {
  SlotSolution out;
  out.x.assign(lp.x.size(), Rational(0));
  const auto result = solve_lp(lp.program);
  out.rate = result.x[lp.rate_column];
  for (std::size_t v = 0; v < lp.x.size(); ++v)
    if (lp.column_of_x[v] != npos) out.x[v] = result.x[lp.column_of_x[v]];
  return out;
}

Schedule slot_schedule(const Instance& instance, const SlotLP& lp, const SlotSolution& solution) {
  Schedule out;
  const Rational& h = lp.slot_length;
  for (std::size_t t = 0; t < lp.slot_count; ++t) {
    std::vector<std::size_t> used;
    Rational busy = 0;
    for (std::size_t v = 0; v < lp.x.size(); ++v) {
      if (lp.x[v].slot == t && sgn(solution.x[v]) > 0) {
        used.push_back(v);
        busy += solution.x[v];
      }
    }
    std::sort(used.begin(), used.end(), [&](std::size_t a, std::size_t b) {
      if (lp.x[a].speed != lp.x[b].speed) return lp.x[a].speed < lp.x[b].speed;
      return lp.x[a].job < lp.x[b].job;
    });
    Rational at = h * static_cast<unsigned long>(t);
    const Rational idle = (1 - busy) * h;
    if (idle > 0) {
      out.segments.push_back({at, Rational(at + idle), std::nullopt, 0});
      at += idle;
    }
    for (std::size_t v : used) {
      const Rational len = solution.x[v] * h;
      out.segments.push_back({at, Rational(at + len), instance.jobs[lp.x[v].job].id, lp.x[v].speed});
      at += len;
    }
  }
  std::vector<Segment> merged;
  for (auto& seg : out.segments) {
    if (!merged.empty() && merged.back().job == seg.job && merged.back().speed_index == seg.speed_index &&
        merged.back().end == seg.start)
      merged.back().end = seg.end;
    else
      merged.push_back(std::move(seg));
  }
  out.segments = std::move(merged);
  return out;
}

RefineResult refine_until_stable(const Instance& instance, const Rational& h0, int budget) {
  RefineResult out;
  if (instance.jobs.empty()) {
    out.slot_length = h0;
    return out;
  }
  Rational h = h0;
  int halvings = 0;
  auto compatible = [&](const Rational& len) {
    return std::all_of(instance.jobs.begin(), instance.jobs.end(),
                       [&](const Job& j) { return divides(len, j.release) && divides(len, j.deadline); });
  };
  while (!compatible(h)) {
    if (++halvings > budget)
      throw OracleError(OracleError::Kind::IncompatibleSlot, "no compatible slot within the refinement budget");
    h /= 2;
  }
  Rational prev = lp_min_rate(discretize(instance, h)).rate;
  out.history.emplace_back(h, prev);
  while (true) {
    if (++halvings > budget)
      throw OracleError(OracleError::Kind::RefinementBudget,
                        "optima still moving after " + std::to_string(budget) + " halvings: last " +
                            to_string(out.history[out.history.size() - 2].second) + " and " + to_string(prev));
    h /= 2;
    const Rational next = lp_min_rate(discretize(instance, h)).rate;
    out.history.emplace_back(h, next);
    if (next == prev) break;
    prev = next;
  }
  out.rate = prev;
  out.slot_length = h;
  return out;
}

namespace {

struct SlotOption {
  std::size_t job;  // npos for idle
  std::size_t speed;
};

std::vector<std::vector<SlotOption>> slot_options(const Instance& instance, const Rational& h, std::size_t& slots) {
  if (instance.jobs.size() > 2) throw OracleError(OracleError::Kind::TooLarge, "exhaustive search takes at most two jobs");
  for (const auto& job : instance.jobs)
    if (!divides(h, job.release) || !divides(h, job.deadline))
      throw OracleError(OracleError::Kind::IncompatibleSlot, "slot does not divide job windows");
  slots = Rational(instance.horizon() / h).get_num().get_ui();
  std::vector<std::vector<SlotOption>> out(slots);
  for (std::size_t t = 0; t < slots; ++t) {
    out[t].push_back({npos, 0});
    const Rational start = h * static_cast<unsigned long>(t);
    for (std::size_t j = 0; j < instance.jobs.size(); ++j)
      if (instance.jobs[j].release <= start && start < instance.jobs[j].deadline)
        for (std::size_t i = 1; i <= instance.profile.size(); ++i) out[t].push_back({j, i});
  }
  return out;
}

using WorkState = std::vector<Rational>;

WorkState advance(const Instance& instance, const WorkState& done, const SlotOption& opt, const Rational& h) {
  WorkState next = done;
  if (opt.job != npos)
    next[opt.job] = std::min(instance.jobs[opt.job].work, Rational(next[opt.job] + instance.profile.speed(opt.speed) * h));
  return next;
}

bool complete(const Instance& instance, const WorkState& done) {
  for (std::size_t j = 0; j < done.size(); ++j)
    if (done[j] < instance.jobs[j].work) return false;
  return true;
}

}  // namespace

std::optional<Rational> brute_force_slot_rate(const Instance& instance, const Rational& h) {
  if (instance.jobs.empty()) return Rational(0);
  std::size_t slots = 0;
  const auto options = slot_options(instance, h, slots);
  // Pareto frontier of (energy used, worst ratio so far) per work state.
  std::map<WorkState, std::vector<std::pair<Rational, Rational>>> frontier;
  frontier[WorkState(instance.jobs.size())] = {{0, 0}};
  for (std::size_t t = 0; t < slots; ++t) {
    const Rational end = h * static_cast<unsigned long>(t + 1);
    std::map<WorkState, std::vector<std::pair<Rational, Rational>>> next;
    for (const auto& [done, points] : frontier) {
      for (const auto& opt : options[t]) {
        const auto state = advance(instance, done, opt, h);
        auto& bucket = next[state];
        for (const auto& [energy, ratio] : points) {
          const Rational e = energy + instance.profile.power(opt.speed) * h;
          const Rational r = std::max(ratio, Rational(e / end));
          bool dominated = false;
          for (const auto& [e2, r2] : bucket)
            if (e2 <= e && r2 <= r) dominated = true;
          if (dominated) continue;
          std::erase_if(bucket, [&](const auto& p) { return e <= p.first && r <= p.second; });
          bucket.emplace_back(e, r);
        }
      }
    }
    frontier = std::move(next);
  }
  std::optional<Rational> best;
  for (const auto& [done, points] : frontier) {
    if (!complete(instance, done)) continue;
    for (const auto& p : points)
      if (!best || p.second < *best) best = p.second;
  }
  return best;
}

std::optional<Rational> brute_force_slot_energy(const Instance& instance, const Rational& h) {
  if (instance.jobs.empty()) return Rational(0);
  std::size_t slots = 0;
  const auto options = slot_options(instance, h, slots);
  std::map<WorkState, Rational> frontier;
  frontier[WorkState(instance.jobs.size())] = 0;
  for (std::size_t t = 0; t < slots; ++t) {
    std::map<WorkState, Rational> next;
    for (const auto& [done, energy] : frontier) {
      for (const auto& opt : options[t]) {
        const auto state = advance(instance, done, opt, h);
        const Rational e = energy + instance.profile.power(opt.speed) * h;
        auto it = next.find(state);
        if (it == next.end() || e < it->second) next[state] = e;
      }
    }
    frontier = std::move(next);
  }
  std::optional<Rational> best;
  for (const auto& [done, energy] : frontier)
    if (complete(instance, done) && (!best || energy < *best)) best = energy;
  return best;
}

}  // namespace minrate
