// Homotopy engine: lowers the recharge rate by moving work along transfer trees until the
// optimality conditions hold.
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minrate/certificate.hpp"
#include "minrate/transfer.hpp"
#include "minrate/work_state.hpp"

namespace minrate {

class EngineError : public std::runtime_error {
 public:
  enum class Kind { EventBudgetExceeded, Stalled, SingularSystem, InvariantBroken, Unbounded };
  EngineError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class EventKind {
  DepletionAppearance,
  EdgeInactive,
  EdgeRemoval,
  CriticalMergeCandidate,
  MemoryReset,
  DepletionRemoval,
  LevelRepair,
  Optimal,
};

std::string to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::Optimal;
  Rational theta;
  std::optional<Rational> time;  ///< depletion appearance
  std::optional<JobInterval> where;
  std::string detail;
};

struct RateAssignment {
  std::map<std::size_t, Rational> flow;  ///< work per unit parameter along each tree edge, by source
  Perturbation work_rates;
  std::map<JobInterval, Rational> speed_rates;  ///< delta_{j,l}
  std::map<std::size_t, Rational> energy_rates;
};

/// Leaf-to-root solve making every labeled point's energy stationary while R drops at
/// unit rate. Throws EngineError(SingularSystem) if a source cannot shed energy.
RateAssignment calculate_rates(const TransferContext& ctx, const DistributionGraph& graph, const PathTree& tree);

/// Whether the superposed motion actually keeps every labeled point at zero.
std::optional<std::string> rates_problem(const Instance& instance, const WorkState& state, const RateAssignment& rates);

/// First structural change along the rates; throws EngineError(Unbounded) if none.
Event next_event(const Instance& instance, const WorkState& state, const RateAssignment& rates);

/// Advances by event.theta and applies the bookkeeping of the event.
WorkState apply_event(const Instance& instance, const WorkState& state, const RateAssignment& rates,
                      const Event& event);

/// Unlabels points[index], merging its two intervals and re-leveling the merged one.
/// nullopt if no consistent leveling exists.
std::optional<WorkState> remove_depletion_point(const Instance& instance, const WorkState& state, std::size_t index,
                                                SlrMode mode = SlrMode::Pointwise);

std::size_t event_budget(const Instance& instance);

struct StepSnapshot {
  std::size_t step = 0;
  Event event;
  Rational rate_before;
  Rational rate;
  Schedule schedule;
  DepletionStructure structure;
  SpeedLevelTable levels;
};

struct EngineOptions {
  SlrMode mode = SlrMode::Pointwise;
  std::function<void(const StepSnapshot&)> observer;
  /// Per-event log lines are written here when set.
  std::ostream* trace = nullptr;
  std::optional<std::size_t> budget;
  std::size_t repair_node_limit = 4096;
};

struct EngineStats {
  std::size_t events = 0;
  std::size_t zero_length_events = 0;
  std::size_t cuts = 0;
  std::size_t level_repairs = 0;
  std::size_t depletion_removals = 0;
  std::size_t fallback_comparisons = 0;
  std::size_t graph_builds = 0;
};

struct SolveResult {
  Rational rate;
  Schedule schedule;
  DepletionStructure structure;
  SpeedLevelTable levels;
  DualCertificate certificate;
  std::vector<std::string> trace;
  EngineStats stats;
};

/// Validates the instance (InstanceError), then runs the engine. Infeasible instances throw
/// YdsError; failure to certify the result throws EngineError.
SolveResult solve(const Instance& instance, const EngineOptions& options = {});

}  // namespace minrate
