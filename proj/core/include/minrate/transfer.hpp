// Epsilon-transfers between depletion intervals, their priority order, the distribution
// graph and the path-finding tree.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "minrate/work_state.hpp"

namespace minrate {

class TransferError : public std::runtime_error {
 public:
  enum class Kind { IncomparableInputs };
  TransferError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Direction { Left, Right };

/// (l_a, j_a) for a = 0..s. Hop a moves job j_a from l_{a-1} to l_a; j_0 == j_1.
struct EpsilonTransfer {
  std::vector<std::size_t> intervals;
  std::vector<int> jobs;
  bool active = false;

  [[nodiscard]] std::size_t source() const { return intervals.front(); }
  [[nodiscard]] std::size_t destination() const { return intervals.back(); }
  [[nodiscard]] std::size_t hops() const { return intervals.size() - 1; }
  /// Direction of hop a, 1 <= a <= hops().
  [[nodiscard]] Direction direction(std::size_t a) const {
    return intervals[a] > intervals[a - 1] ? Direction::Right : Direction::Left;
  }
  /// Unit-rate work movement along every hop.
  [[nodiscard]] Perturbation perturbation() const;
  [[nodiscard]] std::string describe() const;

  friend bool operator==(const EpsilonTransfer& a, const EpsilonTransfer& b) {
    return a.intervals == b.intervals && a.jobs == b.jobs;
  }
};

struct TransferContext {
  const Instance& instance;
  const WorkState& state;
  /// Last movement direction of each job since the previous reset.
  std::map<int, Direction> memory;
  SlrMode mode = SlrMode::Pointwise;
};

/// Validity of a complete candidate: pruning rules, window and work preconditions,
/// unchanged speeds in intermediate intervals, source and destination feasibility, and
/// weak EDF just after the move. Returns the reason it fails.
std::optional<std::string> transfer_problem(const TransferContext& ctx, const EpsilonTransfer& t);

/// True if the valid transfer also keeps every level admissible and the SLR intact.
bool is_active(const TransferContext& ctx, const EpsilonTransfer& t);

/// Every valid transfer from the source, activity filled in.
std::vector<EpsilonTransfer> all_transfers(const TransferContext& ctx, std::size_t source);

/// Best transfer per reachable destination; active ones beat inactive ones, then priority.
std::vector<EpsilonTransfer> enumerate_transfers(const TransferContext& ctx, std::size_t source);

enum class PriorityBasis { Clause1, Clause2, Clause3, Fallback };

struct PriorityResult {
  bool first_higher = false;
  PriorityBasis basis = PriorityBasis::Fallback;
};

/// Throws TransferError if the endpoints differ or the transfers are identical.
PriorityResult compare_priority(const Instance& instance, const EpsilonTransfer& t1, const EpsilonTransfer& t2);

struct DistributionGraph {
  std::size_t vertices = 0;
  /// Best active transfer per ordered (source, destination) pair.
  std::map<std::pair<std::size_t, std::size_t>, EpsilonTransfer> edges;
  /// Best inactive transfer per pair with no active one.
  std::map<std::pair<std::size_t, std::size_t>, EpsilonTransfer> inactive;
  std::size_t fallback_comparisons = 0;
};

DistributionGraph build_graph(const TransferContext& ctx);

struct PathTree {
  std::size_t root = 0;
  /// Chosen edge (source, destination) per added vertex, in insertion order.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::size_t> reached;

  [[nodiscard]] bool spans(std::size_t vertices) const { return reached.size() == vertices; }
};

/// Grows the reached set from the rightmost vertex: shortest right edge first, otherwise
/// longest left edge, ties to the rightmost source.
PathTree path_finding(const DistributionGraph& graph);

/// Two edges cross if their spans overlap without nesting.
bool edges_cross(std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b);

}  // namespace minrate
