// Independent ground truth: slot-discretized LP solved by an exact simplex, plus a tiny
// exhaustive search for instances with at most two jobs.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"

namespace minrate {

class OracleError : public std::runtime_error {
 public:
  enum class Kind { IncompatibleSlot, Infeasible, Unbounded, RefinementBudget, TooLarge };
  OracleError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// min c.x subject to rows (<=, =, >=) and x >= 0.
struct LinearProgram {
  enum class Sense { Le, Eq, Ge };
  struct Row {
    std::vector<std::pair<std::size_t, Rational>> coefficients;
    Sense sense = Sense::Le;
    Rational rhs;
  };
  std::size_t variables = 0;
  std::vector<Rational> cost;
  std::vector<Row> rows;
};

struct LpResult {
  Rational objective;
  std::vector<Rational> x;
};

/// Two-phase dense simplex in exact arithmetic with Bland's rule.
/// Throws OracleError(Infeasible) or OracleError(Unbounded).
LpResult solve_lp(const LinearProgram& lp);

struct SlotVariable {
  std::size_t job = 0;    ///< position in instance.jobs
  std::size_t speed = 0;  ///< 1..k
  std::size_t slot = 0;   ///< slot t covers [t*h, (t+1)*h)
  bool in_window = false;
};

struct SlotLP {
  Rational slot_length;
  std::size_t slot_count = 0;
  std::vector<SlotVariable> x;  ///< every (job, speed, slot) triple
  std::size_t rate_column = 0;
  LinearProgram program;        ///< columns: in-window x variables, then R
  std::vector<std::size_t> column_of_x;  ///< program column per x entry, or npos

  [[nodiscard]] std::size_t x_variable_count() const { return x.size(); }
};

/// Builds the relaxation. Throws OracleError(IncompatibleSlot) when h does not divide
/// every release and deadline.
SlotLP discretize(const Instance& instance, const Rational& h);

struct SlotSolution {
  Rational rate;
  std::vector<Rational> x;  ///< value per SlotLP::x entry
};

/// Throws OracleError(Infeasible) when some job cannot be completed.
SlotSolution lp_min_rate(const SlotLP& lp);

/// Slot schedule of an LP solution: inside each slot the fractions run by increasing power.
Schedule slot_schedule(const Instance& instance, const SlotLP& lp, const SlotSolution& solution);

struct RefineResult {
  Rational rate;
  Rational slot_length;  ///< the finer of the two agreeing slots
  std::vector<std::pair<Rational, Rational>> history;  ///< (h, R) per solved LP
};

/// Largest h' = h0 / 2^m dividing all releases and deadlines, then halving until two
/// consecutive optima agree. Throws OracleError(RefinementBudget) after `budget` halvings.
RefineResult refine_until_stable(const Instance& instance, const Rational& h0, int budget = 8);

/// Least rate over schedules that give each slot of length h wholly to one job at one
/// speed (or idle). At most two jobs. Returns nullopt when no such schedule exists.
std::optional<Rational> brute_force_slot_rate(const Instance& instance, const Rational& h);

/// Least energy over the same slot-integral schedules, ignoring the battery.
std::optional<Rational> brute_force_slot_energy(const Instance& instance, const Rational& h);

}  // namespace minrate
