// Optimality conditions: speed levels (SLR), split depletion point, per-interval energy
// optimality, and the structural dual certificate.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"

namespace minrate {

class CertificateError : public std::runtime_error {
 public:
  enum class Kind { PreconditionFailed, InconsistentJumps };
  CertificateError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// How clause (d) quantifies the competing jobs: over jobs active at the processing
/// instant, or over jobs active anywhere in the interval part of j's window.
enum class SlrMode { Pointwise, Strict };

class SpeedLevelTable {
 public:
  [[nodiscard]] std::optional<int> get(int job, std::size_t interval) const;
  [[nodiscard]] int at(int job, std::size_t interval) const;
  void set(int job, std::size_t interval, int level) { levels_[{job, interval}] = level; }
  void erase(int job, std::size_t interval) { levels_.erase({job, interval}); }
  [[nodiscard]] const std::map<JobInterval, int>& entries() const { return levels_; }

  friend bool operator==(const SpeedLevelTable&, const SpeedLevelTable&) = default;

 private:
  std::map<JobInterval, int> levels_;
};

struct SlrViolation {
  char clause = 'a';
  std::string what;
};

std::optional<SlrViolation> check_slr(const Schedule& schedule, const Instance& instance,
                                      const DepletionStructure& structure, const SpeedLevelTable& table,
                                      SlrMode mode = SlrMode::Pointwise);

/// Leftmost labeled point before which no job with a later deadline is processed.
std::optional<Rational> check_sdp(const Schedule& schedule, const Instance& instance,
                                  const DepletionStructure& structure);

/// Per interval: scheduled energy equals the YDS energy of the work placed there.
std::vector<Violation> check_local_energy_opt(const Schedule& schedule, const Instance& instance,
                                              const DepletionStructure& structure);

std::vector<Violation> check_optimality_conditions(const Schedule& schedule, const Instance& instance, const Rational& rate,
                                      const DepletionStructure& structure, const SpeedLevelTable& table,
                                      SlrMode mode = SlrMode::Pointwise);

/// Levels admissible for a processed job at average speed s: {i} inside (s_{i-1}, s_i),
/// {i, i+1} at s = s_i (capped at k).
std::vector<int> admissible_levels(const SpeedProfile& profile, const Rational& speed);

/// Searches jumps per depletion point and a base level per job for a table satisfying the
/// SLR; prefers the smallest total level.
std::optional<SpeedLevelTable> infer_speed_levels(const Schedule& schedule, const Instance& instance,
                                                  const DepletionStructure& structure,
                                                  SlrMode mode = SlrMode::Pointwise);

struct DualSlot {
  Rational start;
  Rational end;
  Rational gamma;  ///< slot total, i.e. density times length
};

struct DualCertificate {
  std::vector<Rational> points;  ///< tau_1..tau_k, the support of beta
  std::vector<Rational> beta;
  std::vector<int> jumps;        ///< a_l for l = 1..k-1
  std::map<int, Rational> alpha;
  std::vector<DualSlot> slots;
  Rational objective;
};

DualCertificate build_dual_certificate(const Schedule& schedule, const Instance& instance, const Rational& rate,
                                       const DepletionStructure& structure, const SpeedLevelTable& table);

/// Checks dual feasibility on every (slot, active job, speed) triple, nonnegativity,
/// normalization and that the dual objective equals `rate`.
std::vector<Violation> verify_duality(const DualCertificate& certificate, const Instance& instance,
                                      const Rational& rate);

}  // namespace minrate
