// Engine-vs-oracle batch comparison.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minrate/engine.hpp"
#include "minrate/generator.hpp"
#include "minrate/instance.hpp"

namespace minrate {

enum class RowStatus { Match, Mismatch, Infeasible, Error };
std::string to_string(RowStatus status);

struct RunReport {
  std::size_t row = 0;
  std::string digest;  ///< FNV-1a of the canonical instance JSON
  Instance instance;
  RowStatus status = RowStatus::Error;
  std::optional<Rational> engine_rate;
  std::optional<Rational> oracle_rate;
  std::optional<Rational> yds_rate;
  std::map<EventKind, std::size_t> events;
  double wall_ms = 0;
  std::string certificate;  ///< "verified", "rejected: ...", or "-"
  std::string error;

  [[nodiscard]] std::size_t event_total() const;
};

std::string instance_digest(const Instance& instance);

/// Engine, refined LP and global YDS on one instance. Never throws.
RunReport run_row(const Instance& instance, std::size_t row = 0, SlrMode mode = SlrMode::Pointwise);

/// Instances drawn in order from one seeded stream; rows solved on `threads` workers and
/// returned in row order.
std::vector<RunReport> compare(std::uint64_t seed, std::size_t count, const GeneratorBounds& bounds = {},
                               unsigned threads = 0, SlrMode mode = SlrMode::Pointwise);

/// Fixed-width table; wall time only when `timing` is set.
std::string format_table(const std::vector<RunReport>& reports, bool timing = false);

inline bool all_consistent(const std::vector<RunReport>& reports) {
  for (const auto& r : reports)
    if (r.status == RowStatus::Mismatch || r.status == RowStatus::Error) return false;
  return true;
}

}  // namespace minrate
