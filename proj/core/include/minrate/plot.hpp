// Static SVG of a schedule's energy budget: cumulative recharge (dashed) against
// cumulative consumption (solid), with a strip of per-job speed blocks underneath.
#pragma once

#include <string>
#include <vector>

#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"

namespace minrate {

struct PlotOptions {
  int width = 720;
  int height = 420;
  std::string title;
};

/// Cumulative energy consumed by time t at every segment endpoint, starting at (0, 0).
std::vector<EnergyPoint> cumulative_consumption(const Schedule& schedule, const SpeedProfile& profile);

/// Byte-identical for identical inputs.
std::string render_svg(const Schedule& schedule, const SpeedProfile& profile, const Rational& rate,
                       const PlotOptions& options = {});

}  // namespace minrate
