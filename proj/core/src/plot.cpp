#include "minrate/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace minrate {

namespace {

constexpr double kMarginLeft = 56;
constexpr double kMarginRight = 16;
constexpr double kMarginTop = 28;
constexpr double kStripHeight = 70;
constexpr double kGap = 30;
constexpr double kMarginBottom = 28;

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<EnergyPoint> cumulative_consumption(const Schedule& schedule, const SpeedProfile& profile) {
  std::vector<EnergyPoint> out{{Rational(0), Rational(0)}};
  Rational used = 0;
  for (const auto& seg : schedule.segments) {
    if (seg.start > out.back().time) out.push_back({seg.start, used});
    if (seg.job) used += profile.power(seg.speed_index) * (seg.end - seg.start);
    out.push_back({seg.end, used});
  }
  return out;
}

std::string render_svg(const Schedule& schedule, const SpeedProfile& profile, const Rational& rate,
                       const PlotOptions& options) {
  const auto used = cumulative_consumption(schedule, profile);
  Rational horizon = schedule.end_time();
  if (horizon <= 0) horizon = 1;
  const Rational top_energy = std::max(Rational(rate * horizon), used.back().energy);
  const double t_max = horizon.get_d();
  const double e_max = top_energy > 0 ? top_energy.get_d() : 1.0;
  const double s_max = profile.size() > 0 ? profile.max_speed().get_d() : 1.0;

  const double w = options.width, h = options.height;
  const double plot_w = w - kMarginLeft - kMarginRight;
  const double energy_h = h - kMarginTop - kGap - kStripHeight - kMarginBottom;
  const double strip_base = h - kMarginBottom;
  auto x = [&](const Rational& t) { return kMarginLeft + plot_w * t.get_d() / t_max; };
  auto y = [&](const Rational& e) { return kMarginTop + energy_h * (1.0 - e.get_d() / e_max); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    svg << "<text x=\"" << num(kMarginLeft) << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(options.title) << "</text>\n";

  // axes
  const double axis_y = kMarginTop + energy_h;
  svg << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop) << "\" x2=\"" << num(kMarginLeft)
      << "\" y2=\"" << num(axis_y) << "\"/>\n";
  svg << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(w - kMarginRight)
      << "\" y2=\"" << num(axis_y) << "\"/>\n";
  svg << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(strip_base) << "\" x2=\""
      << num(w - kMarginRight) << "\" y2=\"" << num(strip_base) << "\"/>\n";
  svg << "</g>\n";

  // integer time ticks, or just the ends for long horizons
  std::set<Rational> ticks{Rational(0), horizon};
  if (t_max <= 40)
    for (long t = 1; Rational(t) < horizon; ++t) ticks.insert(Rational(t));
  svg << "<g font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
  for (const auto& t : ticks)
    svg << "<text x=\"" << num(x(t)) << "\" y=\"" << num(strip_base + 14) << "\">" << to_string(t) << "</text>\n";
  svg << "</g>\n";
  svg << "<text x=\"4\" y=\"" << num(kMarginTop + 10) << "\" font-family=\"sans-serif\" font-size=\"10\">"
      << escape(to_string(top_energy)) << "</text>\n";

  svg << "<line class=\"recharge\" x1=\"" << num(x(0)) << "\" y1=\"" << num(y(0)) << "\" x2=\"" << num(x(horizon))
      << "\" y2=\"" << num(y(Rational(rate * horizon))) << "\" stroke=\"#555\" stroke-width=\"1.5\""
      << " stroke-dasharray=\"6 4\"/>\n";

  svg << "<polyline class=\"consumption\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (i) svg << ' ';
    svg << num(x(used[i].time)) << ',' << num(y(used[i].energy));
  }
  if (used.back().time < horizon) svg << ' ' << num(x(horizon)) << ',' << num(y(used.back().energy));
  svg << "\"/>\n";

  // depletion points, where the two lines meet
  for (const auto& t : depletion_points(schedule, profile, rate))
    svg << "<circle class=\"depletion\" cx=\"" << num(x(t)) << "\" cy=\"" << num(y(Rational(rate * t)))
        << "\" r=\"3\" fill=\"#c00\"><title>" << to_string(t) << "</title></circle>\n";

  // speed strip
  svg << "<g stroke=\"#222\" stroke-width=\"0.5\">\n";
  for (const auto& seg : schedule.segments) {
    if (!seg.job) continue;
    const double bar = kStripHeight * profile.speed(seg.speed_index).get_d() / s_max;
    const auto colour = kPalette[static_cast<std::size_t>(std::abs(*seg.job)) % std::size(kPalette)];
    svg << "<rect x=\"" << num(x(seg.start)) << "\" y=\"" << num(strip_base - bar) << "\" width=\""
        << num(x(seg.end) - x(seg.start)) << "\" height=\"" << num(bar) << "\" fill=\"" << colour << "\"><title>job "
        << *seg.job << " speed " << to_string(profile.speed(seg.speed_index)) << " [" << to_string(seg.start) << ", "
        << to_string(seg.end) << ")</title></rect>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace minrate
