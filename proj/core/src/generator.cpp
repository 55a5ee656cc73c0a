#include "minrate/generator.hpp"

#include <algorithm>
#include <set>

#include "minrate/yds.hpp"

namespace minrate {

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}

namespace {

SpeedProfile random_profile(std::mt19937_64& rng, const GeneratorBounds& bounds) {
  const auto k = static_cast<std::size_t>(draw(rng, 1, static_cast<std::int64_t>(bounds.max_speeds)));
  std::set<std::int64_t> picked;
  while (picked.size() < k) picked.insert(draw(rng, 1, 4));
  const Rational c = draw(rng, 2, 3);
  Rational delta = Rational(draw(rng, 1, 4)) / 2;
  std::vector<Rational> speeds, powers;
  Rational s_prev = 0, p_prev = 0;
  for (auto s : picked) {
    const Rational speed = s;
    const Rational power = p_prev + delta * (speed - s_prev);
    speeds.push_back(speed);
    powers.push_back(power);
    s_prev = speed;
    p_prev = power;
    delta *= c;
  }
  return SpeedProfile(speeds, powers);
}

bool feasible(const Instance& instance) {
  try {
    yds_global(instance);
    return true;
  } catch (const YdsError&) {
    return false;
  }
}

}  // namespace

Instance generate_instance(std::mt19937_64& rng, const GeneratorBounds& bounds) {
  Instance instance;
  instance.profile = random_profile(rng, bounds);
  const Rational top = instance.profile.max_speed();
  const std::int64_t T = bounds.max_time;
  const bool mixed = bounds.mixed_windows && T >= 4 && bounds.max_jobs >= 2;
  const auto n = static_cast<std::size_t>(draw(rng, mixed ? 2 : 1, static_cast<std::int64_t>(bounds.max_jobs)));
  for (;;) {
    instance.jobs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t r = 0, d = 0;
      if (!mixed) {
        r = draw(rng, 0, T - 1);
        d = draw(rng, r + 1, T);
      } else if (draw(rng, 0, 1)) {
        r = draw(rng, 0, (3 * T) / 8);
        d = draw(rng, (3 * T + 3) / 4, T);
      } else {
        r = draw(rng, 0, T - 3);
        d = r + draw(rng, 1, 2);
      }
      Rational cap = top * (d - r) * bounds.work_denominator;
      if (bounds.infeasible) cap *= 2;
      const auto cap_units = std::max<std::int64_t>(1, static_cast<std::int64_t>(mpz_class(cap.get_num() / cap.get_den()).get_si()));
      const Rational work = Rational(draw(rng, 1, cap_units)) / bounds.work_denominator;
      instance.jobs.push_back({static_cast<int>(i + 1), Rational(r), Rational(d), work});
    }
    if (feasible(instance) != bounds.infeasible) return instance;
  }
}

}  // namespace minrate
