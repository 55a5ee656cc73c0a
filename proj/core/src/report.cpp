#include "minrate/report.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "minrate/certificate.hpp"
#include "minrate/io.hpp"
#include "minrate/oracle.hpp"
#include "minrate/yds.hpp"

namespace minrate {

std::string to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Match: return "match";
    case RowStatus::Mismatch: return "MISMATCH";
    case RowStatus::Infeasible: return "infeasible";
    case RowStatus::Error: return "ERROR";
  }
  return "?";
}

std::size_t RunReport::event_total() const {
  std::size_t total = 0;
  for (const auto& [kind, n] : events) total += n;
  return total;
}

std::string instance_digest(const Instance& instance) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_instance(instance)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RunReport run_row(const Instance& instance, std::size_t row, SlrMode mode) {
  RunReport report;
  report.row = row;
  report.instance = instance;
  report.digest = instance_digest(instance);
  const auto started = std::chrono::steady_clock::now();

  bool engine_infeasible = false, oracle_infeasible = false;
  try {
    EngineOptions options;
    options.mode = mode;
    options.observer = [&](const StepSnapshot& s) { ++report.events[s.event.kind]; };
    const SolveResult result = solve(instance, options);
    report.engine_rate = result.rate;
    auto problems = verify_duality(result.certificate, instance, result.rate);
    if (problems.empty())
      problems = check_optimality_conditions(result.schedule, instance, result.rate, result.structure, result.levels, mode);
    report.certificate = problems.empty() ? "verified" : "rejected: " + problems.front().what;
    report.yds_rate = min_feasible_rate(yds_global(instance).schedule, instance.profile);
  } catch (const YdsError&) {
    engine_infeasible = true;
    report.certificate = "-";
  } catch (const std::exception& e) {
    report.error = std::string("engine: ") + e.what();
    report.certificate = "-";
  }

  try {
    report.oracle_rate = refine_until_stable(instance, Rational(1)).rate;
  } catch (const OracleError& e) {
    if (e.kind() == OracleError::Kind::Infeasible)
      oracle_infeasible = true;
    else if (report.error.empty())
      report.error = std::string("oracle: ") + e.what();
  } catch (const std::exception& e) {
    if (report.error.empty()) report.error = std::string("oracle: ") + e.what();
  }

  if (!report.error.empty())
    report.status = RowStatus::Error;
  else if (engine_infeasible && oracle_infeasible)
    report.status = RowStatus::Infeasible;
  else if (report.engine_rate && report.oracle_rate && *report.engine_rate == *report.oracle_rate)
    report.status = RowStatus::Match;
  else
    report.status = RowStatus::Mismatch;

  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<RunReport> compare(std::uint64_t seed, std::size_t count, const GeneratorBounds& bounds, unsigned threads,
                               SlrMode mode) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> instances;
  instances.reserve(count);
  for (std::size_t i = 0; i < count; ++i) instances.push_back(generate_instance(rng, bounds));

  std::vector<RunReport> reports(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) reports[i] = run_row(instances[i], i + 1, mode);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return reports;
}

namespace {

std::string cell(const std::optional<Rational>& value) { return value ? to_string(*value) : "-"; }

std::string delta(const RunReport& r) {
  if (!r.engine_rate || !r.oracle_rate) return "-";
  return to_string(Rational(*r.engine_rate - *r.oracle_rate));
}

}  // namespace

std::string format_table(const std::vector<RunReport>& reports, bool timing) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%5s  %-16s  %3s %3s  %-14s %-14s %-8s %-14s %6s  %-10s %s", "row", "digest", "n",
                "k", "engine", "oracle", "delta", "yds", "events", "status", "certificate");
  out << line;
  if (timing) out << "  ms";
  out << '\n';
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%5zu  %-16s  %3zu %3zu  %-14s %-14s %-8s %-14s %6zu  %-10s %s", r.row,
                  r.digest.c_str(), r.instance.jobs.size(), r.instance.profile.size(), cell(r.engine_rate).c_str(),
                  cell(r.oracle_rate).c_str(), delta(r).c_str(), cell(r.yds_rate).c_str(), r.event_total(),
                  to_string(r.status).c_str(), r.certificate.c_str());
    out << line;
    if (timing) {
      std::snprintf(line, sizeof line, "  %.1f", r.wall_ms);
      out << line;
    }
    if (!r.error.empty()) out << "  " << r.error;
    out << '\n';
  }
  return out.str();
}

}  // namespace minrate
