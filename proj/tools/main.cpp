// minrate: minimum recharge rate for discrete-speed scheduling with a battery.
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "minrate/certificate.hpp"
#include "minrate/engine.hpp"
#include "minrate/generator.hpp"
#include "minrate/io.hpp"
#include "minrate/oracle.hpp"
#include "minrate/plot.hpp"
#include "minrate/report.hpp"
#include "minrate/yds.hpp"

using namespace minrate;

namespace {

enum Exit { kOk = 0, kRejected = 1, kInvalid = 2, kInfeasible = 3, kInternal = 4 };

void print_rate(const char* label, const Rational& r) {
  std::cout << label << " = " << to_string(r) << "  (" << to_decimal(r) << ")\n";
}

Instance load_instance(const std::string& path) {
  Instance instance = parse_instance(read_text_file(path));
  const auto problems = validate(instance);
  if (!problems.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : problems) msg += "\n  " + v.what;
    throw InstanceError(InstanceError::Kind::Invalid, msg);
  }
  return instance;
}

Rational rate_argument(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw FormatError("bad rate \"" + text + "\"");
  }
}

// Maps every failure to the documented exit codes.
template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const YdsError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const OracleError& e) {
    if (e.kind() == OracleError::Kind::Infeasible) {
      std::cerr << "infeasible: " << e.what() << '\n';
      return kInfeasible;
    }
    if (e.kind() == OracleError::Kind::IncompatibleSlot) {
      std::cerr << "error: " << e.what() << '\n';
      return kInvalid;
    }
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum recharge rate for deadline scheduling on a discrete-speed processor with a battery"};
  app.require_subcommand(1);
  int exit_code = kOk;

  // solve
  std::string solve_path, schedule_out, certificate_out;
  bool trace = false, strict = false;
  auto* solve_cmd = app.add_subcommand("solve", "Run the homotopic engine");
  solve_cmd->add_option("instance", solve_path, "Instance JSON")->required();
  solve_cmd->add_flag("--trace", trace, "Stream one line per event");
  solve_cmd->add_option("--schedule-out", schedule_out, "Write the optimal schedule as JSON");
  solve_cmd->add_option("--emit-certificate", certificate_out, "Write the dual certificate as JSON");
  solve_cmd->add_flag("--strict-slr", strict, "Use the strict reading of the speed level relation");
  solve_cmd->callback([&] {
    exit_code = guarded([&] {
      const Instance instance = load_instance(solve_path);
      EngineOptions options;
      options.mode = strict ? SlrMode::Strict : SlrMode::Pointwise;
      if (trace) options.trace = &std::cout;
      const SolveResult result = solve(instance, options);
      print_rate("R*", result.rate);
      std::cout << "depletion points:";
      for (const auto& p : result.structure.points) std::cout << ' ' << to_string(p);
      std::cout << "\nevents: " << result.stats.events << " (" << result.stats.zero_length_events
                << " zero-length)\n";
      if (!schedule_out.empty()) write_text_file(schedule_out, dump_schedule(result.schedule, result.rate));
      if (!certificate_out.empty())
        write_text_file(certificate_out, dump_certificate(result.certificate, result.structure, result.levels));
      return kOk;
    });
  });

  // oracle
  std::string oracle_path, slot_text;
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve the slot LP relaxation exactly");
  oracle_cmd->add_option("instance", oracle_path, "Instance JSON")->required();
  oracle_cmd->add_option("--slot", slot_text, "Fixed slot length h; default refines until stable");
  oracle_cmd->callback([&] {
    exit_code = guarded([&] {
      const Instance instance = load_instance(oracle_path);
      if (!slot_text.empty()) {
        const Rational h = rate_argument(slot_text);
        if (h <= 0) throw FormatError("slot length must be positive");
        const SlotLP lp = discretize(instance, h);
        print_rate("R", lp_min_rate(lp).rate);
        std::cout << "slot " << to_string(h) << ", " << lp.slot_count << " slots\n";
      } else {
        const RefineResult refined = refine_until_stable(instance, Rational(1));
        print_rate("R", refined.rate);
        for (const auto& [h, r] : refined.history) std::cout << "  h=" << to_string(h) << "  R=" << to_string(r) << '\n';
      }
      return kOk;
    });
  });

  // verify
  std::string verify_instance, verify_schedule, verify_rate, verify_cert, verify_emit;
  bool verify_strict = false;
  auto* verify_cmd = app.add_subcommand("verify", "Check a schedule for feasibility and structural optimality");
  verify_cmd->add_option("instance", verify_instance, "Instance JSON")->required();
  verify_cmd->add_option("schedule", verify_schedule, "Schedule JSON")->required();
  verify_cmd->add_option("--rate", verify_rate, "Recharge rate; defaults to the schedule file's");
  verify_cmd->add_option("--certificate", verify_cert, "Dual certificate JSON to check as well");
  verify_cmd->add_option("--emit-certificate", verify_emit, "Write a dual certificate for an accepted schedule");
  verify_cmd->add_flag("--strict-slr", verify_strict, "Use the strict reading of the speed level relation");
  verify_cmd->callback([&] {
    exit_code = guarded([&] {
      const Instance instance = load_instance(verify_instance);
      const ScheduleFile file = parse_schedule(read_text_file(verify_schedule));
      Rational rate;
      if (!verify_rate.empty())
        rate = rate_argument(verify_rate);
      else if (file.rate)
        rate = *file.rate;
      else
        throw FormatError("no rate given and none stored in the schedule");
      const SlrMode mode = verify_strict ? SlrMode::Strict : SlrMode::Pointwise;
      bool ok = true;
      auto report = [&](const char* what, const std::vector<Violation>& found) {
        std::cout << what << ": " << (found.empty() ? "ok" : "FAILED") << '\n';
        for (const auto& v : found) std::cout << "  " << v.what << '\n';
        ok = ok && found.empty();
      };
      report("feasible", feasibility_check(file.schedule, instance, rate));
      print_rate("least feasible rate", min_feasible_rate(file.schedule, instance.profile));

      DepletionStructure structure;
      SpeedLevelTable levels;
      if (!verify_cert.empty()) {
        const CertificateFile cert = parse_certificate(read_text_file(verify_cert));
        structure = cert.structure;
        levels = cert.levels;
        report("dual certificate", verify_duality(cert.certificate, instance, rate));
      } else {
        structure.points = depletion_points(file.schedule, instance.profile, rate);
        auto inferred = infer_speed_levels(file.schedule, instance, structure, mode);
        if (!inferred) {
          std::cout << "speed levels: FAILED\n  no table satisfies the speed level relation\n";
          return kRejected;
        }
        levels = *inferred;
      }
      const auto conditions = check_optimality_conditions(file.schedule, instance, rate, structure, levels, mode);
      report("optimality conditions", conditions);
      if (!verify_emit.empty()) {
        if (!conditions.empty()) {
          std::cout << "certificate not written: optimality conditions fail\n";
          return kRejected;
        }
        const DualCertificate built = build_dual_certificate(file.schedule, instance, rate, structure, levels);
        report("built certificate", verify_duality(built, instance, rate));
        write_text_file(verify_emit, dump_certificate(built, structure, levels));
      }
      return ok ? kOk : kRejected;
    });
  });

  // gen
  std::uint64_t gen_seed = 1;
  GeneratorBounds gen_bounds;
  auto* gen_cmd = app.add_subcommand("gen", "Print a random well-separated instance");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--max-jobs", gen_bounds.max_jobs)->check(CLI::Range(1, 64));
  gen_cmd->add_option("--max-speeds", gen_bounds.max_speeds)->check(CLI::Range(1, 4));
  gen_cmd->add_option("--max-time", gen_bounds.max_time)->check(CLI::Range(1, 1000));
  gen_cmd->add_flag("--infeasible", gen_bounds.infeasible, "Draw an infeasible instance");
  gen_cmd->add_flag("--mixed", gen_bounds.mixed_windows, "Mix long and short job windows");
  gen_cmd->callback([&] {
    exit_code = guarded([&] {
      std::mt19937_64 rng(gen_seed);
      std::cout << dump_instance(generate_instance(rng, gen_bounds));
      return kOk;
    });
  });

  // compare
  std::uint64_t cmp_seed = 1;
  std::size_t cmp_count = 50;
  unsigned cmp_threads = 0;
  bool cmp_timing = false, cmp_strict = false;
  GeneratorBounds cmp_bounds;
  auto* cmp_cmd = app.add_subcommand("compare", "Engine against the LP oracle on random instances");
  cmp_cmd->add_option("--seed", cmp_seed, "Generator seed");
  cmp_cmd->add_option("--count", cmp_count, "Number of instances");
  cmp_cmd->add_option("--threads", cmp_threads, "Worker threads (0 = hardware)");
  cmp_cmd->add_option("--max-jobs", cmp_bounds.max_jobs)->check(CLI::Range(1, 64));
  cmp_cmd->add_option("--max-speeds", cmp_bounds.max_speeds)->check(CLI::Range(1, 4));
  cmp_cmd->add_option("--max-time", cmp_bounds.max_time)->check(CLI::Range(1, 1000));
  cmp_cmd->add_flag("--infeasible", cmp_bounds.infeasible, "Draw infeasible instances");
  cmp_cmd->add_flag("--mixed", cmp_bounds.mixed_windows, "Mix long and short job windows");
  cmp_cmd->add_flag("--timing", cmp_timing, "Add per-row wall time");
  cmp_cmd->add_flag("--strict-slr", cmp_strict, "Use the strict reading of the speed level relation");
  cmp_cmd->callback([&] {
    exit_code = guarded([&] {
      const auto reports = compare(cmp_seed, cmp_count, cmp_bounds, cmp_threads,
                                   cmp_strict ? SlrMode::Strict : SlrMode::Pointwise);
      std::cout << format_table(reports, cmp_timing);
      std::size_t bad = 0;
      for (const auto& r : reports) bad += r.status == RowStatus::Mismatch || r.status == RowStatus::Error;
      std::cout << reports.size() << " rows, " << bad << " inconsistent\n";
      return bad == 0 ? kOk : kRejected;
    });
  });

  // plot
  std::string plot_schedule, plot_instance, plot_rate, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render a schedule's energy budget as SVG");
  plot_cmd->add_option("schedule", plot_schedule, "Schedule JSON")->required();
  plot_cmd->add_option("--instance", plot_instance, "Instance JSON supplying the speed profile")->required();
  plot_cmd->add_option("--rate", plot_rate, "Recharge rate; defaults to the schedule file's");
  plot_cmd->add_option("-o,--output", plot_out, "SVG path; stdout when omitted");
  plot_cmd->callback([&] {
    exit_code = guarded([&] {
      const Instance instance = load_instance(plot_instance);
      const ScheduleFile file = parse_schedule(read_text_file(plot_schedule));
      Rational rate;
      if (!plot_rate.empty())
        rate = rate_argument(plot_rate);
      else if (file.rate)
        rate = *file.rate;
      else
        throw FormatError("no rate given and none stored in the schedule");
      if (rate < 0) throw FormatError("rate must be nonnegative");
      PlotOptions options;
      options.title = "R = " + to_string(rate);
      const std::string svg = render_svg(file.schedule, instance.profile, rate, options);
      if (plot_out.empty())
        std::cout << svg;
      else
        write_text_file(plot_out, svg);
      return kOk;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  return exit_code;
}
