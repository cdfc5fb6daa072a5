#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqap/errors.hpp"
#include "sqap/exact.hpp"
#include "sqap/instance.hpp"
#include "sqap/ohzeki.hpp"
#include "sqap/qubo.hpp"
#include "sqap/repair.hpp"
#include "sqap/sampler.hpp"

namespace sqap::cli {

namespace {

// Sampler chains of one solve never reach this many seeds, so runs offset by it stay disjoint.
constexpr std::int64_t kRunSeedStride = 10'000'000;

struct CommonOptions {
  SamplerConfig sampler;
  ScheduleConfig schedule;
  std::string backend = "gibbs";
  std::string out_path;
  bool no_timing = false;
};

// seed_alias: the command has no instance seed of its own, so --seed names the sampler seed.
void add_sampler_flags(CLI::App* cmd, CommonOptions& o, bool seed_alias) {
  cmd->add_option("--num-reads", o.sampler.num_reads, "samples per sampling call")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--sweeps", o.sampler.sweeps, "Gibbs sweeps per sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--beta-initial", o.sampler.beta_initial, "inverse temperature of the first sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--beta-final", o.sampler.beta_final, "inverse temperature of the last sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option(seed_alias ? "--seed,--sampler-seed" : "--sampler-seed", o.sampler.seed,
                  "base seed of the sampler chains")
      ->capture_default_str();
  cmd->add_option("--sampler", o.backend, "sampler backend")
      ->check(CLI::IsMember({"gibbs"}))
      ->capture_default_str();
}

void add_schedule_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--max-iters", o.schedule.max_iters, "multiplier iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--eta0", o.schedule.eta0, "initial multiplier step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--decay", o.schedule.decay, "per-iteration step decay")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--clamp-t", o.schedule.clamp_t, "iteration at which the step stops shrinking")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out", o.out_path, "output file (default: stdout)");
  cmd->add_flag("--no-timing", o.no_timing, "report all times as 0 for byte-stable output");
}

// Writes to --out when given, otherwise to the command's stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

double timed(bool no_timing, double seconds) { return no_timing ? 0.0 : seconds; }

std::vector<std::size_t> default_sizes() {
  std::vector<std::size_t> sizes(16);
  std::iota(sizes.begin(), sizes.end(), std::size_t{5});
  return sizes;
}

std::string fmt(double value) {
  std::ostringstream os;
  os << std::setprecision(10) << value;
  return os.str();
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::size_t n = 0;
  std::int64_t seed = 0;
  double w = 0.5;
  std::string adjacency = "linear";
  std::string out_path;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorConfig config;
  config.w = a.w;
  config.adjacency = a.adjacency == "ring" ? Adjacency::ring : Adjacency::linear;
  QapInstance inst = generate_instance(a.n, a.seed, config);
  Output o(a.out_path, out);
  o.stream() << to_json(inst).dump() << '\n';
  o.finish();
  return kOk;
}

// ---- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string instance_path;
  std::string method = "ohzeki-bfha";
  std::optional<double> lambda;
  std::optional<double> known_optimum;
  std::size_t exact_limit = 10;
  std::string trace_path;
};

int cmd_solve(const SolveArgs& a, const CommonOptions& c, std::ostream& out) {
  QapInstance inst = load_instance(a.instance_path);
  nlohmann::json result;
  result["method"] = a.method;
  result["n"] = inst.n;
  result["instance_seed"] = inst.seed;

  if (a.method == "ohzeki-bfha") {
    Algorithm2Options options;
    options.schedule = c.schedule;
    options.sampler = c.sampler;
    options.known_optimum = a.known_optimum;
    auto backend = make_sampler(c.backend);
    options.backend = backend.get();
    Algorithm2Result r = run_algorithm2(inst, options);
    result["score"] = r.score;
    result["feasible"] = is_feasible(r.best);
    result["time_s"] = timed(c.no_timing, r.time_s);
    result["iterations"] = r.trace.iterations.size();
    result["solution"] = to_json(r.best);
    if (!a.trace_path.empty()) {
      std::ofstream trace(a.trace_path);
      if (!trace) throw IoError("cannot write trace '" + a.trace_path + "'");
      write_trace_jsonl(r.trace, trace);
      if (!trace) throw IoError("failed writing trace '" + a.trace_path + "'");
    }
  } else if (a.method == "qubo-direct") {
    double lambda = a.lambda.value_or(default_penalty_lambda(inst));
    auto backend = make_sampler(c.backend);
    BaselineResult r = run_qubo_baseline(inst, lambda, c.sampler, backend.get());
    result["lambda"] = lambda;
    result["feasible"] = r.best.has_value();
    result["feasible_samples"] = r.feasible_samples;
    result["score"] = r.score ? nlohmann::json(*r.score) : nlohmann::json(nullptr);
    result["time_s"] = timed(c.no_timing, r.time_s);
    result["solution"] = r.best ? to_json(*r.best) : nlohmann::json(nullptr);
  } else {
    auto start = std::chrono::steady_clock::now();
    ExactResult r = brute_force_opt(inst, a.exact_limit);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result["score"] = r.score;
    result["feasible"] = true;
    result["enumerated"] = r.enumerated;
    result["time_s"] = timed(c.no_timing, seconds);
    result["solution"] = to_json(r.best);
  }

  Output o(c.out_path, out);
  o.stream() << result.dump() << '\n';
  o.finish();
  return kOk;
}

// ---- bench-repair -----------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> sizes = default_sizes();
  std::size_t samples = 1000;
  std::int64_t seed = 0;
  std::size_t warmup = 5;
  std::size_t timing_repeats = 10;
};

int cmd_bench_repair(const BenchArgs& a, const CommonOptions& c, std::ostream& out) {
  Output o(c.out_path, out);
  write_gap_csv_header(o.stream());
  for (std::size_t n : a.sizes) {
    QapInstance inst = generate_instance(n, a.seed + static_cast<std::int64_t>(n));
    std::vector<Assignment> batch =
        collect_infeasible_samples(inst, c.schedule, c.sampler, a.warmup, a.samples);
    if (batch.empty()) {
      throw std::runtime_error("no infeasible samples produced for size " + std::to_string(n));
    }
    GapReport report = repair_gap(batch, a.timing_repeats);
    report.bfha_time_s = timed(c.no_timing, report.bfha_time_s);
    report.hungarian_time_s = timed(c.no_timing, report.hungarian_time_s);
    write_gap_csv_row(report, o.stream());
  }
  o.finish();
  return kOk;
}

// ---- violations -------------------------------------------------------------

struct ViolationsArgs {
  std::string instance_path;
  std::size_t warmup = 5;
};

int cmd_violations(const ViolationsArgs& a, const CommonOptions& c, std::ostream& out) {
  QapInstance inst = load_instance(a.instance_path);
  SampleBatch batch = relaxed_round(inst, c.schedule, c.sampler, a.warmup);
  std::vector<std::size_t> bins = violation_histogram(batch, inst.n);
  Output o(c.out_path, out);
  o.stream() << "violations,count\n";
  for (std::size_t k = 0; k < bins.size(); ++k) o.stream() << k << ',' << bins[k] << '\n';
  o.finish();
  return kOk;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
  std::vector<std::size_t> sizes = default_sizes();
  std::size_t instances = 10;
  std::int64_t seed = 0;
  std::string mode = "instances";
  std::optional<double> lambda;
  std::size_t exact_limit = 10;
  bool stop_at_opt = false;
};

int cmd_report(const ReportArgs& a, const CommonOptions& c, std::ostream& out) {
  Output o(c.out_path, out);
  o.stream() << "size,runs,bitflip_score,bitflip_time_s,qubo_score,qubo_time_s,"
                "qubo_feasible_runs,opt,bitflip_hits_opt\n";
  auto backend = make_sampler(c.backend);
  for (std::size_t n : a.sizes) {
    double bitflip_sum = 0.0, bitflip_time = 0.0;
    double qubo_sum = 0.0, qubo_time = 0.0, opt_sum = 0.0;
    std::size_t qubo_feasible = 0, hits = 0;
    const bool exact = n <= a.exact_limit;
    std::optional<ExactResult> shared_opt;
    for (std::size_t run = 0; run < a.instances; ++run) {
      // "instances": a fresh instance per run; "runs": one instance, fresh sampler seeds.
      std::size_t instance_index = a.mode == "runs" ? 0 : run;
      QapInstance inst = generate_instance(
          n, a.seed + static_cast<std::int64_t>(1000 * n + instance_index));
      std::optional<ExactResult> opt;
      if (exact) {
        if (a.mode == "runs" && shared_opt) {
          opt = shared_opt;
        } else {
          opt = brute_force_opt(inst, a.exact_limit);
          shared_opt = opt;
        }
        opt_sum += opt->score;
      }

      Algorithm2Options options;
      options.schedule = c.schedule;
      options.sampler = c.sampler;
      options.sampler.seed = c.sampler.seed + static_cast<std::int64_t>(run) * kRunSeedStride;
      options.backend = backend.get();
      if (a.stop_at_opt && opt) options.known_optimum = opt->score;
      Algorithm2Result r = run_algorithm2(inst, options);
      bitflip_sum += r.score;
      bitflip_time += r.time_s;
      if (opt && r.score <= opt->score + 1e-9) ++hits;

      double lambda = a.lambda.value_or(default_penalty_lambda(inst));
      BaselineResult b = run_qubo_baseline(inst, lambda, options.sampler, backend.get());
      qubo_time += b.time_s;
      if (b.score) {
        ++qubo_feasible;
        qubo_sum += *b.score;
      }
    }
    const double runs = static_cast<double>(a.instances);
    o.stream() << n << ',' << a.instances << ',' << fmt(bitflip_sum / runs) << ','
               << fmt(timed(c.no_timing, bitflip_time / runs)) << ','
               << (qubo_feasible ? fmt(qubo_sum / static_cast<double>(qubo_feasible)) : "infeasible")
               << ',' << fmt(timed(c.no_timing, qubo_time / runs)) << ',' << qubo_feasible << ','
               << (exact ? fmt(opt_sum / runs) : "n/a") << ','
               << (exact ? std::to_string(hits) : "n/a") << '\n';
  }
  o.finish();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse QAP solver: relaxed one-hot sampling with bit-flip repair", "sqap"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read flags from a TOML/INI file");

  CommonOptions common;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a random instance as JSON");
  generate->add_option("--n", gen.n, "number of items and sites")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "instance seed")->capture_default_str();
  generate->add_option("--w", gen.w, "similarity weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  generate->add_option("--adjacency", gen.adjacency, "site adjacency")
      ->check(CLI::IsMember({"linear", "ring"}))
      ->capture_default_str();
  generate->add_option("--out", gen.out_path, "output file (default: stdout)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("instance", solve_args.instance_path, "instance JSON")->required();
  solve->add_option("--method", solve_args.method, "solver")
      ->check(CLI::IsMember({"ohzeki-bfha", "qubo-direct", "exact"}))
      ->capture_default_str();
  solve->add_option("--lambda", solve_args.lambda, "penalty weight for qubo-direct")->check(CLI::PositiveNumber);
  solve->add_option("--known-optimum", solve_args.known_optimum, "stop ohzeki-bfha once this score is reached");
  solve->add_option("--exact-limit", solve_args.exact_limit, "largest n the exact method accepts")
      ->capture_default_str();
  solve->add_option("--trace", solve_args.trace_path, "per-iteration JSON-lines trace (ohzeki-bfha)");
  add_sampler_flags(solve, common, true);
  add_schedule_flags(solve, common);
  add_output_flags(solve, common);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench-repair", "compare BFHA and Hungarian repair per size (CSV)");
  bench->add_option("--sizes", bench_args.sizes, "problem sizes")->check(CLI::PositiveNumber);
  bench->add_option("--samples", bench_args.samples, "infeasible samples per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "instance seed base (size n uses seed + n)")
      ->capture_default_str();
  bench->add_option("--warmup", bench_args.warmup, "multiplier rounds before collecting samples")
      ->capture_default_str();
  bench->add_option("--timing-repeats", bench_args.timing_repeats, "timed passes per method")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_sampler_flags(bench, common, false);
  add_schedule_flags(bench, common);
  add_output_flags(bench, common);

  ViolationsArgs viol_args;
  auto* violations = app.add_subcommand("violations", "histogram of violated one-hot constraints (CSV)");
  violations->add_option("instance", viol_args.instance_path, "instance JSON")->required();
  violations->add_option("--warmup", viol_args.warmup, "multiplier rounds before the sampled round")
      ->capture_default_str();
  add_sampler_flags(violations, common, true);
  add_schedule_flags(violations, common);
  add_output_flags(violations, common);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "per-size comparison of ohzeki-bfha, qubo-direct and exact (CSV)");
  report->add_option("--sizes", report_args.sizes, "problem sizes")->check(CLI::PositiveNumber);
  report->add_option("--instances", report_args.instances, "runs per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  report->add_option("--seed", report_args.seed, "instance seed base")->capture_default_str();
  report->add_option("--mode", report_args.mode, "instances: one run on each of several instances; runs: several runs of one instance")
      ->check(CLI::IsMember({"instances", "runs"}))
      ->capture_default_str();
  report->add_option("--lambda", report_args.lambda, "penalty weight for qubo-direct")->check(CLI::PositiveNumber);
  report->add_option("--exact-limit", report_args.exact_limit, "largest n solved exactly")->capture_default_str();
  report->add_flag("--stop-at-opt", report_args.stop_at_opt, "end ohzeki-bfha early once the exact optimum is reached");
  add_sampler_flags(report, common, false);
  add_schedule_flags(report, common);
  add_output_flags(report, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun 'sqap <command> --help' for usage\n";
    return kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*solve) return cmd_solve(solve_args, common, out);
    if (*bench) return cmd_bench_repair(bench_args, common, out);
    if (*violations) return cmd_violations(viol_args, common, out);
    if (*report) return cmd_report(report_args, common, out);
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}

}  // namespace sqap::cli
