#include "sqap/ohzeki.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sqap/qubo.hpp"
#include "sqap/repair.hpp"

namespace sqap {

void ScheduleConfig::validate() const {
  if (!(eta0 > 0.0)) throw std::invalid_argument("eta0 must be positive");
  if (!(decay > 0.0 && decay <= 1.0)) throw std::invalid_argument("decay must lie in (0, 1]");
  if (clamp_t < 1) throw std::invalid_argument("clamp_t must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

double eta(std::size_t t, const ScheduleConfig& sched) {
  if (t < 1) throw std::invalid_argument("eta: iterations are numbered from 1");
  std::size_t exponent = std::min(t, sched.clamp_t) - 1;
  return sched.eta0 * std::pow(sched.decay, static_cast<double>(exponent));
}

MultiplierState update_multipliers(const MultiplierState& state,
                                   const std::vector<double>& expectations,
                                   const ScheduleConfig& sched) {
  if (expectations.size() != state.v.size()) {
    throw std::invalid_argument("update_multipliers: " + std::to_string(state.v.size()) +
                                " multipliers but " + std::to_string(expectations.size()) +
                                " expectations");
  }
  const double step = eta(state.t, sched);
  MultiplierState next{state.v, state.t + 1};
  for (std::size_t k = 0; k < next.v.size(); ++k) next.v[k] += step * (1.0 - expectations[k]);
  return next;
}

std::vector<std::size_t> violation_histogram(const SampleBatch& batch, std::size_t n) {
  std::vector<std::size_t> bins(2 * n + 1, 0);
  for (const auto& bits : batch.samples) ++bins[count_violations(Assignment::from_flat(n, bits))];
  return bins;
}

nlohmann::json to_json(const IterationRecord& r) {
  return {{"t", r.t},
          {"eta", r.eta},
          {"multipliers", r.multipliers},
          {"expectations", r.expectations},
          {"quadratic_terms", r.quadratic_terms},
          {"iteration_best", r.iteration_best},
          {"best_so_far", r.best_so_far},
          {"raw_feasible", r.raw_feasible},
          {"repaired_feasible", r.repaired_feasible},
          {"violation_histogram", r.violation_histogram}};
}

void write_trace_jsonl(const OptimizationTrace& trace, std::ostream& out) {
  for (const auto& record : trace.iterations) out << to_json(record).dump() << '\n';
}

Algorithm2Result run_algorithm2(const QapInstance& inst, const Algorithm2Options& options) {
  using Clock = std::chrono::steady_clock;
  inst.validate();
  options.schedule.validate();
  options.sampler.validate();
  const std::size_t n = inst.n;
  const ConstraintSystem cs(n);
  GibbsSampler default_backend;
  const Sampler& backend = options.backend ? *options.backend : default_backend;

  MultiplierState state = MultiplierState::zeros(n);
  if (options.initial_multipliers) {
    if (options.initial_multipliers->size() != 2 * n) {
      throw std::invalid_argument("initial multipliers must have length 2n");
    }
    state.v = *options.initial_multipliers;
  }

  Algorithm2Result result;
  result.score = std::numeric_limits<double>::infinity();
  auto start = Clock::now();

  for (std::size_t t = 1; t <= options.schedule.max_iters; ++t) {
    Qubo qubo = build_relaxed_qubo(inst, state.v);
    SamplerConfig cfg = options.sampler;
    cfg.seed = options.sampler.seed + static_cast<std::int64_t>((t - 1) * cfg.num_reads);
    SampleBatch batch = backend.sample(qubo, cfg);

    IterationRecord record;
    record.t = t;
    record.eta = eta(state.t, options.schedule);
    record.multipliers = state.v;
    record.quadratic_terms = qubo.num_quadratic();
    record.iteration_best = std::numeric_limits<double>::infinity();
    record.violation_histogram.assign(2 * n + 1, 0);

    for (const auto& bits : batch.samples) {
      Assignment raw = Assignment::from_flat(n, bits);
      std::size_t violations = count_violations(raw);
      ++record.violation_histogram[violations];
      record.raw_feasible += violations == 0;
      RepairResult fixed = bfha_repair(raw);
      record.repaired_feasible += is_feasible(fixed.repaired);
      double score = objective(inst, fixed.repaired);
      record.iteration_best = std::min(record.iteration_best, score);
      if (score < result.score) {
        result.score = score;
        result.best = std::move(fixed.repaired);
      }
    }
    record.best_so_far = result.score;

    record.expectations = estimate_constraint_expectations(batch, cs);
    state = update_multipliers(state, record.expectations, options.schedule);
    result.trace.iterations.push_back(std::move(record));

    if (options.known_optimum && result.score <= *options.known_optimum + 1e-9) break;
    // A single item has exactly one feasible placement.
    if (n == 1) break;
  }

  result.final_state = std::move(state);
  result.time_s = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

MultiplierIteration::MultiplierIteration(const QapInstance& inst, ScheduleConfig schedule,
                                       SamplerConfig sampler, const Sampler* backend)
    : inst_(inst),
      schedule_(schedule),
      sampler_(sampler),
      backend_(backend),
      state_(MultiplierState::zeros(inst.n)) {
  inst_.validate();
  schedule_.validate();
  sampler_.validate();
}

SampleBatch MultiplierIteration::step() {
  SamplerConfig cfg = sampler_;
  cfg.seed = sampler_.seed + static_cast<std::int64_t>((state_.t - 1) * cfg.num_reads);
  Qubo qubo = build_relaxed_qubo(inst_, state_.v);
  SampleBatch batch = backend_ ? backend_->sample(qubo, cfg) : GibbsSampler{}.sample(qubo, cfg);
  state_ = update_multipliers(state_, estimate_constraint_expectations(batch, ConstraintSystem(inst_.n)),
                              schedule_);
  return batch;
}

SampleBatch relaxed_round(const QapInstance& inst, const ScheduleConfig& schedule,
                          const SamplerConfig& sampler, std::size_t warmup) {
  MultiplierIteration iteration(inst, schedule, sampler);
  for (std::size_t r = 0; r < warmup; ++r) iteration.step();
  return iteration.step();
}

std::vector<Assignment> collect_infeasible_samples(const QapInstance& inst,
                                                   const ScheduleConfig& schedule,
                                                   const SamplerConfig& sampler,
                                                   std::size_t warmup, std::size_t target,
                                                   std::size_t max_rounds) {
  MultiplierIteration iteration(inst, schedule, sampler);
  for (std::size_t r = 0; r < warmup; ++r) iteration.step();
  std::vector<Assignment> infeasible;
  for (std::size_t r = 0; r < max_rounds && infeasible.size() < target; ++r) {
    SampleBatch batch = iteration.step();
    for (const auto& bits : batch.samples) {
      Assignment q = Assignment::from_flat(inst.n, bits);
      if (!is_feasible(q) && infeasible.size() < target) infeasible.push_back(std::move(q));
    }
  }
  return infeasible;
}

BaselineResult run_qubo_baseline(const QapInstance& inst, double lambda,
                                 const SamplerConfig& sampler_cfg, const Sampler* backend) {
  using Clock = std::chrono::steady_clock;
  inst.validate();
  Qubo qubo = build_penalty_qubo(inst, lambda);
  GibbsSampler default_backend;
  const Sampler& sampler = backend ? *backend : default_backend;

  auto start = Clock::now();
  SampleBatch batch = sampler.sample(qubo, sampler_cfg);
  BaselineResult result;
  result.time_s = std::chrono::duration<double>(Clock::now() - start).count();

  for (const auto& bits : batch.samples) {
    Assignment q = Assignment::from_flat(inst.n, bits);
    if (!is_feasible(q)) continue;
    ++result.feasible_samples;
    double score = objective(inst, q);
    if (!result.score || score < *result.score) {
      result.score = score;
      result.best = std::move(q);
    }
  }
  return result;
}

}  // namespace sqap
