#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sqap/exact.hpp"
#include "sqap/ohzeki.hpp"

using namespace sqap;

namespace {

Algorithm2Options quick_options(std::int64_t seed, std::size_t iters = 4) {
  Algorithm2Options o;
  o.schedule.max_iters = iters;
  o.sampler.num_reads = 40;
  o.sampler.sweeps = 15;
  o.sampler.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("step size schedule") {
  ScheduleConfig s;
  CHECK(eta(1, s) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(eta(2, s) == doctest::Approx(0.092).epsilon(1e-15));
  double clamped = 0.1;
  for (int k = 0; k < 8; ++k) clamped *= 0.92;
  CHECK(eta(9, s) == doctest::Approx(clamped).epsilon(1e-14));
  CHECK(eta(30, s) == doctest::Approx(clamped).epsilon(1e-14));
  CHECK(eta(30, s) == doctest::Approx(0.0513219).epsilon(1e-6));
  CHECK(eta(8, s) > eta(9, s));
  CHECK_THROWS_AS(eta(0, s), std::invalid_argument);

  ScheduleConfig bad;
  bad.decay = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("multiplier update") {
  ScheduleConfig s;
  SUBCASE("expectations at target leave v unchanged") {
    MultiplierState st{{0.3, -0.2, 1.0, 0.0}, 5};
    auto next = update_multipliers(st, std::vector<double>(4, 1.0), s);
    CHECK(next.v == st.v);
    CHECK(next.t == 6);
  }
  SUBCASE("first step from zero") {
    auto next = update_multipliers(MultiplierState::zeros(3), std::vector<double>(6, 0.0), s);
    for (double x : next.v) CHECK(x == doctest::Approx(0.1));
    CHECK(next.t == 2);
  }
  SUBCASE("third step with over-covered constraints") {
    MultiplierState st{std::vector<double>(4, 0.2), 3};
    auto next = update_multipliers(st, std::vector<double>(4, 1.5), s);
    for (double x : next.v) CHECK(x == doctest::Approx(0.15768).epsilon(1e-12));
  }
  CHECK_THROWS_AS(update_multipliers(MultiplierState::zeros(2), std::vector<double>(3, 1.0), s),
                  std::invalid_argument);
}

TEST_CASE("algorithm 2 on a single item") {
  auto inst = generate_instance(1, 3);
  auto r = run_algorithm2(inst, Algorithm2Options{});
  CHECK(r.best == Assignment::identity(1));
  CHECK(r.score == -inst.s(0, 0));
  CHECK(r.trace.iterations.size() == 1);
}

TEST_CASE("algorithm 2 trace contract") {
  auto inst = generate_instance(6, 12);
  auto opts = quick_options(5, 6);
  auto r = run_algorithm2(inst, opts);
  CHECK(is_feasible(r.best));
  CHECK(r.score == doctest::Approx(objective(inst, r.best)).epsilon(1e-12));
  REQUIRE(r.trace.iterations.size() == 6);
  CHECK(r.final_state.t == 7);

  ScheduleConfig sched;
  MultiplierState replay = MultiplierState::zeros(6);
  double previous = 1e300;
  for (const auto& rec : r.trace.iterations) {
    CHECK(rec.best_so_far <= previous);
    CHECK(rec.best_so_far <= rec.iteration_best);
    previous = rec.best_so_far;
    CHECK(rec.multipliers == replay.v);
    CHECK(rec.eta == eta(rec.t, sched));
    CHECK(rec.repaired_feasible == opts.sampler.num_reads);
    CHECK(rec.violation_histogram.size() == 13);
    CHECK(std::accumulate(rec.violation_histogram.begin(), rec.violation_histogram.end(), std::size_t{0}) ==
          opts.sampler.num_reads);
    CHECK(rec.raw_feasible == rec.violation_histogram[0]);
    CHECK(rec.quadratic_terms == r.trace.iterations.front().quadratic_terms);
    replay = update_multipliers(replay, rec.expectations, sched);
  }
  CHECK(r.final_state.v == replay.v);
  CHECK(r.trace.iterations.back().best_so_far == r.score);
}

TEST_CASE("expectations come from the raw samples") {
  auto inst = generate_instance(4, 2);
  auto opts = quick_options(11, 2);
  auto r = run_algorithm2(inst, opts);
  // relaxed_round draws the same streams for the same round.
  auto first = relaxed_round(inst, opts.schedule, opts.sampler, 0);
  CHECK(r.trace.iterations[0].expectations == estimate_constraint_expectations(first, ConstraintSystem(4)));
  auto second = relaxed_round(inst, opts.schedule, opts.sampler, 1);
  CHECK(r.trace.iterations[1].expectations == estimate_constraint_expectations(second, ConstraintSystem(4)));
}

TEST_CASE("algorithm 2 is deterministic") {
  auto inst = generate_instance(5, 8);
  auto a = run_algorithm2(inst, quick_options(3));
  auto b = run_algorithm2(inst, quick_options(3));
  CHECK(a.best == b.best);
  CHECK(a.score == b.score);
  std::ostringstream ta, tb;
  write_trace_jsonl(a.trace, ta);
  write_trace_jsonl(b.trace, tb);
  const std::string text = ta.str();
  CHECK(text == tb.str());
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(first["t"] == 1);
  CHECK(first["multipliers"].size() == 10);
}

TEST_CASE("early stop at a known optimum") {
  auto inst = generate_instance(4, 21);
  auto opt = brute_force_opt(inst);
  auto opts = quick_options(1, 30);
  opts.known_optimum = opt.score;
  auto r = run_algorithm2(inst, opts);
  CHECK(r.score == doctest::Approx(opt.score));
  CHECK(r.trace.iterations.size() < 30);
}

TEST_CASE("algorithm 2 reaches the optimum at n = 5 with defaults") {
  auto inst = generate_instance(5, 42);
  auto r = run_algorithm2(inst, Algorithm2Options{});
  CHECK(r.score == doctest::Approx(brute_force_opt(inst).score).epsilon(1e-12));
}

TEST_CASE("initial multipliers") {
  auto inst = generate_instance(3, 1);
  auto opts = quick_options(0, 1);
  opts.initial_multipliers = std::vector<double>(6, 0.7);
  auto r = run_algorithm2(inst, opts);
  CHECK(r.trace.iterations[0].multipliers == std::vector<double>(6, 0.7));
  opts.initial_multipliers = std::vector<double>(5, 0.0);
  CHECK_THROWS_AS(run_algorithm2(inst, opts), std::invalid_argument);
}

TEST_CASE("returned solutions are always permutations") {
  std::mt19937_64 rng(17);
  for (int run = 0; run < 100; ++run) {
    std::size_t n = 2 + rng() % 19;
    auto inst = generate_instance(n, static_cast<std::int64_t>(rng() % 100000));
    Algorithm2Options o;
    o.schedule.max_iters = 2;
    o.sampler.num_reads = 5;
    o.sampler.sweeps = 3;
    o.sampler.beta_final = 0.5 + (rng() % 50) / 10.0;
    o.sampler.seed = static_cast<std::int64_t>(rng() % 1000000);
    auto r = run_algorithm2(inst, o);
    CHECK(is_feasible(r.best));
  }
}

TEST_CASE("qubo baseline") {
  SamplerConfig cfg;
  cfg.num_reads = 200;
  cfg.sweeps = 30;
  SUBCASE("one item") {
    auto inst = generate_instance(1, 2);
    auto r = run_qubo_baseline(inst, default_penalty_lambda(inst), cfg);
    REQUIRE(r.best);
    CHECK(*r.score == -inst.s(0, 0));
  }
  SUBCASE("strong penalty at n = 2") {
    auto inst = generate_instance(2, 5);
    auto r = run_qubo_baseline(inst, 10.0, cfg);
    REQUIRE(r.best);
    CHECK(is_feasible(*r.best));
    CHECK(*r.score == doctest::Approx(brute_force_opt(inst).score));
    CHECK(r.feasible_samples > 0);
  }
  SUBCASE("tiny penalty still only reports feasible samples") {
    GeneratorConfig gen;
    gen.sales_low = 5.0;
    gen.sales_high = 10.0;
    auto inst = generate_instance(4, 5, gen);
    auto r = run_qubo_baseline(inst, 1e-6, cfg);
    if (r.best) {
      CHECK(is_feasible(*r.best));
      CHECK(*r.score == objective(inst, *r.best));
    } else {
      CHECK_FALSE(r.score);
      CHECK(r.feasible_samples == 0);
    }
  }
  CHECK_THROWS_AS(run_qubo_baseline(generate_instance(2, 1), 0.0, cfg), std::invalid_argument);
}

TEST_CASE("infeasible sample collection") {
  auto inst = generate_instance(6, 3);
  SamplerConfig cfg;
  cfg.num_reads = 50;
  cfg.sweeps = 10;
  auto batch = collect_infeasible_samples(inst, ScheduleConfig{}, cfg, 2, 120);
  CHECK(batch.size() == 120);
  for (const auto& q : batch) CHECK_FALSE(is_feasible(q));
}
