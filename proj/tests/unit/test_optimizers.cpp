#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"

using namespace rdv;
using opt::Fitness;
using opt::GenericRun;
using opt::SearchSpace;

namespace {

SearchSpace cube(std::size_t dim, double lo, double hi) {
  return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

Fitness sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return {s, 0.0};
}

Fitness shifted_rastrigin_free(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += (x[d] - 0.3 * d) * (x[d] - 0.3 * d) + 0.1 * std::abs(x[d]);
  return {s, 0.5 * s};
}

using Runner = std::function<GenericRun(const SearchSpace&, std::function<Fitness(std::span<const double>)>,
                                        int pop, int iters, std::uint64_t, const std::vector<double>*)>;

Runner runner(Algorithm a) {
  return [a](const SearchSpace& s, std::function<Fitness(std::span<const double>)> f, int pop, int iters,
             std::uint64_t seed, const std::vector<double>* warm) {
    OptimizerConfig cfg;
    cfg.set_budget(pop, iters);
    switch (a) {
      case Algorithm::Pso: return opt::pso_minimize(s, f, cfg.pso, seed, warm);
      case Algorithm::Bbo: return opt::bbo_minimize(s, f, cfg.bbo, seed, warm);
      case Algorithm::Fa: return opt::fa_minimize(s, f, cfg.fa, seed, warm);
      case Algorithm::De: return opt::de_minimize(s, f, cfg.de, seed, warm);
    }
    return GenericRun{};
  };
}

// A small rendezvous objective: open water, still current, one interior point.
ObjectiveContext tiny_context(double offset = 0.0) {
  CurrentField f;
  f.layers = {{Vortex{Vec2::Zero(), 1.0, 0.0}}};
  auto env = std::make_shared<const EnvironmentSnapshot>(make_snapshot(GridMap::open_water(300, 300, 10.0), f, {}));
  RendezvousSpec spec;
  spec.initial.x = 200;
  spec.initial.y = 200;
  spec.final.x = 2200 + offset;
  spec.final.y = 1700;
  spec.rendezvous_time = 1200;
  spec.epsilon = 200;
  PlanSettings s;
  s.control_points = 1;
  s.samples = 40;
  return rendezvous_objective(env, spec, s, corridor_bounds(spec.initial.position(), spec.final.position(), 1));
}

}  // namespace

TEST(Pso, HandStep) {
  const double v = opt::pso_velocity(0.5, 1.0, 1.0, 1.0, 0.0, 2.0, 4.0);
  EXPECT_EQ(v, 6.5);
  EXPECT_EQ(0.0 + v, 6.5);
}

TEST(Pso, FixedPointWithoutInertia) {
  const double x = 3.25;
  const double v = opt::pso_velocity(0.0, 7.0, 1.3, 2.1, x, x, x);
  EXPECT_EQ(v, 0.0);
  EXPECT_EQ(x + v, x);
}

TEST(Pso, InertiaScheduleEndpoints) {
  opt::PsoConfig cfg;
  cfg.iterations = 100;
  EXPECT_DOUBLE_EQ(opt::pso_inertia(cfg, 1), 1.4);
  EXPECT_DOUBLE_EQ(opt::pso_inertia(cfg, 100), 0.5);
  EXPECT_LT(opt::pso_inertia(cfg, 60), opt::pso_inertia(cfg, 59));
}

TEST(Pso, SphereConvergesAcrossSeeds) {
  const auto space = cube(3, -5.0, 5.0);
  opt::PsoConfig cfg;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto run = opt::pso_minimize(space, sphere, cfg, seed);
    EXPECT_LT(run.best_fitness.total, 1e-3) << "seed " << seed;
  }
}

TEST(Optimizers, SphereConvergesForEveryAlgorithm) {
  const auto space = cube(3, -5.0, 5.0);
  for (Algorithm a : kAllAlgorithms)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto run = runner(a)(space, sphere, 100, 100, seed, nullptr);
      // the firefly random walk still spans ~2% of the box after 100 iterations
      const double tol = a == Algorithm::Fa ? 1e-2 : 1e-3;
      EXPECT_LT(run.best_fitness.total, tol) << to_string(a) << " seed " << seed;
    }
}

TEST(Bbo, LinearRates) {
  const auto half = opt::bbo_rates(5.0, 10.0);
  EXPECT_DOUBLE_EQ(half.lambda, 0.5);
  EXPECT_DOUBLE_EQ(half.mu, 0.5);
  const auto empty = opt::bbo_rates(0.0, 10.0, 0.8, 1.0);
  EXPECT_DOUBLE_EQ(empty.lambda, 0.8);
  EXPECT_DOUBLE_EQ(empty.mu, 0.0);
}

TEST(Bbo, MostProbableHabitatNeverMutates) {
  const auto p = opt::species_probabilities(10);
  const double pmax = *std::max_element(p.begin(), p.end());
  EXPECT_EQ(opt::mutation_rate(pmax, pmax, 0.1), 0.0);
  EXPECT_GT(opt::mutation_rate(p[0], pmax, 0.1), 0.0);
}

TEST(Bbo, SpeciesProbabilitiesAreBinomialForEqualRates) {
  const int n = 12;
  const auto p = opt::species_probabilities(n);
  double sum = 0.0;
  for (int s = 0; s <= n; ++s) {
    const double binom = std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0)) / std::pow(2.0, n);
    EXPECT_NEAR(p[s], binom, 1e-12);
    sum += p[s];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_THROW(opt::species_probabilities(0), InvalidConfig);
}

TEST(Fa, AttractionArithmetic) {
  EXPECT_DOUBLE_EQ(opt::fa_attraction(2.0, 1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(opt::fa_attraction(2.0, 1.0, 1.0), 2.0 * std::exp(-1.0));
  opt::FaConfig cfg;
  cfg.alpha0 = 0.4;
  cfg.delta = 0.97;
  EXPECT_DOUBLE_EQ(opt::fa_alpha(cfg, 0), 0.4);
  EXPECT_NEAR(opt::fa_alpha(cfg, 3), 0.4 * 0.97 * 0.97 * 0.97, 1e-15);
}

TEST(Fa, DeterministicPairMoveWithoutRandomization) {
  const auto space = cube(2, -10.0, 10.0);
  opt::FaConfig cfg;
  cfg.population = 2;
  cfg.iterations = 1;
  cfg.alpha0 = 0.0;
  cfg.beta0 = 0.5;
  std::vector<std::vector<double>> seen;
  auto f = [&](std::span<const double> x) {
    seen.emplace_back(x.begin(), x.end());
    return sphere(x);
  };
  opt::fa_minimize(space, f, cfg, 17);
  ASSERT_EQ(seen.size(), 4u);
  const bool first_brighter = sphere(seen[0]).total < sphere(seen[1]).total;
  const auto& bright = first_brighter ? seen[0] : seen[1];
  const auto& dim = first_brighter ? seen[1] : seen[0];
  const auto& dim_moved = first_brighter ? seen[3] : seen[2];
  const auto& bright_moved = first_brighter ? seen[2] : seen[3];
  const double diag = std::sqrt(2.0) * 20.0;
  const double l = std::hypot(bright[0] - dim[0], bright[1] - dim[1]) / diag;
  const double beta = 0.5 * std::exp(-l * l);
  for (int d = 0; d < 2; ++d) {
    EXPECT_NEAR(dim_moved[d], dim[d] + beta * (bright[d] - dim[d]), 1e-12);
    EXPECT_EQ(bright_moved[d], bright[d]);
  }
}

TEST(De, MutantArithmetic) {
  const std::vector<double> r3{0.0}, r1{2.0}, r2{1.0};
  EXPECT_EQ(opt::de_mutant(r3, r1, r2, 0.5)[0], 0.5);
  const std::vector<double> base{1.0, -2.0, 3.0}, same{4.0, 4.0, 4.0};
  EXPECT_EQ(opt::de_mutant(base, same, same, 0.7), base);
}

TEST(De, CrossoverSaturationAndForcedIndex) {
  const std::vector<double> parent{1, 2, 3, 4}, mutant{5, 6, 7, 8};
  const std::vector<double> rand{0.99, 0.5, 0.01, 1.0};
  EXPECT_EQ(opt::de_crossover(parent, mutant, 1.0, 0, rand), mutant);
  const auto t = opt::de_crossover(parent, mutant, 0.2, 1, rand);
  EXPECT_EQ(t, (std::vector<double>{1, 6, 7, 4}));
}

TEST(De, DonorBlendWeights) {
  const std::vector<double> a{0.0}, b{3.0}, c{6.0};
  const auto d = opt::de_donor({std::span<const double>(a), std::span<const double>(b), std::span<const double>(c)},
                               {1.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(d[0], 0.25 * 0.0 + 0.25 * 3.0 + 0.5 * 6.0);
}

TEST(Optimizers, ConfigValidation) {
  const auto space = cube(2, 0, 1);
  opt::DeConfig de;
  de.population = 3;
  EXPECT_THROW(opt::de_minimize(space, sphere, de, 1), InvalidConfig);
  opt::PsoConfig pso;
  pso.population = 1;
  EXPECT_THROW(opt::pso_minimize(space, sphere, pso, 1), InvalidConfig);
  EXPECT_THROW(algorithm_from_string("ga"), InvalidConfig);
  EXPECT_THROW(optimize("nelder-mead", tiny_context(), OptimizerConfig{}.set_budget(10, 2), 1), InvalidConfig);
  SearchSpace bad{{0.0, 1.0}, {1.0, 0.5}};
  EXPECT_THROW(opt::pso_minimize(bad, sphere, opt::PsoConfig{}, 1), InvalidConfig);
}

TEST(Optimizers, ConstantObjectiveGivesFlatHistory) {
  auto ctx = tiny_context();
  ctx.cost = [](const ControlPolygon&) {
    CostBreakdown c;
    c.total = 4.25;
    return c;
  };
  for (Algorithm a : kAllAlgorithms) {
    OptimizerConfig cfg;
    cfg.set_budget(12, 15);
    const auto run = optimize(a, ctx, cfg, 3);
    EXPECT_EQ(run.best_cost.total, 4.25);
    ASSERT_EQ(run.history.size(), 16u);
    for (const auto& h : run.history) {
      EXPECT_EQ(h.best_total, 4.25);
      EXPECT_EQ(h.mean_total, 4.25);
    }
  }
}

TEST(Optimizers, HistoryIsNonIncreasingAndCandidatesStayInBounds) {
  const auto space = cube(5, -2.0, 3.0);
  for (Algorithm a : kAllAlgorithms)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      int outside = 0;
      double best_seen = kInfinity;
      auto f = [&](std::span<const double> x) {
        outside += !space.contains(x);
        const auto fit = shifted_rastrigin_free(x);
        best_seen = std::min(best_seen, fit.total);
        return fit;
      };
      const auto run = runner(a)(space, f, 20, 40, seed, nullptr);
      EXPECT_EQ(outside, 0) << to_string(a);
      ASSERT_EQ(run.history.size(), 41u);
      for (std::size_t i = 1; i < run.history.size(); ++i)
        EXPECT_LE(run.history[i].best_total, run.history[i - 1].best_total) << to_string(a);
      EXPECT_EQ(run.best_fitness.total, best_seen);
      EXPECT_EQ(run.history.back().best_total, best_seen);
      EXPECT_EQ(run.history.back().best_violation, 0.5 * best_seen);
    }
}

TEST(Optimizers, EqualSeedsGiveEqualRuns) {
  const auto ctx = tiny_context();
  OptimizerConfig cfg;
  cfg.set_budget(15, 10);
  for (Algorithm a : kAllAlgorithms) {
    const auto r1 = optimize(a, ctx, cfg, 99);
    const auto r2 = optimize(a, ctx, cfg, 99);
    EXPECT_EQ(r1.best.flatten(), r2.best.flatten());
    EXPECT_EQ(r1.best_cost.total, r2.best_cost.total);
    ASSERT_EQ(r1.history.size(), r2.history.size());
    for (std::size_t i = 0; i < r1.history.size(); ++i) {
      EXPECT_EQ(r1.history[i].best_total, r2.history[i].best_total);
      EXPECT_EQ(r1.history[i].mean_total, r2.history[i].mean_total);
    }
    EXPECT_EQ(r1.evaluations, r2.evaluations);
  }
}

TEST(Optimizers, WarmStartAtTheOptimumIsNeverBeaten) {
  const auto space = cube(3, -4.0, 4.0);
  const std::vector<double> opt_point{0.0, 0.0, 0.0};
  for (Algorithm a : kAllAlgorithms) {
    const auto run = runner(a)(space, sphere, 10, 20, 5, &opt_point);
    for (const auto& h : run.history) EXPECT_EQ(h.best_total, 0.0) << to_string(a);
    EXPECT_EQ(run.best, opt_point);
  }
}

TEST(Optimizers, WarmStartDimensionMismatchThrows) {
  const auto space = cube(3, -1, 1);
  const std::vector<double> wrong{0.0, 0.0};
  EXPECT_THROW(opt::pso_minimize(space, sphere, opt::PsoConfig{}, 1, &wrong), InvalidInput);
}

TEST(Optimizers, RendezvousObjectiveMatchesDirectEvaluation) {
  const auto ctx = tiny_context();
  Rng rng(8);
  const auto poly = random_polygon(ctx.bounds, ctx.start, ctx.target, rng);
  CurrentField f;
  f.layers = {{Vortex{Vec2::Zero(), 1.0, 0.0}}};
  const auto env = make_snapshot(GridMap::open_water(300, 300, 10.0), f, {});
  const auto traj = synthesize_trajectory(sample_curve(poly, 40), 2.5, f);
  RendezvousSpec spec;
  spec.initial.x = 200;
  spec.initial.y = 200;
  spec.final.x = 2200;
  spec.final.y = 1700;
  spec.rendezvous_time = 1200;
  spec.epsilon = 200;
  EXPECT_EQ(ctx.cost(poly).total, evaluate(traj, env, {}, spec, {}).total);
}

TEST(Optimizers, TinyProblemReachesTheGridMinimum) {
  const auto ctx = tiny_context();
  const auto lo = ctx.bounds.lower[0], hi = ctx.bounds.upper[0];
  const double grid = oracle::grid_minimum(
      [&](const Vec3& p) {
        ControlPolygon poly{ctx.start, {p}, ctx.target};
        return ctx.cost(poly).total;
      },
      lo, hi, 10);
  OptimizerConfig cfg;
  cfg.set_budget(30, 50);
  for (Algorithm a : kAllAlgorithms) {
    const auto run = optimize(a, ctx, cfg, 1);
    EXPECT_LE(run.best_cost.total, 1.05 * grid + 1e-12) << to_string(a);
  }
}

TEST(Optimizers, ConvergenceCsvHasOneRowPerRecord) {
  OptimizerConfig cfg;
  cfg.set_budget(8, 4);
  const auto run = optimize(Algorithm::De, tiny_context(), cfg, 1);
  const auto csv = convergence_csv(run);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), run.history.size() + 1);
  const auto back = optimizer_config_from_json(to_json(cfg));
  EXPECT_EQ(back.de.population, 8);
  EXPECT_EQ(back.fa.iterations, 4);
}
