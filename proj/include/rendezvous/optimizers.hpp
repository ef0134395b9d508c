#pragma once

// Uniform front end over the four population optimizers: the rendezvous
// objective over control polygons and the algorithm dispatch.

#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "rendezvous/cost_model.hpp"
#include "rendezvous/optimizers/bbo.hpp"
#include "rendezvous/optimizers/de.hpp"
#include "rendezvous/optimizers/fa.hpp"
#include "rendezvous/optimizers/pso.hpp"
#include "rendezvous/spline_path.hpp"

namespace rdv {

enum class Algorithm { Pso, Bbo, Fa, De };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Pso: return "pso";
    case Algorithm::Bbo: return "bbo";
    case Algorithm::Fa: return "fa";
    case Algorithm::De: return "de";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "pso") return Algorithm::Pso;
  if (s == "bbo") return Algorithm::Bbo;
  if (s == "fa") return Algorithm::Fa;
  if (s == "de") return Algorithm::De;
  throw InvalidConfig("unknown algorithm: " + s);
}

inline constexpr std::array<Algorithm, 4> kAllAlgorithms{Algorithm::Pso, Algorithm::Bbo, Algorithm::Fa, Algorithm::De};

struct OptimizerConfig {
  opt::PsoConfig pso;
  opt::BboConfig bbo;
  opt::FaConfig fa;
  opt::DeConfig de;

  OptimizerConfig& set_budget(int population, int iterations) {
    pso.population = bbo.population = fa.population = de.population = population;
    pso.iterations = bbo.iterations = fa.iterations = de.iterations = iterations;
    return *this;
  }
  int iterations(Algorithm a) const {
    switch (a) {
      case Algorithm::Pso: return pso.iterations;
      case Algorithm::Bbo: return bbo.iterations;
      case Algorithm::Fa: return fa.iterations;
      case Algorithm::De: return de.iterations;
    }
    return 0;
  }
  OptimizerConfig with_iterations(int iterations) const {
    OptimizerConfig c = *this;
    c.pso.iterations = c.bbo.iterations = c.fa.iterations = c.de.iterations = iterations;
    return c;
  }
};

/// Maps a control polygon to its cost. `bounds` defines the search box of the
/// interior points; start and target are held fixed.
struct ObjectiveContext {
  std::function<CostBreakdown(const ControlPolygon&)> cost;
  CorridorBounds bounds;
  Vec3 start = Vec3::Zero();
  Vec3 target = Vec3::Zero();

  std::size_t dimension() const { return 3 * bounds.size(); }
  opt::SearchSpace space() const { return {bounds.flat_lower(), bounds.flat_upper()}; }
  ControlPolygon polygon(std::span<const double> x) const { return ControlPolygon::from_flat(start, target, x); }
};

/// Vehicle and discretization settings shared by every plan of a mission.
struct PlanSettings {
  double water_speed = 2.5;
  int control_points = 7;
  int samples = 100;
  int degree = 3;
  VehicleLimits limits;
  PenaltyWeights weights;

  void validate() const {
    if (!(water_speed > 0.0)) throw InvalidConfig("water speed must be positive");
    if (control_points < 1) throw InvalidConfig("need at least one control point");
    if (samples < 2) throw InvalidConfig("need at least two curve samples");
    if (degree < 1) throw InvalidConfig("spline degree must be at least 1");
    limits.validate();
    weights.validate();
  }
};

inline Trajectory plan_trajectory(const ControlPolygon& poly, const EnvironmentSnapshot& env, const PlanSettings& s) {
  return synthesize_trajectory(poly, s.water_speed, env, s.samples, s.degree);
}

/// The penalty-augmented rendezvous objective over the given snapshot.
inline ObjectiveContext rendezvous_objective(std::shared_ptr<const EnvironmentSnapshot> env, const RendezvousSpec& spec,
                                             const PlanSettings& settings, CorridorBounds bounds) {
  settings.validate();
  spec.validate();
  if (!env) throw InvalidInput("objective needs an environment snapshot");
  auto sampler = std::make_shared<const SplineSampler>(static_cast<int>(bounds.size()) + 2, settings.samples,
                                                      settings.degree);
  ObjectiveContext ctx;
  ctx.bounds = std::move(bounds);
  ctx.start = spec.initial.position();
  ctx.target = spec.final.position();
  ctx.cost = [env, spec, settings, sampler](const ControlPolygon& poly) {
    std::vector<Vec3> pts;
    sampler->sample(poly.all_points(), pts);
    const auto traj = synthesize_trajectory(pts, settings.water_speed, env->current);
    return evaluate(traj, *env, settings.limits, spec, settings.weights);
  };
  return ctx;
}

struct OptimizerRun {
  Algorithm algorithm = Algorithm::Pso;
  ControlPolygon best;
  CostBreakdown best_cost;
  std::vector<opt::IterationRecord> history;
  int iterations_used = 0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
};

inline OptimizerRun optimize(Algorithm algo, const ObjectiveContext& ctx, const OptimizerConfig& cfg,
                             std::uint64_t seed, const ControlPolygon* warm_start = nullptr) {
  if (!ctx.cost) throw InvalidConfig("objective context has no cost function");
  const auto space = ctx.space();
  std::vector<double> warm;
  if (warm_start) {
    if (warm_start->interior.size() != ctx.bounds.size()) throw InvalidInput("warm start has the wrong point count");
    warm = warm_start->flatten();
  }
  const std::vector<double>* w = warm_start ? &warm : nullptr;
  auto f = [&ctx](std::span<const double> x) {
    const auto c = ctx.cost(ctx.polygon(x));
    return opt::Fitness{c.total, c.collision_violation()};
  };
  opt::GenericRun g;
  switch (algo) {
    case Algorithm::Pso: g = opt::pso_minimize(space, f, cfg.pso, seed, w); break;
    case Algorithm::Bbo: g = opt::bbo_minimize(space, f, cfg.bbo, seed, w); break;
    case Algorithm::Fa: g = opt::fa_minimize(space, f, cfg.fa, seed, w); break;
    case Algorithm::De: g = opt::de_minimize(space, f, cfg.de, seed, w); break;
  }
  OptimizerRun run;
  run.algorithm = algo;
  run.best = ctx.polygon(g.best);
  run.best_cost = ctx.cost(run.best);
  run.history = std::move(g.history);
  run.iterations_used = g.iterations;
  run.evaluations = g.evaluations;
  run.seed = seed;
  return run;
}

inline OptimizerRun optimize(const std::string& algo, const ObjectiveContext& ctx, const OptimizerConfig& cfg,
                             std::uint64_t seed, const ControlPolygon* warm_start = nullptr) {
  return optimize(algorithm_from_string(algo), ctx, cfg, seed, warm_start);
}

inline std::string convergence_csv(const OptimizerRun& run) {
  std::string out = "iteration,best_total,mean_total,collision_violation\n";
  char buf[160];
  for (const auto& h : run.history) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g\n", h.iteration, h.best_total, h.mean_total,
                  h.best_violation);
    out += buf;
  }
  return out;
}

inline nlohmann::json to_json(const OptimizerConfig& c) {
  return {{"pso",
           {{"population", c.pso.population},
            {"iterations", c.pso.iterations},
            {"omega_start", c.pso.omega_start},
            {"omega_end", c.pso.omega_end},
            {"c1", c.pso.c1},
            {"c2", c.pso.c2},
            {"velocity_clamp", c.pso.velocity_clamp}}},
          {"bbo",
           {{"population", c.bbo.population},
            {"iterations", c.bbo.iterations},
            {"keep_fraction", c.bbo.keep_fraction},
            {"new_fraction", c.bbo.new_fraction},
            {"emigration", c.bbo.emigration},
            {"immigration", c.bbo.immigration},
            {"max_mutation", c.bbo.max_mutation},
            {"mutation_step", c.bbo.mutation_step}}},
          {"fa",
           {{"population", c.fa.population},
            {"iterations", c.fa.iterations},
            {"beta0", c.fa.beta0},
            {"gamma", c.fa.gamma},
            {"delta", c.fa.delta},
            {"alpha0", c.fa.alpha0}}},
          {"de",
           {{"population", c.de.population},
            {"iterations", c.de.iterations},
            {"scale_min", c.de.scale_min},
            {"scale_max", c.de.scale_max},
            {"crossover_rate", c.de.crossover_rate},
            {"donor_blend", c.de.donor_blend}}}};
}

inline OptimizerConfig optimizer_config_from_json(const nlohmann::json& j, OptimizerConfig c = {}) {
  if (j.contains("population") || j.contains("iterations"))
    c.set_budget(j.value("population", c.pso.population), j.value("iterations", c.pso.iterations));
  if (auto it = j.find("pso"); it != j.end()) {
    c.pso.population = it->value("population", c.pso.population);
    c.pso.iterations = it->value("iterations", c.pso.iterations);
    c.pso.omega_start = it->value("omega_start", c.pso.omega_start);
    c.pso.omega_end = it->value("omega_end", c.pso.omega_end);
    c.pso.c1 = it->value("c1", c.pso.c1);
    c.pso.c2 = it->value("c2", c.pso.c2);
    c.pso.velocity_clamp = it->value("velocity_clamp", c.pso.velocity_clamp);
  }
  if (auto it = j.find("bbo"); it != j.end()) {
    c.bbo.population = it->value("population", c.bbo.population);
    c.bbo.iterations = it->value("iterations", c.bbo.iterations);
    c.bbo.keep_fraction = it->value("keep_fraction", c.bbo.keep_fraction);
    c.bbo.new_fraction = it->value("new_fraction", c.bbo.new_fraction);
    c.bbo.emigration = it->value("emigration", c.bbo.emigration);
    c.bbo.immigration = it->value("immigration", c.bbo.immigration);
    c.bbo.max_mutation = it->value("max_mutation", c.bbo.max_mutation);
    c.bbo.mutation_step = it->value("mutation_step", c.bbo.mutation_step);
  }
  if (auto it = j.find("fa"); it != j.end()) {
    c.fa.population = it->value("population", c.fa.population);
    c.fa.iterations = it->value("iterations", c.fa.iterations);
    c.fa.beta0 = it->value("beta0", c.fa.beta0);
    c.fa.gamma = it->value("gamma", c.fa.gamma);
    c.fa.delta = it->value("delta", c.fa.delta);
    c.fa.alpha0 = it->value("alpha0", c.fa.alpha0);
  }
  if (auto it = j.find("de"); it != j.end()) {
    c.de.population = it->value("population", c.de.population);
    c.de.iterations = it->value("iterations", c.de.iterations);
    c.de.scale_min = it->value("scale_min", c.de.scale_min);
    c.de.scale_max = it->value("scale_max", c.de.scale_max);
    c.de.crossover_rate = it->value("crossover_rate", c.de.crossover_rate);
    c.de.donor_blend = it->value("donor_blend", c.de.donor_blend);
  }
  c.pso.validate();
  c.bbo.validate();
  c.fa.validate();
  c.de.validate();
  return c;
}

}  // namespace rdv
