#pragma once

#include <vector>

#include "rendezvous/optimizers/search_space.hpp"

namespace rdv::opt {

struct PsoConfig {
  int population = 100;
  int iterations = 100;
  double omega_start = 1.4;
  double omega_end = 0.5;
  double c1 = 2.0;
  double c2 = 2.5;
  double velocity_clamp = 0.2;  // fraction of the box width per dimension

  void validate() const {
    if (population < 2) throw InvalidConfig("PSO needs at least 2 particles");
    if (iterations < 0) throw InvalidConfig("PSO iteration count must be non-negative");
    if (c1 < 0 || c2 < 0 || velocity_clamp <= 0) throw InvalidConfig("bad PSO coefficients");
  }
};

/// v' = omega v + c1r1 (pbest - x) + c2r2 (gbest - x); the caller supplies
/// the already-multiplied c1 r1 and c2 r2.
inline double pso_velocity(double omega, double v, double c1r1, double c2r2, double x, double pbest, double gbest) {
  return omega * v + c1r1 * (pbest - x) + c2r2 * (gbest - x);
}

inline double pso_inertia(const PsoConfig& cfg, int t) {
  if (cfg.iterations <= 1) return cfg.omega_start;
  const double f = static_cast<double>(t - 1) / (cfg.iterations - 1);
  return cfg.omega_start + (cfg.omega_end - cfg.omega_start) * f;
}

template <typename Objective>
GenericRun pso_minimize(const SearchSpace& space, Objective&& f, const PsoConfig& cfg, std::uint64_t seed,
                        const std::vector<double>* warm_start = nullptr) {
  cfg.validate();
  check_common(space, cfg.population, cfg.iterations);
  Rng rng(seed);
  Recorder rec(f, seed);
  const std::size_t n = cfg.population, dim = space.dimension();

  std::vector<double> vmax(dim);
  for (std::size_t d = 0; d < dim; ++d) vmax[d] = cfg.velocity_clamp * space.width(d);

  std::vector<std::vector<double>> x(n), v(n, std::vector<double>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = space.random_point(rng);
    for (std::size_t d = 0; d < dim; ++d) v[i][d] = uniform(rng, -vmax[d], vmax[d]);
  }
  seed_population(x, space, warm_start);

  std::vector<Fitness> fit(n);
  for (std::size_t i = 0; i < n; ++i) fit[i] = rec.evaluate(x[i]);
  auto pbest = x;
  auto pbest_fit = fit;
  std::size_t g = rank_by_total(pbest_fit).front();
  rec.close_iteration(0, fit);

  for (int t = 1; t <= cfg.iterations; ++t) {
    const double omega = pso_inertia(cfg, t);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double r1 = uniform01(rng), r2 = uniform01(rng);
        double vi = pso_velocity(omega, v[i][d], cfg.c1 * r1, cfg.c2 * r2, x[i][d], pbest[i][d], pbest[g][d]);
        v[i][d] = std::clamp(vi, -vmax[d], vmax[d]);
        x[i][d] += v[i][d];
      }
      space.clip(x[i]);
      fit[i] = rec.evaluate(x[i]);
      if (fit[i].total <= pbest_fit[i].total) {
        pbest[i] = x[i];
        pbest_fit[i] = fit[i];
        if (fit[i].total < pbest_fit[g].total) g = i;
      }
    }
    rec.close_iteration(t, fit);
  }
  return std::move(rec).finish();
}

}  // namespace rdv::opt
