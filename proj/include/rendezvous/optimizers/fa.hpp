#pragma once

#include <cmath>
#include <vector>

#include "rendezvous/optimizers/search_space.hpp"

namespace rdv::opt {

struct FaConfig {
  int population = 100;
  int iterations = 100;
  double beta0 = 2.0;
  double gamma = 1.0;
  double delta = 0.97;   // alpha damping
  double alpha0 = 0.4;   // initial randomization, as a fraction of the box width

  void validate() const {
    if (population < 2) throw InvalidConfig("FA needs at least 2 fireflies");
    if (iterations < 0) throw InvalidConfig("FA iteration count must be non-negative");
    if (beta0 < 0 || gamma < 0 || alpha0 < 0 || !(delta > 0 && delta < 1)) throw InvalidConfig("bad FA coefficients");
  }
};

inline double fa_attraction(double beta0, double gamma, double distance) {
  return beta0 * std::exp(-gamma * distance * distance);
}

inline double fa_alpha(const FaConfig& cfg, int t) { return cfg.alpha0 * std::pow(cfg.delta, t); }

/// Distance between fireflies measured in units of the box diagonal.
inline double fa_distance(std::span<const double> a, std::span<const double> b, double diagonal) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return diagonal > 0.0 ? std::sqrt(s) / diagonal : 0.0;
}

/// x_i += beta (x_j - x_i) + alpha (rand - 1/2) * width, one rand per dimension.
template <typename Rand01>
void fa_move(std::span<double> xi, std::span<const double> xj, double beta, double alpha, const SearchSpace& space,
             Rand01&& rand01) {
  for (std::size_t d = 0; d < xi.size(); ++d) xi[d] += beta * (xj[d] - xi[d]) + alpha * (rand01() - 0.5) * space.width(d);
}

template <typename Objective>
GenericRun fa_minimize(const SearchSpace& space, Objective&& f, const FaConfig& cfg, std::uint64_t seed,
                       const std::vector<double>* warm_start = nullptr) {
  cfg.validate();
  check_common(space, cfg.population, cfg.iterations);
  Rng rng(seed);
  Recorder rec(f, seed);
  const std::size_t n = cfg.population, dim = space.dimension();
  double diagonal = 0.0;
  for (std::size_t d = 0; d < dim; ++d) diagonal += space.width(d) * space.width(d);
  diagonal = std::sqrt(diagonal);
  auto rand01 = [&rng] { return uniform01(rng); };

  std::vector<std::vector<double>> x(n);
  for (auto& p : x) p = space.random_point(rng);
  seed_population(x, space, warm_start);
  std::vector<Fitness> fit(n);
  for (std::size_t i = 0; i < n; ++i) fit[i] = rec.evaluate(x[i]);
  rec.close_iteration(0, fit);

  for (int t = 1; t <= cfg.iterations; ++t) {
    const double alpha = fa_alpha(cfg, t);
    // Moves use the brightness at the start of the generation.
    auto moved = x;
    for (std::size_t i = 0; i < n; ++i) {
      bool attracted = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(fit[j].total < fit[i].total)) continue;
        const double beta = fa_attraction(cfg.beta0, cfg.gamma, fa_distance(moved[i], x[j], diagonal));
        fa_move(moved[i], x[j], beta, alpha, space, rand01);
        attracted = true;
      }
      if (!attracted) fa_move(moved[i], x[i], 0.0, alpha, space, rand01);
      space.clip(moved[i]);
    }
    std::vector<Fitness> moved_fit(n);
    for (std::size_t i = 0; i < n; ++i) moved_fit[i] = rec.evaluate(moved[i]);

    // Rank old and new fireflies together and keep the brightest n.
    std::vector<Fitness> all(fit);
    all.insert(all.end(), moved_fit.begin(), moved_fit.end());
    const auto order = rank_by_total(all);
    std::vector<std::vector<double>> next(n);
    std::vector<Fitness> next_fit(n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t k = order[r];
      next[r] = k < n ? x[k] : moved[k - n];
      next_fit[r] = all[k];
    }
    x = std::move(next);
    fit = std::move(next_fit);
    rec.close_iteration(t, fit);
  }
  return std::move(rec).finish();
}

}  // namespace rdv::opt
