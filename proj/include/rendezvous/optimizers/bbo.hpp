#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rendezvous/optimizers/search_space.hpp"

namespace rdv::opt {

struct BboConfig {
  int population = 100;
  int iterations = 100;
  double keep_fraction = 0.4;  // elites carried over unchanged
  double new_fraction = 0.4;   // best migrated offspring admitted; the rest is fresh random habitats
  double emigration = 1.0;     // E
  double immigration = 1.0;    // I
  double max_mutation = 0.1;   // m_max
  double mutation_step = 0.1;  // initial Gaussian step as a fraction of the box width

  int keep_count() const { return static_cast<int>(std::lround(keep_fraction * population)); }
  int new_count() const { return static_cast<int>(std::lround(new_fraction * population)); }

  void validate() const {
    if (population < 2) throw InvalidConfig("BBO needs at least 2 habitats");
    if (iterations < 0) throw InvalidConfig("BBO iteration count must be non-negative");
    if (keep_fraction < 0 || new_fraction < 0 || keep_count() < 1 || keep_count() + new_count() > population)
      throw InvalidConfig("BBO kept + new habitats must fit in the population and keep at least one");
    if (emigration < 0 || immigration < 0 || max_mutation < 0 || max_mutation > 1 || mutation_step < 0)
      throw InvalidConfig("bad BBO rates");
  }
};

struct MigrationRates {
  double lambda = 0.0;  // immigration
  double mu = 0.0;      // emigration
};

/// Linear migration model for a habitat holding S of S_max species.
inline MigrationRates bbo_rates(double species, double s_max, double immigration = 1.0, double emigration = 1.0) {
  return {immigration * (1.0 - species / s_max), emigration * species / s_max};
}

/// Stationary distribution of the species-count birth-death chain over
/// S = 0..S_max (the steady state of dP_S/dt = 0). With E = I it is the
/// binomial(S_max, 1/2) law.
inline std::vector<double> species_probabilities(int s_max, double immigration = 1.0, double emigration = 1.0) {
  if (s_max < 1) throw InvalidConfig("S_max must be at least 1");
  std::vector<double> logp(s_max + 1, 0.0);
  for (int s = 1; s <= s_max; ++s) {
    const double birth = bbo_rates(s - 1, s_max, immigration, emigration).lambda;
    const double death = bbo_rates(s, s_max, immigration, emigration).mu;
    logp[s] = logp[s - 1] + std::log(birth) - std::log(death);
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  std::vector<double> p(s_max + 1);
  double sum = 0.0;
  for (int s = 0; s <= s_max; ++s) sum += p[s] = std::exp(logp[s] - top);
  for (auto& x : p) x /= sum;
  return p;
}

/// m(S) = m_max (1 - P_S / P_max).
inline double mutation_rate(double p_s, double p_max, double m_max) { return m_max * (1.0 - p_s / p_max); }

template <typename Objective>
GenericRun bbo_minimize(const SearchSpace& space, Objective&& f, const BboConfig& cfg, std::uint64_t seed,
                        const std::vector<double>* warm_start = nullptr) {
  cfg.validate();
  check_common(space, cfg.population, cfg.iterations);
  Rng rng(seed);
  Recorder rec(f, seed);
  const std::size_t n = cfg.population, dim = space.dimension();
  const int s_max = cfg.population;
  const auto ps = species_probabilities(s_max, cfg.immigration, cfg.emigration);
  const double p_max = *std::max_element(ps.begin(), ps.end());

  std::vector<std::vector<double>> h(n);
  for (auto& x : h) x = space.random_point(rng);
  seed_population(h, space, warm_start);
  std::vector<Fitness> fit(n);
  for (std::size_t i = 0; i < n; ++i) fit[i] = rec.evaluate(h[i]);
  rec.close_iteration(0, fit);

  std::vector<MigrationRates> rate(n);
  std::vector<double> mut(n);
  for (int t = 1; t <= cfg.iterations; ++t) {
    // Rank by HSI: the best habitat holds S_max species, the worst holds 1.
    const auto order = rank_by_total(fit);
    {
      std::vector<std::vector<double>> sorted(n);
      std::vector<Fitness> sorted_fit(n);
      for (std::size_t r = 0; r < n; ++r) {
        sorted[r] = std::move(h[order[r]]);
        sorted_fit[r] = fit[order[r]];
      }
      h = std::move(sorted);
      fit = std::move(sorted_fit);
    }
    for (std::size_t r = 0; r < n; ++r) {
      const int species = s_max - static_cast<int>(r);
      rate[r] = bbo_rates(species, s_max, cfg.immigration, cfg.emigration);
      mut[r] = mutation_rate(ps[species], p_max, cfg.max_mutation);
    }

    // Migration reads from the ranked population and writes into copies.
    auto offspring = h;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(uniform01(rng) < rate[i].lambda)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (uniform01(rng) < rate[j].mu) {
          const std::size_t siv = random_index(rng, dim);
          offspring[i][siv] = h[j][siv];
        }
      }
    }
    // Mutation perturbs an SIV by a Gaussian step that narrows as the run advances.
    const double step = cfg.mutation_step * (1.0 - static_cast<double>(t - 1) / cfg.iterations);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d)
        if (uniform01(rng) < mut[i])
          offspring[i][d] = std::clamp(offspring[i][d] + normal(rng, 0.0, step * space.width(d)), space.lower[d], space.upper[d]);

    std::vector<Fitness> off_fit(n);
    for (std::size_t i = 0; i < n; ++i) off_fit[i] = rec.evaluate(offspring[i]);

    const std::size_t keep = cfg.keep_count(), admit = cfg.new_count();
    const auto off_order = rank_by_total(off_fit);
    std::vector<std::vector<double>> next;
    std::vector<Fitness> next_fit;
    next.reserve(n);
    for (std::size_t r = 0; r < keep; ++r) {
      next.push_back(h[r]);
      next_fit.push_back(fit[r]);
    }
    for (std::size_t r = 0; r < admit; ++r) {
      next.push_back(std::move(offspring[off_order[r]]));
      next_fit.push_back(off_fit[off_order[r]]);
    }
    while (next.size() < n) {
      next.push_back(space.random_point(rng));
      next_fit.push_back(rec.evaluate(next.back()));
    }
    h = std::move(next);
    fit = std::move(next_fit);
    rec.close_iteration(t, fit);
  }
  return std::move(rec).finish();
}

}  // namespace rdv::opt
