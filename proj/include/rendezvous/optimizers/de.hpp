#pragma once

#include <array>
#include <vector>

#include "rendezvous/optimizers/search_space.hpp"

namespace rdv::opt {

struct DeConfig {
  int population = 100;
  int iterations = 100;
  double scale_min = 0.2;  // S_f drawn per generation from [scale_min, scale_max]
  double scale_max = 0.8;
  double crossover_rate = 0.2;
  bool donor_blend = false;  // base vector = lambda-weighted blend of the three picks

  void validate() const {
    if (population < 4) throw InvalidConfig("DE needs a population of at least 4");
    if (iterations < 0) throw InvalidConfig("DE iteration count must be non-negative");
    if (!(scale_min >= 0 && scale_min <= scale_max)) throw InvalidConfig("bad DE scale factor bounds");
    if (!(crossover_rate >= 0 && crossover_rate <= 1)) throw InvalidConfig("DE crossover rate must be in [0, 1]");
  }
};

/// base + S_f (a - b)
inline std::vector<double> de_mutant(std::span<const double> base, std::span<const double> a, std::span<const double> b,
                                     double scale) {
  std::vector<double> m(base.size());
  for (std::size_t d = 0; d < m.size(); ++d) m[d] = base[d] + scale * (a[d] - b[d]);
  return m;
}

/// Binomial crossover: dimension d comes from the mutant when rand_d <= r_C
/// or d == forced, otherwise from the parent.
inline std::vector<double> de_crossover(std::span<const double> parent, std::span<const double> mutant, double rate,
                                        std::size_t forced, std::span<const double> rand) {
  std::vector<double> trial(parent.begin(), parent.end());
  for (std::size_t d = 0; d < trial.size(); ++d)
    if (rand[d] <= rate || d == forced) trial[d] = mutant[d];
  return trial;
}

/// sum_i (lambda_i / sum lambda) x_ri
inline std::vector<double> de_donor(const std::array<std::span<const double>, 3>& picks,
                                    const std::array<double, 3>& lambda) {
  const double total = lambda[0] + lambda[1] + lambda[2];
  std::vector<double> out(picks[0].size(), 0.0);
  for (int k = 0; k < 3; ++k) {
    const double w = total > 0.0 ? lambda[k] / total : 1.0 / 3.0;
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += w * picks[k][d];
  }
  return out;
}

template <typename Objective>
GenericRun de_minimize(const SearchSpace& space, Objective&& f, const DeConfig& cfg, std::uint64_t seed,
                       const std::vector<double>* warm_start = nullptr) {
  cfg.validate();
  check_common(space, cfg.population, cfg.iterations, 4);
  Rng rng(seed);
  Recorder rec(f, seed);
  const std::size_t n = cfg.population, dim = space.dimension();

  std::vector<std::vector<double>> x(n);
  for (auto& p : x) p = space.random_point(rng);
  seed_population(x, space, warm_start);
  std::vector<Fitness> fit(n);
  for (std::size_t i = 0; i < n; ++i) fit[i] = rec.evaluate(x[i]);
  rec.close_iteration(0, fit);

  std::vector<double> rand(dim);
  for (int t = 1; t <= cfg.iterations; ++t) {
    const double scale = uniform(rng, cfg.scale_min, cfg.scale_max);
    auto next = x;
    auto next_fit = fit;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r1, r2, r3;
      do r1 = random_index(rng, n); while (r1 == i);
      do r2 = random_index(rng, n); while (r2 == i || r2 == r1);
      do r3 = random_index(rng, n); while (r3 == i || r3 == r1 || r3 == r2);
      std::vector<double> base = x[r3];
      if (cfg.donor_blend) {
        const std::array<double, 3> lambda{uniform01(rng), uniform01(rng), uniform01(rng)};
        base = de_donor({std::span<const double>(x[r1]), std::span<const double>(x[r2]), std::span<const double>(x[r3])},
                        lambda);
      }
      auto mutant = de_mutant(base, x[r1], x[r2], scale);
      space.clip(mutant);
      const std::size_t forced = random_index(rng, dim);
      for (auto& r : rand) r = uniform01(rng);
      auto trial = de_crossover(x[i], mutant, cfg.crossover_rate, forced, rand);
      const Fitness fm = rec.evaluate(mutant);
      const Fitness ft = rec.evaluate(trial);
      if (fit[i].total <= fm.total) {
        if (!(fit[i].total <= ft.total)) {
          next[i] = std::move(trial);
          next_fit[i] = ft;
        }
      } else {
        next[i] = std::move(mutant);
        next_fit[i] = fm;
      }
    }
    x = std::move(next);
    fit = std::move(next_fit);
    rec.close_iteration(t, fit);
  }
  return std::move(rec).finish();
}

}  // namespace rdv::opt
