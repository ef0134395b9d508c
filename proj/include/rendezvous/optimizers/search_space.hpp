#pragma once

// Shared pieces of the population optimizers: the box, fitness values, and
// the best-so-far recorder that produces the convergence history.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rendezvous/errors.hpp"
#include "rendezvous/random.hpp"

namespace rdv::opt {

struct SearchSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  double width(std::size_t d) const { return upper[d] - lower[d]; }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size()) throw InvalidConfig("search space bounds are inconsistent");
    for (std::size_t d = 0; d < lower.size(); ++d)
      if (!(lower[d] <= upper[d])) throw InvalidConfig("search space lower bound exceeds upper bound");
  }

  void clip(std::span<double> x) const {
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = std::clamp(x[d], lower[d], upper[d]);
  }

  bool contains(std::span<const double> x) const {
    for (std::size_t d = 0; d < x.size(); ++d)
      if (x[d] < lower[d] || x[d] > upper[d]) return false;
    return x.size() == lower.size();
  }

  std::vector<double> random_point(Rng& rng) const {
    std::vector<double> x(dimension());
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = lower[d] + uniform01(rng) * width(d);
    return x;
  }
};

struct Fitness {
  double total = 0.0;
  double violation = 0.0;  // reported alongside, never optimized directly
};

struct IterationRecord {
  int iteration = 0;
  double best_total = 0.0;       // best seen so far
  double mean_total = 0.0;       // over the current population
  double best_violation = 0.0;   // violation of the best-so-far candidate
};

struct GenericRun {
  std::vector<double> best;
  Fitness best_fitness;
  std::vector<IterationRecord> history;  // entry 0 is the initial population
  int iterations = 0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
};

/// Wraps the objective: counts evaluations and keeps the best candidate ever
/// evaluated, so the recorded best total can never increase.
template <typename Objective>
class Recorder {
 public:
  Recorder(Objective& f, std::uint64_t seed) : f_(f) { run_.seed = seed; }

  Fitness evaluate(std::span<const double> x) {
    const Fitness fit = f_(x);
    ++run_.evaluations;
    if (run_.best.empty() || fit.total < run_.best_fitness.total) {
      run_.best.assign(x.begin(), x.end());
      run_.best_fitness = fit;
    }
    return fit;
  }

  void close_iteration(int iteration, std::span<const Fitness> population) {
    double sum = 0.0;
    for (const auto& p : population) sum += p.total;
    run_.history.push_back({iteration, run_.best_fitness.total, sum / static_cast<double>(population.size()),
                            run_.best_fitness.violation});
    run_.iterations = iteration;
  }

  GenericRun finish() && { return std::move(run_); }

 private:
  Objective& f_;
  GenericRun run_;
};

/// Indices sorted by ascending total; ties keep the lower index first.
inline std::vector<std::size_t> rank_by_total(std::span<const Fitness> fit) {
  std::vector<std::size_t> order(fit.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a].total < fit[b].total; });
  return order;
}

inline void check_common(const SearchSpace& space, int population, int iterations, int min_population = 2) {
  space.validate();
  if (population < min_population) throw InvalidConfig("population too small");
  if (iterations < 0) throw InvalidConfig("iteration count must be non-negative");
}

// Warm start copied verbatim into slot 0 (clipped only if it leaves the box).
inline void seed_population(std::vector<std::vector<double>>& pop, const SearchSpace& space,
                            const std::vector<double>* warm_start) {
  if (!warm_start) return;
  if (warm_start->size() != space.dimension()) throw InvalidInput("warm start dimension mismatch");
  pop[0] = *warm_start;
  space.clip(pop[0]);
}

}  // namespace rdv::opt
