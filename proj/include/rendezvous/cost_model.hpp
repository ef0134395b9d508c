#pragma once

// Scaled penalty-augmented rendezvous objective and the matching hard
// feasibility test, evaluated on a timed trajectory.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "rendezvous/environment.hpp"
#include "rendezvous/errors.hpp"
#include "rendezvous/spline_path.hpp"

namespace rdv {

struct VehicleLimits {
  double u_max = 3.0;        // m/s, north ground-velocity component
  double v_max = 3.0;        // m/s, east ground-velocity component
  double theta_max = 0.35;   // rad
  double r_max = 0.05;       // rad/s

  void validate() const {
    if (!(u_max > 0 && v_max > 0 && theta_max > 0 && r_max > 0))
      throw InvalidConfig("vehicle limits must be strictly positive");
  }
};

struct RendezvousSpec {
  double rendezvous_time = 1800.0;  // T_r, s, relative to the leg start
  double epsilon = 300.0;           // s
  VehicleState initial;
  VehicleState final;
  double clearance_threshold = 20.0;  // m

  void validate() const {
    if (!(rendezvous_time > 0.0)) throw InvalidConfig("rendezvous time must be positive");
    if (!(epsilon > 0.0)) throw InvalidConfig("rendezvous time threshold must be positive");
    if (!(clearance_threshold >= 0.0)) throw InvalidConfig("clearance threshold must be non-negative");
  }
};

struct PenaltyWeights {
  // surge, sway, pitch, yaw rate, time window, clearance, terminal miss
  std::array<double, 7> beta{10.0, 10.0, 10.0, 10.0, 10.0, 100.0, 10.0};

  void validate() const {
    for (double b : beta)
      if (!(b >= 0.0)) throw InvalidConfig("penalty weights must be non-negative");
  }
};

inline constexpr double kInfeasiblePenalty = 1e6;
inline constexpr double kZeroTolerance = 1e-12;

struct CostBreakdown {
  double pi_term = 0.0;
  std::array<double, 7> terms{};  // scaled brackets before their weights
  double infeasible_penalty = 0.0;
  double total = 0.0;
  bool feasible = false;

  double collision_violation() const { return terms[5]; }
};

enum class Clause { Boundary, Intersection, SurgeBound, SwayBound, PitchBound, YawRateBound, RendezvousTime, Progress };

inline const char* to_string(Clause c) {
  switch (c) {
    case Clause::Boundary: return "boundary_conditions";
    case Clause::Intersection: return "intersection";
    case Clause::SurgeBound: return "surge_bound";
    case Clause::SwayBound: return "sway_bound";
    case Clause::PitchBound: return "pitch_bound";
    case Clause::YawRateBound: return "yaw_rate_bound";
    case Clause::RendezvousTime: return "rendezvous_time";
    case Clause::Progress: return "adverse_current";
  }
  return "?";
}

struct Violation {
  Clause clause;
  int sample = -1;     // worst offending sample (segment start for segment clauses)
  double value = 0.0;  // offending quantity (speed, angle, clearance, time error...)
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  bool has(Clause c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.clause == c; });
  }
};

namespace detail {

struct TrajectoryAnalysis {
  double duration = 0.0;
  // worst |u|, |v|, |theta|, |r| and where they occur
  std::array<double, 4> state_peak{};
  std::array<int, 4> state_peak_index{};
  double clearance = kInfinity;  // lower bound of distance to the nearest forbidden boundary
  int clearance_index = -1;
  double start_miss = 0.0;
  double terminal_miss = 0.0;
  bool progress = true;
  int progress_index = -1;
};

// The map distance is 1-Lipschitz, so over a segment of length s with end
// values a and b it cannot dip below (a + b - s) / 2. Obstacle spheres are
// checked exactly against each segment.
inline TrajectoryAnalysis analyze(const Trajectory& traj, const EnvironmentSnapshot& env, const RendezvousSpec& spec) {
  TrajectoryAnalysis a;
  const auto& s = traj.samples;
  a.duration = traj.nominal_duration();
  a.progress = traj.progress_feasible;
  a.progress_index = traj.worst_segment;
  const GridMap* map = env.map.get();
  double prev_map = kInfinity;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::array<double, 4> vals{std::abs(s[k].ground_velocity.x()), std::abs(s[k].ground_velocity.y()),
                                     std::abs(s[k].theta), std::abs(s[k].r)};
    for (int q = 0; q < 4; ++q)
      if (vals[q] > a.state_peak[q] || k == 0) {
        a.state_peak[q] = vals[q];
        a.state_peak_index[q] = static_cast<int>(k);
      }
    const double here = map ? map->distance_to_forbidden(s[k].position.head<2>()) : kInfinity;
    double d = here;
    if (k > 0) {
      const double len = (s[k].position - s[k - 1].position).norm();
      d = std::min({prev_map, here, 0.5 * (prev_map + here - len)});
      d = std::min(d, segment_clearance(env.obstacles, s[k - 1].position, s[k].position));
    } else if (s.size() == 1) {
      d = std::min(d, clearance(env.obstacles, s[k].position));
    }
    if (d < a.clearance) {
      a.clearance = d;
      a.clearance_index = static_cast<int>(k > 0 ? k - 1 : 0);
    }
    prev_map = here;
  }
  if (!s.empty()) {
    a.start_miss = (s.front().position - spec.initial.position()).norm();
    a.terminal_miss = (s.back().position - spec.final.position()).norm();
  }
  return a;
}

inline double excess_sq(double value, double limit) {
  const double e = std::max(0.0, value - limit);
  return e * e / (limit * limit);
}

inline FeasibilityReport clause_report(const TrajectoryAnalysis& a, int last_sample, const VehicleLimits& limits,
                                       const RendezvousSpec& spec) {
  FeasibilityReport rep;
  auto flag = [&](Clause c, int idx, double v) { rep.violations.push_back({c, idx, v}); };
  const double term_norm = std::max(spec.final.position().squaredNorm(), 1.0);
  const double start_norm = std::max(spec.initial.position().squaredNorm(), 1.0);
  if (a.terminal_miss * a.terminal_miss / term_norm > kZeroTolerance)
    flag(Clause::Boundary, last_sample, a.terminal_miss);
  else if (a.start_miss * a.start_miss / start_norm > kZeroTolerance)
    flag(Clause::Boundary, 0, a.start_miss);
  if (a.clearance < spec.clearance_threshold) flag(Clause::Intersection, a.clearance_index, a.clearance);
  const std::array<double, 4> lim{limits.u_max, limits.v_max, limits.theta_max, limits.r_max};
  const std::array<Clause, 4> cl{Clause::SurgeBound, Clause::SwayBound, Clause::PitchBound, Clause::YawRateBound};
  for (int q = 0; q < 4; ++q)
    if (a.state_peak[q] > lim[q]) flag(cl[q], a.state_peak_index[q], a.state_peak[q]);
  const double dt = a.duration - spec.rendezvous_time;
  if (!(std::abs(dt) < spec.epsilon)) flag(Clause::RendezvousTime, last_sample, dt);
  if (!a.progress) flag(Clause::Progress, a.progress_index, a.duration);
  rep.feasible = rep.violations.empty();
  return rep;
}

}  // namespace detail

/// Hard constraint check: boundary conditions, no intersection with the
/// clearance-inflated forbidden set, state bounds and the strict time window.
inline FeasibilityReport check_feasible(const Trajectory& traj, const EnvironmentSnapshot& env,
                                        const VehicleLimits& limits, const RendezvousSpec& spec) {
  limits.validate();
  spec.validate();
  if (traj.empty()) throw InvalidInput("cannot check an empty trajectory");
  return detail::clause_report(detail::analyze(traj, env, spec), static_cast<int>(traj.samples.size()) - 1, limits,
                               spec);
}

/// Scaled augmented objective. Infeasible-progress trajectories keep their
/// terms (timed at the minimum progress speed) and add a fixed penalty.
inline CostBreakdown evaluate(const Trajectory& traj, const EnvironmentSnapshot& env, const VehicleLimits& limits,
                              const RendezvousSpec& spec, const PenaltyWeights& weights) {
  limits.validate();
  spec.validate();
  if (traj.empty()) throw InvalidInput("cannot evaluate an empty trajectory");
  const auto a = detail::analyze(traj, env, spec);
  CostBreakdown c;
  const double tr = spec.rendezvous_time;
  const double dt = a.duration - tr;
  c.pi_term = dt * dt / (tr * tr);
  c.terms[0] = detail::excess_sq(a.state_peak[0], limits.u_max);
  c.terms[1] = detail::excess_sq(a.state_peak[1], limits.v_max);
  c.terms[2] = detail::excess_sq(a.state_peak[2], limits.theta_max);
  c.terms[3] = detail::excess_sq(a.state_peak[3], limits.r_max);
  {
    const double e = std::max(0.0, std::abs(dt) - spec.epsilon);
    c.terms[4] = e * e / (spec.epsilon * spec.epsilon);
  }
  {
    const double thr = spec.clearance_threshold;
    const double e = std::min(0.0, a.clearance - thr);
    c.terms[5] = e * e / (thr > 0.0 ? thr * thr : 1.0);
  }
  {
    const double norm = std::max(spec.final.position().norm(), 1.0);
    c.terms[6] = a.terminal_miss * a.terminal_miss / (norm * norm);
  }
  c.total = c.pi_term;
  for (std::size_t i = 0; i < 7; ++i) c.total += weights.beta[i] * c.terms[i];
  if (!a.progress) {
    c.infeasible_penalty = kInfeasiblePenalty;
    c.total += kInfeasiblePenalty;
  }
  c.feasible = detail::clause_report(a, static_cast<int>(traj.samples.size()) - 1, limits, spec).feasible;
  return c;
}

inline nlohmann::json to_json(const CostBreakdown& c) {
  return {{"pi_term", c.pi_term},        {"terms", c.terms}, {"infeasible_penalty", c.infeasible_penalty},
          {"total", c.total},            {"feasible", c.feasible}};
}

inline nlohmann::json to_json(const FeasibilityReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations) v.push_back({{"clause", to_string(x.clause)}, {"sample", x.sample}, {"value", x.value}});
  return {{"feasible", r.feasible}, {"violations", std::move(v)}};
}

inline std::string cost_csv_header() { return "pi_term,term1,term2,term3,term4,term5,term6,term7,total,feasible\n"; }

inline std::string cost_csv_row(const CostBreakdown& c) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", c.pi_term);
  out += buf;
  for (double t : c.terms) {
    std::snprintf(buf, sizeof buf, ",%.12g", t);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, ",%.12g,%d\n", c.total, c.feasible ? 1 : 0);
  out += buf;
  return out;
}

}  // namespace rdv
