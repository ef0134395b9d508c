#pragma once

// Rendezvous protocol and online replanning: plan once, fly, refresh the
// environment, and warm-start a new plan when a trigger fires.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rendezvous/cost_model.hpp"
#include "rendezvous/environment.hpp"
#include "rendezvous/optimizers.hpp"
#include "rendezvous/spline_path.hpp"

namespace rdv {

struct RendezvousMessage {
  Vec3 position = Vec3::Zero();  // z is replaced by `depth`
  double course = 0.0;
  double depth = 0.0;
  double rendezvous_time = 0.0;  // T_r, seconds after mission start

  Vec3 target() const { return {position.x(), position.y(), depth}; }

  VehicleState target_state() const {
    VehicleState s;
    s.x = position.x();
    s.y = position.y();
    s.z = depth;
    s.psi = course;
    return s;
  }
};

struct MissionConfig {
  PlanSettings plan;
  OptimizerConfig optimizer;
  double epsilon = 300.0;
  double clearance_threshold = 20.0;
  double planning_margin = 0.1;  // optimizers see the threshold inflated by this fraction
  double sim_step = 1.0;
  double arrival_radius = 10.0;
  double sensor_range = 500.0;
  double replan_min_interval = 150.0;          // for current and timing triggers
  double obstacle_replan_min_interval = 12.0;  // for the obstacle trigger
  int replan_iterations = 25;
  bool replanning = true;

  void validate() const {
    plan.validate();
    if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be positive");
    if (!(clearance_threshold >= 0.0)) throw InvalidConfig("clearance threshold must be non-negative");
    if (!(planning_margin >= 0.0)) throw InvalidConfig("planning margin must be non-negative");
    if (!(sim_step > 0.0)) throw InvalidConfig("sim step must be positive");
    if (!(arrival_radius > 0.0)) throw InvalidConfig("arrival radius must be positive");
    if (!(sensor_range >= 0.0)) throw InvalidConfig("sensor range must be non-negative");
    if (replan_iterations < 0) throw InvalidConfig("replan iterations must be non-negative");
  }
};

/// Leg specification for a plan starting at `now` from `vehicle`.
inline RendezvousSpec leg_spec(const RendezvousMessage& msg, const VehicleState& vehicle, double now,
                               const MissionConfig& cfg) {
  RendezvousSpec spec;
  spec.rendezvous_time = msg.rendezvous_time - now;
  spec.epsilon = cfg.epsilon;
  spec.initial = vehicle;
  spec.final = msg.target_state();
  spec.clearance_threshold = cfg.clearance_threshold;
  return spec;
}

/// Leg specification whose clearance threshold is capped just below the
/// vehicle's own clearance, so a leg starting close to an obstacle is judged
/// on moving away rather than on where it starts.
inline RendezvousSpec leg_spec(const RendezvousMessage& msg, const VehicleState& vehicle, double now,
                               const MissionConfig& cfg, const EnvironmentSnapshot& env) {
  auto spec = leg_spec(msg, vehicle, now, cfg);
  const Vec3 p = vehicle.position();
  double here = clearance(env.obstacles, p);
  if (env.map) here = std::min(here, env.map->distance_to_forbidden(p.head<2>()));
  if (here < spec.clearance_threshold)
    spec.clearance_threshold = std::max(0.9 * here, std::min(1.0, spec.clearance_threshold));
  return spec;
}

/// The spec the optimizers search against: the clearance threshold carries
/// the planning margin, while feasibility is judged on the unpadded spec.
inline RendezvousSpec planning_spec(RendezvousSpec spec, const MissionConfig& cfg) {
  spec.clearance_threshold *= 1.0 + cfg.planning_margin;
  return spec;
}

/// Quasi-static obstacles are always known; the others only within
/// `range` of the vehicle (measured to their confidence boundary).
inline ObstacleSet visible_obstacles(const ObstacleSet& all, const Vec3& vehicle, double range) {
  ObstacleSet out = all;
  out.obstacles.clear();
  for (const auto& o : all.obstacles)
    if (o.kind == ObstacleKind::QuasiStatic ||
        (vehicle - o.position).norm() - o.boundary(all.confidence_multiplier) <= range)
      out.obstacles.push_back(o);
  return out;
}

inline std::shared_ptr<const EnvironmentSnapshot> perceived(const EnvironmentSnapshot& truth, const Vec3& vehicle,
                                                            double range) {
  return std::make_shared<const EnvironmentSnapshot>(
      EnvironmentSnapshot{truth.map, truth.current, visible_obstacles(truth.obstacles, vehicle, range),
                          truth.timestamp});
}

struct PlanResult {
  bool proceed = false;
  OptimizerRun run;
  Trajectory trajectory;  // times relative to the plan start
  FeasibilityReport report;
  std::string reason;
};

/// Fresh optimization from the loiter state. Proceed iff the best plan passes
/// every hard constraint.
inline PlanResult initial_plan(const RendezvousMessage& msg, const VehicleState& vehicle,
                               std::shared_ptr<const EnvironmentSnapshot> env, Algorithm algo, const MissionConfig& cfg,
                               std::uint64_t seed) {
  cfg.validate();
  const double now = env->timestamp;
  if (!(msg.rendezvous_time > now)) throw InvalidInput("rendezvous time must lie in the mission's future");
  const auto spec = leg_spec(msg, vehicle, now, cfg);
  auto bounds = corridor_bounds(spec.initial.position(), spec.final.position(), cfg.plan.control_points);
  const auto ctx = rendezvous_objective(env, planning_spec(spec, cfg), cfg.plan, std::move(bounds));
  PlanResult res;
  res.run = optimize(algo, ctx, cfg.optimizer, seed);
  res.trajectory = plan_trajectory(res.run.best, *env, cfg.plan);
  res.report = check_feasible(res.trajectory, *env, cfg.plan.limits, spec);
  res.proceed = res.report.feasible;
  if (!res.proceed) {
    res.reason = "no feasible path:";
    for (const auto& v : res.report.violations) res.reason += std::string(" ") + to_string(v.clause);
  }
  return res;
}

/// Curve parameter (in [0, 1]) of the point of the sampled curve nearest p.
inline double curve_parameter(const std::vector<Vec3>& samples, const Vec3& p) {
  double best = kInfinity, param = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const Vec3 d = samples[i + 1] - samples[i];
    const double len2 = d.squaredNorm();
    const double f = len2 > 0.0 ? std::clamp((p - samples[i]).dot(d) / len2, 0.0, 1.0) : 0.0;
    const double dist = (samples[i] + f * d - p).norm();
    if (dist < best) {
      best = dist;
      param = (static_cast<double>(i) + f) / static_cast<double>(samples.size() - 1);
    }
  }
  return param;
}

/// Points at equal arc-length spacing strictly between the ends of a polyline.
inline std::vector<Vec3> resample_interior(const std::vector<Vec3>& poly, int count) {
  std::vector<double> cum(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) cum[i] = cum[i - 1] + (poly[i] - poly[i - 1]).norm();
  std::vector<Vec3> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (int k = 1; k <= count; ++k) {
    const double s = cum.back() * k / (count + 1);
    while (seg + 2 < poly.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double f = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    out.push_back(poly[seg] + f * (poly[seg + 1] - poly[seg]));
  }
  return out;
}

/// Previous best polygon re-fit to start at the vehicle: control points
/// already passed (Greville abscissa at or behind the vehicle) are dropped.
/// If none were dropped the interior is kept as is; otherwise the polyline
/// [vehicle, survivors, target] is resampled to the same point count. The
/// result is clipped to the new corridor.
inline ControlPolygon warm_start_tail(const ControlPolygon& prev, const Vec3& vehicle, const PlanSettings& s,
                                      const CorridorBounds& new_bounds) {
  const int n = static_cast<int>(prev.interior.size());
  const SplineSampler sampler(n + 2, s.samples, s.degree);
  const double u = curve_parameter(sampler.sample(prev), vehicle);
  std::vector<Vec3> survivors;
  for (int i = 0; i < n; ++i)
    if (sampler.greville(i + 1) > u) survivors.push_back(prev.interior[i]);
  ControlPolygon out{vehicle, {}, prev.target};
  if (static_cast<int>(survivors.size()) == n) {
    out.interior = survivors;
  } else {
    std::vector<Vec3> line{vehicle};
    line.insert(line.end(), survivors.begin(), survivors.end());
    line.push_back(prev.target);
    out.interior = resample_interior(line, n);
  }
  return new_bounds.clip(out);
}

/// Warm-started plan for the remaining leg from the vehicle's current state.
inline OptimizerRun replan(const OptimizerRun& prev, const VehicleState& vehicle,
                           std::shared_ptr<const EnvironmentSnapshot> env, const RendezvousMessage& msg, Algorithm algo,
                           const MissionConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const double now = env->timestamp;
  if (!(msg.rendezvous_time - now > 0.0)) throw BudgetExhausted("no time left before the rendezvous");
  const auto spec = leg_spec(msg, vehicle, now, cfg, *env);
  auto bounds = corridor_bounds(spec.initial.position(), spec.final.position(),
                                static_cast<int>(prev.best.interior.size()));
  const auto warm = warm_start_tail(prev.best, spec.initial.position(), cfg.plan, bounds);
  const auto ctx = rendezvous_objective(env, planning_spec(spec, cfg), cfg.plan, std::move(bounds));
  return optimize(algo, ctx, cfg.optimizer.with_iterations(cfg.replan_iterations), seed, &warm);
}

// ---------------------------------------------------------------------------
// Mission loop

enum class Outcome { Rendezvous, Failed, Cancel };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Rendezvous: return "proceed_rendezvous";
    case Outcome::Failed: return "proceed_failed";
    case Outcome::Cancel: return "cancel";
  }
  return "?";
}

/// An obstacle inserted during the mission, centered on the active path
/// `ahead` meters (arc length) in front of the vehicle.
struct ScriptedDrop {
  double time = 0.0;
  ObstacleKind kind = ObstacleKind::Moving;
  double ahead = 300.0;
  double radius = 40.0;
  double uncertainty = 5.0;
  double base_step = 0.0;
};

struct MissionSetup {
  EnvironmentSnapshot environment;  // truth at t = 0
  VehicleState start;
  RendezvousMessage message;
  MissionConfig config;
  std::vector<ScriptedDrop> drops;
};

struct PlanRecord {
  std::string trigger;  // "initial", "current_update", "obstacle", "time_drift"
  double time = 0.0;
  VehicleState start_state;
  OptimizerRun run;
  Trajectory trajectory;  // absolute times
  CostBreakdown stale_cost;  // remaining part of the previous plan, same snapshot
  bool adopted = true;
  std::shared_ptr<const EnvironmentSnapshot> environment;  // what the planner saw
};

struct FlownState {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 ground_velocity = Vec3::Zero();
  double psi = 0.0;
  double theta = 0.0;
};

struct ObstacleFrame {
  double time = 0.0;
  std::vector<Vec3> centers;
  std::vector<double> boundaries;  // confidence radii
  std::vector<ObstacleKind> kinds;
};

struct MissionEvent {
  double time = 0.0;
  std::string kind;
  std::string detail;
};

struct MissionLog {
  Outcome outcome = Outcome::Cancel;
  std::string reason;
  Algorithm algorithm = Algorithm::Pso;
  std::uint64_t seed = 0;
  double rendezvous_time = 0.0;
  double epsilon = 0.0;
  std::vector<PlanRecord> plans;
  std::vector<FlownState> flown;
  std::vector<ObstacleFrame> obstacle_frames;
  std::vector<MissionEvent> events;
  double achieved_t_f = kInfinity;
  int incursions = 0;
  double final_collision_violation = 0.0;
  int replans = 0;

  std::size_t active_plan() const {
    for (std::size_t i = plans.size(); i-- > 0;)
      if (plans[i].adopted) return i;
    return 0;
  }
};

namespace detail {

inline ObstacleFrame frame_of(const ObstacleSet& set, double t) {
  ObstacleFrame f;
  f.time = t;
  for (const auto& o : set.obstacles) {
    f.centers.push_back(o.position);
    f.boundaries.push_back(o.boundary(set.confidence_multiplier));
    f.kinds.push_back(o.kind);
  }
  return f;
}

// Vehicle progress along the active trajectory's sample polyline.
struct Cursor {
  std::size_t segment = 0;
  double fraction = 0.0;
};

inline Vec3 cursor_position(const Trajectory& traj, const Cursor& c) {
  const auto& s = traj.samples;
  if (c.segment + 1 >= s.size()) return s.back().position;
  return s[c.segment].position + c.fraction * (s[c.segment + 1].position - s[c.segment].position);
}

inline std::vector<Vec3> remaining_polyline(const Trajectory& traj, const Cursor& c) {
  std::vector<Vec3> pts{cursor_position(traj, c)};
  for (std::size_t k = c.segment + 1; k < traj.samples.size(); ++k) pts.push_back(traj.samples[k].position);
  if (pts.size() == 1) pts.push_back(pts.front());
  return pts;
}

inline double remaining_length(const Trajectory& traj, const Cursor& c) {
  const auto pts = remaining_polyline(traj, c);
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

// Point `ahead` meters of arc length past the cursor (clamped to the end).
inline Vec3 point_ahead(const Trajectory& traj, const Cursor& c, double ahead) {
  const auto pts = remaining_polyline(traj, c);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double len = (pts[i] - pts[i - 1]).norm();
    if (ahead <= len && len > 0.0) return pts[i - 1] + (ahead / len) * (pts[i] - pts[i - 1]);
    ahead -= len;
  }
  return pts.back();
}

inline Trajectory shift_time(Trajectory t, double offset) {
  for (auto& s : t.samples) s.time += offset;
  return t;
}

}  // namespace detail

/// Dense post-hoc check of the flown path: `factor` sub-samples per sim step
/// against the map and the obstacle frame in force at that instant.
inline int count_incursions(const MissionLog& log, const GridMap& map, int factor = 10) {
  int hits = 0;
  std::size_t frame = 0;
  for (std::size_t k = 0; k + 1 < log.flown.size(); ++k) {
    const auto& a = log.flown[k];
    const auto& b = log.flown[k + 1];
    for (int j = 0; j < factor; ++j) {
      const double f = static_cast<double>(j) / factor;
      const double t = a.time + f * (b.time - a.time);
      const Vec3 p = a.position + f * (b.position - a.position);
      while (frame + 1 < log.obstacle_frames.size() && log.obstacle_frames[frame + 1].time <= t) ++frame;
      bool hit = !map.is_feasible(p);
      if (!hit && !log.obstacle_frames.empty()) {
        const auto& fr = log.obstacle_frames[frame];
        for (std::size_t o = 0; o < fr.centers.size() && !hit; ++o) hit = (p - fr.centers[o]).norm() < fr.boundaries[o];
      }
      hits += hit ? 1 : 0;
    }
  }
  return hits;
}

/// Full mission: initial plan, then fly in fixed steps while the field and
/// obstacles evolve, replanning on triggers, until rendezvous or failure.
/// `seed` drives environment evolution and every optimizer run.
inline MissionLog run_mission(const MissionSetup& setup, Algorithm algo, std::uint64_t seed) {
  const auto& cfg = setup.config;
  const auto& msg = setup.message;
  cfg.validate();
  MissionLog log;
  log.algorithm = algo;
  log.seed = seed;
  log.rendezvous_time = msg.rendezvous_time;
  log.epsilon = cfg.epsilon;
  auto event = [&log](double t, std::string kind, std::string detail) {
    log.events.push_back({t, std::move(kind), std::move(detail)});
  };

  EnvironmentSnapshot truth = setup.environment;
  truth.timestamp = 0.0;
  truth.current.rng.seed(derive_seed(seed, 1));
  for (std::size_t i = 0; i < truth.obstacles.obstacles.size(); ++i)
    truth.obstacles.obstacles[i].rng.seed(derive_seed(seed, 100 + i));
  log.obstacle_frames.push_back(detail::frame_of(truth.obstacles, 0.0));

  VehicleState vehicle = setup.start;
  int plan_counter = 0;
  auto next_seed = [&] { return derive_seed(seed, 1000 + plan_counter++); };

  const auto first_view = perceived(truth, vehicle.position(), cfg.sensor_range);
  auto first = initial_plan(msg, vehicle, first_view, algo, cfg, next_seed());
  log.plans.push_back({"initial", 0.0, vehicle, first.run, first.trajectory, {}, true, first_view});
  log.final_collision_violation =
      evaluate(first.trajectory, *first_view, cfg.plan.limits, leg_spec(msg, vehicle, 0.0, cfg), cfg.plan.weights)
          .collision_violation();
  log.flown.push_back({0.0, vehicle.position(), Vec3::Zero(), vehicle.psi, vehicle.theta});
  if (!first.proceed) {
    log.outcome = Outcome::Cancel;
    log.reason = first.reason;
    event(0.0, "cancel", first.reason);
    return log;
  }
  event(0.0, "proceed", "initial plan feasible, t_f = " + std::to_string(first.trajectory.t_f));

  Trajectory active = first.trajectory;
  OptimizerRun active_run = first.run;
  detail::Cursor cur;
  const Vec3 target = msg.target();
  const double deadline = msg.rendezvous_time + cfg.epsilon;
  const double period = truth.current.update_period;
  double next_update = period;
  double last_replan = 0.0, last_obstacle_replan = -kInfinity;
  double planned_arrival = active.samples.back().time;
  bool current_dirty = false;  // field changed since the last plan
  std::size_t next_drop = 0;
  auto drops = setup.drops;
  std::stable_sort(drops.begin(), drops.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  double t = 0.0;

  auto finish = [&](Outcome o, std::string reason) {
    log.outcome = o;
    log.reason = std::move(reason);
    event(t, to_string(o), log.reason);
    log.incursions = count_incursions(log, *truth.map);
  };

  while (true) {
    // Fly one step along the active path at the live along-track speed.
    Vec3 pos = detail::cursor_position(active, cur);
    double dt_left = cfg.sim_step;
    bool at_end = false;
    const double t0 = t;
    Vec3 vel = Vec3::Zero();
    while (dt_left > 0.0) {
      if (cur.segment + 1 >= active.samples.size()) {
        at_end = true;
        break;
      }
      const Vec3 a = active.samples[cur.segment].position;
      const Vec3 b = active.samples[cur.segment + 1].position;
      const double len = (b - a).norm();
      if (len == 0.0) {
        ++cur.segment;
        cur.fraction = 0.0;
        continue;
      }
      const Vec3 dir = (b - a) / len;
      const Vec3 c = velocity_3d(truth.current, pos).vector();
      const double along = std::max(cfg.plan.water_speed + c.dot(dir), kMinProgressSpeed);
      vel = cfg.plan.water_speed * dir + c;
      const double left = len * (1.0 - cur.fraction);
      if (along * dt_left >= left) {
        dt_left -= left / along;
        ++cur.segment;
        cur.fraction = 0.0;
        pos = b;
      } else {
        cur.fraction += along * dt_left / len;
        pos = a + cur.fraction * (b - a);
        dt_left = 0.0;
      }
    }
    t = t0 + (cfg.sim_step - dt_left);
    vehicle.x = pos.x();
    vehicle.y = pos.y();
    vehicle.z = pos.z();
    if (vel.squaredNorm() > 0.0) {
      vehicle.psi = std::atan2(vel.y(), vel.x());
      vehicle.theta = std::atan2(-vel.z(), std::hypot(vel.x(), vel.y()));
      vehicle.u = vel.x();
      vehicle.v = vel.y();
      vehicle.w = vel.z();
    }
    log.flown.push_back({t, pos, vel, vehicle.psi, vehicle.theta});

    if ((pos - target).norm() <= cfg.arrival_radius || at_end) {
      // Arrival time: when the straight step from the previous state first
      // enters the arrival sphere.
      const auto& prev = log.flown[log.flown.size() - 2];
      const Vec3 d = pos - prev.position;
      const Vec3 m = prev.position - target;
      const double A = d.squaredNorm(), B = 2.0 * m.dot(d), C = m.squaredNorm() - cfg.arrival_radius * cfg.arrival_radius;
      double f = 1.0;
      if (C <= 0.0) {
        f = 0.0;
      } else if (A > 0.0 && B * B - 4 * A * C >= 0.0) {
        f = std::clamp((-B - std::sqrt(B * B - 4 * A * C)) / (2 * A), 0.0, 1.0);
      }
      log.achieved_t_f = prev.time + f * (t - prev.time);
      const double err = log.achieved_t_f - msg.rendezvous_time;
      if (std::abs(err) < cfg.epsilon)
        finish(Outcome::Rendezvous, "arrived at t = " + std::to_string(log.achieved_t_f));
      else
        finish(Outcome::Failed, "arrived outside the time window at t = " + std::to_string(log.achieved_t_f));
      return log;
    }
    if (t >= deadline) {
      finish(Outcome::Failed, "rendezvous window expired");
      return log;
    }

    if (t + 1e-9 < next_update) continue;

    // Environment refresh.
    next_update += period;
    {
      auto next = evolve(truth.current);
      if (!(next.layers == truth.current.layers)) current_dirty = true;
      truth.current = std::move(next);
    }
    truth.obstacles = step(truth.obstacles, truth.current);
    truth.timestamp = t;
    bool dropped = false;
    while (next_drop < drops.size() && drops[next_drop].time <= t) {
      const auto& d = drops[next_drop++];
      const Vec3 c = detail::point_ahead(active, cur, d.ahead);
      auto o = make_obstacle(d.kind, c, d.radius, d.uncertainty, derive_seed(seed, 500 + next_drop), d.base_step);
      truth.obstacles.obstacles.push_back(std::move(o));
      event(t, "obstacle_drop", std::string(to_string(d.kind)) + " obstacle placed on the active path");
      dropped = true;
    }
    log.obstacle_frames.push_back(detail::frame_of(truth.obstacles, t));
    if (!cfg.replanning) continue;

    const double remaining = detail::remaining_length(active, cur);
    if (remaining < 2.0 * cfg.arrival_radius) continue;
    const auto view = perceived(truth, pos, cfg.sensor_range);
    const auto rest = detail::remaining_polyline(active, cur);

    std::string trigger;
    if (dropped || t - last_obstacle_replan >= cfg.obstacle_replan_min_interval) {
      double worst = kInfinity;
      for (const auto& o : view->obstacles.obstacles) {
        if (o.kind == ObstacleKind::QuasiStatic) continue;
        for (std::size_t i = 0; i + 1 < rest.size(); ++i)
          worst = std::min(worst, point_segment_distance(o.position, rest[i], rest[i + 1]) -
                                      o.boundary(view->obstacles.confidence_multiplier));
      }
      if (worst < cfg.clearance_threshold) trigger = "obstacle";
    }
    const bool slow_ok = t - last_replan >= cfg.replan_min_interval;
    if (trigger.empty() && slow_ok) {
      const auto pred = synthesize_trajectory(rest, cfg.plan.water_speed, truth.current, t);
      const double predicted = pred.samples.back().time;
      if (!pred.progress_feasible || std::abs(predicted - planned_arrival) > 0.5 * cfg.epsilon ||
          std::abs(predicted - msg.rendezvous_time) >= cfg.epsilon)
        trigger = "time_drift";
      else if (current_dirty)
        trigger = "current_update";
    }
    if (trigger.empty()) continue;

    if (msg.rendezvous_time - t <= 0.0) {
      if (trigger == "obstacle") {
        finish(Outcome::Failed, "obstacle on the path with no time budget left to replan");
        return log;
      }
      continue;
    }
    event(t, "trigger", trigger);
    const auto spec = leg_spec(msg, vehicle, t, cfg, *view);
    auto judged = [&](const OptimizerRun& r) {
      return evaluate(plan_trajectory(r.best, *view, cfg.plan), *view, cfg.plan.limits, spec, cfg.plan.weights);
    };
    auto run = replan(active_run, vehicle, view, msg, algo, cfg, next_seed());
    auto cost = judged(run);
    // A short replan that still grazes an obstacle gets one retry at the full budget.
    if (cost.collision_violation() > 0.0 && cfg.replan_iterations < cfg.optimizer.iterations(algo)) {
      MissionConfig full = cfg;
      full.replan_iterations = cfg.optimizer.iterations(algo);
      auto retry = replan(run, vehicle, view, msg, algo, full, next_seed());
      const auto retry_cost = judged(retry);
      event(t, "replan_escalated", "cost " + std::to_string(cost.total) + " -> " + std::to_string(retry_cost.total));
      if (retry_cost.total <= cost.total) {
        run = std::move(retry);
        cost = retry_cost;
      }
    }
    auto traj = detail::shift_time(plan_trajectory(run.best, *view, cfg.plan), t);
    const auto stale = synthesize_trajectory(rest, cfg.plan.water_speed, view->current);
    PlanRecord rec{trigger, t, vehicle, run, traj,
                   evaluate(stale, *view, cfg.plan.limits, spec, cfg.plan.weights), false, view};
    rec.adopted = cost.total <= rec.stale_cost.total;
    ++log.replans;
    last_replan = t;
    current_dirty = false;
    if (trigger == "obstacle") last_obstacle_replan = t;
    event(t, rec.adopted ? "replan_adopted" : "replan_rejected",
          "cost " + std::to_string(cost.total) + " vs stale " + std::to_string(rec.stale_cost.total));
    if (rec.adopted) {
      active = rec.trajectory;
      active_run = run;
      cur = {};
      planned_arrival = active.samples.back().time;
      log.final_collision_violation = cost.collision_violation();
    } else {
      planned_arrival = t + stale.nominal_duration();
      log.final_collision_violation = rec.stale_cost.collision_violation();
    }
    log.plans.push_back(std::move(rec));
  }
}

}  // namespace rdv
