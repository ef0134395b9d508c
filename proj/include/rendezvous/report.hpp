#pragma once

// Mission artifacts: summary JSON, flown/planned trajectory CSV, convergence
// CSV, the line-oriented event log, and comparison statistics.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "rendezvous/mission_planner.hpp"
#include "rendezvous/scenario.hpp"

namespace rdv {

namespace detail {

inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

inline nlohmann::json to_json(const Vec3& p) { return {p.x(), p.y(), p.z()}; }

}  // namespace detail

inline nlohmann::json to_json(const ControlPolygon& poly) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : poly.all_points()) pts.push_back(detail::to_json(p));
  return pts;
}

inline nlohmann::json to_json(const MissionConfig& c) {
  return {{"water_speed", c.plan.water_speed},
          {"control_points", c.plan.control_points},
          {"samples", c.plan.samples},
          {"degree", c.plan.degree},
          {"limits",
           {{"u_max", c.plan.limits.u_max},
            {"v_max", c.plan.limits.v_max},
            {"theta_max", c.plan.limits.theta_max},
            {"r_max", c.plan.limits.r_max}}},
          {"weights", c.plan.weights.beta},
          {"epsilon", c.epsilon},
          {"clearance_threshold", c.clearance_threshold},
          {"sim_step", c.sim_step},
          {"arrival_radius", c.arrival_radius},
          {"sensor_range", c.sensor_range},
          {"replan_min_interval", c.replan_min_interval},
          {"obstacle_replan_min_interval", c.obstacle_replan_min_interval},
          {"planning_margin", c.planning_margin},
          {"replan_iterations", c.replan_iterations},
          {"replanning", c.replanning},
          {"optimizer", to_json(c.optimizer)}};
}

inline nlohmann::json mission_json(const MissionLog& log, const std::string& scenario_name, const MissionConfig& cfg) {
  nlohmann::json plans = nlohmann::json::array();
  for (std::size_t i = 0; i < log.plans.size(); ++i) {
    const auto& p = log.plans[i];
    plans.push_back({{"index", i},
                     {"trigger", p.trigger},
                     {"time", p.time},
                     {"adopted", p.adopted},
                     {"start", detail::to_json(p.start_state.position())},
                     {"seed", p.run.seed},
                     {"iterations", p.run.iterations_used},
                     {"evaluations", p.run.evaluations},
                     {"best_cost", to_json(p.run.best_cost)},
                     {"stale_cost", i == 0 ? nlohmann::json() : to_json(p.stale_cost)},
                     {"leg_duration", p.trajectory.nominal_duration()},
                     {"length", p.trajectory.length},
                     {"control_polygon", to_json(p.run.best)}});
  }
  const double err = log.achieved_t_f - log.rendezvous_time;
  return {{"schema_version", 1},
          {"scenario", scenario_name},
          {"algorithm", to_string(log.algorithm)},
          {"seed", log.seed},
          {"outcome", to_string(log.outcome)},
          {"reason", log.reason},
          {"rendezvous_time", log.rendezvous_time},
          {"epsilon", log.epsilon},
          {"achieved_t_f", detail::finite_or_null(log.achieved_t_f)},
          {"time_error", detail::finite_or_null(err)},
          {"replans", log.replans},
          {"incursions", log.incursions},
          {"final_collision_violation", log.final_collision_violation},
          {"plans", std::move(plans)},
          {"config", to_json(cfg)}};
}

inline std::string flown_csv(const MissionLog& log) {
  std::string out = "t,x,y,z,psi,theta,u,v,w\n";
  char buf[256];
  for (const auto& s : log.flown) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.time, s.position.x(),
                  s.position.y(), s.position.z(), s.psi, s.theta, s.ground_velocity.x(), s.ground_velocity.y(),
                  s.ground_velocity.z());
    out += buf;
  }
  return out;
}

/// Every plan's trajectory, tagged with its plan index.
inline std::string plans_csv(const MissionLog& log) {
  std::string out = "plan,t,x,y,z,psi,theta,r,u,v,w\n";
  for (std::size_t i = 0; i < log.plans.size(); ++i) {
    const auto body = trajectory_csv(log.plans[i].trajectory, false);
    std::size_t start = 0;
    while (start < body.size()) {
      const auto end = body.find('\n', start);
      out += std::to_string(i) + "," + body.substr(start, end - start + 1);
      start = end + 1;
    }
  }
  return out;
}

inline std::string mission_convergence_csv(const MissionLog& log) {
  std::string out = "plan,trigger,iteration,best_total,mean_total,collision_violation\n";
  char buf[200];
  for (std::size_t i = 0; i < log.plans.size(); ++i)
    for (const auto& h : log.plans[i].run.history) {
      std::snprintf(buf, sizeof buf, "%zu,%s,%d,%.12g,%.12g,%.12g\n", i, log.plans[i].trigger.c_str(), h.iteration,
                    h.best_total, h.mean_total, h.best_violation);
      out += buf;
    }
  return out;
}

inline std::string events_log(const MissionLog& log) {
  std::string out;
  char buf[64];
  for (const auto& e : log.events) {
    std::snprintf(buf, sizeof buf, "%10.3f ", e.time);
    out += buf + e.kind + " " + e.detail + "\n";
  }
  return out;
}

struct RunStats {
  int runs = 0;
  int rendezvous = 0;
  int within_window = 0;
  double mean_t_f = 0.0;
  double std_t_f = 0.0;  // over runs that arrived
};

inline RunStats summarize(const std::vector<MissionLog>& logs) {
  RunStats s;
  s.runs = static_cast<int>(logs.size());
  std::vector<double> tf;
  for (const auto& l : logs) {
    if (l.outcome == Outcome::Rendezvous) ++s.rendezvous;
    if (std::isfinite(l.achieved_t_f)) {
      tf.push_back(l.achieved_t_f);
      if (std::abs(l.achieved_t_f - l.rendezvous_time) < l.epsilon) ++s.within_window;
    }
  }
  if (!tf.empty()) {
    for (double x : tf) s.mean_t_f += x;
    s.mean_t_f /= tf.size();
    for (double x : tf) s.std_t_f += (x - s.mean_t_f) * (x - s.mean_t_f);
    s.std_t_f = tf.size() > 1 ? std::sqrt(s.std_t_f / (tf.size() - 1)) : 0.0;
  }
  return s;
}

}  // namespace rdv
