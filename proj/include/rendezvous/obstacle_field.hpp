#pragma once

// Uncertain spherical obstacles: quasi-static (fixed center), moving (random
// walk) and dynamic (current-driven, with a propagated radius state).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "rendezvous/current_field.hpp"
#include "rendezvous/errors.hpp"
#include "rendezvous/geometry.hpp"
#include "rendezvous/random.hpp"

namespace rdv {

enum class ObstacleKind { QuasiStatic, Moving, Dynamic };

inline const char* to_string(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::QuasiStatic: return "quasi_static";
    case ObstacleKind::Moving: return "moving";
    case ObstacleKind::Dynamic: return "dynamic";
  }
  return "?";
}

inline ObstacleKind obstacle_kind_from_string(const std::string& s) {
  if (s == "quasi_static") return ObstacleKind::QuasiStatic;
  if (s == "moving") return ObstacleKind::Moving;
  if (s == "dynamic") return ObstacleKind::Dynamic;
  throw InvalidConfig("unknown obstacle kind: " + s);
}

struct Obstacle {
  ObstacleKind kind = ObstacleKind::QuasiStatic;
  Vec3 position = Vec3::Zero();
  double radius = 0.0;
  double uncertainty = 0.0;  // Theta_Ur
  // [radius, growth rate, bias]; only evolves for Dynamic obstacles
  Vec3 radius_state = Vec3::Zero();
  double base_step = 0.0;  // displacement scale paired with Theta_Ur in the walk
  std::uint64_t seed = 0;
  Rng rng{0};

  double boundary(double confidence_multiplier) const { return radius + confidence_multiplier * uncertainty; }
};

struct ObstacleSigmas {
  double position = 30.0;     // sigma_1, m
  double uncertainty = 15.0;  // sigma_2, m
  double radius_noise = 0.5;  // sigma_3
};

struct ObstacleSet {
  std::vector<Obstacle> obstacles;
  ObstacleSigmas sigmas;
  double confidence_multiplier = 2.0;

  bool empty() const { return obstacles.empty(); }
  std::size_t size() const { return obstacles.size(); }
};

inline Obstacle make_obstacle(ObstacleKind kind, const Vec3& position, double radius, double uncertainty,
                              std::uint64_t seed, double base_step = 0.0) {
  if (radius < 0.0 || uncertainty < 0.0) throw InvalidConfig("obstacle radius and uncertainty must be >= 0");
  Obstacle o;
  o.kind = kind;
  o.position = position;
  o.radius = radius;
  o.uncertainty = uncertainty;
  o.radius_state = Vec3(radius, 0.0, 0.0);
  o.base_step = base_step;
  o.seed = seed;
  o.rng.seed(seed);
  return o;
}

/// Places an obstacle between start and dest. Draw order: Theta_Ur ~ U(0,
/// sigma_2), radius ~ |N(nominal, Theta_Ur)|, a uniform center per axis
/// inside the start-dest box shrunk by the radius, then the N(0, sigma_1)
/// perturbation. Axes whose extent cannot hold the sphere collapse to the
/// box midpoint. Candidates that leave the shrunk box or swallow start or
/// dest in their confidence sphere are redrawn, up to `max_attempts`.
inline Obstacle spawn_obstacle(ObstacleKind kind, const Vec3& start, const Vec3& dest, double nominal_radius,
                               const ObstacleSigmas& sigmas, Rng& rng, double confidence_multiplier = 2.0,
                               int max_attempts = 200) {
  if (start == dest) throw InvalidInput("obstacle spawn needs distinct start and destination");
  if (nominal_radius < 0.0) throw InvalidConfig("nominal obstacle radius must be >= 0");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double ur = sigmas.uncertainty > 0.0 ? uniform(rng, 0.0, sigmas.uncertainty) : 0.0;
    const double r = ur > 0.0 ? std::abs(normal(rng, nominal_radius, ur)) : nominal_radius;
    Vec3 c;
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      const double lo = std::min(start[a], dest[a]);
      const double hi = std::max(start[a], dest[a]);
      if (hi - lo > 2.0 * r) {
        c[a] = uniform(rng, lo + r, hi - r);
      } else {
        c[a] = 0.5 * (lo + hi);
      }
    }
    if (sigmas.position > 0.0) {
      for (int a = 0; a < 3; ++a) {
        const double lo = std::min(start[a], dest[a]);
        const double hi = std::max(start[a], dest[a]);
        if (hi - lo <= 2.0 * r) continue;
        c[a] += normal(rng, 0.0, sigmas.position);
        inside = inside && c[a] >= lo + r && c[a] <= hi - r;
      }
    }
    const double keep_out = r + confidence_multiplier * ur;
    if (!inside || (start - c).norm() <= keep_out || (dest - c).norm() <= keep_out) continue;
    const std::uint64_t seed = rng();
    return make_obstacle(kind, c, r, ur, seed);
  }
  throw PlacementError("obstacle could not be placed between start and destination");
}

inline Obstacle spawn_quasi_static(const Vec3& start, const Vec3& dest, double nominal_radius,
                                   const ObstacleSigmas& sigmas, Rng& rng, double confidence_multiplier = 2.0) {
  return spawn_obstacle(ObstacleKind::QuasiStatic, start, dest, nominal_radius, sigmas, rng, confidence_multiplier);
}

/// Random walk: each axis moves by a random sign times U(base_step, Theta_Ur).
inline Obstacle step_moving(const Obstacle& o) {
  if (o.kind != ObstacleKind::Moving) throw ContractViolation("step_moving on a non-moving obstacle");
  Obstacle next = o;
  for (int a = 0; a < 3; ++a) {
    const double mag = uniform(next.rng, next.base_step, next.uncertainty);
    next.position[a] += random_sign(next.rng) * mag;
  }
  return next;
}

/// radius_state' = B1 x + B2 X + B3 Theta_Ur with
/// B1 = [[1, U, 0], [0, 1, 0], [0, 0, 1]], B2 = [0, 1, 1]^T, B3 = [0, 0, U]^T.
inline Vec3 propagate_radius_state(const Vec3& state, double current_impact, double noise, double uncertainty) {
  return {state[0] + current_impact * state[1], state[1] + noise, state[2] + noise + current_impact * uncertainty};
}

/// Current-driven step. The current impact U = |V_C(position)| * |N(0, 0.3)|;
/// each axis moves by a random sign times N(base_step, Theta_Ur); the radius
/// state is propagated with X ~ N(0, sigma_3).
inline Obstacle step_dynamic(const Obstacle& o, const CurrentField& current, const ObstacleSigmas& sigmas) {
  if (o.kind != ObstacleKind::Dynamic) throw ContractViolation("step_dynamic on a non-dynamic obstacle");
  Obstacle next = o;
  const double impact = velocity_3d(current, o.position).magnitude * std::abs(normal(next.rng, 0.0, 0.3));
  for (int a = 0; a < 3; ++a) {
    const double mag = normal(next.rng, next.base_step, next.uncertainty);
    next.position[a] += random_sign(next.rng) * mag;
  }
  const double x = normal(next.rng, 0.0, sigmas.radius_noise);
  next.radius_state = propagate_radius_state(o.radius_state, impact, x, o.uncertainty);
  next.radius = std::max(next.radius_state[0], 0.0);
  return next;
}

inline ObstacleSet step(const ObstacleSet& set, const CurrentField& current) {
  ObstacleSet next = set;
  for (auto& o : next.obstacles) {
    switch (o.kind) {
      case ObstacleKind::QuasiStatic: break;
      case ObstacleKind::Moving: o = step_moving(o); break;
      case ObstacleKind::Dynamic: o = step_dynamic(o, current, set.sigmas); break;
    }
  }
  return next;
}

/// Signed distance to the nearest confidence boundary (negative inside).
inline double clearance(const ObstacleSet& set, const Vec3& p) {
  double best = kInfinity;
  for (const auto& o : set.obstacles)
    best = std::min(best, (p - o.position).norm() - o.boundary(set.confidence_multiplier));
  return best;
}

/// Same as clearance() but minimized over the whole segment [a, b].
inline double segment_clearance(const ObstacleSet& set, const Vec3& a, const Vec3& b) {
  double best = kInfinity;
  for (const auto& o : set.obstacles)
    best = std::min(best, point_segment_distance(o.position, a, b) - o.boundary(set.confidence_multiplier));
  return best;
}

inline nlohmann::json to_json(const Obstacle& o) {
  return {{"kind", to_string(o.kind)},
          {"position", {o.position.x(), o.position.y(), o.position.z()}},
          {"radius", o.radius},
          {"uncertainty", o.uncertainty},
          {"radius_state", {o.radius_state[0], o.radius_state[1], o.radius_state[2]}},
          {"base_step", o.base_step},
          {"seed", o.seed}};
}

inline nlohmann::json to_json(const ObstacleSet& set) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& o : set.obstacles) arr.push_back(to_json(o));
  return {{"obstacles", std::move(arr)},
          {"sigmas",
           {{"position", set.sigmas.position},
            {"uncertainty", set.sigmas.uncertainty},
            {"radius_noise", set.sigmas.radius_noise}}},
          {"confidence_multiplier", set.confidence_multiplier}};
}

inline ObstacleSet obstacle_set_from_json(const nlohmann::json& j) {
  ObstacleSet set;
  if (j.contains("sigmas")) {
    const auto& s = j["sigmas"];
    set.sigmas = {s.value("position", 30.0), s.value("uncertainty", 15.0), s.value("radius_noise", 0.5)};
  }
  set.confidence_multiplier = j.value("confidence_multiplier", 2.0);
  if (!(set.confidence_multiplier > 0.0)) throw InvalidConfig("confidence multiplier must be positive");
  for (const auto& oj : j.at("obstacles")) {
    const auto p = oj.at("position").get<std::vector<double>>();
    auto o = make_obstacle(obstacle_kind_from_string(oj.at("kind").get<std::string>()), Vec3(p.at(0), p.at(1), p.at(2)),
                           oj.at("radius").get<double>(), oj.value("uncertainty", 0.0), oj.value("seed", 0ULL),
                           oj.value("base_step", 0.0));
    if (oj.contains("radius_state")) {
      const auto rs = oj["radius_state"].get<std::vector<double>>();
      o.radius_state = Vec3(rs.at(0), rs.at(1), rs.at(2));
    }
    set.obstacles.push_back(std::move(o));
  }
  return set;
}

}  // namespace rdv
