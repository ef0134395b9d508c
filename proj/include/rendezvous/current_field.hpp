#pragma once

// Multi-vortex (Lamb) ocean current: horizontal velocity, vorticity, the
// Gaussian vertical profile, and the recursive Gaussian parameter drift that
// makes the field time varying and builds its depth layers.

#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "rendezvous/errors.hpp"
#include "rendezvous/geometry.hpp"
#include "rendezvous/random.hpp"

namespace rdv {

struct Vortex {
  Vec2 center = Vec2::Zero();  // m
  double radius = 1.0;         // m, > 0
  double strength = 0.0;       // m^2/s

  friend bool operator==(const Vortex&, const Vortex&) = default;
};

struct CurrentNoise {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_radius = 0.0;
  double sigma_strength = 0.0;

  bool is_zero() const { return sigma_x == 0 && sigma_y == 0 && sigma_radius == 0 && sigma_strength == 0; }
  friend bool operator==(const CurrentNoise&, const CurrentNoise&) = default;
};

struct CurrentSample {
  double u_c = 0.0;
  double v_c = 0.0;
  double w_c = 0.0;
  double magnitude = 0.0;
  double psi_c = 0.0;    // horizontal direction, atan2(v, u)
  double theta_c = 0.0;  // vertical direction, positive for w_c > 0

  static CurrentSample from_components(double u, double v, double w) {
    CurrentSample s{u, v, w, std::sqrt(u * u + v * v + w * w), std::atan2(v, u), std::atan2(w, std::hypot(u, v))};
    return s;
  }
  Vec3 vector() const { return {u_c, v_c, w_c}; }
};

/// Layered vortex field. Layer 0 is the base (surface) field; each deeper
/// band is a recursively perturbed copy. The value is immutable in use:
/// `evolve` returns a new field and advances the copy's RNG state.
struct CurrentField {
  std::vector<std::vector<Vortex>> layers;
  double vertical_scale = 0.0;  // gamma
  Vec3 background = Vec3::Zero();  // uniform flow added everywhere
  double update_rate = 1.0;     // U_R^C, scales every noise draw
  CurrentNoise noise;
  double update_period = 4.0;  // s
  double depth_limit = 1000.0;
  double min_radius = 0.1;
  Rng rng{0};

  const std::vector<Vortex>& base() const { return layers.front(); }
  std::size_t layer_count() const { return layers.size(); }

  std::size_t layer_for_depth(double z) const {
    if (layers.size() <= 1 || !(z > 0.0)) return 0;
    const double band = depth_limit / static_cast<double>(layers.size());
    return std::min(layers.size() - 1, static_cast<std::size_t>(z / band));
  }

  void validate() const {
    if (layers.empty() || layers.front().empty()) throw InvalidConfig("current field needs at least one vortex");
    if (!(update_period > 0.0)) throw InvalidConfig("current update period must be positive");
    if (!background.allFinite()) throw InvalidConfig("current background flow must be finite");
    if (noise.sigma_x < 0 || noise.sigma_y < 0 || noise.sigma_radius < 0 || noise.sigma_strength < 0)
      throw InvalidConfig("current noise sigmas must be non-negative");
    for (const auto& layer : layers)
      for (const auto& v : layer)
        if (!(v.radius > 0.0) || !v.center.allFinite()) throw InvalidConfig("vortex radius must be positive");
  }
};

namespace detail {

// 1 - exp(-x) is exactly 1.0 in double precision beyond this.
inline constexpr double kLambSaturation = 37.0;
// exp(-x) below 4e-18 of the peak; w_c contributions are dropped past this.
inline constexpr double kGaussianCutoff = 40.0;

}  // namespace detail

/// Lamb vortex velocity of one layer at p. At a vortex center the removable
/// singularity contributes (0, 0).
inline Vec2 layer_velocity(const std::vector<Vortex>& vortices, const Vec2& p) {
  double u = 0.0, v = 0.0;
  for (const auto& vx : vortices) {
    const double dx = p.x() - vx.center.x();
    const double dy = p.y() - vx.center.y();
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0) continue;
    const double x = r2 / (vx.radius * vx.radius);
    const double core = x > detail::kLambSaturation ? 1.0 : -std::expm1(-x);
    const double k = vx.strength * core / (2.0 * kPi * r2);
    u -= k * dy;
    v += k * dx;
  }
  return {u, v};
}

inline double layer_vertical(const std::vector<Vortex>& vortices, const Vec2& p, double vertical_scale) {
  if (vertical_scale == 0.0) return 0.0;
  double w = 0.0;
  for (const auto& vx : vortices) {
    const double r2 = (p - vx.center).squaredNorm();
    // lambda_w = diag(l, l): det(2 pi lambda_w) = (2 pi l)^2
    const double x = r2 / (2.0 * vx.radius);
    if (x > detail::kGaussianCutoff) continue;
    w += vx.strength / (2.0 * kPi * vx.radius) * std::exp(-x);
  }
  return vertical_scale * w;
}

inline Vec2 velocity_2d(const CurrentField& field, const Vec2& p) {
  return layer_velocity(field.base(), p) + field.background.head<2>();
}

inline double vorticity(const CurrentField& field, const Vec2& p) {
  double w = 0.0;
  for (const auto& vx : field.base()) {
    const double l2 = vx.radius * vx.radius;
    w += vx.strength / (kPi * l2) * std::exp(-(p - vx.center).squaredNorm() / l2);
  }
  return w;
}

inline CurrentSample velocity_3d(const CurrentField& field, const Vec3& p) {
  const auto& layer = field.layers[field.layer_for_depth(p.z())];
  const Vec2 s = p.head<2>();
  const Vec2 uv = layer_velocity(layer, s);
  const Vec3& b = field.background;
  return CurrentSample::from_components(uv.x() + b.x(), uv.y() + b.y(),
                                        layer_vertical(layer, s, field.vertical_scale) + b.z());
}

namespace detail {

inline void perturb_vortices(std::vector<Vortex>& vortices, const CurrentNoise& noise, double rate, double min_radius,
                             Rng& rng) {
  for (auto& v : vortices) {
    if (noise.sigma_x > 0) v.center.x() += rate * normal(rng, 0.0, noise.sigma_x);
    if (noise.sigma_y > 0) v.center.y() += rate * normal(rng, 0.0, noise.sigma_y);
    if (noise.sigma_radius > 0) v.radius = std::max(min_radius, v.radius + rate * normal(rng, 0.0, noise.sigma_radius));
    if (noise.sigma_strength > 0) v.strength += rate * normal(rng, 0.0, noise.sigma_strength);
  }
}

}  // namespace detail

/// One refresh of the field: every vortex of every layer receives
/// center += U*N(0, sigma_S), radius += U*N(0, sigma_l) (clamped at
/// min_radius), strength += U*N(0, sigma_J). Draws are taken only for
/// non-zero sigmas, in that order, vortex by vortex.
inline CurrentField evolve(const CurrentField& field) {
  CurrentField next = field;
  if (field.update_rate == 0.0 || field.noise.is_zero()) return next;
  for (auto& layer : next.layers)
    detail::perturb_vortices(layer, next.noise, next.update_rate, next.min_radius, next.rng);
  return next;
}

/// `count` vortices uniformly over [0, extent_x) x [0, extent_y).
inline std::vector<Vortex> random_vortices(std::size_t count, double extent_x, double extent_y, double radius,
                                           double strength, Rng& rng) {
  std::vector<Vortex> out(count);
  for (auto& v : out) {
    v.center = Vec2(uniform(rng, 0.0, extent_x), uniform(rng, 0.0, extent_y));
    v.radius = radius;
    v.strength = strength;
  }
  return out;
}

struct CurrentFieldConfig {
  std::size_t vortex_count = 50;
  double radius = 2.8;
  double strength = 12.0;
  double vertical_scale = 0.1;
  Vec3 background = Vec3::Zero();
  std::size_t layers = 5;
  double depth_limit = 1000.0;
  double update_period = 4.0;
  double update_rate = 1.0;
  CurrentNoise noise{0.5, 0.5, 0.1, 0.5};
  CurrentNoise layer_noise{0.8, 0.8, 0.2, 0.8};
  double min_radius = 0.1;
};

/// Base layer of random vortices; layer i+1 is layer i perturbed once with
/// the layer noise.
inline CurrentField make_current_field(const CurrentFieldConfig& cfg, double extent_x, double extent_y,
                                       std::uint64_t seed) {
  if (cfg.layers == 0) throw InvalidConfig("current field needs at least one layer");
  Rng rng(seed);
  CurrentField f;
  f.vertical_scale = cfg.vertical_scale;
  f.background = cfg.background;
  f.update_rate = cfg.update_rate;
  f.noise = cfg.noise;
  f.update_period = cfg.update_period;
  f.depth_limit = cfg.depth_limit;
  f.min_radius = cfg.min_radius;
  f.layers.push_back(random_vortices(cfg.vortex_count, extent_x, extent_y, cfg.radius, cfg.strength, rng));
  for (std::size_t i = 1; i < cfg.layers; ++i) {
    auto next = f.layers.back();
    detail::perturb_vortices(next, cfg.layer_noise, 1.0, cfg.min_radius, rng);
    f.layers.push_back(std::move(next));
  }
  f.rng.seed(derive_seed(seed, 1));
  f.validate();
  return f;
}

inline nlohmann::json to_json(const CurrentField& f) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : f.layers) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : layer)
      arr.push_back({{"center", {v.center.x(), v.center.y()}}, {"radius", v.radius}, {"strength", v.strength}});
    layers.push_back(std::move(arr));
  }
  return {{"layers", std::move(layers)},
          {"vertical_scale", f.vertical_scale},
          {"background", {f.background.x(), f.background.y(), f.background.z()}},
          {"update_rate", f.update_rate},
          {"update_period", f.update_period},
          {"depth_limit", f.depth_limit},
          {"min_radius", f.min_radius},
          {"noise",
           {{"sigma_x", f.noise.sigma_x},
            {"sigma_y", f.noise.sigma_y},
            {"sigma_radius", f.noise.sigma_radius},
            {"sigma_strength", f.noise.sigma_strength}}}};
}

inline CurrentField current_field_from_json(const nlohmann::json& j, std::uint64_t rng_seed = 0) {
  CurrentField f;
  for (const auto& layer : j.at("layers")) {
    std::vector<Vortex> vs;
    for (const auto& v : layer) {
      const auto c = v.at("center").get<std::vector<double>>();
      vs.push_back({Vec2(c.at(0), c.at(1)), v.at("radius").get<double>(), v.at("strength").get<double>()});
    }
    f.layers.push_back(std::move(vs));
  }
  f.vertical_scale = j.value("vertical_scale", 0.0);
  if (j.contains("background")) {
    const auto b = j["background"].get<std::vector<double>>();
    f.background = Vec3(b.at(0), b.at(1), b.at(2));
  }
  f.update_rate = j.value("update_rate", 1.0);
  f.update_period = j.value("update_period", 4.0);
  f.depth_limit = j.value("depth_limit", 1000.0);
  f.min_radius = j.value("min_radius", 0.1);
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    f.noise = {n.value("sigma_x", 0.0), n.value("sigma_y", 0.0), n.value("sigma_radius", 0.0),
               n.value("sigma_strength", 0.0)};
  }
  f.rng.seed(rng_seed);
  f.validate();
  return f;
}

/// Sampled quiver grid (x, y, u_c, v_c) over the base layer.
inline std::string current_grid_csv(const CurrentField& f, double extent_x, double extent_y, int nx, int ny) {
  std::string out = "x,y,u_c,v_c\n";
  char buf[128];
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 p((i + 0.5) * extent_x / nx, (j + 0.5) * extent_y / ny);
      const Vec2 v = velocity_2d(f, p);
      std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.9g,%.9g\n", p.x(), p.y(), v.x(), v.y());
      out += buf;
    }
  return out;
}

}  // namespace rdv
