#pragma once

// Scenario files: a versioned JSON document describing the map, current,
// obstacle roster, rendezvous message, planner and optimizer settings, and
// the seeds to run. `build_setup` turns one into a MissionSetup.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rendezvous/map_io.hpp"
#include "rendezvous/mission_planner.hpp"

namespace rdv {

inline constexpr int kScenarioSchemaVersion = 1;

struct ObstacleRoster {
  int quasi_static = 0;
  int moving = 0;
  int dynamic = 0;
  double nominal_radius = 60.0;
  double base_step = 2.0;
  ObstacleSigmas sigmas;
  double confidence_multiplier = 2.0;
};

struct OutputOptions {
  std::vector<std::string> svg_layers{"map", "current", "obstacles", "path"};
  int svg_frames = 4;
};

struct Scenario {
  std::string name;
  std::string description;
  nlohmann::json map;  // kept raw; see build_map
  std::string base_dir;
  CurrentFieldConfig current;
  ObstacleRoster obstacles;
  VehicleState start;
  RendezvousMessage message;
  MissionConfig mission;
  Algorithm algorithm = Algorithm::Pso;
  std::uint64_t environment_seed = 1;
  std::vector<std::uint64_t> seeds{1};
  std::vector<ScriptedDrop> drops;
  OutputOptions output;
};

namespace detail {

inline Vec3 vec3_from(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw InvalidConfig(std::string(what) + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline CurrentNoise noise_from(const nlohmann::json& j, CurrentNoise n) {
  return {j.value("sigma_x", n.sigma_x), j.value("sigma_y", n.sigma_y), j.value("sigma_radius", n.sigma_radius),
          j.value("sigma_strength", n.sigma_strength)};
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j, const std::string& base_dir = ".") {
  Scenario s;
  try {
    const int version = j.value("schema_version", 0);
    if (version != kScenarioSchemaVersion)
      throw InvalidConfig("unsupported scenario schema_version " + std::to_string(version));
    s.name = j.value("name", std::string("scenario"));
    s.description = j.value("description", std::string());
    s.base_dir = base_dir;
    s.map = j.value("map", nlohmann::json{{"source", "open_water"}});

    if (auto c = j.find("current"); c != j.end()) {
      auto& cc = s.current;
      cc.vortex_count = c->value("vortex_count", cc.vortex_count);
      cc.radius = c->value("radius", cc.radius);
      cc.strength = c->value("strength", cc.strength);
      cc.vertical_scale = c->value("vertical_scale", cc.vertical_scale);
      if (c->contains("background")) cc.background = detail::vec3_from((*c)["background"], "current background");
      cc.layers = c->value("layers", cc.layers);
      cc.depth_limit = c->value("depth_limit", cc.depth_limit);
      cc.update_period = c->value("update_period", cc.update_period);
      cc.update_rate = c->value("update_rate", cc.update_rate);
      cc.min_radius = c->value("min_radius", cc.min_radius);
      if (c->contains("noise")) cc.noise = detail::noise_from((*c)["noise"], cc.noise);
      if (c->contains("layer_noise")) cc.layer_noise = detail::noise_from((*c)["layer_noise"], cc.layer_noise);
    }

    if (auto o = j.find("obstacles"); o != j.end()) {
      auto& r = s.obstacles;
      r.quasi_static = o->value("quasi_static", 0);
      r.moving = o->value("moving", 0);
      r.dynamic = o->value("dynamic", 0);
      r.nominal_radius = o->value("nominal_radius", r.nominal_radius);
      r.base_step = o->value("base_step", r.base_step);
      r.confidence_multiplier = o->value("confidence_multiplier", r.confidence_multiplier);
      if (auto sg = o->find("sigmas"); sg != o->end())
        r.sigmas = {sg->value("position", r.sigmas.position), sg->value("uncertainty", r.sigmas.uncertainty),
                    sg->value("radius_noise", r.sigmas.radius_noise)};
      if (r.quasi_static < 0 || r.moving < 0 || r.dynamic < 0) throw InvalidConfig("obstacle counts must be >= 0");
      if (!(r.confidence_multiplier > 0.0)) throw InvalidConfig("confidence multiplier must be positive");
    }

    const auto& rv = j.at("rendezvous");
    const Vec3 start = detail::vec3_from(rv.at("start"), "rendezvous.start");
    s.start.x = start.x();
    s.start.y = start.y();
    s.start.z = start.z();
    s.start.psi = rv.value("start_heading", 0.0);
    const Vec3 target = detail::vec3_from(rv.at("target"), "rendezvous.target");
    s.message.position = target;
    s.message.depth = target.z();
    s.message.course = rv.value("course", 0.0);
    s.message.rendezvous_time = rv.at("rendezvous_time").get<double>();
    s.mission.epsilon = rv.value("epsilon", s.mission.epsilon);
    s.mission.clearance_threshold = rv.value("clearance_threshold", s.mission.clearance_threshold);
    s.mission.plan.water_speed = rv.value("water_speed", s.mission.plan.water_speed);

    if (auto p = j.find("planner"); p != j.end()) {
      auto& m = s.mission;
      m.plan.control_points = p->value("control_points", m.plan.control_points);
      m.plan.samples = p->value("samples", m.plan.samples);
      m.plan.degree = p->value("degree", m.plan.degree);
      if (auto l = p->find("limits"); l != p->end()) {
        m.plan.limits.u_max = l->value("u_max", m.plan.limits.u_max);
        m.plan.limits.v_max = l->value("v_max", m.plan.limits.v_max);
        m.plan.limits.theta_max = l->value("theta_max", m.plan.limits.theta_max);
        m.plan.limits.r_max = l->value("r_max", m.plan.limits.r_max);
      }
      if (auto w = p->find("weights"); w != p->end()) {
        const auto beta = w->get<std::vector<double>>();
        if (beta.size() != 7) throw InvalidConfig("planner.weights needs 7 entries");
        std::copy(beta.begin(), beta.end(), m.plan.weights.beta.begin());
      }
      m.sim_step = p->value("sim_step", m.sim_step);
      m.arrival_radius = p->value("arrival_radius", m.arrival_radius);
      m.sensor_range = p->value("sensor_range", m.sensor_range);
      m.replan_min_interval = p->value("replan_min_interval", m.replan_min_interval);
      m.obstacle_replan_min_interval = p->value("obstacle_replan_min_interval", m.obstacle_replan_min_interval);
      m.planning_margin = p->value("planning_margin", m.planning_margin);
      m.replan_iterations = p->value("replan_iterations", m.replan_iterations);
      m.replanning = p->value("replanning", m.replanning);
    }

    if (auto o = j.find("optimizer"); o != j.end()) {
      s.algorithm = algorithm_from_string(o->value("algorithm", std::string("pso")));
      s.mission.optimizer = optimizer_config_from_json(*o);
    }

    if (auto sd = j.find("seeds"); sd != j.end()) {
      s.environment_seed = sd->value("environment", s.environment_seed);
      if (sd->contains("runs")) {
        s.seeds = (*sd)["runs"].get<std::vector<std::uint64_t>>();
      } else {
        const std::uint64_t base = sd->value("base", std::uint64_t{1});
        const int count = sd->value("count", 1);
        if (count < 1) throw InvalidConfig("seeds.count must be at least 1");
        s.seeds.clear();
        for (int i = 0; i < count; ++i) s.seeds.push_back(base + i);
      }
      if (s.seeds.empty()) throw InvalidConfig("scenario needs at least one run seed");
    }

    for (const auto& d : j.value("drops", nlohmann::json::array())) {
      ScriptedDrop drop;
      drop.time = d.at("time").get<double>();
      drop.kind = obstacle_kind_from_string(d.value("kind", std::string("moving")));
      drop.ahead = d.value("ahead", drop.ahead);
      drop.radius = d.value("radius", drop.radius);
      drop.uncertainty = d.value("uncertainty", drop.uncertainty);
      drop.base_step = d.value("base_step", drop.base_step);
      s.drops.push_back(drop);
    }

    if (auto o = j.find("output"); o != j.end()) {
      s.output.svg_layers = o->value("svg_layers", s.output.svg_layers);
      s.output.svg_frames = o->value("svg_frames", s.output.svg_frames);
      for (const auto& l : s.output.svg_layers)
        if (l != "map" && l != "current" && l != "obstacles" && l != "path")
          throw InvalidConfig("unknown svg layer: " + l);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("malformed scenario: ") + e.what());
  }
  if (!(s.message.rendezvous_time > 0.0)) throw InvalidConfig("rendezvous_time must be positive");
  if (s.start.position() == s.message.target()) throw InvalidConfig("start and target coincide");
  s.mission.validate();
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(j, std::filesystem::path(path).parent_path().string());
}

/// Map sources: "open_water" (width, height, cell_size), "synthetic" (a
/// generated coastline raster with `islands`, clustered), "pgm" and "csv"
/// (raster files relative to the scenario, clustered). Clustered maps use
/// `clusters` (default 2) and take the start cell as the known-water seed.
inline GridMap build_map(const Scenario& s) {
  const auto& m = s.map;
  const std::string source = m.value("source", std::string("open_water"));
  const double cell = m.value("cell_size", 10.0);
  const int width = m.value("width", 350);
  const int height = m.value("height", 350);
  const double depth = m.value("depth_limit", 1000.0);
  if (!(cell > 0.0) || width <= 0 || height <= 0) throw InvalidConfig("map dimensions must be positive");
  if (source == "open_water") return GridMap::open_water(width, height, cell, depth);

  RasterMap raster;
  if (source == "synthetic") {
    std::vector<Island> islands;
    for (const auto& i : m.value("islands", nlohmann::json::array())) {
      const auto c = i.at("center").get<std::vector<double>>();
      islands.push_back({Vec2(c.at(0), c.at(1)), i.at("radius").get<double>()});
    }
    raster = synthetic_coast_raster(width, height, cell, islands, derive_seed(s.environment_seed, 3));
  } else if (source == "pgm" || source == "csv") {
    const auto rel = m.at("path").get<std::string>();
    const auto path = (std::filesystem::path(s.base_dir) / rel).string();
    try {
      raster = source == "pgm" ? read_pgm(path, cell) : read_csv_grid(path, cell);
    } catch (const InvalidInput& e) {
      throw MapReadError(e.what());
    }
  } else {
    throw InvalidConfig("unknown map source: " + source);
  }
  const auto water = CellIndex{static_cast<int>(std::floor(s.start.x / cell)), static_cast<int>(std::floor(s.start.y / cell))};
  return cluster_map_detailed(raster, m.value("clusters", 2), derive_seed(s.environment_seed, 4), water, depth).map;
}

/// Environment at t = 0 for one scenario. Obstacle placement and the current
/// field depend only on the environment seed; run seeds drive evolution.
inline MissionSetup build_setup(const Scenario& s, std::shared_ptr<const GridMap> map = nullptr) {
  if (!map) map = std::make_shared<const GridMap>(build_map(s));
  MissionSetup setup;
  const double ext_x = map->width() * map->cell_size();
  const double ext_y = map->height() * map->cell_size();
  auto current = make_current_field(s.current, ext_x, ext_y, derive_seed(s.environment_seed, 1));
  current.depth_limit = map->depth_limit();

  ObstacleSet obstacles;
  obstacles.sigmas = s.obstacles.sigmas;
  obstacles.confidence_multiplier = s.obstacles.confidence_multiplier;
  Rng rng(derive_seed(s.environment_seed, 2));
  const Vec3 a = s.start.position(), b = s.message.target();
  auto spawn = [&](ObstacleKind kind, int count) {
    for (int i = 0; i < count; ++i) {
      auto o = spawn_obstacle(kind, a, b, s.obstacles.nominal_radius, s.obstacles.sigmas, rng,
                              s.obstacles.confidence_multiplier);
      o.base_step = kind == ObstacleKind::QuasiStatic ? 0.0 : s.obstacles.base_step;
      obstacles.obstacles.push_back(std::move(o));
    }
  };
  spawn(ObstacleKind::QuasiStatic, s.obstacles.quasi_static);
  spawn(ObstacleKind::Moving, s.obstacles.moving);
  spawn(ObstacleKind::Dynamic, s.obstacles.dynamic);

  setup.environment = EnvironmentSnapshot{std::move(map), std::move(current), std::move(obstacles), 0.0};
  setup.start = s.start;
  setup.message = s.message;
  setup.config = s.mission;
  setup.drops = s.drops;
  if (!setup.environment.map->is_feasible(s.start.position()))
    throw InvalidConfig("start position lies in forbidden water");
  if (!setup.environment.map->is_feasible(s.message.target()))
    throw InvalidConfig("rendezvous position lies in forbidden water");
  return setup;
}

}  // namespace rdv
