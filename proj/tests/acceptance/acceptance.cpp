// Acceptance runner: one PASS/FAIL line per criterion with its runtime.
// Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace rdv;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::vector<std::string> failures;
  int checks = 0;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, " (got %.12g, want %.12g, tol %.1e)", got, want, tol);
    check(std::abs(got - want) <= tol, what + buf);
  }
};

template <typename Body>
bool run(Criterion c, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string note = body(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= c.budget_s) c.failures.push_back("runtime " + std::to_string(secs) + " s over budget");
  const bool ok = c.failures.empty();
  std::printf("[%s] criterion %d: %s | %d checks, %.2f s (budget %.0f s)%s%s\n", ok ? "PASS" : "FAIL", c.id,
              c.title.c_str(), c.checks, secs, c.budget_s, note.empty() ? "" : " | ", note.c_str());
  for (const auto& f : c.failures) std::printf("    - %s\n", f.c_str());
  std::fflush(stdout);
  return ok;
}

CurrentField uniform_flow(const Vec3& flow) {
  CurrentField f;
  f.layers = {{Vortex{Vec2::Zero(), 1.0, 0.0}}};
  f.background = flow;
  f.noise = CurrentNoise{};
  return f;
}

Trajectory straight(const Vec3& a, double length, double duration, int segments = 10) {
  Trajectory t;
  for (int k = 0; k <= segments; ++k) {
    TrajectorySample s;
    s.time = duration * k / segments;
    s.position = a + Vec3(length * k / segments, 0, 0);
    s.ground_velocity = Vec3(length / duration, 0, 0);
    t.samples.push_back(s);
  }
  t.t_f = duration;
  t.length = length;
  return t;
}

RendezvousSpec spec_between(const Vec3& a, const Vec3& b, double tr, double eps) {
  RendezvousSpec s;
  s.rendezvous_time = tr;
  s.epsilon = eps;
  s.initial.x = a.x();
  s.initial.y = a.y();
  s.initial.z = a.z();
  s.final.x = b.x();
  s.final.y = b.y();
  s.final.z = b.z();
  return s;
}

MissionSetup open_mission(double tr) {
  MissionSetup s;
  s.environment = make_snapshot(GridMap::open_water(300, 300, 10.0), uniform_flow(Vec3::Zero()), {});
  s.start.x = 200;
  s.start.y = 200;
  s.start.z = 50;
  s.message.position = Vec3(2000, 1400, 0);
  s.message.depth = 100;
  s.message.rendezvous_time = tr;
  s.config.plan.control_points = 3;
  s.config.plan.samples = 60;
  s.config.optimizer.set_budget(30, 40);
  s.config.epsilon = 150.0;
  s.config.replan_iterations = 40;
  return s;
}

// ---------------------------------------------------------------------------

std::string equation_suite(Criterion& c) {
  {
    CurrentField f;
    f.layers = {{Vortex{Vec2::Zero(), 2.8, 12.0}}};
    const Vec2 v = velocity_2d(f, Vec2(2.8, 0.0));
    c.near(v.y(), 0.431, 1e-3, "Lamb vortex v at one core radius");
    c.near(v.y(), 12.0 * 2.8 / (2 * oracle::kPi * 2.8 * 2.8) * (1 - std::exp(-1.0)), 1e-12, "Lamb vortex closed form");
    c.near(v.x(), 0.0, 1e-15, "Lamb vortex u at one core radius");
    f.layers = {{Vortex{Vec2(-3, 0), 2.8, 12.0}, Vortex{Vec2(3, 0), 2.8, 12.0}}};
    c.near(vorticity(f, Vec2::Zero()), 2.0 * oracle::lamb_vorticity(12.0, 2.8, Vec2(-3, 0), Vec2::Zero()), 1e-15,
           "two-vortex superposition");
    f.layers = {{Vortex{Vec2::Zero(), 2.8, 12.0}}};
    f.vertical_scale = 0.1;
    c.near(velocity_3d(f, Vec3::Zero()).w_c, 0.1 * 12.0 / (2 * oracle::kPi * 2.8), 1e-14, "vertical velocity at center");
    f.noise = CurrentNoise{0, 0, 0.5, 0};
    f.vertical_scale = 0.0;
    f.rng.seed(99);
    Rng replay(99);
    const double z = std::normal_distribution<double>(0.0, 1.0)(replay);
    c.near(evolve(f).base()[0].radius - 2.8, 0.5 * z, 1e-15, "radius evolution replays the seeded stream");
  }
  {
    const auto res = kmeans(std::vector<double>{0, 1, 9, 10}, 1, 2, 1);
    const double lo = std::min(res.centers[0][0], res.centers[1][0]), hi = std::max(res.centers[0][0], res.centers[1][0]);
    c.near(lo, 0.5, 0.0, "k-means low center");
    c.near(hi, 9.5, 0.0, "k-means high center");
    c.near(oracle::sse({0, 1, 9, 10}, res.labels, 2), oracle::best_two_partition({0, 1, 9, 10}, nullptr), 1e-12,
           "k-means matches exhaustive partition");
    std::vector<Occupancy> occ(21 * 21, Occupancy::Feasible);
    occ[10 * 21 + 10] = Occupancy::Forbidden;
    const GridMap map(21, 21, 10.0, Vec2(-5, -5), occ);
    c.near(map.distance_to_forbidden(Vec2(160, 100)), 60 - 5 * std::sqrt(2.0), 10.0, "distance to a single cell");
    c.near(oracle::brute_distance_to_forbidden(map, Vec2(160, 100)), 60 - 5 * std::sqrt(2.0), 1e-12,
           "brute-force distance oracle");
  }
  {
    Rng rng(5);
    ObstacleSigmas sig;
    const Vec3 a(0, 0, 0), b(1000, 800, 300);
    bool inside = true;
    for (int i = 0; i < 1000; ++i) {
      const auto o = spawn_obstacle(ObstacleKind::QuasiStatic, a, b, 40.0, sig, rng);
      for (int d = 0; d < 3; ++d) inside &= o.position[d] >= std::min(a[d], b[d]) && o.position[d] <= std::max(a[d], b[d]);
    }
    c.check(inside, "1000 spawns inside the start-dest box");
    auto o = make_obstacle(ObstacleKind::Moving, Vec3(100, 100, 100), 30.0, 4.0, 1234, 1.0);
    const auto next = step_moving(o);
    Rng replay(1234);
    Vec3 want = o.position;
    for (int d = 0; d < 3; ++d) {
      const double mag = uniform(replay, 1.0, 4.0);
      want[d] += random_sign(replay) * mag;
    }
    c.near((next.position - want).norm(), 0.0, 1e-12, "moving obstacle replays the seeded draws");
    const Vec3 r = propagate_radius_state(Vec3(5, 1, 0), 0.5, 0.0, 0.0);
    c.near((r - Vec3(5.5, 1, 0)).norm(), 0.0, 1e-15, "radius state transition hand example");
    ObstacleSet set;
    set.obstacles.push_back(make_obstacle(ObstacleKind::QuasiStatic, Vec3::Zero(), 50.0, 10.0, 1));
    c.near(clearance(set, Vec3(100, 0, 0)), 30.0, 1e-12, "obstacle clearance");
  }
  {
    const auto b = corridor_bounds(Vec3::Zero(), Vec3(100, 0, 0), 4);
    for (int i = 0; i < 4; ++i) {
      c.near(b.lower[i].x(), 25.0 * i, 1e-12, "corridor lower x");
      c.near(b.upper[i].x(), 25.0 * (i + 1), 1e-12, "corridor upper x");
      c.check(b.lower[i].y() == 0 && b.upper[i].y() == 0 && b.lower[i].z() == 0 && b.upper[i].z() == 0,
              "corridor y/z degenerate");
    }
    Rng rng(6);
    const auto wide = corridor_bounds(Vec3(0, 0, 0), Vec3(900, 700, 200), 5);
    bool contained = true, hull = true;
    for (int k = 0; k < 1000; ++k) {
      const auto poly = random_polygon(wide, Vec3(0, 0, 0), Vec3(900, 700, 200), rng);
      contained &= wide.contains(poly);
      if (k % 50 == 0) {
        const auto ctrl = poly.all_points();
        for (const auto& p : sample_curve(poly, 80))
          for (int t = 0; t < 16; ++t) {
            const Vec3 dir = Vec3(std::cos(t * 0.4), std::sin(t * 0.7), std::cos(t * 1.3)).normalized();
            double hmax = -kInfinity;
            for (const auto& q : ctrl) hmax = std::max(hmax, q.dot(dir));
            hull &= p.dot(dir) <= hmax + 1e-9;
          }
      }
    }
    c.check(contained, "1000 random polygons inside their boxes");
    c.check(hull, "curve samples inside the control hull");

    const double R = 500.0;
    std::vector<Vec3> arc;
    for (int k = 0; k <= 400; ++k) {
      const double a = 0.5 * oracle::kPi * k / 400;
      arc.emplace_back(R * std::sin(a), R - R * std::cos(a), 0.0);
    }
    const auto traj = synthesize_trajectory(arc, 2.0, uniform_flow(Vec3::Zero()));
    const double rate = 0.5 * oracle::kPi / traj.t_f;
    bool within = true;
    for (std::size_t k = 2; k < traj.samples.size(); ++k) within &= std::abs(traj.samples[k].r - rate) <= 0.02 * rate;
    c.check(within, "quarter-circle yaw rate within 2%");

    const std::vector<Vec3> line{Vec3::Zero(), Vec3(1250, 0, 0), Vec3(2500, 0, 0)};
    c.near(synthesize_trajectory(line, 2.5, uniform_flow(Vec3(1, 0, 0))).t_f, 2500.0 / 3.5, 1e-9, "tail current t_f");
  }
  {
    const Vec3 a(100, 100, 50);
    const auto env = make_snapshot(GridMap::open_water(600, 600, 10.0), uniform_flow(Vec3::Zero()), {});
    const auto cost = evaluate(straight(a, 4400, 2200), env, {}, spec_between(a, a + Vec3(4400, 0, 0), 1800, 300), {});
    c.near(cost.pi_term, (400.0 / 1800) * (400.0 / 1800), 1e-9, "pi term");
    c.near(cost.pi_term, 0.04938, 1e-5, "pi term rounded");
    c.near(cost.terms[4], (100.0 / 300) * (100.0 / 300), 1e-9, "time window term");
    auto t = straight(a, 4500, 1800);
    t.samples[3].ground_velocity.x() = 1.1 * VehicleLimits{}.u_max;
    c.near(evaluate(t, env, {}, spec_between(a, a + Vec3(4500, 0, 0), 1800, 300), {}).terms[0], 0.01, 1e-9,
           "surge bracket");
  }
  {
    c.check(opt::pso_velocity(0.5, 1, 1, 1, 0, 2, 4) == 6.5, "PSO hand step");
    const auto space = opt::SearchSpace{{-5, -5, -5}, {5, 5, 5}};
    auto sphere = [](std::span<const double> x) { return opt::Fitness{x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 0}; };
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 30; ++s) worst = std::max(worst, opt::pso_minimize(space, sphere, opt::PsoConfig{}, s).best_fitness.total);
    c.check(worst < 1e-3, "PSO sphere across 30 seeds (worst " + std::to_string(worst) + ")");
    c.near(opt::fa_attraction(2.0, 1.0, 1.0), 2.0 * std::exp(-1.0), 1e-15, "firefly attraction");
    const std::vector<double> r3{0}, r1{2}, r2{1};
    c.check(opt::de_mutant(r3, r1, r2, 0.5)[0] == 0.5, "DE mutant hand step");
  }
  {
    auto s = open_mission(400.0);
    const auto view = std::make_shared<const EnvironmentSnapshot>(s.environment);
    const double bound = (s.message.target() - s.start.position()).norm() / s.config.plan.water_speed;
    c.check(bound > 400.0 + s.config.epsilon, "straight-line lower bound exceeds the window");
    const auto res = initial_plan(s.message, s.start, view, Algorithm::Pso, s.config, 1);
    c.check(!res.proceed && res.report.has(Clause::RendezvousTime), "unreachable time cancels with the time clause");

    s = open_mission(1000.0);
    const auto first = initial_plan(s.message, s.start, view, Algorithm::De, s.config, 2);
    c.check(first.proceed, "open corridor proceeds");
    const Vec3 on_path = first.trajectory.samples[30].position;
    s.environment.obstacles.obstacles.push_back(make_obstacle(ObstacleKind::QuasiStatic, on_path, 60.0, 5.0, 1));
    const auto env = std::make_shared<const EnvironmentSnapshot>(s.environment);
    const auto run = replan(first.run, s.start, env, s.message, Algorithm::De, s.config, 3);
    const auto traj = plan_trajectory(run.best, *env, s.config.plan);
    const auto& o = env->obstacles.obstacles[0];
    double clear = kInfinity;
    const auto pts = traj.positions();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      for (int j = 0; j <= 20; ++j)
        clear = std::min(clear, (pts[i] + (j / 20.0) * (pts[i + 1] - pts[i]) - o.position).norm() - o.boundary(2.0));
    c.check(clear > 0.0 && run.best_cost.terms[5] == 0.0, "replan clears a dropped obstacle");
  }
  return {};
}

std::string invariant_suite(Criterion& c) {
  {
    CurrentField f;
    Rng rng(1);
    f.layers = {random_vortices(20, 200, 200, 25.0, 12.0, rng)};
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Vec2 p(uniform(rng, 0, 200), uniform(rng, 0, 200));
      const double h = 1e-3;
      const Vec2 ux = (velocity_2d(f, p + Vec2(h, 0)) - velocity_2d(f, p - Vec2(h, 0))) / (2 * h);
      const Vec2 uy = (velocity_2d(f, p + Vec2(0, h)) - velocity_2d(f, p - Vec2(0, h))) / (2 * h);
      const double scale = ux.cwiseAbs().sum() + uy.cwiseAbs().sum() + 1e-12;
      worst = std::max(worst, std::abs(ux.x() + uy.y()) / scale);
    }
    c.check(worst < 1e-6, "divergence-free horizontal field (worst ratio " + std::to_string(worst) + ")");
  }
  {
    Rng rng(2);
    const Vec3 a(10, 20, 30), b(1500, 900, 400);
    const auto bounds = corridor_bounds(a, b, 6);
    bool ends = true, oracle_ok = true;
    for (int k = 0; k < 200; ++k) {
      const auto poly = random_polygon(bounds, a, b, rng);
      const auto pts = sample_curve(poly, 50);
      ends &= (pts.front() - a).norm() < 1e-9 && (pts.back() - b).norm() < 1e-9;
      const auto ctrl = poly.all_points();
      for (int j = 0; j < 50; j += 7)
        oracle_ok &= (pts[j] - oracle::curve_point(ctrl, 3, j / 49.0)).norm() < 1e-9;
    }
    c.check(ends, "B-spline endpoints pinned");
    c.check(oracle_ok, "B-spline matches the Cox-de Boor oracle");
  }
  {
    CurrentFieldConfig cc;
    cc.vortex_count = 30;
    cc.radius = 150;
    cc.strength = 400;
    const auto field = make_current_field(cc, 4000, 4000, 3);
    ObstacleSet obs;
    Rng orng(4);
    for (int i = 0; i < 5; ++i)
      obs.obstacles.push_back(make_obstacle(ObstacleKind::Moving, Vec3(uniform(orng, 800, 3000), uniform(orng, 800, 3000), 100),
                                            uniform(orng, 40, 120), 5.0, i));
    const auto env = make_snapshot(GridMap::open_water(450, 450, 10.0), field, obs);
    Rng rng(5);
    int mismatches = 0;
    for (int k = 0; k < 300; ++k) {
      const Vec3 a(uniform(rng, 200, 800), uniform(rng, 200, 800), 50), b(uniform(rng, 2500, 4000), uniform(rng, 2500, 4000), 150);
      const auto poly = random_polygon(corridor_bounds(a, b, 5), a, b, rng);
      const auto pts = sample_curve(poly, 60);
      const auto traj = synthesize_trajectory(pts, uniform(rng, 1.0, 4.5), field);
      const auto spec = spec_between(a, b, uniform(rng, 600, 3000), uniform(rng, 50, 400));
      const VehicleLimits lim;
      const auto cost = evaluate(traj, env, lim, spec, {});
      double pk[4] = {0, 0, 0, 0};
      for (const auto& s : traj.samples) {
        pk[0] = std::max(pk[0], std::abs(s.ground_velocity.x()));
        pk[1] = std::max(pk[1], std::abs(s.ground_velocity.y()));
        pk[2] = std::max(pk[2], std::abs(s.theta));
        pk[3] = std::max(pk[3], std::abs(s.r));
      }
      double dmin = kInfinity;
      for (const auto& o : obs.obstacles)
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
          dmin = std::min(dmin, point_segment_distance(o.position, pts[i], pts[i + 1]) - o.boundary(2.0));
      const bool ok[6] = {pk[0] <= lim.u_max, pk[1] <= lim.v_max, pk[2] <= lim.theta_max, pk[3] <= lim.r_max,
                          std::abs(traj.nominal_duration() - spec.rendezvous_time) <= spec.epsilon,
                          dmin >= spec.clearance_threshold};
      for (int q = 0; q < 6; ++q) mismatches += (cost.terms[q] <= kZeroTolerance) != ok[q];
    }
    c.check(mismatches == 0, "penalty terms vanish iff their constraint holds (" + std::to_string(mismatches) + " mismatches)");
  }
  {
    opt::SearchSpace space{std::vector<double>(6, -3.0), std::vector<double>(6, 4.0)};
    auto f = [](std::span<const double> x) {
      double s = 0;
      for (std::size_t d = 0; d < x.size(); ++d) s += std::abs(x[d] - 0.5) + std::cos(3 * x[d]);
      return opt::Fitness{s, 0};
    };
    for (Algorithm a : kAllAlgorithms)
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        OptimizerConfig cfg;
        cfg.set_budget(30, 40);
        opt::GenericRun r;
        switch (a) {
          case Algorithm::Pso: r = opt::pso_minimize(space, f, cfg.pso, seed); break;
          case Algorithm::Bbo: r = opt::bbo_minimize(space, f, cfg.bbo, seed); break;
          case Algorithm::Fa: r = opt::fa_minimize(space, f, cfg.fa, seed); break;
          case Algorithm::De: r = opt::de_minimize(space, f, cfg.de, seed); break;
        }
        bool mono = true;
        for (std::size_t i = 1; i < r.history.size(); ++i) mono &= r.history[i].best_total <= r.history[i - 1].best_total;
        c.check(mono, std::string("elitism for ") + to_string(a));
      }
  }
  {
    auto s = open_mission(1100.0);
    CurrentFieldConfig cc;
    cc.vortex_count = 20;
    cc.radius = 120;
    cc.strength = 150;
    s.environment.current = make_current_field(cc, 3000, 3000, 6);
    s.config.replan_min_interval = 100;
    s.config.replan_iterations = 10;
    s.config.optimizer.set_budget(20, 20);
    for (Algorithm a : kAllAlgorithms) {
      const auto l1 = run_mission(s, a, 11), l2 = run_mission(s, a, 11);
      bool same = l1.outcome == l2.outcome && l1.flown.size() == l2.flown.size() && l1.replans == l2.replans &&
                  l1.achieved_t_f == l2.achieved_t_f;
      for (std::size_t k = 0; same && k < l1.flown.size(); ++k) same &= l1.flown[k].position == l2.flown[k].position;
      c.check(same, std::string("end-to-end determinism for ") + to_string(a));
    }
  }
  return {};
}

std::string oracle_equivalence(Criterion& c) {
  CurrentFieldConfig cc;
  cc.vortex_count = 15;
  cc.radius = 200.0;
  cc.strength = 300.0;
  cc.layers = 1;
  const auto field = make_current_field(cc, 2500, 2500, 21);
  ObstacleSet obs;
  obs.obstacles.push_back(make_obstacle(ObstacleKind::QuasiStatic, Vec3(1300, 1000, 80), 120.0, 10.0, 1));
  std::vector<Occupancy> occ(250 * 250, Occupancy::Feasible);
  for (int iy = 150; iy < 170; ++iy)
    for (int ix = 60; ix < 100; ++ix) occ[iy * 250 + ix] = Occupancy::Forbidden;
  auto env = std::make_shared<const EnvironmentSnapshot>(
      make_snapshot(GridMap(250, 250, 10.0, Vec2::Zero(), occ), field, obs));
  auto spec = spec_between(Vec3(300, 300, 40), Vec3(2200, 1800, 120), 1100.0, 150.0);
  PlanSettings ps;
  ps.control_points = 1;
  ps.samples = 60;
  const auto ctx = rendezvous_objective(env, spec, ps, corridor_bounds(spec.initial.position(), spec.final.position(), 1));
  const double grid = oracle::grid_minimum(
      [&](const Vec3& p) { return ctx.cost(ControlPolygon{ctx.start, {p}, ctx.target}).total; }, ctx.bounds.lower[0],
      ctx.bounds.upper[0], 20);
  OptimizerConfig cfg;
  cfg.set_budget(30, 50);
  double worst_ratio = 0.0;
  for (Algorithm a : kAllAlgorithms)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto run = optimize(a, ctx, cfg, seed);
      const double ratio = run.best_cost.total / grid;
      worst_ratio = std::max(worst_ratio, ratio);
      c.check(run.best_cost.total <= 1.05 * grid,
              std::string(to_string(a)) + " seed " + std::to_string(seed) + ": " + std::to_string(run.best_cost.total) +
                  " vs grid " + std::to_string(grid));
    }
  char buf[120];
  std::snprintf(buf, sizeof buf, "grid minimum %.6g, worst best/grid %.4f", grid, worst_ratio);
  return buf;
}

std::string scenario_four(Criterion& c) {
  const auto sc = load_scenario(std::string(RDV_PRESETS_DIR) + "/scenario4.json");
  const auto setup = build_setup(sc);
  std::string note;
  for (Algorithm a : kAllAlgorithms) {
    int good = 0, dirty = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      const auto log = run_mission(setup, a, sc.seeds.at(i));
      const bool ok = log.outcome == Outcome::Rendezvous && std::abs(log.achieved_t_f - 1800.0) < 300.0;
      good += ok;
      if (log.outcome == Outcome::Rendezvous && log.final_collision_violation != 0.0) ++dirty;
    }
    c.check(good >= 27, std::string(to_string(a)) + ": " + std::to_string(good) + "/30 rendezvous in the window");
    c.check(dirty == 0, std::string(to_string(a)) + ": " + std::to_string(dirty) + " successful runs end with collision violation");
    note += std::string(note.empty() ? "" : ", ") + to_string(a) + " " + std::to_string(good) + "/30";
  }
  return note;
}

std::string replanning_efficacy(Criterion& c) {
  const auto sc = load_scenario(std::string(RDV_PRESETS_DIR) + "/replan_drop.json");
  const auto setup = build_setup(sc);
  int good = 0, dropped = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto log = run_mission(setup, sc.algorithm, sc.seeds.at(i));
    for (const auto& e : log.events) dropped += e.kind == "obstacle_drop";
    good += log.outcome == Outcome::Rendezvous && log.incursions == 0 && count_incursions(log, *setup.environment.map) == 0;
  }
  c.check(dropped == 10, "an obstacle was dropped in every run");
  c.check(good >= 9, std::to_string(good) + "/10 runs reach rendezvous without incursions");
  return std::to_string(good) + "/10 clean rendezvous";
}

std::string kmeans_reproduction(Criterion& c) {
  RasterMap r;
  r.width = r.height = 64;
  r.pixels.resize(64 * 64);
  for (int iy = 0; iy < 64; ++iy)
    for (int ix = 0; ix < 64; ++ix) r.pixels[iy * 64 + ix] = ix < 32 ? 0.15 : 0.85;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto map = cluster_map(r, 2, seed);
    int wrong = 0;
    for (int iy = 0; iy < 64; ++iy)
      for (int ix = 0; ix < 64; ++ix) wrong += map.at(ix, iy) != (ix < 32 ? Occupancy::Feasible : Occupancy::Forbidden);
    c.check(wrong == 0, "two-tone image seed " + std::to_string(seed) + ": " + std::to_string(wrong) + " misassigned");
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const int ch = 1 + static_cast<int>(seed % 3);
    std::vector<double> px(48 * 48 * ch);
    for (auto& p : px) p = uniform01(rng);
    const auto res = kmeans(px, ch, 2 + static_cast<int>(seed % 4), seed);
    bool mono = true;
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      mono &= res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12;
    c.check(mono, "objective non-increasing on random map " + std::to_string(seed));
  }
  return {};
}

}  // namespace

// Optional arguments select criteria by number; default runs all six.
int main(int argc, char** argv) {
  std::vector<bool> on(7, argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k >= 1 && k <= 6) on[k] = true;
  }
  bool ok = true;
  if (on[1]) ok &= run({1, "equation unit suite", 5.0}, equation_suite);
  if (on[2]) ok &= run({2, "invariant suite", 30.0}, invariant_suite);
  if (on[3]) ok &= run({3, "oracle equivalence on the one-point problem", 60.0}, oracle_equivalence);
  if (on[4]) ok &= run({4, "scenario-4 statistical check", 600.0}, scenario_four);
  if (on[5]) ok &= run({5, "replanning efficacy", 600.0}, replanning_efficacy);
  if (on[6]) ok &= run({6, "k-means reproduction", 30.0}, kmeans_reproduction);
  std::printf("%s\n", ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return ok ? 0 : 1;
}
