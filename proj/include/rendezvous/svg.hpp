#pragma once

// Top-down SVG frames of a mission: one per chosen plan, with toggleable
// map / current / obstacles / path layers. North is up, east is right, and
// depth is drawn as line shading (deeper is darker).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rendezvous/mission_planner.hpp"

namespace rdv {

struct SvgOptions {
  std::vector<std::string> layers{"map", "current", "obstacles", "path"};
  int size = 700;         // px on the longer side
  int quiver = 24;        // arrows per side
  double depth_limit = 1000.0;
};

namespace detail {

class SvgCanvas {
 public:
  SvgCanvas(double extent_north, double extent_east, int size)
      : north_(extent_north), scale_(size / std::max(extent_north, extent_east)) {
    w_ = extent_east * scale_;
    h_ = extent_north * scale_;
  }
  double sx(const Vec3& p) const { return p.y() * scale_; }
  double sy(const Vec3& p) const { return (north_ - p.x()) * scale_; }
  double len(double m) const { return m * scale_; }
  double width() const { return w_; }
  double height() const { return h_; }

 private:
  double north_, scale_, w_ = 0, h_ = 0;
};

inline std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

inline std::string depth_color(double z, double limit) {
  const double f = std::clamp(limit > 0 ? z / limit : 0.0, 0.0, 1.0);
  const int g = static_cast<int>(std::lround(200 - 170 * std::sqrt(f)));
  char b[32];
  std::snprintf(b, sizeof b, "rgb(20,%d,%d)", g / 2, g);
  return b;
}

inline bool has_layer(const SvgOptions& o, const char* name) {
  return std::find(o.layers.begin(), o.layers.end(), name) != o.layers.end();
}

}  // namespace detail

/// Frame for plan `plan_index` of `log`.
inline std::string render_frame(const MissionLog& log, std::size_t plan_index, const SvgOptions& opt) {
  const auto& plan = log.plans.at(plan_index);
  const auto& env = *plan.environment;
  const GridMap& map = env.grid();
  const double ext_n = map.width() * map.cell_size(), ext_e = map.height() * map.cell_size();
  detail::SvgCanvas cv(ext_n, ext_e, opt.size);
  using detail::fmt;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", cv.width()) + "\" height=\"" +
       fmt("%.0f", cv.height()) + "\" viewBox=\"0 0 " + fmt("%.2f", cv.width()) + " " + fmt("%.2f", cv.height()) +
       "\">\n";
  s += "<title>" + std::string(to_string(log.algorithm)) + " plan " + std::to_string(plan_index) + " (" + plan.trigger +
       ") at t=" + fmt("%.1f", plan.time) + " s</title>\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#eef4fb\"/>\n";

  if (detail::has_layer(opt, "map")) {
    s += "<g id=\"layer-map\" fill=\"#a0825a\">\n";
    const double c = map.cell_size();
    for (int ix = 0; ix < map.width(); ++ix) {
      int run = -1;
      for (int iy = 0; iy <= map.height(); ++iy) {
        const bool forbidden = iy < map.height() && map.occupancy()[static_cast<std::size_t>(iy) * map.width() + ix] ==
                                                        Occupancy::Forbidden;
        if (forbidden && run < 0) run = iy;
        if (!forbidden && run >= 0) {
          const Vec3 corner(map.origin().x() + (ix + 1) * c, map.origin().y() + run * c, 0.0);
          s += "<rect x=\"" + fmt("%.2f", cv.sx(corner)) + "\" y=\"" + fmt("%.2f", cv.sy(corner)) + "\" width=\"" +
               fmt("%.2f", cv.len((iy - run) * c)) + "\" height=\"" + fmt("%.2f", cv.len(c)) + "\"/>\n";
          run = -1;
        }
      }
    }
    s += "</g>\n";
  }

  if (detail::has_layer(opt, "current")) {
    s += "<g id=\"layer-current\" stroke=\"#3b6fb6\" stroke-width=\"1\">\n";
    const int q = std::max(2, opt.quiver);
    std::vector<std::pair<Vec3, Vec2>> arrows;
    double vmax = 0.0;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        const Vec3 p((i + 0.5) * ext_n / q, (j + 0.5) * ext_e / q, 0.0);
        const Vec2 v = velocity_2d(env.current, p.head<2>());
        vmax = std::max(vmax, v.norm());
        arrows.push_back({p, v});
      }
    const double cell = 0.9 * std::min(ext_n, ext_e) / q;
    for (const auto& [p, v] : arrows) {
      if (vmax <= 0.0) break;
      const Vec3 tip = p + Vec3(v.x(), v.y(), 0.0) * (cell / vmax);
      s += "<line x1=\"" + fmt("%.2f", cv.sx(p)) + "\" y1=\"" + fmt("%.2f", cv.sy(p)) + "\" x2=\"" +
           fmt("%.2f", cv.sx(tip)) + "\" y2=\"" + fmt("%.2f", cv.sy(tip)) + "\"/>\n";
    }
    s += "</g>\n";
  }

  if (detail::has_layer(opt, "obstacles")) {
    s += "<g id=\"layer-obstacles\">\n";
    const ObstacleFrame* frame = nullptr;
    for (const auto& f : log.obstacle_frames)
      if (f.time <= plan.time + 1e-9) frame = &f;
    if (frame) {
      for (std::size_t k = 0; k < frame->centers.size(); ++k) {
        const char* color = frame->kinds[k] == ObstacleKind::QuasiStatic ? "#555555"
                             : frame->kinds[k] == ObstacleKind::Moving   ? "#c03030"
                                                                          : "#b07020";
        s += "<circle cx=\"" + fmt("%.2f", cv.sx(frame->centers[k])) + "\" cy=\"" + fmt("%.2f", cv.sy(frame->centers[k])) +
             "\" r=\"" + fmt("%.2f", cv.len(frame->boundaries[k])) + "\" fill=\"" + color +
             "\" fill-opacity=\"0.25\" stroke=\"#2a8a2a\" stroke-dasharray=\"4 3\"/>\n";
      }
    }
    s += "</g>\n";
  }

  if (detail::has_layer(opt, "path")) {
    s += "<g id=\"layer-path\" fill=\"none\">\n";
    for (std::size_t i = 0; i < plan_index; ++i) {
      std::string pts;
      for (const auto& smp : log.plans[i].trajectory.samples)
        pts += fmt("%.2f", cv.sx(smp.position)) + "," + fmt("%.2f", cv.sy(smp.position)) + " ";
      s += "<polyline points=\"" + pts + "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    }
    const auto& ps = plan.trajectory.samples;
    for (std::size_t k = 0; k + 1 < ps.size(); ++k)
      s += "<line x1=\"" + fmt("%.2f", cv.sx(ps[k].position)) + "\" y1=\"" + fmt("%.2f", cv.sy(ps[k].position)) +
           "\" x2=\"" + fmt("%.2f", cv.sx(ps[k + 1].position)) + "\" y2=\"" + fmt("%.2f", cv.sy(ps[k + 1].position)) +
           "\" stroke=\"" + detail::depth_color(ps[k].position.z(), opt.depth_limit) + "\" stroke-width=\"3\"/>\n";
    std::string flown;
    for (const auto& f : log.flown)
      if (f.time <= plan.time + 1e-9) flown += fmt("%.2f", cv.sx(f.position)) + "," + fmt("%.2f", cv.sy(f.position)) + " ";
    if (!flown.empty()) s += "<polyline points=\"" + flown + "\" stroke=\"#e0a000\" stroke-width=\"2\"/>\n";
    if (!ps.empty()) {
      const Vec3 a = log.plans.front().start_state.position(), b = ps.back().position;
      s += "<circle cx=\"" + fmt("%.2f", cv.sx(a)) + "\" cy=\"" + fmt("%.2f", cv.sy(a)) +
           "\" r=\"6\" fill=\"#d02020\"/>\n";
      s += "<rect x=\"" + fmt("%.2f", cv.sx(b) - 6) + "\" y=\"" + fmt("%.2f", cv.sy(b) - 6) +
           "\" width=\"12\" height=\"12\" fill=\"#f0d000\" stroke=\"#000\"/>\n";
      const Vec3 v = plan.start_state.position();
      s += "<polygon points=\"" + fmt("%.2f", cv.sx(v)) + "," + fmt("%.2f", cv.sy(v) - 7) + " " +
           fmt("%.2f", cv.sx(v) - 6) + "," + fmt("%.2f", cv.sy(v) + 5) + " " + fmt("%.2f", cv.sx(v) + 6) + "," +
           fmt("%.2f", cv.sy(v) + 5) + "\" fill=\"#f0d000\"/>\n";
    }
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

/// Up to `count` plan indices spread evenly over the mission, always
/// including the initial plan and the last plan.
inline std::vector<std::size_t> frame_plan_indices(const MissionLog& log, int count) {
  std::vector<std::size_t> out;
  const std::size_t n = log.plans.size();
  if (n == 0 || count <= 0) return out;
  if (static_cast<std::size_t>(count) >= n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  for (int k = 0; k < count; ++k) {
    const std::size_t idx = count == 1 ? 0 : static_cast<std::size_t>(std::lround(double(k) * (n - 1) / (count - 1)));
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

}  // namespace rdv
