#pragma once

// Candidate paths as clamped B-spline control polygons, their sampled curves,
// and the kinematic time parameterization through the current field.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rendezvous/current_field.hpp"
#include "rendezvous/environment.hpp"
#include "rendezvous/errors.hpp"
#include "rendezvous/geometry.hpp"
#include "rendezvous/random.hpp"

namespace rdv {

/// Fixed endpoints plus the optimized interior control points.
struct ControlPolygon {
  Vec3 start = Vec3::Zero();
  std::vector<Vec3> interior;
  Vec3 target = Vec3::Zero();

  std::size_t dimension() const { return 3 * interior.size(); }

  std::vector<Vec3> all_points() const {
    std::vector<Vec3> pts;
    pts.reserve(interior.size() + 2);
    pts.push_back(start);
    pts.insert(pts.end(), interior.begin(), interior.end());
    pts.push_back(target);
    return pts;
  }

  /// [x1, y1, z1, x2, ...] over the interior points.
  std::vector<double> flatten() const {
    std::vector<double> x;
    x.reserve(dimension());
    for (const auto& p : interior) x.insert(x.end(), {p.x(), p.y(), p.z()});
    return x;
  }

  static ControlPolygon from_flat(const Vec3& start, const Vec3& target, std::span<const double> x) {
    if (x.size() % 3 != 0) throw InvalidInput("flat control polygon length must be a multiple of 3");
    ControlPolygon poly{start, {}, target};
    poly.interior.reserve(x.size() / 3);
    for (std::size_t i = 0; i < x.size(); i += 3) poly.interior.emplace_back(x[i], x[i + 1], x[i + 2]);
    return poly;
  }

  friend bool operator==(const ControlPolygon&, const ControlPolygon&) = default;
};

struct CorridorBounds {
  std::vector<Vec3> lower;
  std::vector<Vec3> upper;

  std::size_t size() const { return lower.size(); }

  std::vector<double> flat_lower() const { return flatten(lower); }
  std::vector<double> flat_upper() const { return flatten(upper); }

  bool contains(const ControlPolygon& poly, double tol = 0.0) const {
    if (poly.interior.size() != lower.size()) return false;
    for (std::size_t i = 0; i < lower.size(); ++i)
      for (int a = 0; a < 3; ++a)
        if (poly.interior[i][a] < lower[i][a] - tol || poly.interior[i][a] > upper[i][a] + tol) return false;
    return true;
  }

  ControlPolygon clip(ControlPolygon poly) const {
    for (std::size_t i = 0; i < poly.interior.size() && i < lower.size(); ++i)
      poly.interior[i] = poly.interior[i].cwiseMax(lower[i]).cwiseMin(upper[i]);
    return poly;
  }

 private:
  static std::vector<double> flatten(const std::vector<Vec3>& pts) {
    std::vector<double> x;
    x.reserve(pts.size() * 3);
    for (const auto& p : pts) x.insert(x.end(), {p.x(), p.y(), p.z()});
    return x;
  }
};

/// Splits each axis of the start->target extent into n equal sub-intervals;
/// interior point i lives in sub-interval i of every axis.
inline CorridorBounds corridor_bounds(const Vec3& start, const Vec3& target, int n) {
  if (n < 1) throw InvalidInput("corridor needs at least one control point");
  CorridorBounds b;
  b.lower.reserve(n);
  b.upper.reserve(n);
  const Vec3 delta = target - start;
  for (int i = 0; i < n; ++i) {
    const Vec3 a = start + delta * (static_cast<double>(i) / n);
    const Vec3 c = i + 1 == n ? target : Vec3(start + delta * (static_cast<double>(i + 1) / n));
    b.lower.push_back(a.cwiseMin(c));
    b.upper.push_back(a.cwiseMax(c));
  }
  return b;
}

/// Each coordinate = L + rand * (U - L) with rand drawn from `rand01`.
template <typename Uniform01>
ControlPolygon random_polygon(const CorridorBounds& bounds, const Vec3& start, const Vec3& target, Uniform01&& rand01) {
  ControlPolygon poly{start, {}, target};
  poly.interior.reserve(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = bounds.lower[i][a] + rand01() * (bounds.upper[i][a] - bounds.lower[i][a]);
    poly.interior.push_back(p);
  }
  return poly;
}

inline ControlPolygon random_polygon(const CorridorBounds& bounds, const Vec3& start, const Vec3& target, Rng& rng) {
  return random_polygon(bounds, start, target, [&rng] { return uniform01(rng); });
}

// ---------------------------------------------------------------------------
// B-spline evaluation

/// Clamped uniform knot vector for `count` control points of degree `degree`.
inline std::vector<double> clamped_uniform_knots(int count, int degree) {
  std::vector<double> knots;
  knots.reserve(count + degree + 1);
  const int segments = count - degree;
  for (int i = 0; i <= degree; ++i) knots.push_back(0.0);
  for (int i = 1; i < segments; ++i) knots.push_back(static_cast<double>(i) / segments);
  for (int i = 0; i <= degree; ++i) knots.push_back(1.0);
  return knots;
}

inline int find_knot_span(const std::vector<double>& knots, int count, int degree, double t) {
  if (t >= knots[count]) return count - 1;
  const auto it = std::upper_bound(knots.begin() + degree, knots.begin() + count + 1, t);
  return static_cast<int>(it - knots.begin()) - 1;
}

/// Non-zero blending functions B_{span-degree..span, degree}(t) by the
/// triangular Cox-de Boor recursion.
inline std::vector<double> basis_functions(const std::vector<double>& knots, int span, int degree, double t) {
  std::vector<double> n(degree + 1, 0.0), left(degree + 1), right(degree + 1);
  n[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[j] = t - knots[span + 1 - j];
    right[j] = knots[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double tmp = denom == 0.0 ? 0.0 : n[r] / denom;
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  return n;
}

/// Precomputed basis table for sampling many polygons with the same control
/// point count at the same parameters. Degree is reduced when there are too
/// few control points.
class SplineSampler {
 public:
  SplineSampler(int control_points, int samples, int degree = 3)
      : count_(control_points), samples_(samples), degree_(std::min(degree, control_points - 1)) {
    if (control_points < 2) throw InvalidInput("spline needs at least two control points");
    if (samples < 2) throw InvalidInput("spline sampling needs at least two samples");
    if (degree < 1) throw InvalidInput("spline degree must be at least 1");
    knots_ = clamped_uniform_knots(count_, degree_);
    spans_.resize(samples_);
    weights_.resize(static_cast<std::size_t>(samples_) * (degree_ + 1));
    for (int j = 0; j < samples_; ++j) {
      const double t = static_cast<double>(j) / (samples_ - 1);
      const int span = find_knot_span(knots_, count_, degree_, t);
      spans_[j] = span;
      const auto n = basis_functions(knots_, span, degree_, t);
      std::copy(n.begin(), n.end(), weights_.begin() + static_cast<std::ptrdiff_t>(j) * (degree_ + 1));
    }
  }

  int control_points() const { return count_; }
  int samples() const { return samples_; }
  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }

  void sample(std::span<const Vec3> control, std::vector<Vec3>& out) const {
    if (static_cast<int>(control.size()) != count_) throw InvalidInput("control point count mismatch");
    out.resize(samples_);
    for (int j = 0; j < samples_; ++j) {
      const int first = spans_[j] - degree_;
      const double* w = weights_.data() + static_cast<std::ptrdiff_t>(j) * (degree_ + 1);
      Vec3 p = Vec3::Zero();
      for (int k = 0; k <= degree_; ++k) p += w[k] * control[first + k];
      out[j] = p;
    }
    // clamped knots interpolate the end points; pin them exactly
    out.front() = control.front();
    out.back() = control.back();
  }

  std::vector<Vec3> sample(const ControlPolygon& poly) const {
    std::vector<Vec3> out;
    const auto pts = poly.all_points();
    sample(pts, out);
    return out;
  }

  /// Greville abscissa of control point i: where it has the most influence.
  double greville(int i) const {
    double s = 0.0;
    for (int k = 1; k <= degree_; ++k) s += knots_[i + k];
    return s / degree_;
  }

 private:
  int count_;
  int samples_;
  int degree_;
  std::vector<double> knots_;
  std::vector<int> spans_;
  std::vector<double> weights_;
};

/// m points of the clamped uniform B-spline over [start, interior..., target]
/// at uniform parameters in [0, 1].
inline std::vector<Vec3> sample_curve(const ControlPolygon& poly, int m, int degree = 3) {
  return SplineSampler(static_cast<int>(poly.interior.size()) + 2, m, degree).sample(poly);
}

// ---------------------------------------------------------------------------
// Kinematics

struct SegmentAngles {
  double psi = 0.0;    // heading from north toward east
  double theta = 0.0;  // flight path angle, negative when descending (z down)
  double r = 0.0;      // yaw rate
};

/// Per-segment heading, flight-path angle and yaw rate. Segment i's yaw rate
/// is its wrapped heading change over `segment_times[i]`. Zero-length
/// segments reuse the previous angles.
inline std::vector<SegmentAngles> heading_profile(std::span<const Vec3> points, std::span<const double> segment_times) {
  if (points.size() < 2) throw InvalidInput("heading profile needs at least two points");
  if (segment_times.size() + 1 != points.size()) throw InvalidInput("one traversal time per segment required");
  std::vector<SegmentAngles> out(points.size() - 1);
  SegmentAngles prev;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec3 d = points[i + 1] - points[i];
    SegmentAngles a = prev;
    a.r = 0.0;
    if (d.squaredNorm() > 0.0) {
      a.psi = std::atan2(d.y(), d.x());
      a.theta = std::atan2(-d.z(), std::hypot(d.x(), d.y()));
    }
    if (i > 0 && segment_times[i] > 0.0) a.r = wrap_angle(a.psi - prev.psi) / segment_times[i];
    out[i] = a;
    prev = a;
  }
  return out;
}

/// Unit-speed traversal times (segment lengths).
inline std::vector<SegmentAngles> heading_profile(std::span<const Vec3> points) {
  std::vector<double> times;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) times.push_back((points[i + 1] - points[i]).norm());
  return heading_profile(points, times);
}

/// Pose and body velocities. Roll, roll rate and pitch rate stay zero.
struct VehicleState {
  double x = 0, y = 0, z = 0;
  double phi = 0, theta = 0, psi = 0;
  double u = 0, v = 0, w = 0;
  double p = 0, q = 0, r = 0;

  Vec3 position() const { return {x, y, z}; }
};

struct TrajectorySample {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  double psi = 0.0;
  double theta = 0.0;
  double r = 0.0;
  Vec3 ground_velocity = Vec3::Zero();  // (u, v, w) in the world frame

  VehicleState state() const {
    VehicleState s;
    s.x = position.x();
    s.y = position.y();
    s.z = position.z();
    s.theta = theta;
    s.psi = psi;
    s.u = ground_velocity.x();
    s.v = ground_velocity.y();
    s.w = ground_velocity.z();
    s.r = r;
    return s;
  }
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double t_f = 0.0;     // +infinity when some segment cannot make progress
  double length = 0.0;  // polyline length of the samples
  bool progress_feasible = true;
  int worst_segment = -1;  // slowest along-track segment

  bool empty() const { return samples.empty(); }
  // Finite duration even for infeasible trajectories (blocked segments timed at min progress speed).
  double nominal_duration() const { return samples.empty() ? 0.0 : samples.back().time - samples.front().time; }
  std::vector<Vec3> positions() const {
    std::vector<Vec3> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.position);
    return out;
  }
};

inline constexpr double kMinProgressSpeed = 0.1;

/// Times a polyline: on each segment the water velocity (magnitude
/// water_speed) points along the segment and the current sampled at the
/// segment midpoint is added; the segment takes length / along-track ground
/// speed. Segments with along-track speed <= min_progress make the
/// trajectory infeasible (t_f = +inf) and are timed at min_progress.
inline Trajectory synthesize_trajectory(std::span<const Vec3> points, double water_speed, const CurrentField& current,
                                        double start_time = 0.0, double min_progress = kMinProgressSpeed) {
  if (!(water_speed > 0.0)) throw InvalidConfig("water speed must be positive");
  if (points.size() < 2) throw InvalidInput("trajectory needs at least two points");
  const std::size_t segs = points.size() - 1;
  std::vector<double> times(segs);
  std::vector<Vec3> ground(segs);
  Trajectory traj;
  double slowest = kInfinity;
  for (std::size_t i = 0; i < segs; ++i) {
    const Vec3 d = points[i + 1] - points[i];
    const double len = d.norm();
    traj.length += len;
    const Vec3 mid = 0.5 * (points[i] + points[i + 1]);
    const Vec3 c = velocity_3d(current, mid).vector();
    if (len == 0.0) {
      times[i] = 0.0;
      ground[i] = i > 0 ? ground[i - 1] : c;
      continue;
    }
    const Vec3 dir = d / len;
    ground[i] = water_speed * dir + c;
    const double along = water_speed + c.dot(dir);
    if (along < slowest) {
      slowest = along;
      traj.worst_segment = static_cast<int>(i);
    }
    if (along <= min_progress) {
      traj.progress_feasible = false;
      times[i] = len / min_progress;
    } else {
      times[i] = len / along;
    }
  }
  const auto angles = heading_profile(points, times);
  traj.samples.resize(points.size());
  double t = start_time;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const std::size_t s = std::min(k, segs - 1);
    auto& out = traj.samples[k];
    out.time = t;
    out.position = points[k];
    out.psi = angles[s].psi;
    out.theta = angles[s].theta;
    out.r = angles[s].r;
    out.ground_velocity = ground[s];
    if (k < segs) t += times[k];
  }
  traj.t_f = traj.progress_feasible ? traj.samples.back().time - start_time : kInfinity;
  return traj;
}

inline Trajectory synthesize_trajectory(const ControlPolygon& poly, double water_speed, const EnvironmentSnapshot& env,
                                        int m, int degree = 3) {
  const auto pts = sample_curve(poly, m, degree);
  return synthesize_trajectory(pts, water_speed, env.current);
}

inline std::string trajectory_csv(const Trajectory& traj, bool header = true) {
  std::string out = header ? "t,x,y,z,psi,theta,r,u,v,w\n" : "";
  char buf[320];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.time, s.position.x(),
                  s.position.y(), s.position.z(), s.psi, s.theta, s.r, s.ground_velocity.x(), s.ground_velocity.y(),
                  s.ground_velocity.z());
    out += buf;
  }
  return out;
}

}  // namespace rdv
