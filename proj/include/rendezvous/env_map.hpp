#pragma once

// Raster map -> binary occupancy grid via k-means over pixel features, plus
// feasibility and nearest-forbidden-distance queries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rendezvous/errors.hpp"
#include "rendezvous/geometry.hpp"
#include "rendezvous/random.hpp"

namespace rdv {

/// Row-major image; each pixel carries `channels` intensities in [0, 1].
/// Pixel (ix, iy) covers world x in [ix, ix+1) * cell_size and y likewise.
struct RasterMap {
  int width = 0;
  int height = 0;
  int channels = 1;
  double cell_size = 10.0;
  std::vector<double> pixels;

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  std::span<const double> feature(std::size_t idx) const {
    return {pixels.data() + idx * channels, static_cast<std::size_t>(channels)};
  }

  void validate() const {
    if (width <= 0 || height <= 0 || channels <= 0)
      throw InvalidInput("raster map is empty");
    if (!(cell_size > 0.0)) throw InvalidInput("raster cell size must be positive");
    if (pixels.size() != pixel_count() * channels)
      throw InvalidInput("raster pixel buffer does not match its dimensions");
    for (double v : pixels)
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw InvalidInput("raster intensities must be finite and within [0, 1]");
  }
};

enum class Occupancy : std::uint8_t { Feasible = 0, Forbidden = 1 };

struct CellIndex {
  int ix = 0;
  int iy = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

class GridMap {
 public:
  GridMap() = default;

  GridMap(int width, int height, double cell_size, Vec2 origin, std::vector<Occupancy> occupancy,
          double depth_limit = 1000.0)
      : width_(width),
        height_(height),
        cell_size_(cell_size),
        origin_(std::move(origin)),
        depth_limit_(depth_limit),
        occupancy_(std::move(occupancy)) {
    if (width_ <= 0 || height_ <= 0) throw InvalidInput("grid map is empty");
    if (!(cell_size_ > 0.0)) throw InvalidInput("grid cell size must be positive");
    if (occupancy_.size() != static_cast<std::size_t>(width_) * height_)
      throw InvalidInput("occupancy buffer does not match grid dimensions");
    build_distance_transform();
  }

  /// Every cell Feasible.
  static GridMap open_water(int width, int height, double cell_size, double depth_limit = 1000.0) {
    return GridMap(width, height, cell_size, Vec2::Zero(),
                   std::vector<Occupancy>(static_cast<std::size_t>(width) * height, Occupancy::Feasible),
                   depth_limit);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  const Vec2& origin() const { return origin_; }
  double depth_limit() const { return depth_limit_; }
  double width_m() const { return width_ * cell_size_; }
  double height_m() const { return height_ * cell_size_; }
  const std::vector<Occupancy>& occupancy() const { return occupancy_; }

  Occupancy at(int ix, int iy) const { return occupancy_[index(ix, iy)]; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * width_ + ix; }

  // Floor-to-cell: a point on a shared edge belongs to the cell with the larger index.
  std::optional<CellIndex> cell_of(const Vec2& p) const {
    const double fx = std::floor((p.x() - origin_.x()) / cell_size_);
    const double fy = std::floor((p.y() - origin_.y()) / cell_size_);
    if (fx < 0 || fy < 0 || fx >= width_ || fy >= height_) return std::nullopt;
    return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
  }

  Vec2 cell_center(int ix, int iy) const {
    return origin_ + Vec2((ix + 0.5) * cell_size_, (iy + 0.5) * cell_size_);
  }

  bool contains(const Vec2& p) const { return cell_of(p).has_value(); }

  bool is_feasible(const Vec3& p) const {
    if (!(p.z() >= 0.0 && p.z() <= depth_limit_)) return false;
    const auto c = cell_of(p.head<2>());
    return c && at(c->ix, c->iy) == Occupancy::Feasible;
  }

  bool has_forbidden() const { return forbidden_count_ > 0; }
  std::size_t forbidden_count() const { return forbidden_count_; }

  /// Distance from p to the nearest Forbidden cell center minus half a cell
  /// diagonal, clamped at zero. Outside the map the answer is 0; a map with no
  /// Forbidden cell answers +infinity. O(1) via the precomputed nearest-site table.
  double distance_to_forbidden(const Vec2& p) const {
    if (forbidden_count_ == 0) return kInfinity;
    const auto c = cell_of(p);
    if (!c) return 0.0;
    const std::int32_t site = nearest_site_[index(c->ix, c->iy)];
    const Vec2 center = cell_center(site % width_, site / width_);
    const double d = (p - center).norm() - 0.5 * std::sqrt(2.0) * cell_size_;
    return std::max(d, 0.0);
  }

  /// Index of the Forbidden cell whose center is nearest the center of (ix, iy); -1 if none.
  std::int32_t nearest_forbidden_cell(int ix, int iy) const { return nearest_site_[index(ix, iy)]; }

 private:
  // Exact Euclidean feature transform (Felzenszwalb-Huttenlocher, two 1-D passes).
  void build_distance_transform() {
    const std::size_t n = occupancy_.size();
    forbidden_count_ = static_cast<std::size_t>(
        std::count(occupancy_.begin(), occupancy_.end(), Occupancy::Forbidden));
    nearest_site_.assign(n, -1);
    if (forbidden_count_ == 0) return;

    constexpr std::int64_t kNone = -1;
    // Column pass: nearest forbidden row in the same column.
    std::vector<std::int64_t> col_row(n, kNone);
    for (int ix = 0; ix < width_; ++ix) {
      std::int64_t last = kNone;
      for (int iy = 0; iy < height_; ++iy) {
        if (at(ix, iy) == Occupancy::Forbidden) last = iy;
        col_row[index(ix, iy)] = last;
      }
      last = kNone;
      for (int iy = height_ - 1; iy >= 0; --iy) {
        if (at(ix, iy) == Occupancy::Forbidden) last = iy;
        auto& best = col_row[index(ix, iy)];
        if (last != kNone && (best == kNone || std::abs(last - iy) < std::abs(best - iy))) best = last;
      }
    }

    // Row pass: lower envelope of parabolas f(q) + (x - q)^2.
    std::vector<int> v(width_);
    std::vector<double> z(width_ + 1);
    std::vector<double> f(width_);
    for (int iy = 0; iy < height_; ++iy) {
      for (int q = 0; q < width_; ++q) {
        const auto r = col_row[index(q, iy)];
        f[q] = r == kNone ? kInfinity : static_cast<double>((r - iy) * (r - iy));
      }
      int k = -1;
      for (int q = 0; q < width_; ++q) {
        if (f[q] == kInfinity) continue;
        if (k < 0) {
          k = 0;
          v[0] = q;
          z[0] = -kInfinity;
          z[1] = kInfinity;
          continue;
        }
        auto intersect = [&](int p) {
          return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
        };
        double s = intersect(v[k]);
        while (s <= z[k]) {  // z[0] is -inf, so k never goes negative
          --k;
          s = intersect(v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInfinity;
      }
      if (k < 0) continue;  // unreachable: some column has a forbidden cell
      int j = 0;
      for (int x = 0; x < width_; ++x) {
        while (z[j + 1] < x) ++j;
        const int q = v[j];
        const auto r = col_row[index(q, iy)];
        nearest_site_[index(x, iy)] = static_cast<std::int32_t>(index(q, static_cast<int>(r)));
      }
    }
  }

  int width_ = 0;
  int height_ = 0;
  double cell_size_ = 1.0;
  Vec2 origin_ = Vec2::Zero();
  double depth_limit_ = 1000.0;
  std::vector<Occupancy> occupancy_;
  std::vector<std::int32_t> nearest_site_;
  std::size_t forbidden_count_ = 0;
};

// ---------------------------------------------------------------------------
// k-means

struct KMeansResult {
  std::vector<std::vector<double>> centers;
  std::vector<int> labels;
  // squared-error objective after every Lloyd iteration
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Nearest center; ties go to the lowest cluster index.
inline int nearest_center(std::span<const double> x, const std::vector<std::vector<double>>& centers) {
  int best = 0;
  double best_d = kInfinity;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(x, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

inline double kmeans_objective(std::span<const double> data, int dim, const std::vector<int>& labels,
                               const std::vector<std::vector<double>>& centers) {
  double sse = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    sse += squared_distance(data.subspan(i * dim, dim), centers[labels[i]]);
  return sse;
}

}  // namespace detail

/// Lloyd's algorithm on `data` (n points of `dim` features, row-major).
/// Seeds with k-means++ unless `initial_centers` is given. Stops when no
/// assignment changes or after `max_iterations`.
inline KMeansResult kmeans(std::span<const double> data, int dim, int k, std::uint64_t seed,
                           const std::vector<std::vector<double>>* initial_centers = nullptr,
                           int max_iterations = 100) {
  if (dim <= 0 || data.empty() || data.size() % dim != 0) throw InvalidInput("k-means: empty data");
  const std::size_t n = data.size() / dim;
  if (k < 1) throw InvalidInput("k-means: k must be at least 1");
  if (static_cast<std::size_t>(k) > n) throw InvalidInput("k-means: more clusters than observations");
  auto point = [&](std::size_t i) { return data.subspan(i * dim, dim); };

  KMeansResult res;
  if (initial_centers) {
    if (initial_centers->size() != static_cast<std::size_t>(k)) throw InvalidInput("k-means: bad init");
    res.centers = *initial_centers;
  } else {
    Rng rng(seed);
    const auto first = random_index(rng, n);
    res.centers.emplace_back(point(first).begin(), point(first).end());
    std::vector<double> d2(n);
    while (res.centers.size() < static_cast<std::size_t>(k)) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = detail::squared_distance(point(i), res.centers[detail::nearest_center(point(i), res.centers)]);
        total += d2[i];
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        double r = uniform01(rng) * total;
        for (pick = 0; pick + 1 < n; ++pick) {
          r -= d2[pick];
          if (r < 0.0 && d2[pick] > 0.0) break;
        }
      } else {
        pick = random_index(rng, n);
      }
      res.centers.emplace_back(point(pick).begin(), point(pick).end());
    }
  }

  res.labels.assign(n, -1);
  std::vector<double> sums;
  std::vector<std::size_t> counts;
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = detail::nearest_center(point(i), res.centers);
      if (c != res.labels[i]) {
        res.labels[i] = c;
        changed = true;
      }
    }
    if (!changed) {
      res.converged = true;
      break;
    }
    sums.assign(static_cast<std::size_t>(k) * dim, 0.0);
    counts.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = res.labels[i];
      ++counts[c];
      for (int d = 0; d < dim; ++d) sums[c * dim + d] += data[i * dim + d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its center
      for (int d = 0; d < dim; ++d) res.centers[c][d] = sums[c * dim + d] / static_cast<double>(counts[c]);
    }
    ++res.iterations;
    res.objective_trace.push_back(detail::kmeans_objective(data, dim, res.labels, res.centers));
  }
  return res;
}

struct ClusteredMap {
  GridMap map;
  KMeansResult clustering;
  int water_cluster = 0;
};

/// Clusters raster pixels by intensity features and labels the water cluster
/// Feasible. The water cluster is the one containing `water_seed` when given,
/// otherwise the cluster whose center has the lowest mean intensity.
inline ClusteredMap cluster_map_detailed(const RasterMap& raster, int k, std::uint64_t seed,
                                         std::optional<CellIndex> water_seed = std::nullopt,
                                         double depth_limit = 1000.0) {
  if (raster.width <= 0 || raster.height <= 0 || raster.pixels.empty())
    throw InvalidInput("cluster_map: raster is empty");
  raster.validate();
  if (k < 2) throw InvalidInput("cluster_map: need at least two clusters");
  if (static_cast<std::size_t>(k) > raster.pixel_count())
    throw InvalidInput("cluster_map: more clusters than pixels");

  ClusteredMap out;
  out.clustering = kmeans(raster.pixels, raster.channels, k, seed);
  const auto& centers = out.clustering.centers;

  if (water_seed && water_seed->ix >= 0 && water_seed->iy >= 0 && water_seed->ix < raster.width &&
      water_seed->iy < raster.height) {
    out.water_cluster = out.clustering.labels[static_cast<std::size_t>(water_seed->iy) * raster.width + water_seed->ix];
  } else {
    double best = kInfinity;
    for (int c = 0; c < k; ++c) {
      const double mean = std::accumulate(centers[c].begin(), centers[c].end(), 0.0) / centers[c].size();
      if (mean < best) {
        best = mean;
        out.water_cluster = c;
      }
    }
  }

  std::vector<Occupancy> occ(raster.pixel_count());
  for (std::size_t i = 0; i < occ.size(); ++i)
    occ[i] = out.clustering.labels[i] == out.water_cluster ? Occupancy::Feasible : Occupancy::Forbidden;
  out.map = GridMap(raster.width, raster.height, raster.cell_size, Vec2::Zero(), std::move(occ), depth_limit);
  return out;
}

inline GridMap cluster_map(const RasterMap& raster, int k, std::uint64_t seed,
                           std::optional<CellIndex> water_seed = std::nullopt) {
  return cluster_map_detailed(raster, k, seed, water_seed).map;
}

}  // namespace rdv
