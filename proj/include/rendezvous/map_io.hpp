#pragma once

// Map file formats: PGM (P2/P5) and CSV intensity grids in, run-length JSON
// and PGM out. Also a procedural coastline raster for presets and tests.

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rendezvous/env_map.hpp"

namespace rdv {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open map file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Next whitespace-delimited PNM header token, skipping '#' comments.
inline std::string pnm_token(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
  if (start == pos) throw InvalidInput("truncated PGM header");
  return buf.substr(start, pos - start);
}

}  // namespace detail

inline RasterMap parse_pgm(const std::string& buf, double cell_size) {
  std::size_t pos = 0;
  const std::string magic = detail::pnm_token(buf, pos);
  if (magic != "P2" && magic != "P5") throw InvalidInput("not a PGM file (expected P2 or P5)");
  RasterMap r;
  r.cell_size = cell_size;
  try {
    r.width = std::stoi(detail::pnm_token(buf, pos));
    r.height = std::stoi(detail::pnm_token(buf, pos));
  } catch (const std::logic_error&) {
    throw InvalidInput("bad PGM dimensions");
  }
  int maxval = 0;
  try {
    maxval = std::stoi(detail::pnm_token(buf, pos));
  } catch (const std::logic_error&) {
    throw InvalidInput("bad PGM maxval");
  }
  if (r.width <= 0 || r.height <= 0 || maxval <= 0 || maxval > 65535) throw InvalidInput("bad PGM header values");
  const std::size_t n = r.pixel_count();
  r.pixels.resize(n);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      int v = 0;
      try {
        v = std::stoi(detail::pnm_token(buf, pos));
      } catch (const std::logic_error&) {
        throw InvalidInput("bad PGM pixel value");
      }
      r.pixels[i] = std::clamp(v, 0, maxval) / double(maxval);
    }
  } else {
    ++pos;  // single whitespace after maxval
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    if (buf.size() < pos + n * bytes) throw InvalidInput("truncated PGM raster");
    for (std::size_t i = 0; i < n; ++i) {
      unsigned v = static_cast<unsigned char>(buf[pos + i * bytes]);
      if (bytes == 2) v = (v << 8) | static_cast<unsigned char>(buf[pos + i * bytes + 1]);
      r.pixels[i] = std::min<unsigned>(v, maxval) / double(maxval);
    }
  }
  // file row iy is grid row iy (y grows with row index)
  return r;
}

inline RasterMap read_pgm(const std::string& path, double cell_size) {
  return parse_pgm(detail::read_file(path), cell_size);
}

/// One row per line, comma-separated intensities in [0, 1].
inline RasterMap parse_csv_grid(const std::string& text, double cell_size) {
  RasterMap r;
  r.cell_size = cell_size;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ls, cell, ',')) {
      try {
        r.pixels.push_back(std::stod(cell));
      } catch (const std::logic_error&) {
        throw InvalidInput("bad CSV grid value: " + cell);
      }
      ++cols;
    }
    if (r.height == 0) {
      r.width = cols;
    } else if (cols != r.width) {
      throw InvalidInput("ragged CSV grid");
    }
    ++r.height;
  }
  r.validate();
  return r;
}

inline RasterMap read_csv_grid(const std::string& path, double cell_size) {
  return parse_csv_grid(detail::read_file(path), cell_size);
}

/// Binary PGM; Feasible cells white, Forbidden black.
inline std::string to_pgm(const GridMap& map) {
  std::ostringstream out;
  out << "P5\n" << map.width() << ' ' << map.height() << "\n255\n";
  for (auto o : map.occupancy()) out.put(o == Occupancy::Feasible ? char(255) : char(0));
  return out.str();
}

inline void write_pgm(const GridMap& map, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + path);
  f << to_pgm(map);
}

/// Row-major run-length encoding: "runs" alternates Feasible/Forbidden counts
/// starting with Feasible (first run may be zero).
inline nlohmann::json to_rle_json(const GridMap& map) {
  std::vector<std::size_t> runs;
  Occupancy cur = Occupancy::Feasible;
  std::size_t count = 0;
  for (auto o : map.occupancy()) {
    if (o != cur) {
      runs.push_back(count);
      cur = o;
      count = 0;
    }
    ++count;
  }
  runs.push_back(count);
  return {{"width", map.width()},
          {"height", map.height()},
          {"cell_size", map.cell_size()},
          {"origin", {map.origin().x(), map.origin().y()}},
          {"depth_limit", map.depth_limit()},
          {"encoding", "rle-feasible-first"},
          {"runs", runs}};
}

inline GridMap from_rle_json(const nlohmann::json& j) {
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  std::vector<Occupancy> occ;
  occ.reserve(static_cast<std::size_t>(w) * h);
  Occupancy cur = Occupancy::Feasible;
  for (std::size_t run : j.at("runs").get<std::vector<std::size_t>>()) {
    occ.insert(occ.end(), run, cur);
    cur = cur == Occupancy::Feasible ? Occupancy::Forbidden : Occupancy::Feasible;
  }
  const auto origin = j.value("origin", std::vector<double>{0.0, 0.0});
  return GridMap(w, h, j.at("cell_size").get<double>(), Vec2(origin.at(0), origin.at(1)), std::move(occ),
                 j.value("depth_limit", 1000.0));
}

// ---------------------------------------------------------------------------

struct Island {
  Vec2 center;  // meters
  double radius;
};

/// RGB raster of blue water with brown land blobs. Coastlines are wobbled by
/// a few low-frequency harmonics and pixels carry mild noise, so clustering
/// has real work to do.
inline RasterMap synthetic_coast_raster(int width, int height, double cell_size, const std::vector<Island>& islands,
                                        std::uint64_t seed) {
  RasterMap r;
  r.width = width;
  r.height = height;
  r.channels = 3;
  r.cell_size = cell_size;
  r.pixels.resize(r.pixel_count() * 3);
  Rng rng(seed);
  std::vector<std::array<double, 3>> wobble(islands.size());
  for (auto& w : wobble)
    for (auto& a : w) a = uniform(rng, -0.12, 0.12);
  constexpr std::array<double, 3> kWater{0.08, 0.25, 0.62};
  constexpr std::array<double, 3> kLand{0.62, 0.46, 0.28};
  for (int iy = 0; iy < height; ++iy) {
    for (int ix = 0; ix < width; ++ix) {
      const Vec2 p((ix + 0.5) * cell_size, (iy + 0.5) * cell_size);
      bool land = false;
      for (std::size_t i = 0; i < islands.size() && !land; ++i) {
        const Vec2 d = p - islands[i].center;
        const double ang = std::atan2(d.y(), d.x());
        const double rr = islands[i].radius *
                          (1.0 + wobble[i][0] * std::sin(2 * ang) + wobble[i][1] * std::cos(3 * ang) +
                           wobble[i][2] * std::sin(5 * ang));
        land = d.norm() <= rr;
      }
      const auto& base = land ? kLand : kWater;
      for (int c = 0; c < 3; ++c)
        r.pixels[(static_cast<std::size_t>(iy) * width + ix) * 3 + c] =
            std::clamp(base[c] + uniform(rng, -0.06, 0.06), 0.0, 1.0);
    }
  }
  return r;
}

}  // namespace rdv
