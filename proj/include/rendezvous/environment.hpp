#pragma once

#include <memory>

#include "rendezvous/current_field.hpp"
#include "rendezvous/env_map.hpp"
#include "rendezvous/obstacle_field.hpp"

namespace rdv {

/// Immutable bundle of everything the planner can see at one mission instant.
/// The map is shared between snapshots; current and obstacles are values.
struct EnvironmentSnapshot {
  std::shared_ptr<const GridMap> map;
  CurrentField current;
  ObstacleSet obstacles;
  double timestamp = 0.0;

  const GridMap& grid() const { return *map; }
};

inline EnvironmentSnapshot make_snapshot(GridMap map, CurrentField current, ObstacleSet obstacles,
                                         double timestamp = 0.0) {
  return {std::make_shared<const GridMap>(std::move(map)), std::move(current), std::move(obstacles), timestamp};
}

}  // namespace rdv
