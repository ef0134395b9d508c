#pragma once

#include "rendezvous/cost_model.hpp"
#include "rendezvous/current_field.hpp"
#include "rendezvous/env_map.hpp"
#include "rendezvous/environment.hpp"
#include "rendezvous/errors.hpp"
#include "rendezvous/geometry.hpp"
#include "rendezvous/map_io.hpp"
#include "rendezvous/mission_planner.hpp"
#include "rendezvous/obstacle_field.hpp"
#include "rendezvous/optimizers.hpp"
#include "rendezvous/random.hpp"
#include "rendezvous/report.hpp"
#include "rendezvous/scenario.hpp"
#include "rendezvous/spline_path.hpp"
#include "rendezvous/svg.hpp"
