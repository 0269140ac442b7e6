#pragma once

#include "arenareward/error.hpp"
#include "arenareward/arena.hpp"
#include "arenareward/components.hpp"
#include "arenareward/composition.hpp"
#include "arenareward/config.hpp"
#include "arenareward/observation.hpp"
#include "arenareward/graph.hpp"
#include "arenareward/events.hpp"
#include "arenareward/sim.hpp"
#include "arenareward/replay.hpp"
#include "arenareward/field.hpp"
#include "arenareward/aux_objectives.hpp"
#include "arenareward/io.hpp"
