#pragma once

#include "swarmform/core.hpp"
#include "swarmform/dynamics.hpp"
#include "swarmform/experiments.hpp"
#include "swarmform/export.hpp"
#include "swarmform/integrator.hpp"
#include "swarmform/metrics.hpp"
#include "swarmform/scenario.hpp"
#include "swarmform/shapes.hpp"
#include "swarmform/text.hpp"
#include "swarmform/tracking.hpp"
#include "swarmform/vec2.hpp"
