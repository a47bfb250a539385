#pragma once

#include "rollroller/config.hpp"
#include "rollroller/controller.hpp"
#include "rollroller/dynamics.hpp"
#include "rollroller/hydraulics.hpp"
#include "rollroller/integrator.hpp"
#include "rollroller/io.hpp"
#include "rollroller/model.hpp"
#include "rollroller/scenarios.hpp"
#include "rollroller/types.hpp"
