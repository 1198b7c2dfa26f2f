#pragma once

#include "railsched/core.hpp"
#include "railsched/criticality.hpp"
#include "railsched/model.hpp"
#include "railsched/schedule.hpp"
#include "railsched/solver.hpp"
#include "railsched/brute_force.hpp"
#include "railsched/mps.hpp"
#include "railsched/validate.hpp"
