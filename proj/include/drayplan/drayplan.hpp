#pragma once

// Umbrella header: planning model, solver, data pipeline, and scenarios.

#include "drayplan/access_build.hpp"
#include "drayplan/brute_force.hpp"
#include "drayplan/charger_catalog.hpp"
#include "drayplan/charger_tiers.hpp"
#include "drayplan/cost_book.hpp"
#include "drayplan/dbscan.hpp"
#include "drayplan/geo.hpp"
#include "drayplan/instance.hpp"
#include "drayplan/instance_json.hpp"
#include "drayplan/milp.hpp"
#include "drayplan/model_builder.hpp"
#include "drayplan/model_ir.hpp"
#include "drayplan/mps_io.hpp"
#include "drayplan/planning.hpp"
#include "drayplan/report_io.hpp"
#include "drayplan/scenario.hpp"
#include "drayplan/simplex.hpp"
#include "drayplan/solution_check.hpp"
#include "drayplan/subsets.hpp"
#include "drayplan/synthetic.hpp"
#include "drayplan/time_grid.hpp"
#include "drayplan/trajectory.hpp"
#include "drayplan/validate.hpp"
