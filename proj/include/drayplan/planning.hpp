#pragma once

#include <stdexcept>

#include "drayplan/charger_tiers.hpp"
#include "drayplan/model_builder.hpp"
#include "drayplan/validate.hpp"

namespace drayplan {

/// Builds the full planning MILP for an instance: truck energy, charging
/// access, station capacity, grid connection, (optional) charger tiers,
/// costs, budget, and the mode's objective.
inline PlanningModel build_planning_model(const Instance& inst, const BuildOptions& opts,
                                          const BigMBook* bigm_override = nullptr) {
  const ValidationReport rep = validate_instance(inst);
  if (!rep.ok()) {
    throw std::invalid_argument("instance is not well-formed:\n" + rep.to_string());
  }
  ModelBuilder builder(inst, opts, bigm_override);
  builder.build_truck_energy();
  builder.build_charging_access();
  if (opts.tiers_active()) build_tier_constraints(builder);
  builder.build_station_capacity();
  builder.build_grid_connection();
  if (opts.tiers_active()) build_station_deploy_indicator(builder);
  builder.build_costs();
  const bool want_budget = !std::isnan(builder.model().opts.budget);
  if (want_budget) builder.build_budget_constraint(builder.model().opts.budget);
  builder.set_objective();
  return builder.take();
}

}  // namespace drayplan
