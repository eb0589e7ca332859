#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "drayplan/brute_force.hpp"
#include "drayplan/milp.hpp"
#include "drayplan/planning.hpp"
#include "drayplan/report_io.hpp"

namespace drayplan {

namespace detail {

inline double snap_zero(double v, double tol = 1e-9) { return std::abs(v) <= tol ? 0.0 : v; }

}  // namespace detail

/// Daily GHG in kg CO2: diesel emissions of the remaining fleet plus the
/// carbon content of the charged electricity. Sub-nano charging noise is
/// treated as zero so an all-diesel plan scores exactly the diesel sum.
inline double ghg(const PlanningModel& pm, const Solution& sol, const Instance& inst) {
  double total = 0.0;
  const double dt = inst.grid.step_hours;
  for (size_t i = 0; i < inst.trucks.size(); ++i) {
    const double x = sol.values[static_cast<size_t>(pm.x[i])];
    total += (1.0 - x) * inst.trucks[i].diesel_emission_kg;
    for (int t = 0; t < inst.grid.step_count; ++t) {
      const double p = detail::snap_zero(sol.values[static_cast<size_t>(pm.p[i][static_cast<size_t>(t)])]);
      total += inst.params.carbon_intensity[static_cast<size_t>(t)] * p * dt;
    }
  }
  return total;
}

/// Utilization of station j: delivered energy over the energy a station of
/// that capacity could deliver running flat out. Undefined (nullopt) when
/// the station has no capacity.
inline std::optional<double> utilization(const PlanningModel& pm, const Solution& sol, int j,
                                         const Instance& inst) {
  const double cap = sol.values[static_cast<size_t>(pm.station_cap[static_cast<size_t>(j)])];
  if (cap <= 1e-9) return std::nullopt;
  double delivered = 0.0;
  for (int t = 0; t < inst.grid.step_count; ++t) {
    delivered += sol.values[static_cast<size_t>(
        pm.station_load[static_cast<size_t>(j)][static_cast<size_t>(t)])];
  }
  return delivered / (cap * inst.grid.step_count);
}

struct Milestone {
  int year = 0;
  double statewide = 0.0;
};

inline constexpr double kDefaultRegionalShare = 22000.0 / 35000.0;

/// Linear interpolation of the statewide milestones at `year`, scaled by the
/// regional share and rounded to the nearest integer.
inline long interpolate_target(const std::vector<Milestone>& milestones, double regional_share,
                               int year) {
  if (milestones.empty()) throw std::invalid_argument("no milestones");
  if (year < milestones.front().year || year > milestones.back().year) {
    throw std::invalid_argument("year " + std::to_string(year) + " outside the milestone span");
  }
  double statewide = milestones.back().statewide;
  for (size_t k = 0; k + 1 < milestones.size(); ++k) {
    const auto& a = milestones[k];
    const auto& b = milestones[k + 1];
    if (year >= a.year && year <= b.year) {
      const double f = b.year == a.year ? 0.0 : double(year - a.year) / double(b.year - a.year);
      statewide = a.statewide + f * (b.statewide - a.statewide);
      break;
    }
  }
  return std::lround(statewide * regional_share);
}

inline std::map<int, long> interpolate_targets(const std::vector<Milestone>& milestones,
                                               double regional_share = kDefaultRegionalShare) {
  std::map<int, long> out;
  if (milestones.empty()) return out;
  for (int y = milestones.front().year; y <= milestones.back().year; ++y) {
    out[y] = interpolate_target(milestones, regional_share, y);
  }
  return out;
}

/// Assembles the full report from a solved model. Values below 1e-9 are
/// snapped to zero before thresholding binaries.
inline PlanReport make_plan_report(const Instance& inst, const PlanningModel& pm,
                                   const Solution& sol, double capacity_fraction = 1.0) {
  PlanReport r;
  r.mode = static_cast<int>(pm.opts.mode);
  r.status = to_string(sol.status);
  r.objective = sol.objective;
  r.bound = sol.bound;
  r.gap = sol.gap;
  r.nodes = sol.node_count;
  r.wall_time_s = sol.wall_time_s;
  r.capacity_fraction = capacity_fraction;
  r.step_hours = inst.grid.step_hours;
  r.warnings = pm.warnings;
  if (!sol.has_incumbent()) return r;

  auto val = [&](int v) { return detail::snap_zero(sol.values[static_cast<size_t>(v)]); };

  for (size_t i = 0; i < inst.trucks.size(); ++i) {
    if (val(pm.x[i]) > 0.5) {
      r.electrified_trucks.push_back(inst.trucks[i].id);
      r.battery_kwh[inst.trucks[i].id] = val(pm.ecap[i]);
    }
  }

  for (size_t j = 0; j < inst.stations.size(); ++j) {
    StationPlan s;
    s.id = inst.stations[j].id;
    s.capacity_kw = val(pm.station_cap[j]);
    const bool tier_mode = pm.opts.tiers_active();
    const double deploy_flag =
        tier_mode ? val(pm.station_deploy[j]) : val(pm.station_sel[j]);
    s.deployed = deploy_flag > 0.5 && s.capacity_kw > 1e-9;
    s.utilization = utilization(pm, sol, static_cast<int>(j), inst);
    for (const auto& nb : pm.ix.substations_of_station[j]) {
      if (val(pm.link.at({static_cast<int>(j), nb.substation})) > 0.5) {
        s.substation = inst.substations[static_cast<size_t>(nb.substation)].id;
        s.line_miles = nb.distance_miles;
        break;
      }
    }
    if (tier_mode) {
      for (size_t mm = 0; mm < pm.chargers_installed[j].size(); ++mm) {
        s.chargers.push_back(std::lround(val(pm.chargers_installed[j][mm])));
      }
    }
    r.stations.push_back(std::move(s));
  }

  for (size_t k = 0; k < inst.substations.size(); ++k) {
    SubstationPlan sp;
    sp.id = inst.substations[k].id;
    for (int j : pm.ix.stations_of_substation[k]) {
      if (val(pm.link.at({j, static_cast<int>(k)})) > 0.5) {
        sp.connected_stations.push_back(inst.stations[static_cast<size_t>(j)].id);
      }
      sp.reserved_flow_kw += val(pm.flow.at({j, static_cast<int>(k)}));
    }
    sp.upgraded = val(pm.upgrade_sel[k]) > 0.5;
    sp.upgrade_kw = val(pm.upgrade[k]);
    r.substations.push_back(std::move(sp));
  }

  auto eval = [&](const LinExpr& e) {
    double v = e.constant;
    for (const auto& [var, c] : e.coeffs) v += c * sol.values[static_cast<size_t>(var)];
    return v;
  };
  r.costs.truck = eval(pm.cost_truck);
  r.costs.charging = eval(pm.cost_charging);
  r.costs.power = eval(pm.cost_power);
  r.costs.total = r.costs.truck + r.costs.charging + r.costs.power;
  double electricity = 0.0;
  for (size_t i = 0; i < inst.trucks.size(); ++i) {
    for (int t = 0; t < inst.grid.step_count; ++t) {
      electricity += inst.params.days_per_year * inst.params.tou_price[static_cast<size_t>(t)] *
                     val(pm.p[i][static_cast<size_t>(t)]) * inst.grid.step_hours;
    }
  }
  r.costs.electricity = electricity;
  r.ghg_kg_per_day = ghg(pm, sol, inst);

  r.load_profile_kw.assign(static_cast<size_t>(inst.grid.step_count), 0.0);
  for (size_t j = 0; j < inst.stations.size(); ++j) {
    for (int t = 0; t < inst.grid.step_count; ++t) {
      r.load_profile_kw[static_cast<size_t>(t)] += val(pm.station_load[j][static_cast<size_t>(t)]);
    }
  }
  return r;
}

struct ScenarioResult {
  PlanReport report;
  PlanningModel model;
  Solution solution;
};

/// One planning run, fully specified: the mode, its mode-specific inputs,
/// solver settings, and the build options shared by all modes.
struct ScenarioConfig {
  PlanMode mode = PlanMode::MinCost;
  double capacity_fraction = 1.0;  // mode 1
  double n_target = -1.0;          // mode 2
  double budget = std::numeric_limits<double>::quiet_NaN();  // mode 3
  BuildOptions build;
  SolverParams solver;
  std::string out_dir;  // empty: no files written

  void check() const {
    if (!(capacity_fraction > 0.0 && capacity_fraction <= 1.0)) {
      throw std::invalid_argument("capacity_fraction must be in (0,1]");
    }
    if (mode == PlanMode::MinCost && n_target < 0.0) {
      throw std::invalid_argument("mode 2 requires a truck target");
    }
    if (mode == PlanMode::MinEmissions && std::isnan(budget)) {
      throw std::invalid_argument("mode 3 requires a budget");
    }
  }
};

/// Mode 1: scale every substation's hosting capacity by `fraction`, forbid
/// upgrades, and maximize the electrified count.
inline ScenarioResult run_mode1(const Instance& inst, double fraction,
                                BuildOptions opts = {}, const SolverParams& params = {}) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("capacity fraction must be in (0,1]");
  }
  Instance scaled = inst;
  for (auto& k : scaled.substations) k.remaining_capacity_kw *= fraction;
  opts.mode = PlanMode::MaxTrucks;
  ScenarioResult res{{}, build_planning_model(scaled, opts), {}};
  res.solution = solve_milp(res.model.ir, params);
  res.report = make_plan_report(scaled, res.model, res.solution, fraction);
  return res;
}

/// Mode 2: minimize total annual cost subject to electrifying at least
/// `n_target` trucks. An infeasible target gets the mode-1 maximum attached.
inline ScenarioResult run_mode2(const Instance& inst, double n_target, BuildOptions opts = {},
                                const SolverParams& params = {}) {
  opts.mode = PlanMode::MinCost;
  opts.n_target = n_target;
  ScenarioResult res{{}, build_planning_model(inst, opts), {}};
  res.solution = solve_milp(res.model.ir, params);
  res.report = make_plan_report(inst, res.model, res.solution);
  if (res.solution.status == SolveStatus::Infeasible) {
    BuildOptions m1 = opts;
    m1.n_target = -1.0;
    const ScenarioResult cap = run_mode1(inst, 1.0, m1, params);
    if (cap.solution.status == SolveStatus::Optimal) {
      res.report.mode1_max = std::lround(cap.solution.objective);
    }
  }
  return res;
}

/// Mode 3: minimize daily GHG within an annual budget.
inline ScenarioResult run_mode3(const Instance& inst, double budget, BuildOptions opts = {},
                                const SolverParams& params = {}) {
  if (budget < 0.0) throw std::invalid_argument("budget must be nonnegative");
  opts.mode = PlanMode::MinEmissions;
  opts.budget = budget;
  ScenarioResult res{{}, build_planning_model(inst, opts), {}};
  res.solution = solve_milp(res.model.ir, params);
  res.report = make_plan_report(inst, res.model, res.solution);
  return res;
}

/// Runs the configured scenario and, when out_dir is set, writes the report
/// files there.
inline ScenarioResult run_scenario(const Instance& inst, const ScenarioConfig& config) {
  config.check();
  ScenarioResult res;
  switch (config.mode) {
    case PlanMode::MaxTrucks:
      res = run_mode1(inst, config.capacity_fraction, config.build, config.solver);
      break;
    case PlanMode::MinCost:
      res = run_mode2(inst, config.n_target, config.build, config.solver);
      break;
    case PlanMode::MinEmissions:
      res = run_mode3(inst, config.budget, config.build, config.solver);
      break;
  }
  if (!config.out_dir.empty()) emit_report(res.report, config.out_dir);
  return res;
}

/// Yearly mode-2 planning with monotone commitment: everything built or
/// bought by year y becomes a floor for year y+1.
inline std::vector<std::pair<int, PlanReport>> run_mode2_years(
    const Instance& inst, const std::vector<Milestone>& milestones, double regional_share,
    BuildOptions opts = {}, const SolverParams& params = {}) {
  std::vector<std::pair<int, PlanReport>> out;
  const std::map<int, long> targets = interpolate_targets(milestones, regional_share);
  opts.mode = PlanMode::MinCost;

  std::optional<Solution> prev;
  std::optional<PlanningModel> prev_model;
  for (const auto& [year, target] : targets) {
    opts.n_target = static_cast<double>(target);
    PlanningModel pm = build_planning_model(inst, opts);
    if (prev.has_value()) {
      const Solution& ps = *prev;
      const PlanningModel& pp = *prev_model;
      auto committed = [&](int var) { return ps.values[static_cast<size_t>(var)]; };
      for (size_t i = 0; i < pm.x.size(); ++i) {
        if (committed(pp.x[i]) > 0.5) pm.ir.set_bounds(pm.x[i], 1.0, 1.0);
        const double cap = committed(pp.ecap[i]);
        if (cap > 0.0) {
          pm.ir.set_bounds(pm.ecap[i], cap, pm.ir.variables[static_cast<size_t>(pm.ecap[i])].upper);
        }
      }
      for (size_t j = 0; j < pm.station_cap.size(); ++j) {
        const double cap = committed(pp.station_cap[j]);
        if (cap > 1e-9) {
          pm.ir.set_bounds(pm.station_cap[j], cap,
                           pm.ir.variables[static_cast<size_t>(pm.station_cap[j])].upper);
        }
        if (committed(pp.station_sel[j]) > 0.5) pm.ir.set_bounds(pm.station_sel[j], 1.0, 1.0);
      }
      for (const auto& [key, var] : pm.link) {
        if (committed(pp.link.at(key)) > 0.5) pm.ir.set_bounds(var, 1.0, 1.0);
      }
      for (size_t k = 0; k < pm.upgrade_sel.size(); ++k) {
        if (committed(pp.upgrade_sel[k]) > 0.5) pm.ir.set_bounds(pm.upgrade_sel[k], 1.0, 1.0);
        const double uv = committed(pp.upgrade_var[k]);
        if (uv > 1e-9) {
          pm.ir.set_bounds(pm.upgrade_var[k], uv,
                           pm.ir.variables[static_cast<size_t>(pm.upgrade_var[k])].upper);
        }
      }
      if (pm.opts.tiers_active()) {
        for (size_t j = 0; j < pm.chargers_installed.size(); ++j) {
          for (size_t mm = 0; mm < pm.chargers_installed[j].size(); ++mm) {
            const double n = committed(pp.chargers_installed[j][mm]);
            if (n > 0.5) {
              pm.ir.set_bounds(
                  pm.chargers_installed[j][mm], std::round(n),
                  pm.ir.variables[static_cast<size_t>(pm.chargers_installed[j][mm])].upper);
            }
          }
          if (committed(pp.station_deploy[j]) > 0.5) pm.ir.set_bounds(pm.station_deploy[j], 1, 1);
        }
      }
    }
    Solution sol = solve_milp(pm.ir, params);
    PlanReport rep = make_plan_report(inst, pm, sol);
    if (sol.has_incumbent()) {
      prev = sol;
      prev_model = std::move(pm);
    }
    out.push_back({year, std::move(rep)});
    // Targets only grow; later years cannot become feasible again.
    if (sol.status == SolveStatus::Infeasible) break;
  }
  return out;
}

}  // namespace drayplan
