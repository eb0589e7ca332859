// Command-line front end: instance validation and generation, GPS ingest,
// model export, MPS solving, and the three planning modes with file reports.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "drayplan/drayplan.hpp"

using namespace drayplan;
namespace fs = std::filesystem;

namespace {

int exit_code_of(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
    case SolveStatus::Feasible:
      return 0;
    case SolveStatus::Infeasible:
      return 2;
    case SolveStatus::NodeLimit:
    case SolveStatus::TimeLimit:
      return 3;
    default:
      return 1;
  }
}

void apply_config(Instance& inst, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("params")) {
    const auto& p = j["params"];
    auto set = [&](const char* key, double& field) {
      if (p.contains(key)) field = p[key].get<double>();
    };
    set("p_max_kw", inst.params.p_max_kw);
    set("e_base_kwh", inst.params.e_base_kwh);
    set("soc_min", inst.params.soc_min);
    set("soc_max", inst.params.soc_max);
    set("kappa", inst.params.kappa);
    set("pf", inst.params.pf);
    set("p_upg_std_kva", inst.params.p_upg_std_kva);
    set("days_per_year", inst.params.days_per_year);
    if (p.contains("tou_price")) inst.params.tou_price = p["tou_price"].get<std::vector<double>>();
    if (p.contains("carbon_intensity")) {
      inst.params.carbon_intensity = p["carbon_intensity"].get<std::vector<double>>();
    }
  }
  if (j.contains("costs")) {
    const auto& c = j["costs"];
    auto set_row = [&](const char* key, CostRow& row) {
      if (!c.contains(key)) return;
      const auto& r = c[key];
      if (r.contains("investment")) row.investment = r["investment"].get<double>();
      if (r.contains("lifespan_years")) row.lifespan_years = r["lifespan_years"].get<double>();
      if (r.contains("annual")) {
        row.annual = r["annual"].get<double>();
      } else {
        row.annual = amortize(row.investment, row.lifespan_years, inst.costs.interest_rate);
      }
    };
    if (c.contains("interest_rate")) inst.costs.interest_rate = c["interest_rate"].get<double>();
    set_row("vehicle", inst.costs.vehicle);
    set_row("battery", inst.costs.battery);
    set_row("construction", inst.costs.construction);
    set_row("power_equip", inst.costs.power_equip);
    set_row("charger", inst.costs.charger);
    set_row("line", inst.costs.line);
    set_row("upgrade_fixed", inst.costs.upgrade_fixed);
    set_row("upgrade_var", inst.costs.upgrade_var);
    if (c.contains("tou_on_peak")) inst.costs.tou_on_peak = c["tou_on_peak"].get<double>();
    if (c.contains("tou_mid_peak")) inst.costs.tou_mid_peak = c["tou_mid_peak"].get<double>();
    if (c.contains("tou_off_peak")) inst.costs.tou_off_peak = c["tou_off_peak"].get<double>();
  }
}

struct CommonOpts {
  std::string config;
  std::string tiers_file;
  bool paper_literal = false;
  bool strict = false;
  double ecap_max = 1200.0;
  uint64_t seed = 1;
};

BuildOptions make_build_options(const CommonOpts& g) {
  BuildOptions opts;
  opts.eta_mode = g.paper_literal ? EtaMode::PaperLiteral : EtaMode::OneWay;
  opts.strict_indicators = g.strict;
  opts.e_cap_max_kwh = g.ecap_max;
  if (!g.tiers_file.empty()) opts.tiers = load_charger_catalog(g.tiers_file);
  return opts;
}

Instance load_with_config(const std::string& path, const CommonOpts& g) {
  Instance inst = load_instance(path);
  if (!g.config.empty()) apply_config(inst, g.config);
  return inst;
}

void print_report_summary(const PlanReport& r) {
  std::cout << "status: " << r.status << "\n";
  std::cout << "objective: " << r.objective << "\n";
  std::cout << "electrified: " << r.electrified_trucks.size() << "\n";
  long deployed = 0;
  for (const auto& s : r.stations) deployed += s.deployed ? 1 : 0;
  std::cout << "stations deployed: " << deployed << "\n";
  std::cout << "ghg kg/day: " << r.ghg_kg_per_day << "\n";
  if (r.mode1_max.has_value()) {
    std::cout << "mode-1 maximum (attached): " << *r.mode1_max << "\n";
  }
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drayage electrification planning"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CommonOpts g;
  app.add_option("--config", g.config, "JSON overrides for params/costs")->expected(1);
  app.add_option("--tiers", g.tiers_file, "charger catalog JSON enabling tiered chargers");
  app.add_flag("--paper-literal", g.paper_literal,
               "use the printed (1-sqrt(kappa)) charging factor");
  app.add_flag("--strict", g.strict, "epsilon-strict indicator linearization");
  app.add_option("--ecap-max", g.ecap_max, "battery capacity upper bound, kWh");
  app.add_option("--seed", g.seed, "random seed for generation/replication");

  SolverParams solver;
  app.add_option("--rel-gap", solver.rel_gap, "relative MILP gap");
  app.add_option("--node-limit", solver.node_limit, "branch-and-bound node limit");
  app.add_option("--time-limit", solver.time_limit_s, "wall-clock limit, seconds");
  std::string branching = "most-fractional";
  app.add_option("--branching", branching, "most-fractional | pseudo-cost");

  auto* cmd_validate = app.add_subcommand("validate", "check an instance file");
  std::string val_instance;
  cmd_validate->add_option("--instance", val_instance, "instance JSON")->required();

  auto* cmd_generate = app.add_subcommand("generate", "write a synthetic instance");
  SyntheticSpec spec;
  std::string gen_out;
  cmd_generate->add_option("--trucks", spec.n_trucks, "truck count");
  cmd_generate->add_option("--stations", spec.n_stations, "station count");
  cmd_generate->add_option("--substations", spec.n_substations, "substation count");
  cmd_generate->add_option("--steps", spec.steps, "time steps per day");
  cmd_generate->add_option("--consumption-scale", spec.consumption_scale, "demand scale");
  cmd_generate->add_option("--capacity-scale", spec.capacity_scale, "hosting capacity scale");
  cmd_generate->add_option("--cost-scale", spec.cost_scale, "cost book scale");
  cmd_generate->add_flag("--depot", spec.with_depot, "make station 0 a fleet depot");
  cmd_generate->add_flag("--two-station-access", spec.second_station_access,
                         "grant a second reachable station");
  cmd_generate->add_option("--out", gen_out, "output instance JSON")->required();

  auto* cmd_ingest = app.add_subcommand("ingest", "build an instance from GPS traces");
  std::string in_traces, in_sites, in_subs, in_out;
  double stop_speed = 0.1, stop_minutes = 30.0, kwh_per_mile = 2.0, diesel_kg_per_mile = 1.9;
  double access_radius = 0.5, cluster_radius_ft = 1000.0;
  int k_nearest = 5, replicate = 1;
  double factor_lo = 0.95, factor_hi = 1.05;
  cmd_ingest->add_option("--traces", in_traces, "trace CSV")->required();
  cmd_ingest->add_option("--sites", in_sites, "public sites CSV");
  cmd_ingest->add_option("--substations", in_subs, "substations CSV")->required();
  cmd_ingest->add_option("--out", in_out, "output instance JSON")->required();
  cmd_ingest->add_option("--stop-speed", stop_speed, "stop speed threshold, mph");
  cmd_ingest->add_option("--stop-minutes", stop_minutes, "minimum stop duration, minutes");
  cmd_ingest->add_option("--kwh-per-mile", kwh_per_mile, "consumption rate");
  cmd_ingest->add_option("--diesel-kg-per-mile", diesel_kg_per_mile, "diesel CO2 rate");
  cmd_ingest->add_option("--access-radius", access_radius, "station access radius, miles");
  cmd_ingest->add_option("--k-nearest", k_nearest, "substation neighbors per station");
  cmd_ingest->add_option("--cluster-radius-ft", cluster_radius_ft, "depot merge radius, feet");
  cmd_ingest->add_option("--replicate", replicate, "fleet replication copies");
  cmd_ingest->add_option("--factor-lo", factor_lo, "replication factor lower bound");
  cmd_ingest->add_option("--factor-hi", factor_hi, "replication factor upper bound");

  auto* cmd_build = app.add_subcommand("build", "export the MILP as MPS or LP text");
  std::string bld_instance, bld_out, bld_format = "mps";
  int bld_mode = 2;
  double bld_target = -1.0, bld_budget = std::numeric_limits<double>::quiet_NaN();
  double bld_fraction = 1.0;
  cmd_build->add_option("--instance", bld_instance, "instance JSON")->required();
  cmd_build->add_option("--mode", bld_mode, "1|2|3")->required();
  cmd_build->add_option("--target", bld_target, "mode-2 truck target");
  cmd_build->add_option("--budget", bld_budget, "mode-3 budget (also allowed in mode 2)");
  cmd_build->add_option("--fraction", bld_fraction, "mode-1 capacity fraction");
  cmd_build->add_option("--format", bld_format, "mps | lp");
  cmd_build->add_option("--out", bld_out, "output model file")->required();

  auto* cmd_solve = app.add_subcommand("solve", "solve an exported MPS model");
  std::string sol_model, sol_out;
  cmd_solve->add_option("--model", sol_model, "MPS file")->required();
  cmd_solve->add_option("--out", sol_out, "solution file")->required();

  auto* cmd_mode1 = app.add_subcommand("mode1", "hosting-capacity examination");
  std::string m1_instance, m1_out;
  double m1_fraction = 1.0;
  cmd_mode1->add_option("--instance", m1_instance)->required();
  cmd_mode1->add_option("--fraction", m1_fraction, "capacity fraction in (0,1]");
  cmd_mode1->add_option("--out", m1_out, "report directory")->required();

  auto* cmd_mode2 = app.add_subcommand("mode2", "cost-effective compliance");
  std::string m2_instance, m2_out, m2_years;
  double m2_target = -1.0;
  cmd_mode2->add_option("--instance", m2_instance)->required();
  cmd_mode2->add_option("--target", m2_target, "electrified-truck target");
  cmd_mode2->add_option("--years", m2_years, "milestones JSON for yearly planning");
  cmd_mode2->add_option("--out", m2_out, "report directory")->required();

  auto* cmd_mode3 = app.add_subcommand("mode3", "minimum-emission plan within budget");
  std::string m3_instance, m3_out;
  double m3_budget = std::numeric_limits<double>::quiet_NaN();
  cmd_mode3->add_option("--instance", m3_instance)->required();
  cmd_mode3->add_option("--budget", m3_budget, "annual budget, $")->required();
  cmd_mode3->add_option("--out", m3_out, "report directory")->required();

  auto* cmd_report = app.add_subcommand("report", "rebuild a report from a solution file");
  std::string rp_instance, rp_solution, rp_out, rp_sidecar;
  int rp_mode = 2;
  double rp_target = -1.0, rp_budget = std::numeric_limits<double>::quiet_NaN();
  double rp_fraction = 1.0;
  cmd_report->add_option("--instance", rp_instance)->required();
  cmd_report->add_option("--solution", rp_solution, "name value solution file")->required();
  cmd_report->add_option("--sidecar", rp_sidecar, "MPS name map for mangled solution names");
  cmd_report->add_option("--mode", rp_mode, "1|2|3")->required();
  cmd_report->add_option("--target", rp_target);
  cmd_report->add_option("--budget", rp_budget);
  cmd_report->add_option("--fraction", rp_fraction);
  cmd_report->add_option("--out", rp_out, "report directory")->required();

  CLI11_PARSE(app, argc, argv);
  solver.branching = branching == "pseudo-cost" ? BranchRule::PseudoCost : BranchRule::MostFractional;

  try {
    if (*cmd_validate) {
      const Instance inst = load_with_config(val_instance, g);
      const ValidationReport rep = validate_instance(inst);
      if (rep.ok()) {
        std::cout << "instance is well-formed\n";
        return 0;
      }
      std::cout << rep.to_string();
      std::cout << rep.violations.size() << " violation(s)\n";
      return 1;
    }

    if (*cmd_generate) {
      spec.seed = g.seed;
      Instance inst = generate_synthetic(spec);
      if (!g.config.empty()) apply_config(inst, g.config);
      save_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << " (" << inst.trucks.size() << " trucks, "
                << inst.stations.size() << " stations, " << inst.substations.size()
                << " substations)\n";
      return 0;
    }

    if (*cmd_ingest) {
      const auto traces = load_traces_csv(in_traces);
      if (traces.empty()) throw std::runtime_error("no traces in " + in_traces);
      double day_start = kInf;
      for (const auto& t : traces) {
        if (!t.samples.empty()) day_start = std::min(day_start, t.samples.front().time_s);
      }
      day_start = std::floor(day_start / 86400.0) * 86400.0;
      const TimeGrid grid{96, 0.25};

      std::vector<TruckProfile> profiles;
      std::vector<std::pair<std::string, LonLat>> depot_candidates;
      for (const auto& trace : traces) {
        const auto segs = classify_stops(trace, stop_speed, stop_minutes);
        DownsampleResult res =
            downsample(trace, segs, grid, day_start, kwh_per_mile, diesel_kg_per_mile);
        for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
        LonLat depot;
        if (longest_stop_location(segs, &depot)) {
          depot_candidates.push_back({trace.truck_id, depot});
        }
        profiles.push_back(std::move(res.profile));
      }
      if (replicate > 1) {
        profiles = replicate_fleet(profiles, replicate, factor_lo, factor_hi, g.seed);
      }

      std::vector<StationSite> stations =
          in_sites.empty() ? std::vector<StationSite>{} : load_sites_csv(in_sites);
      const auto depots = cluster_depots(depot_candidates, cluster_radius_ft);
      stations.insert(stations.end(), depots.begin(), depots.end());
      if (replicate > 1) {
        for (auto& s : stations) {
          if (s.kind != StationKind::Depot) continue;
          std::set<std::string> owners = s.owner_truck_ids;
          for (const auto& owner : s.owner_truck_ids) {
            for (int c = 1; c < replicate; ++c) owners.insert(owner + "_r" + std::to_string(c));
          }
          s.owner_truck_ids = std::move(owners);
        }
      }

      Instance inst;
      inst.grid = grid;
      inst.trucks = std::move(profiles);
      inst.stations = std::move(stations);
      inst.substations = load_substations_csv(in_subs);
      inst.access = build_access_matrix(inst.trucks, inst.stations, inst.substations,
                                        access_radius, k_nearest);
      inst.costs = CostBook::defaults();
      inst.params.tou_price = inst.costs.tou_schedule(grid);
      inst.params.carbon_intensity.assign(static_cast<size_t>(grid.step_count), 0.24);
      if (!g.config.empty()) apply_config(inst, g.config);

      // Trucks with no access window cannot charge on their current duty
      // cycle (the analogue of the stranded-share statistic).
      std::set<int> with_access;
      for (const auto& a : inst.access.truck_station) with_access.insert(a.truck);
      const int stranded =
          static_cast<int>(inst.trucks.size()) - static_cast<int>(with_access.size());
      std::cout << stranded << " of " << inst.trucks.size() << " trucks ("
                << (100.0 * stranded / std::max<size_t>(1, inst.trucks.size()))
                << "%) lack a qualified stop near any usable station\n";

      const ValidationReport rep = validate_instance(inst);
      if (!rep.ok()) {
        std::cout << rep.to_string();
        return 1;
      }
      save_instance(inst, in_out);
      std::cout << "wrote " << in_out << "\n";
      return 0;
    }

    if (*cmd_build) {
      const Instance inst = load_with_config(bld_instance, g);
      BuildOptions opts = make_build_options(g);
      opts.mode = static_cast<PlanMode>(bld_mode);
      opts.n_target = bld_target;
      opts.budget = bld_budget;
      Instance scaled = inst;
      if (bld_mode == 1) {
        for (auto& k : scaled.substations) k.remaining_capacity_kw *= bld_fraction;
      }
      const PlanningModel pm = build_planning_model(scaled, opts);
      for (const auto& w : pm.warnings) std::cout << "warning: " << w << "\n";
      export_model(pm.ir, bld_format == "lp" ? ModelFormat::LPText : ModelFormat::MPS, bld_out);
      std::cout << "wrote " << bld_out << " (" << pm.ir.num_vars() << " vars, "
                << pm.ir.num_constraints() << " rows)\n";
      return 0;
    }

    if (*cmd_solve) {
      const ModelIR ir = import_mps(sol_model);
      const Solution sol = solve_milp(ir, solver);
      std::cout << "status: " << to_string(sol.status) << "\n";
      if (sol.has_incumbent()) {
        std::cout << "objective: " << sol.objective << " (bound " << sol.bound << ", gap "
                  << sol.gap << ")\n";
        write_solution_file(ir, sol, sol_out);
        std::cout << "wrote " << sol_out << "\n";
      }
      std::cout << "nodes: " << sol.node_count << ", wall: " << sol.wall_time_s << " s\n";
      return exit_code_of(sol.status);
    }

    if (*cmd_mode1) {
      const Instance inst = load_with_config(m1_instance, g);
      ScenarioConfig config;
      config.mode = PlanMode::MaxTrucks;
      config.capacity_fraction = m1_fraction;
      config.build = make_build_options(g);
      config.solver = solver;
      config.out_dir = m1_out;
      const ScenarioResult res = run_scenario(inst, config);
      print_report_summary(res.report);
      return exit_code_of(res.solution.status);
    }

    if (*cmd_mode2) {
      const Instance inst = load_with_config(m2_instance, g);
      if (!m2_years.empty()) {
        std::ifstream in(m2_years);
        if (!in) throw std::runtime_error("cannot open: " + m2_years);
        nlohmann::json j;
        in >> j;
        std::vector<Milestone> milestones;
        for (const auto& m : j.at("milestones")) {
          milestones.push_back({m.at("year").get<int>(), m.at("count").get<double>()});
        }
        const double share = j.value("regional_share", kDefaultRegionalShare);
        const auto years = run_mode2_years(inst, milestones, share, make_build_options(g), solver);
        fs::create_directories(m2_out);
        std::ofstream csv(fs::path(m2_out) / "yearly_summary.csv");
        csv << "year,target,electrified,objective,ghg_kg_per_day,stations,upgraded_substations\n";
        int code = 0;
        for (const auto& [year, rep] : years) {
          emit_report(rep, (fs::path(m2_out) / ("year_" + std::to_string(year))).string());
          long deployed = 0;
          for (const auto& s : rep.stations) deployed += s.deployed ? 1 : 0;
          long upgrades = 0;
          for (const auto& k : rep.substations) upgrades += k.upgraded ? 1 : 0;
          csv << year << "," << interpolate_target(milestones, share, year) << ","
              << rep.electrified_trucks.size() << "," << rep.objective << ","
              << rep.ghg_kg_per_day << "," << deployed << "," << upgrades << "\n";
          std::cout << "year " << year << ": " << rep.status << ", electrified "
                    << rep.electrified_trucks.size() << ", cost " << rep.objective << "\n";
          if (rep.status != "optimal") code = rep.status == "infeasible" ? 2 : 3;
        }
        return code;
      }
      if (m2_target < 0.0) throw std::runtime_error("mode2 needs --target or --years");
      ScenarioConfig config;
      config.mode = PlanMode::MinCost;
      config.n_target = m2_target;
      config.build = make_build_options(g);
      config.solver = solver;
      config.out_dir = m2_out;
      const ScenarioResult res = run_scenario(inst, config);
      print_report_summary(res.report);
      return exit_code_of(res.solution.status);
    }

    if (*cmd_mode3) {
      const Instance inst = load_with_config(m3_instance, g);
      ScenarioConfig config;
      config.mode = PlanMode::MinEmissions;
      config.budget = m3_budget;
      config.build = make_build_options(g);
      config.solver = solver;
      config.out_dir = m3_out;
      const ScenarioResult res = run_scenario(inst, config);
      print_report_summary(res.report);
      return exit_code_of(res.solution.status);
    }

    if (*cmd_report) {
      const Instance inst = load_with_config(rp_instance, g);
      BuildOptions opts = make_build_options(g);
      opts.mode = static_cast<PlanMode>(rp_mode);
      opts.n_target = rp_target;
      opts.budget = rp_budget;
      Instance scaled = inst;
      if (rp_mode == 1) {
        for (auto& k : scaled.substations) k.remaining_capacity_kw *= rp_fraction;
      }
      const PlanningModel pm = build_planning_model(scaled, opts);
      CheckReport check;
      const Solution sol = import_solution(rp_solution, pm.ir, rp_sidecar, &check);
      if (!check.feasible()) {
        std::cout << "solution fails the feasibility check:\n" << check.to_string();
      }
      const PlanReport rep = make_plan_report(scaled, pm, sol, rp_fraction);
      emit_report(rep, rp_out);
      print_report_summary(rep);
      return check.feasible() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
