#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "drayplan/brute_force.hpp"
#include "drayplan/scenario.hpp"
#include "drayplan/synthetic.hpp"
#include "test_util.hpp"

using namespace drayplan;

namespace {

SyntheticSpec small_spec(uint64_t seed, int trucks = 2, int stations = 2, int subs = 1,
                         int steps = 4) {
  SyntheticSpec spec;
  spec.n_trucks = trucks;
  spec.n_stations = stations;
  spec.n_substations = subs;
  spec.steps = steps;
  spec.seed = seed;
  spec.cost_scale = 1e-3;
  return spec;
}

}  // namespace

TEST_CASE("ghg: all-diesel plan scores exactly the diesel sum") {
  Instance inst = generate_synthetic(small_spec(40));
  inst.trucks[0].diesel_emission_kg = 1.0;
  inst.trucks[1].diesel_emission_kg = 2.0;
  const ScenarioResult res = run_mode3(inst, 0.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  CHECK(res.report.ghg_kg_per_day == 3.0);  // exact
  CHECK(res.report.electrified_trucks.empty());
}

TEST_CASE("ghg: full electrification on a zero-carbon grid is zero") {
  Instance inst = generate_synthetic(small_spec(41));
  for (auto& g : inst.params.carbon_intensity) g = 0.0;
  const ScenarioResult res = run_mode2(inst, 2.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  REQUIRE(res.report.electrified_trucks.size() == 2);
  CHECK(res.report.ghg_kg_per_day == 0.0);
}

TEST_CASE("ghg: hand arithmetic for one charged truck plus diesel remainder") {
  // T0 draws exactly 40 kWh from the grid at flat 0.2 kg/kWh: 8 kg, plus u1.
  Instance inst;
  inst.grid = {2, 2.0};
  const double eta = std::sqrt(0.95);
  TruckProfile t0;
  t0.id = "T0";
  t0.stop_fraction = {1.0, 0.0};
  t0.consumption_kwh = {0.0, 40.0 * eta};  // grid draw 40 kWh over the cycle
  t0.diesel_emission_kg = 100.0;
  TruckProfile t1;  // no access, stays diesel
  t1.id = "T1";
  t1.stop_fraction = {0.0, 0.0};
  t1.consumption_kwh = {3.0, 3.0};
  t1.diesel_emission_kg = 7.0;
  inst.trucks = {t0, t1};
  StationSite s;
  s.id = "S0";
  s.location = {-118.2, 33.8};
  inst.stations.push_back(s);
  SubstationNode k{"K0", {-118.2, 33.81}, 2000.0};
  inst.substations.push_back(k);
  inst.access.truck_station.push_back({0, 0, 0});
  inst.access.station_substation.push_back({0, 0, 1.0});
  inst.params.tou_price.assign(2, 0.13);
  inst.params.carbon_intensity.assign(2, 0.2);
  inst.costs = CostBook::defaults();
  REQUIRE(validate_instance(inst).ok());

  const ScenarioResult res = run_mode2(inst, 1.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  REQUIRE(res.report.electrified_trucks == std::vector<std::string>{"T0"});
  CHECK(res.report.ghg_kg_per_day == Catch::Approx(8.0 + 7.0).margin(1e-6));
}

TEST_CASE("utilization: full, zero, half, and undefined") {
  const Instance inst = generate_synthetic(small_spec(42, 1, 1, 1, 4));
  BuildOptions opts;
  opts.mode = PlanMode::MaxTrucks;
  PlanningModel pm = build_planning_model(inst, opts);
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.values.assign(static_cast<size_t>(pm.ir.num_vars()), 0.0);
  auto set_cap = [&](double cap) { sol.values[static_cast<size_t>(pm.station_cap[0])] = cap; };
  auto set_loads = [&](std::initializer_list<double> loads) {
    int t = 0;
    for (double v : loads) sol.values[static_cast<size_t>(pm.station_load[0][static_cast<size_t>(t++)])] = v;
  };
  set_cap(100.0);
  set_loads({100.0, 100.0, 100.0, 100.0});
  CHECK(utilization(pm, sol, 0, inst).value() == Catch::Approx(1.0));
  set_loads({0.0, 0.0, 0.0, 0.0});
  CHECK(utilization(pm, sol, 0, inst).value() == Catch::Approx(0.0));
  set_loads({100.0, 100.0, 0.0, 0.0});
  CHECK(utilization(pm, sol, 0, inst).value() == Catch::Approx(0.5));
  set_cap(0.0);
  CHECK_FALSE(utilization(pm, sol, 0, inst).has_value());
}

TEST_CASE("interpolate_targets: milestone years, midpoints, share scaling") {
  const std::vector<Milestone> ms{{2024, 1000}, {2025, 3000}, {2030, 24000}, {2035, 35000}};
  CHECK(interpolate_target(ms, 1.0, 2025) == 3000);
  CHECK(interpolate_target(ms, 1.0, 2024) == 1000);
  // Midpoint of 2025..2030 on the straight line.
  CHECK(interpolate_target(ms, 1.0, 2027) == std::lround(3000 + 2.0 / 5.0 * 21000));
  CHECK(interpolate_target(ms, 22000.0 / 35000.0, 2030) == 15086);
  CHECK_THROWS_AS(interpolate_target(ms, 1.0, 2036), std::invalid_argument);
  CHECK_THROWS_AS(interpolate_target(ms, 1.0, 2023), std::invalid_argument);
  const auto all = interpolate_targets(ms, 1.0);
  CHECK(all.size() == 12);
  long prev = 0;
  for (const auto& [y, n] : all) {
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("mode 1: zero capacity supports only zero-consumption trucks") {
  Instance inst = generate_synthetic(small_spec(50));
  for (auto& k : inst.substations) k.remaining_capacity_kw = 0.0;
  const ScenarioResult res = run_mode1(inst, 1.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  CHECK(res.solution.objective == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("mode 1: fraction sweep is monotone and capped instances bind") {
  SyntheticSpec spec = small_spec(51, 3, 2, 2, 6);
  spec.capacity_scale = 1.0;  // tight capacity so fractions bite
  const Instance inst = generate_synthetic(spec);
  double prev = -1.0;
  for (double f : {0.2, 0.5, 1.0}) {
    const ScenarioResult res = run_mode1(inst, f);
    REQUIRE(res.solution.status == SolveStatus::Optimal);
    CHECK(res.solution.objective >= prev - 1e-9);
    CHECK(res.report.capacity_fraction == f);
    prev = res.solution.objective;
  }
  CHECK_THROWS_AS(run_mode1(inst, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(run_mode1(inst, 1.5), std::invalid_argument);
}

TEST_CASE("mode 2: zero target is free, target picks the cheaper truck, oracle agrees") {
  SyntheticSpec spec = small_spec(52);
  spec.daily_kwh_lo = 40.0;
  spec.daily_kwh_hi = 200.0;  // spread battery needs apart
  const Instance inst = generate_synthetic(spec);

  const ScenarioResult zero = run_mode2(inst, 0.0);
  REQUIRE(zero.solution.status == SolveStatus::Optimal);
  CHECK(zero.solution.objective == Catch::Approx(0.0).margin(1e-9));

  const ScenarioResult one = run_mode2(inst, 1.0);
  REQUIRE(one.solution.status == SolveStatus::Optimal);
  const Solution oracle = brute_force_oracle(one.model.ir);
  REQUIRE(oracle.status == SolveStatus::Optimal);
  CHECK(one.solution.objective == Catch::Approx(oracle.objective).margin(1e-6));
  REQUIRE(one.report.electrified_trucks.size() == 1);
  // The cheaper-to-electrify truck is the one with less consumption here.
  const int t0 = inst.truck_index(one.report.electrified_trucks[0]);
  const int other = 1 - t0;
  CHECK(inst.trucks[static_cast<size_t>(t0)].total_consumption_kwh() <=
        inst.trucks[static_cast<size_t>(other)].total_consumption_kwh() + 1e-9);
}

TEST_CASE("mode 2 cost is nondecreasing in the target") {
  const Instance inst = generate_synthetic(small_spec(53, 3, 2, 1, 6));
  double prev = -1.0;
  for (double n : {0.0, 1.0, 2.0, 3.0}) {
    const ScenarioResult res = run_mode2(inst, n);
    REQUIRE(res.solution.status == SolveStatus::Optimal);
    CHECK(res.solution.objective >= prev - 1e-7);
    prev = res.solution.objective;
  }
}

TEST_CASE("mode 2: infeasible target reports the mode-1 maximum") {
  Instance inst = generate_synthetic(small_spec(54));
  // Remove all access: nothing is electrifiable even with upgrades.
  inst.access.truck_station.clear();
  const ScenarioResult res = run_mode2(inst, 2.0);
  CHECK(res.solution.status == SolveStatus::Infeasible);
  REQUIRE(res.report.mode1_max.has_value());
  CHECK(*res.report.mode1_max == 0);
  CHECK(res.report.status == "infeasible");
}

TEST_CASE("mode 3: emissions are nonincreasing in the budget") {
  const Instance inst = generate_synthetic(small_spec(55, 2, 1, 1, 4));
  const ScenarioResult rich = run_mode3(inst, 1e9);
  REQUIRE(rich.solution.status == SolveStatus::Optimal);
  double prev = kInf;
  for (double budget : {0.0, rich.report.costs.total * 0.6, rich.report.costs.total * 1.1}) {
    const ScenarioResult res = run_mode3(inst, budget);
    REQUIRE(res.solution.status == SolveStatus::Optimal);
    CHECK(res.solution.objective <= prev + 1e-7);
    prev = res.solution.objective;
  }
}

TEST_CASE("mode 3: a budget for one electrification picks the bigger emission win") {
  SyntheticSpec spec = small_spec(56);
  spec.daily_kwh_lo = 30.0;
  spec.daily_kwh_hi = 220.0;
  Instance inst = generate_synthetic(spec);
  // Give the trucks clearly different diesel emissions.
  inst.trucks[0].diesel_emission_kg *= 3.0;

  const ScenarioResult rich = run_mode3(inst, 1e9);
  REQUIRE(rich.solution.status == SolveStatus::Optimal);
  if (rich.report.electrified_trucks.size() == 2) {
    // Find a budget admitting exactly one electrification: between the two
    // single-truck plan costs.
    double cost1 = kInf;
    for (int i = 0; i < 2; ++i) {
      ScenarioResult solo = run_mode2(inst, 1.0);
      cost1 = std::min(cost1, solo.report.costs.total);
    }
    const double budget = cost1 * 1.3;
    const ScenarioResult res = run_mode3(inst, budget);
    REQUIRE(res.solution.status == SolveStatus::Optimal);
    const Solution oracle = brute_force_oracle(res.model.ir);
    CHECK(res.solution.objective == Catch::Approx(oracle.objective).margin(1e-6));
  }
}

TEST_CASE("plan report: cost breakdown sums to the mode-2 objective") {
  const Instance inst = generate_synthetic(small_spec(57, 3, 2, 2, 6));
  const ScenarioResult res = run_mode2(inst, 2.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  const auto& c = res.report.costs;
  CHECK(c.total == Catch::Approx(res.solution.objective).epsilon(1e-6));
  CHECK(c.truck + c.charging + c.power == Catch::Approx(c.total));
  CHECK(c.electricity <= c.truck + 1e-9);
}

TEST_CASE("plan report invariants: connections, loads, and energy balance") {
  const Instance inst = generate_synthetic(small_spec(58, 3, 2, 2, 6));
  const ScenarioResult res = run_mode2(inst, 3.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  const PlanReport& r = res.report;

  for (const auto& s : r.stations) {
    if (s.deployed) {
      CHECK(s.substation.has_value());  // every deployed station is connected
    }
  }
  for (const auto& k : r.substations) {
    const int ki = inst.substation_index(k.id);
    CHECK(k.reserved_flow_kw <=
          inst.substations[static_cast<size_t>(ki)].remaining_capacity_kw + k.upgrade_kw + 1e-6);
  }
  // Station energies equal truck charged energies.
  double station_energy = 0.0;
  for (double kw : r.load_profile_kw) station_energy += kw * r.step_hours;
  double truck_energy = 0.0;
  for (size_t i = 0; i < inst.trucks.size(); ++i) {
    for (int t = 0; t < inst.grid.step_count; ++t) {
      truck_energy += res.solution.values[static_cast<size_t>(res.model.p[i][static_cast<size_t>(t)])] *
                      r.step_hours;
    }
  }
  CHECK(station_energy == Catch::Approx(truck_energy).margin(1e-6));
}

TEST_CASE("emit_report writes all files; empty plans keep headers") {
  namespace fs = std::filesystem;
  const std::string dir = "/tmp/drayplan_report_empty";
  fs::remove_all(dir);
  PlanReport empty;
  empty.mode = 2;
  empty.status = "infeasible";
  emit_report(empty, dir);
  for (const char* name : {"plan.json", "load_profile.csv", "battery_hist.csv",
                           "utilization.csv", "costs.csv", "summary.txt"}) {
    CHECK(fs::exists(fs::path(dir) / name));
  }
  std::ifstream hist(fs::path(dir) / "battery_hist.csv");
  std::string line;
  std::getline(hist, line);
  CHECK(line == "bin_lo_kwh,bin_hi_kwh,count");
  CHECK_FALSE(std::getline(hist, line));
}

TEST_CASE("plan.json round-trips to an equal report") {
  const Instance inst = generate_synthetic(small_spec(59, 2, 2, 1, 4));
  const ScenarioResult res = run_mode2(inst, 1.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  const std::string dir = "/tmp/drayplan_report_tiny";
  std::filesystem::remove_all(dir);
  emit_report(res.report, dir);
  const PlanReport back = load_plan_report(dir + "/plan.json");
  CHECK(back == res.report);
}

TEST_CASE("load_profile.csv column sum times dt equals the plan's charged energy") {
  const Instance inst = generate_synthetic(small_spec(60, 2, 2, 1, 6));
  const ScenarioResult res = run_mode2(inst, 2.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  const std::string dir = "/tmp/drayplan_report_load";
  std::filesystem::remove_all(dir);
  emit_report(res.report, dir);

  std::ifstream csv(dir + "/load_profile.csv");
  std::string line;
  std::getline(csv, line);  // header
  double csv_energy = 0.0;
  while (std::getline(csv, line)) {
    const auto comma = line.find(',');
    csv_energy += std::stod(line.substr(comma + 1)) * res.report.step_hours;
  }
  const PlanReport plan = load_plan_report(dir + "/plan.json");
  double plan_energy = 0.0;
  for (double kw : plan.load_profile_kw) plan_energy += kw * plan.step_hours;
  CHECK(csv_energy == Catch::Approx(plan_energy).margin(1e-9));
}

TEST_CASE("multi-year planning commits assets and tracks growing targets") {
  const Instance inst = generate_synthetic(small_spec(61, 3, 2, 1, 6));
  const std::vector<Milestone> ms{{2024, 1}, {2026, 3}};
  const auto years = run_mode2_years(inst, ms, 1.0);
  REQUIRE(years.size() == 3);
  std::set<std::string> prev_trucks;
  double prev_cost = -1.0;
  for (const auto& [year, rep] : years) {
    CAPTURE(year);
    REQUIRE(rep.status == "optimal");
    // Previously electrified trucks stay in the plan.
    for (const auto& id : prev_trucks) {
      CHECK(std::find(rep.electrified_trucks.begin(), rep.electrified_trucks.end(), id) !=
            rep.electrified_trucks.end());
    }
    prev_trucks.insert(rep.electrified_trucks.begin(), rep.electrified_trucks.end());
    CHECK(rep.costs.total >= prev_cost - 1e-7);
    prev_cost = rep.costs.total;
  }
  CHECK(years.back().second.electrified_trucks.size() == 3);
}

TEST_CASE("scenario config validates its mode-specific inputs") {
  const Instance inst = generate_synthetic(small_spec(70));
  ScenarioConfig config;
  config.mode = PlanMode::MaxTrucks;
  config.capacity_fraction = 0.0;
  CHECK_THROWS_AS(run_scenario(inst, config), std::invalid_argument);
  config.capacity_fraction = 1.0;
  CHECK(run_scenario(inst, config).solution.status == SolveStatus::Optimal);

  config.mode = PlanMode::MinCost;  // no target
  CHECK_THROWS_AS(run_scenario(inst, config), std::invalid_argument);
  config.n_target = 1.0;
  CHECK(run_scenario(inst, config).solution.status == SolveStatus::Optimal);

  config.mode = PlanMode::MinEmissions;  // no budget
  CHECK_THROWS_AS(run_scenario(inst, config), std::invalid_argument);
  config.budget = 0.0;
  CHECK(run_scenario(inst, config).solution.status == SolveStatus::Optimal);
}

TEST_CASE("run_scenario writes report files when an output directory is set") {
  const Instance inst = generate_synthetic(small_spec(71));
  ScenarioConfig config;
  config.mode = PlanMode::MaxTrucks;
  config.out_dir = "/tmp/drayplan_scenario_dir";
  std::filesystem::remove_all(config.out_dir);
  run_scenario(inst, config);
  CHECK(std::filesystem::exists("/tmp/drayplan_scenario_dir/plan.json"));
}

TEST_CASE("a single forced charging window makes exactly one truck electrifiable") {
  SyntheticSpec spec = small_spec(72, 1, 1, 1, 6);
  spec.access_steps_per_truck = 1;
  const Instance inst = generate_synthetic(spec);
  const ScenarioResult res = run_mode1(inst, 1.0);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  CHECK(res.solution.objective == Catch::Approx(1.0));
  CHECK(res.report.electrified_trucks == std::vector<std::string>{"T0"});
}
