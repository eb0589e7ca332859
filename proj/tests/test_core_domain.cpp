#include <catch2/catch_amalgamated.hpp>

#include "drayplan/instance.hpp"
#include "drayplan/instance_json.hpp"
#include "drayplan/subsets.hpp"
#include "drayplan/time_grid.hpp"
#include "drayplan/validate.hpp"
#include "test_util.hpp"

using namespace drayplan;

namespace {

Instance tiny_instance(int trucks = 1, int steps = 4) {
  Instance inst;
  inst.grid = {steps, 24.0 / steps};
  for (int i = 0; i < trucks; ++i) {
    TruckProfile t;
    t.id = "T" + std::to_string(i);
    t.stop_fraction.assign(static_cast<size_t>(steps), 1.0);
    t.stop_fraction[1] = 0.0;
    t.consumption_kwh.assign(static_cast<size_t>(steps), 0.0);
    t.consumption_kwh[1] = 10.0;
    t.diesel_emission_kg = 100.0;
    inst.trucks.push_back(t);
  }
  StationSite s;
  s.id = "S0";
  s.kind = StationKind::TruckStop;
  s.location = {-118.2, 33.8};
  inst.stations.push_back(s);
  SubstationNode k;
  k.id = "K0";
  k.location = {-118.21, 33.81};
  k.remaining_capacity_kw = 500.0;
  inst.substations.push_back(k);
  for (int i = 0; i < trucks; ++i) inst.access.truck_station.push_back({i, 0, 0});
  inst.access.station_substation.push_back({0, 0, 1.0});
  inst.params.tou_price.assign(static_cast<size_t>(steps), 0.15);
  inst.params.carbon_intensity.assign(static_cast<size_t>(steps), 0.25);
  inst.costs = CostBook::defaults();
  return inst;
}

}  // namespace

TEST_CASE("next_time on interior, wrap-around, and minimal grids") {
  CHECK(next_time({96, 0.25}, 5) == 6);
  CHECK(next_time({96, 0.25}, 95) == 0);
  CHECK(next_time({2, 0.25}, 1) == 0);
  CHECK_THROWS_AS(next_time({96, 0.25}, 96), std::out_of_range);
  CHECK_THROWS_AS(next_time({96, 0.25}, -1), std::out_of_range);
}

TEST_CASE("next_time is a bijection and step_count applications are the identity") {
  const TimeGrid grid{17, 0.5};
  std::vector<bool> hit(17, false);
  for (int t = 0; t < grid.step_count; ++t) {
    const int nt = next_time(grid, t);
    CHECK_FALSE(hit[static_cast<size_t>(nt)]);
    hit[static_cast<size_t>(nt)] = true;
  }
  int t = 3;
  for (int k = 0; k < grid.step_count; ++k) t = next_time(grid, t);
  CHECK(t == 3);
}

TEST_CASE("validate_instance flags a stop fraction above one") {
  Instance inst = tiny_instance();
  inst.trucks[0].stop_fraction[2] = 1.2;
  const ValidationReport rep = validate_instance(inst);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].entity == "truck T0");
  CHECK(rep.violations[0].field == "stop_fraction[2]");
}

TEST_CASE("validate_instance flags access without stop") {
  Instance inst = tiny_instance();
  inst.access.truck_station.push_back({0, 0, 1});  // stop_fraction[1] is 0
  const ValidationReport rep = validate_instance(inst);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].message == "access without stop");
}

TEST_CASE("validate_instance passes a well-formed instance and is idempotent") {
  const Instance inst = tiny_instance(3);
  const ValidationReport a = validate_instance(inst);
  CHECK(a.ok());
  const ValidationReport b = validate_instance(inst);
  CHECK(b.ok());
}

TEST_CASE("validate_instance flags depot ownership rules") {
  Instance inst = tiny_instance();
  inst.stations[0].kind = StationKind::Depot;  // depot with no owners
  CHECK_FALSE(validate_instance(inst).ok());
  inst.stations[0].owner_truck_ids = {"T0"};
  CHECK(validate_instance(inst).ok());
  inst.stations[0].kind = StationKind::TruckStop;  // public with owners
  CHECK_FALSE(validate_instance(inst).ok());
}

TEST_CASE("derive_subsets: empty and singleton access") {
  AccessMatrix access;
  AccessIndex ix = derive_subsets(access, 3, 3, 2, 8);
  for (const auto& per_truck : ix.stations_of_truck) {
    for (const auto& v : per_truck) CHECK(v.empty());
  }

  access.truck_station.push_back({1, 2, 7});
  ix = derive_subsets(access, 3, 3, 2, 8);
  CHECK(ix.stations_of_truck[1][7] == std::vector<int>{2});
  CHECK(ix.trucks_of_station[2][7] == std::vector<int>{1});
  CHECK(ix.stations_of_truck[0][7].empty());
}

TEST_CASE("derive_subsets matches a brute-force double loop on a random sparse matrix") {
  std::mt19937_64 rng(42);
  const int nI = 5, nJ = 4, nT = 8, nK = 3;
  std::vector<std::vector<std::vector<bool>>> dense(
      nI, std::vector<std::vector<bool>>(nJ, std::vector<bool>(nT, false)));
  AccessMatrix access;
  for (int i = 0; i < nI; ++i) {
    for (int j = 0; j < nJ; ++j) {
      for (int t = 0; t < nT; ++t) {
        if (testutil::uniform(rng, 0.0, 1.0) < 0.2) {
          dense[i][j][t] = true;
          access.truck_station.push_back({i, j, t});
        }
      }
    }
  }
  for (int j = 0; j < nJ; ++j) {
    access.station_substation.push_back({j, j % nK, 1.0 + j});
  }

  const AccessIndex ix = derive_subsets(access, nI, nJ, nK, nT);

  // Independent exhaustive enumeration.
  for (int i = 0; i < nI; ++i) {
    for (int t = 0; t < nT; ++t) {
      std::vector<int> expect;
      for (int j = 0; j < nJ; ++j) {
        if (dense[i][j][t]) expect.push_back(j);
      }
      CHECK(ix.stations_of_truck[i][t] == expect);
    }
  }
  for (int j = 0; j < nJ; ++j) {
    for (int t = 0; t < nT; ++t) {
      std::vector<int> expect;
      for (int i = 0; i < nI; ++i) {
        if (dense[i][j][t]) expect.push_back(i);
      }
      CHECK(ix.trucks_of_station[j][t] == expect);
    }
  }
  // Mutual consistency: i in I_jt iff j in J_it, and K_j/J_k are inverses.
  for (int j = 0; j < nJ; ++j) {
    for (const auto& nb : ix.substations_of_station[j]) {
      const auto& back = ix.stations_of_substation[nb.substation];
      CHECK(std::count(back.begin(), back.end(), j) == 1);
    }
  }
}

TEST_CASE("derive_subsets round-trip reproduces the sparse triplets") {
  std::mt19937_64 rng(7);
  AccessMatrix access;
  const int nI = 4, nJ = 3, nT = 6;
  for (int i = 0; i < nI; ++i) {
    for (int j = 0; j < nJ; ++j) {
      for (int t = 0; t < nT; ++t) {
        if (testutil::uniform(rng, 0.0, 1.0) < 0.3) access.truck_station.push_back({i, j, t});
      }
    }
  }
  const AccessIndex ix = derive_subsets(access, nI, nJ, 1, nT);
  std::vector<std::tuple<int, int, int>> rebuilt;
  for (int i = 0; i < nI; ++i) {
    for (int t = 0; t < nT; ++t) {
      for (int j : ix.stations_of_truck[i][t]) rebuilt.emplace_back(i, j, t);
    }
  }
  std::vector<std::tuple<int, int, int>> original;
  for (const auto& a : access.truck_station) original.emplace_back(a.truck, a.station, a.step);
  std::sort(rebuilt.begin(), rebuilt.end());
  std::sort(original.begin(), original.end());
  CHECK(rebuilt == original);
}

TEST_CASE("instance JSON round-trips") {
  Instance inst = tiny_instance(2);
  inst.trucks[0].position.assign(4, LonLat{-118.25, 33.77});
  const json j = to_json(inst);
  CHECK(j.at("schema") == 1);
  const Instance back = instance_from_json(j);
  CHECK(validate_instance(back).ok());
  CHECK(to_json(back) == j);
}

TEST_CASE("instance JSON rejects unknown schema versions") {
  json j = to_json(tiny_instance());
  j["schema"] = 99;
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);
}

TEST_CASE("grid horizon above 24 hours is a violation") {
  Instance inst = tiny_instance();
  inst.grid.step_hours = 12.0;  // 4 steps x 12 h = 48 h
  CHECK_FALSE(validate_instance(inst).ok());
}
