#pragma once

#include <algorithm>
#include <vector>

#include "drayplan/instance.hpp"

namespace drayplan {

/// Index sets derived from the access matrix:
///   stations_of_truck[i][t]   — stations truck i can use at step t
///   trucks_of_station[j][t]   — trucks that can use station j at step t
///   substations_of_station[j] — grid connection candidates of station j
///   stations_of_substation[k] — inverse of the above
/// Neighbor lists carry the line distance alongside the substation index.
struct AccessIndex {
  struct Neighbor {
    int substation = 0;
    double distance_miles = 0.0;
  };

  std::vector<std::vector<std::vector<int>>> stations_of_truck;
  std::vector<std::vector<std::vector<int>>> trucks_of_station;
  std::vector<std::vector<Neighbor>> substations_of_station;
  std::vector<std::vector<int>> stations_of_substation;
};

inline AccessIndex derive_subsets(const AccessMatrix& access, int n_trucks, int n_stations,
                                  int n_substations, int step_count) {
  AccessIndex ix;
  ix.stations_of_truck.assign(n_trucks, std::vector<std::vector<int>>(step_count));
  ix.trucks_of_station.assign(n_stations, std::vector<std::vector<int>>(step_count));
  ix.substations_of_station.assign(n_stations, {});
  ix.stations_of_substation.assign(n_substations, {});

  for (const auto& a : access.truck_station) {
    ix.stations_of_truck[a.truck][a.step].push_back(a.station);
    ix.trucks_of_station[a.station][a.step].push_back(a.truck);
  }
  for (const auto& e : access.station_substation) {
    ix.substations_of_station[e.station].push_back({e.substation, e.distance_miles});
    ix.stations_of_substation[e.substation].push_back(e.station);
  }

  for (auto& per_truck : ix.stations_of_truck) {
    for (auto& v : per_truck) std::sort(v.begin(), v.end());
  }
  for (auto& per_station : ix.trucks_of_station) {
    for (auto& v : per_station) std::sort(v.begin(), v.end());
  }
  for (auto& v : ix.substations_of_station) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.substation < b.substation; });
  }
  for (auto& v : ix.stations_of_substation) std::sort(v.begin(), v.end());
  return ix;
}

inline AccessIndex derive_subsets(const Instance& inst) {
  return derive_subsets(inst.access, static_cast<int>(inst.trucks.size()),
                        static_cast<int>(inst.stations.size()),
                        static_cast<int>(inst.substations.size()), inst.grid.step_count);
}

}  // namespace drayplan
