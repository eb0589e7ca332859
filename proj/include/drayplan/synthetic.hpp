#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "drayplan/geo.hpp"
#include "drayplan/instance.hpp"

namespace drayplan {

namespace detail {

// Platform-stable uniform draw; std::uniform_real_distribution is
// implementation-defined and would break byte-level determinism.
inline double stable_uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace detail

/// Knobs for desk-scale fixtures. Demand and capacity are sized relative to
/// each other so tests can force known-feasible or known-scarce plans.
struct SyntheticSpec {
  int n_trucks = 2;
  int n_stations = 2;
  int n_substations = 1;
  int steps = 6;
  uint64_t seed = 1;

  double consumption_scale = 1.0;  // 0 gives zero-demand trucks
  double capacity_scale = 1.2;     // substation capacity vs. minimal spread-out need
  double cost_scale = 1.0;         // scales every cost-book row
  int k_nearest = 2;
  int access_steps_per_truck = 2;  // parked steps with charging access
  bool second_station_access = false;
  bool with_depot = false;         // station 0 becomes a depot of its home trucks
  double p_max_kw = 1000.0;
  double p_upg_std_kva = 28000.0;
  double daily_kwh_lo = 60.0;
  double daily_kwh_hi = 160.0;
  LonLat center{-118.2, 33.8};
};

/// Deterministic synthetic Instance. Every generated instance passes
/// validate_instance; with capacity_scale >= 1 electrifying all trucks is
/// feasible by construction (demand can be spread across access steps).
inline Instance generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_trucks < 1 || spec.n_stations < 1 || spec.n_substations < 1 || spec.steps < 2) {
    throw std::invalid_argument("generate_synthetic: counts must be positive, steps >= 2");
  }
  if (spec.access_steps_per_truck < 1) {
    throw std::invalid_argument("generate_synthetic: need at least one access step");
  }
  std::mt19937_64 rng(spec.seed);
  Instance inst;
  inst.grid = {spec.steps, 24.0 / spec.steps};
  const double dt = inst.grid.step_hours;

  inst.params.p_max_kw = spec.p_max_kw;
  inst.params.p_upg_std_kva = spec.p_upg_std_kva;
  inst.costs = CostBook::defaults();
  if (spec.cost_scale != 1.0) {
    for (CostRow* row : {&inst.costs.vehicle, &inst.costs.battery, &inst.costs.construction,
                         &inst.costs.power_equip, &inst.costs.charger, &inst.costs.line,
                         &inst.costs.upgrade_fixed, &inst.costs.upgrade_var}) {
      row->investment *= spec.cost_scale;
      row->annual *= spec.cost_scale;
    }
  }
  inst.params.tou_price = inst.costs.tou_schedule(inst.grid);
  inst.params.carbon_intensity.resize(static_cast<size_t>(spec.steps));
  for (int t = 0; t < spec.steps; ++t) {
    const double h = t * dt;
    inst.params.carbon_intensity[static_cast<size_t>(t)] =
        0.20 + 0.10 * std::sin(2.0 * M_PI * (h - 6.0) / 24.0);
  }

  // Substations on a ring, stations jittered near their substation.
  for (int k = 0; k < spec.n_substations; ++k) {
    const double ang = 2.0 * M_PI * k / spec.n_substations;
    SubstationNode node;
    node.id = "K" + std::to_string(k);
    node.location = {spec.center.lon + 0.03 * std::cos(ang), spec.center.lat + 0.03 * std::sin(ang)};
    node.remaining_capacity_kw = 0.0;  // sized after demand is known
    inst.substations.push_back(node);
  }
  for (int j = 0; j < spec.n_stations; ++j) {
    StationSite s;
    s.id = "S" + std::to_string(j);
    s.kind = StationKind::TruckStop;
    const auto& anchor = inst.substations[static_cast<size_t>(j % spec.n_substations)].location;
    s.location = {anchor.lon + detail::stable_uniform(rng, -0.01, 0.01),
                  anchor.lat + detail::stable_uniform(rng, -0.01, 0.01)};
    inst.stations.push_back(s);
  }

  // Trucks: one parked window at their home station, driving elsewhere.
  const int window = std::max(spec.access_steps_per_truck + 1, spec.steps / 3 + 1);
  std::vector<double> station_need(static_cast<size_t>(spec.n_stations), 0.0);
  for (int i = 0; i < spec.n_trucks; ++i) {
    TruckProfile t;
    t.id = "T" + std::to_string(i);
    t.stop_fraction.assign(static_cast<size_t>(spec.steps), 0.0);
    t.consumption_kwh.assign(static_cast<size_t>(spec.steps), 0.0);
    const int home = i % spec.n_stations;
    const int start = (i * 2) % spec.steps;
    std::vector<bool> parked(static_cast<size_t>(spec.steps), false);
    for (int w = 0; w < std::min(window, spec.steps - 1); ++w) {
      parked[static_cast<size_t>((start + w) % spec.steps)] = true;
    }
    int drive_count = 0;
    for (int s = 0; s < spec.steps; ++s) {
      if (!parked[static_cast<size_t>(s)]) ++drive_count;
    }
    const double daily =
        detail::stable_uniform(rng, spec.daily_kwh_lo, spec.daily_kwh_hi) * spec.consumption_scale;
    for (int s = 0; s < spec.steps; ++s) {
      if (parked[static_cast<size_t>(s)]) {
        t.stop_fraction[static_cast<size_t>(s)] = 1.0;
      } else {
        t.consumption_kwh[static_cast<size_t>(s)] = daily / drive_count;
      }
    }
    t.diesel_emission_kg = 0.95 * daily;  // ~1.9 kg/mi at 2 kWh/mi

    // Access triplets on the first parked steps of the window.
    int granted = 0;
    for (int w = 0; w < spec.steps && granted < spec.access_steps_per_truck; ++w) {
      const int s = (start + w) % spec.steps;
      if (!parked[static_cast<size_t>(s)]) continue;
      inst.access.truck_station.push_back({i, home, s});
      if (spec.second_station_access && spec.n_stations > 1 && granted == 0) {
        inst.access.truck_station.push_back({i, (home + 1) % spec.n_stations, s});
      }
      ++granted;
    }
    station_need[static_cast<size_t>(home)] +=
        daily / (std::sqrt(inst.params.kappa) * dt * granted);
    inst.trucks.push_back(std::move(t));
  }

  if (spec.with_depot) {
    auto& depot = inst.stations[0];
    depot.kind = StationKind::Depot;
    for (int i = 0; i < spec.n_trucks; ++i) {
      if (i % spec.n_stations == 0) depot.owner_truck_ids.insert("T" + std::to_string(i));
    }
    if (depot.owner_truck_ids.empty()) depot.kind = StationKind::TruckStop;
  }

  // Station-substation edges: k nearest with haversine distance.
  const int kn = std::min(spec.k_nearest, spec.n_substations);
  std::vector<int> nearest_of(static_cast<size_t>(spec.n_stations), 0);
  for (int j = 0; j < spec.n_stations; ++j) {
    std::vector<std::pair<double, int>> dist;
    for (int k = 0; k < spec.n_substations; ++k) {
      dist.push_back({haversine_miles(inst.stations[static_cast<size_t>(j)].location,
                                      inst.substations[static_cast<size_t>(k)].location),
                      k});
    }
    std::sort(dist.begin(), dist.end());
    nearest_of[static_cast<size_t>(j)] = dist[0].second;
    for (int r = 0; r < kn; ++r) {
      inst.access.station_substation.push_back({j, dist[static_cast<size_t>(r)].second,
                                                dist[static_cast<size_t>(r)].first});
    }
  }

  // Hosting capacity: every station's nearest substation can carry the
  // station's spread-out demand, scaled by capacity_scale.
  for (int j = 0; j < spec.n_stations; ++j) {
    inst.substations[static_cast<size_t>(nearest_of[static_cast<size_t>(j)])].remaining_capacity_kw +=
        spec.capacity_scale * station_need[static_cast<size_t>(j)];
  }
  return inst;
}

}  // namespace drayplan
