#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drayplan/cost_book.hpp"
#include "drayplan/geo.hpp"
#include "drayplan/time_grid.hpp"

namespace drayplan {

/// Per-truck day profile on the time grid. All arrays have grid.step_count
/// entries. stop_fraction[t] is the share of step t spent in a qualified
/// stop; consumption_kwh[t] is the driving energy spent during step t.
struct TruckProfile {
  std::string id;
  std::vector<double> stop_fraction;
  std::vector<double> consumption_kwh;
  double diesel_emission_kg = 0.0;  // kg CO2 per day if the truck stays diesel
  std::vector<LonLat> position;     // optional, per step; empty if unknown

  double total_consumption_kwh() const {
    double s = 0.0;
    for (double v : consumption_kwh) s += v;
    return s;
  }
};

enum class StationKind { Depot, TruckStop, Intermodal };

inline const char* to_string(StationKind k) {
  switch (k) {
    case StationKind::Depot: return "depot";
    case StationKind::TruckStop: return "truck-stop";
    case StationKind::Intermodal: return "intermodal";
  }
  return "?";
}

/// Candidate charging station. Depots are fleet-owned (non-empty owner set);
/// truck stops and intermodal terminals are public.
struct StationSite {
  std::string id;
  StationKind kind = StationKind::TruckStop;
  LonLat location;
  std::set<std::string> owner_truck_ids;

  bool is_public() const { return kind != StationKind::Depot; }
};

struct SubstationNode {
  std::string id;
  LonLat location;
  double remaining_capacity_kw = 0.0;
};

/// Sparse access relation. truck_station holds (truck index, station index,
/// step) triplets where the truck can charge; station_substation holds
/// candidate grid connections with their line distance.
struct AccessMatrix {
  struct TruckStation {
    int truck = 0;
    int station = 0;
    int step = 0;
  };
  struct StationSubstation {
    int station = 0;
    int substation = 0;
    double distance_miles = 0.0;
  };

  std::vector<TruckStation> truck_station;
  std::vector<StationSubstation> station_substation;
  int neighbor_limit = 5;  // max substation neighbors per station
};

/// Scalar planning parameters plus the per-step tariff and carbon arrays.
struct GridParams {
  double p_max_kw = 1000.0;       // max charging power per truck
  double e_base_kwh = 900.0;      // base battery capacity
  double soc_min = 0.10;
  double soc_max = 1.00;
  double kappa = 0.95;            // battery cycle efficiency
  double pf = 0.95;               // power factor
  double p_upg_std_kva = 28000.0; // standard upgrade transformer rating
  double days_per_year = 365.0;
  std::vector<double> tou_price;          // $/kWh per step
  std::vector<double> carbon_intensity;   // kg CO2 per kWh per step
};

/// Immutable planning problem. Indices into trucks/stations/substations are
/// the canonical entity handles; AccessMatrix triplets use those indices.
struct Instance {
  TimeGrid grid;
  std::vector<TruckProfile> trucks;
  std::vector<StationSite> stations;
  std::vector<SubstationNode> substations;
  AccessMatrix access;
  GridParams params;
  CostBook costs;

  int truck_index(const std::string& id) const { return find_id(trucks, id); }
  int station_index(const std::string& id) const { return find_id(stations, id); }
  int substation_index(const std::string& id) const { return find_id(substations, id); }

 private:
  template <class V>
  static int find_id(const V& v, const std::string& id) {
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }
};

}  // namespace drayplan
