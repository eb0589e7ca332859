#pragma once

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "drayplan/instance.hpp"

namespace drayplan {

struct Violation {
  std::string entity;  // e.g. "truck T3", "station S1", "grid"
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  std::string to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) {
      os << v.entity << "." << v.field << ": " << v.message << "\n";
    }
    return os.str();
  }
};

/// Checks every structural invariant of an Instance. Violations are data,
/// not errors: the report lists each one with the entity and field.
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto add = [&](const std::string& entity, const std::string& field, const std::string& msg) {
    rep.violations.push_back({entity, field, msg});
  };
  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };

  const int T = inst.grid.step_count;
  if (T < 2) add("grid", "step_count", "must be >= 2, got " + std::to_string(T));
  if (!(inst.grid.step_hours > 0.0)) add("grid", "step_hours", "must be > 0");
  if (inst.grid.horizon_hours() > 24.0 + 1e-9) {
    add("grid", "horizon", "daily horizon exceeds 24 h: " + num(inst.grid.horizon_hours()));
  }

  std::set<std::string> truck_ids;
  for (size_t i = 0; i < inst.trucks.size(); ++i) {
    const auto& trk = inst.trucks[i];
    const std::string ent = "truck " + trk.id;
    if (!truck_ids.insert(trk.id).second) add(ent, "id", "duplicate truck id");
    if (static_cast<int>(trk.stop_fraction.size()) != T) {
      add(ent, "stop_fraction", "length != step_count");
      continue;
    }
    if (static_cast<int>(trk.consumption_kwh.size()) != T) {
      add(ent, "consumption_kwh", "length != step_count");
      continue;
    }
    if (!trk.position.empty() && static_cast<int>(trk.position.size()) != T) {
      add(ent, "position", "length != step_count");
    }
    for (int t = 0; t < T; ++t) {
      const double r = trk.stop_fraction[t];
      const double c = trk.consumption_kwh[t];
      if (r < 0.0 || r > 1.0) {
        add(ent, "stop_fraction[" + std::to_string(t) + "]", "outside [0,1]: " + num(r));
      }
      if (c < 0.0) {
        add(ent, "consumption_kwh[" + std::to_string(t) + "]", "negative: " + num(c));
      }
      if (r == 1.0 && c != 0.0) {
        add(ent, "consumption_kwh[" + std::to_string(t) + "]",
            "nonzero while fully stopped: " + num(c));
      }
    }
    if (trk.diesel_emission_kg < 0.0) add(ent, "diesel_emission_kg", "negative");
  }

  std::set<std::string> station_ids;
  for (const auto& st : inst.stations) {
    const std::string ent = "station " + st.id;
    if (!station_ids.insert(st.id).second) add(ent, "id", "duplicate station id");
    if (st.kind == StationKind::Depot && st.owner_truck_ids.empty()) {
      add(ent, "owner_truck_ids", "depot must have owners");
    }
    if (st.kind != StationKind::Depot && !st.owner_truck_ids.empty()) {
      add(ent, "owner_truck_ids", "public site must have empty owner set");
    }
    for (const auto& owner : st.owner_truck_ids) {
      if (!truck_ids.count(owner)) add(ent, "owner_truck_ids", "unknown truck id " + owner);
    }
  }

  std::set<std::string> substation_ids;
  for (const auto& sb : inst.substations) {
    const std::string ent = "substation " + sb.id;
    if (!substation_ids.insert(sb.id).second) add(ent, "id", "duplicate substation id");
    if (sb.remaining_capacity_kw < 0.0) add(ent, "remaining_capacity_kw", "negative");
  }

  const int nI = static_cast<int>(inst.trucks.size());
  const int nJ = static_cast<int>(inst.stations.size());
  const int nK = static_cast<int>(inst.substations.size());
  std::set<std::tuple<int, int, int>> seen_ts;
  for (const auto& a : inst.access.truck_station) {
    const std::string ent =
        "access (" + std::to_string(a.truck) + "," + std::to_string(a.station) + "," +
        std::to_string(a.step) + ")";
    if (a.truck < 0 || a.truck >= nI || a.station < 0 || a.station >= nJ || a.step < 0 ||
        a.step >= T) {
      add(ent, "truck_station", "index out of range");
      continue;
    }
    if (!seen_ts.insert({a.truck, a.station, a.step}).second) {
      add(ent, "truck_station", "duplicate triplet");
    }
    if (inst.trucks[a.truck].stop_fraction[a.step] <= 0.0) {
      add(ent, "truck_station", "access without stop");
    }
    const auto& st = inst.stations[a.station];
    if (!st.is_public() && !st.owner_truck_ids.count(inst.trucks[a.truck].id)) {
      add(ent, "truck_station", "truck is not an owner of this depot");
    }
  }

  std::vector<int> neighbor_count(static_cast<size_t>(nJ), 0);
  std::set<std::pair<int, int>> seen_ss;
  for (const auto& e : inst.access.station_substation) {
    const std::string ent =
        "access (" + std::to_string(e.station) + "," + std::to_string(e.substation) + ")";
    if (e.station < 0 || e.station >= nJ || e.substation < 0 || e.substation >= nK) {
      add(ent, "station_substation", "index out of range");
      continue;
    }
    if (!seen_ss.insert({e.station, e.substation}).second) {
      add(ent, "station_substation", "duplicate edge");
    }
    if (e.distance_miles < 0.0) add(ent, "distance_miles", "negative");
    neighbor_count[static_cast<size_t>(e.station)]++;
  }
  for (int j = 0; j < nJ; ++j) {
    if (neighbor_count[static_cast<size_t>(j)] > inst.access.neighbor_limit) {
      add("station " + inst.stations[static_cast<size_t>(j)].id, "station_substation",
          "more than " + std::to_string(inst.access.neighbor_limit) + " substation neighbors");
    }
  }

  const auto& gp = inst.params;
  if (!(gp.p_max_kw > 0.0)) add("params", "p_max_kw", "must be > 0");
  if (gp.e_base_kwh < 0.0) add("params", "e_base_kwh", "negative");
  if (!(gp.soc_min >= 0.0 && gp.soc_min < gp.soc_max && gp.soc_max <= 1.0)) {
    add("params", "soc", "need 0 <= soc_min < soc_max <= 1");
  }
  if (!(gp.kappa > 0.0 && gp.kappa <= 1.0)) add("params", "kappa", "outside (0,1]");
  if (!(gp.pf > 0.0 && gp.pf <= 1.0)) add("params", "pf", "outside (0,1]");
  if (gp.p_upg_std_kva < 0.0) add("params", "p_upg_std_kva", "negative");
  if (!(gp.days_per_year > 0.0)) add("params", "days_per_year", "must be > 0");
  if (static_cast<int>(gp.tou_price.size()) != T) {
    add("params", "tou_price", "length != step_count");
  }
  if (static_cast<int>(gp.carbon_intensity.size()) != T) {
    add("params", "carbon_intensity", "length != step_count");
  }
  for (double v : gp.tou_price) {
    if (v < 0.0) {
      add("params", "tou_price", "negative entry");
      break;
    }
  }
  for (double v : gp.carbon_intensity) {
    if (v < 0.0) {
      add("params", "carbon_intensity", "negative entry");
      break;
    }
  }

  const CostBook& cb = inst.costs;
  const CostRow* rows[] = {&cb.vehicle,      &cb.battery, &cb.construction,
                           &cb.power_equip,  &cb.charger, &cb.line,
                           &cb.upgrade_fixed, &cb.upgrade_var};
  const char* names[] = {"vehicle", "battery",       "construction", "power_equip",
                         "charger", "line",          "upgrade_fixed", "upgrade_var"};
  for (size_t r = 0; r < 8; ++r) {
    if (rows[r]->annual < 0.0 || rows[r]->investment < 0.0) {
      add("costs", names[r], "negative cost");
    }
    // The published power-equipment row is rounded; allow 7.5% slack there.
    if (rows[r]->investment > 0.0) {
      const double formula = amortize(rows[r]->investment, rows[r]->lifespan_years, cb.interest_rate);
      const double rel = std::abs(rows[r]->annual - formula) / std::max(1.0, formula);
      if (rel > 0.075) {
        add("costs", names[r], "annual value inconsistent with amortization of its row");
      }
    }
  }

  return rep;
}

}  // namespace drayplan
