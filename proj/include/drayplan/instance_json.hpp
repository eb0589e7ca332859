#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "drayplan/instance.hpp"

namespace drayplan {

using nlohmann::json;

inline json to_json(const CostRow& r) {
  return json{{"investment", r.investment}, {"lifespan_years", r.lifespan_years}, {"annual", r.annual}};
}

inline CostRow cost_row_from_json(const json& j) {
  CostRow r;
  r.investment = j.at("investment").get<double>();
  r.lifespan_years = j.at("lifespan_years").get<double>();
  r.annual = j.at("annual").get<double>();
  return r;
}

inline json to_json(const CostBook& c) {
  return json{{"interest_rate", c.interest_rate},
              {"vehicle", to_json(c.vehicle)},
              {"battery", to_json(c.battery)},
              {"construction", to_json(c.construction)},
              {"power_equip", to_json(c.power_equip)},
              {"charger", to_json(c.charger)},
              {"line", to_json(c.line)},
              {"upgrade_fixed", to_json(c.upgrade_fixed)},
              {"upgrade_var", to_json(c.upgrade_var)},
              {"tou_on_peak", c.tou_on_peak},
              {"tou_mid_peak", c.tou_mid_peak},
              {"tou_off_peak", c.tou_off_peak}};
}

inline CostBook cost_book_from_json(const json& j) {
  CostBook c;
  c.interest_rate = j.at("interest_rate").get<double>();
  c.vehicle = cost_row_from_json(j.at("vehicle"));
  c.battery = cost_row_from_json(j.at("battery"));
  c.construction = cost_row_from_json(j.at("construction"));
  c.power_equip = cost_row_from_json(j.at("power_equip"));
  c.charger = cost_row_from_json(j.at("charger"));
  c.line = cost_row_from_json(j.at("line"));
  c.upgrade_fixed = cost_row_from_json(j.at("upgrade_fixed"));
  c.upgrade_var = cost_row_from_json(j.at("upgrade_var"));
  c.tou_on_peak = j.value("tou_on_peak", 0.232);
  c.tou_mid_peak = j.value("tou_mid_peak", 0.177);
  c.tou_off_peak = j.value("tou_off_peak", 0.130);
  return c;
}

inline StationKind station_kind_from_string(const std::string& s) {
  if (s == "depot") return StationKind::Depot;
  if (s == "truck-stop") return StationKind::TruckStop;
  if (s == "intermodal") return StationKind::Intermodal;
  throw std::invalid_argument("unknown station kind: " + s);
}

/// Instance document, schema version 1. Access triplets are stored by
/// entity id so files stay stable under reordering of the entity arrays.
inline json to_json(const Instance& inst) {
  json j;
  j["schema"] = 1;
  j["grid"] = {{"step_count", inst.grid.step_count}, {"step_hours", inst.grid.step_hours}};

  j["trucks"] = json::array();
  for (const auto& t : inst.trucks) {
    json jt{{"id", t.id},
            {"stop_fraction", t.stop_fraction},
            {"consumption_kwh", t.consumption_kwh},
            {"diesel_emission_kg", t.diesel_emission_kg}};
    if (!t.position.empty()) {
      json pos = json::array();
      for (const auto& p : t.position) pos.push_back({p.lon, p.lat});
      jt["position"] = pos;
    }
    j["trucks"].push_back(jt);
  }

  j["stations"] = json::array();
  for (const auto& s : inst.stations) {
    json js{{"id", s.id},
            {"kind", to_string(s.kind)},
            {"lon", s.location.lon},
            {"lat", s.location.lat}};
    js["owner_truck_ids"] = json::array();
    for (const auto& o : s.owner_truck_ids) js["owner_truck_ids"].push_back(o);
    j["stations"].push_back(js);
  }

  j["substations"] = json::array();
  for (const auto& k : inst.substations) {
    j["substations"].push_back({{"id", k.id},
                                {"lon", k.location.lon},
                                {"lat", k.location.lat},
                                {"remaining_capacity_kw", k.remaining_capacity_kw}});
  }

  json ts = json::array();
  for (const auto& a : inst.access.truck_station) {
    ts.push_back({inst.trucks[static_cast<size_t>(a.truck)].id,
                  inst.stations[static_cast<size_t>(a.station)].id, a.step});
  }
  json ss = json::array();
  for (const auto& e : inst.access.station_substation) {
    ss.push_back({inst.stations[static_cast<size_t>(e.station)].id,
                  inst.substations[static_cast<size_t>(e.substation)].id, e.distance_miles});
  }
  j["access"] = {{"truck_station", ts},
                 {"station_substation", ss},
                 {"neighbor_limit", inst.access.neighbor_limit}};

  const auto& p = inst.params;
  j["params"] = {{"p_max_kw", p.p_max_kw},
                 {"e_base_kwh", p.e_base_kwh},
                 {"soc_min", p.soc_min},
                 {"soc_max", p.soc_max},
                 {"kappa", p.kappa},
                 {"pf", p.pf},
                 {"p_upg_std_kva", p.p_upg_std_kva},
                 {"days_per_year", p.days_per_year},
                 {"tou_price", p.tou_price},
                 {"carbon_intensity", p.carbon_intensity}};

  j["costs"] = to_json(inst.costs);
  return j;
}

inline Instance instance_from_json(const json& j) {
  if (j.value("schema", 0) != 1) {
    throw std::invalid_argument("instance JSON: unsupported schema version");
  }
  Instance inst;
  inst.grid.step_count = j.at("grid").at("step_count").get<int>();
  inst.grid.step_hours = j.at("grid").at("step_hours").get<double>();

  for (const auto& jt : j.at("trucks")) {
    TruckProfile t;
    t.id = jt.at("id").get<std::string>();
    t.stop_fraction = jt.at("stop_fraction").get<std::vector<double>>();
    t.consumption_kwh = jt.at("consumption_kwh").get<std::vector<double>>();
    t.diesel_emission_kg = jt.at("diesel_emission_kg").get<double>();
    if (jt.contains("position")) {
      for (const auto& p : jt.at("position")) {
        t.position.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
    }
    inst.trucks.push_back(std::move(t));
  }

  for (const auto& js : j.at("stations")) {
    StationSite s;
    s.id = js.at("id").get<std::string>();
    s.kind = station_kind_from_string(js.at("kind").get<std::string>());
    s.location = {js.at("lon").get<double>(), js.at("lat").get<double>()};
    for (const auto& o : js.at("owner_truck_ids")) s.owner_truck_ids.insert(o.get<std::string>());
    inst.stations.push_back(std::move(s));
  }

  for (const auto& jk : j.at("substations")) {
    SubstationNode k;
    k.id = jk.at("id").get<std::string>();
    k.location = {jk.at("lon").get<double>(), jk.at("lat").get<double>()};
    k.remaining_capacity_kw = jk.at("remaining_capacity_kw").get<double>();
    inst.substations.push_back(std::move(k));
  }

  const auto& ja = j.at("access");
  for (const auto& row : ja.at("truck_station")) {
    const int i = inst.truck_index(row.at(0).get<std::string>());
    const int jj = inst.station_index(row.at(1).get<std::string>());
    if (i < 0 || jj < 0) throw std::invalid_argument("access triplet references unknown id");
    inst.access.truck_station.push_back({i, jj, row.at(2).get<int>()});
  }
  for (const auto& row : ja.at("station_substation")) {
    const int jj = inst.station_index(row.at(0).get<std::string>());
    const int k = inst.substation_index(row.at(1).get<std::string>());
    if (jj < 0 || k < 0) throw std::invalid_argument("access edge references unknown id");
    inst.access.station_substation.push_back({jj, k, row.at(2).get<double>()});
  }
  inst.access.neighbor_limit = ja.value("neighbor_limit", 5);

  const auto& jp = j.at("params");
  inst.params.p_max_kw = jp.at("p_max_kw").get<double>();
  inst.params.e_base_kwh = jp.at("e_base_kwh").get<double>();
  inst.params.soc_min = jp.at("soc_min").get<double>();
  inst.params.soc_max = jp.at("soc_max").get<double>();
  inst.params.kappa = jp.at("kappa").get<double>();
  inst.params.pf = jp.at("pf").get<double>();
  inst.params.p_upg_std_kva = jp.at("p_upg_std_kva").get<double>();
  inst.params.days_per_year = jp.at("days_per_year").get<double>();
  inst.params.tou_price = jp.at("tou_price").get<std::vector<double>>();
  inst.params.carbon_intensity = jp.at("carbon_intensity").get<std::vector<double>>();

  inst.costs = cost_book_from_json(j.at("costs"));
  return inst;
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << to_json(inst).dump(2) << "\n";
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return instance_from_json(j);
}

}  // namespace drayplan
