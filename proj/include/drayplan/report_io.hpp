#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace drayplan {

struct StationPlan {
  std::string id;
  bool deployed = false;
  double capacity_kw = 0.0;
  std::optional<double> utilization;      // undefined for undeployed stations
  std::optional<std::string> substation;  // connected substation id
  double line_miles = 0.0;
  std::vector<long> chargers;             // per-tier install counts, tier mode only

  bool operator==(const StationPlan&) const = default;
};

struct SubstationPlan {
  std::string id;
  std::vector<std::string> connected_stations;
  double reserved_flow_kw = 0.0;
  bool upgraded = false;
  double upgrade_kw = 0.0;

  bool operator==(const SubstationPlan&) const = default;
};

struct CostBreakdown {
  double truck = 0.0;        // vehicles + batteries + electricity
  double charging = 0.0;     // station fixed + capacity + chargers
  double power = 0.0;        // lines + substation upgrades
  double electricity = 0.0;  // memo: the electricity share inside `truck`
  double total = 0.0;

  bool operator==(const CostBreakdown&) const = default;
};

/// Full outcome of one planning run: the plan, its costs and emissions, and
/// the per-step aggregate charging load.
struct PlanReport {
  int schema = 1;
  int mode = 0;
  std::string status;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  long nodes = 0;
  double wall_time_s = 0.0;
  double capacity_fraction = 1.0;
  double step_hours = 0.25;

  std::vector<std::string> electrified_trucks;
  std::map<std::string, double> battery_kwh;  // electrified trucks only
  std::vector<StationPlan> stations;
  std::vector<SubstationPlan> substations;
  CostBreakdown costs;
  double ghg_kg_per_day = 0.0;
  std::vector<double> load_profile_kw;
  std::optional<long> mode1_max;  // attached when a mode-2 target is infeasible
  std::vector<std::string> warnings;

  bool operator==(const PlanReport& o) const {
    return schema == o.schema && mode == o.mode && status == o.status &&
           objective == o.objective && bound == o.bound && gap == o.gap && nodes == o.nodes &&
           capacity_fraction == o.capacity_fraction && step_hours == o.step_hours &&
           electrified_trucks == o.electrified_trucks && battery_kwh == o.battery_kwh &&
           stations == o.stations && substations == o.substations && costs == o.costs &&
           ghg_kg_per_day == o.ghg_kg_per_day && load_profile_kw == o.load_profile_kw &&
           mode1_max == o.mode1_max && warnings == o.warnings;
    // wall_time_s intentionally excluded: it never round-trips meaningfully.
  }
};

inline nlohmann::json to_json(const PlanReport& r) {
  nlohmann::json j;
  j["schema"] = r.schema;
  j["mode"] = r.mode;
  j["status"] = r.status;
  j["objective"] = r.objective;
  j["bound"] = r.bound;
  j["gap"] = r.gap;
  j["nodes"] = r.nodes;
  j["wall_time_s"] = r.wall_time_s;
  j["capacity_fraction"] = r.capacity_fraction;
  j["step_hours"] = r.step_hours;
  j["electrified_trucks"] = r.electrified_trucks;
  j["battery_kwh"] = r.battery_kwh;
  j["stations"] = nlohmann::json::array();
  for (const auto& s : r.stations) {
    nlohmann::json js{{"id", s.id},
                      {"deployed", s.deployed},
                      {"capacity_kw", s.capacity_kw},
                      {"line_miles", s.line_miles}};
    js["utilization"] = s.utilization.has_value() ? nlohmann::json(*s.utilization)
                                                  : nlohmann::json(nullptr);
    js["substation"] = s.substation.has_value() ? nlohmann::json(*s.substation)
                                                : nlohmann::json(nullptr);
    if (!s.chargers.empty()) js["chargers"] = s.chargers;
    j["stations"].push_back(js);
  }
  j["substations"] = nlohmann::json::array();
  for (const auto& k : r.substations) {
    j["substations"].push_back({{"id", k.id},
                                {"connected_stations", k.connected_stations},
                                {"reserved_flow_kw", k.reserved_flow_kw},
                                {"upgraded", k.upgraded},
                                {"upgrade_kw", k.upgrade_kw}});
  }
  j["costs"] = {{"truck", r.costs.truck},
                {"charging", r.costs.charging},
                {"power", r.costs.power},
                {"electricity", r.costs.electricity},
                {"total", r.costs.total}};
  j["ghg_kg_per_day"] = r.ghg_kg_per_day;
  j["load_profile_kw"] = r.load_profile_kw;
  j["mode1_max"] = r.mode1_max.has_value() ? nlohmann::json(*r.mode1_max) : nlohmann::json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

inline PlanReport plan_report_from_json(const nlohmann::json& j) {
  PlanReport r;
  r.schema = j.at("schema").get<int>();
  r.mode = j.at("mode").get<int>();
  r.status = j.at("status").get<std::string>();
  r.objective = j.at("objective").get<double>();
  r.bound = j.at("bound").get<double>();
  r.gap = j.at("gap").get<double>();
  r.nodes = j.at("nodes").get<long>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  r.capacity_fraction = j.at("capacity_fraction").get<double>();
  r.step_hours = j.at("step_hours").get<double>();
  r.electrified_trucks = j.at("electrified_trucks").get<std::vector<std::string>>();
  r.battery_kwh = j.at("battery_kwh").get<std::map<std::string, double>>();
  for (const auto& js : j.at("stations")) {
    StationPlan s;
    s.id = js.at("id").get<std::string>();
    s.deployed = js.at("deployed").get<bool>();
    s.capacity_kw = js.at("capacity_kw").get<double>();
    s.line_miles = js.at("line_miles").get<double>();
    if (!js.at("utilization").is_null()) s.utilization = js.at("utilization").get<double>();
    if (!js.at("substation").is_null()) s.substation = js.at("substation").get<std::string>();
    if (js.contains("chargers")) s.chargers = js.at("chargers").get<std::vector<long>>();
    r.stations.push_back(std::move(s));
  }
  for (const auto& jk : j.at("substations")) {
    SubstationPlan k;
    k.id = jk.at("id").get<std::string>();
    k.connected_stations = jk.at("connected_stations").get<std::vector<std::string>>();
    k.reserved_flow_kw = jk.at("reserved_flow_kw").get<double>();
    k.upgraded = jk.at("upgraded").get<bool>();
    k.upgrade_kw = jk.at("upgrade_kw").get<double>();
    r.substations.push_back(std::move(k));
  }
  r.costs.truck = j.at("costs").at("truck").get<double>();
  r.costs.charging = j.at("costs").at("charging").get<double>();
  r.costs.power = j.at("costs").at("power").get<double>();
  r.costs.electricity = j.at("costs").at("electricity").get<double>();
  r.costs.total = j.at("costs").at("total").get<double>();
  r.ghg_kg_per_day = j.at("ghg_kg_per_day").get<double>();
  r.load_profile_kw = j.at("load_profile_kw").get<std::vector<double>>();
  if (!j.at("mode1_max").is_null()) r.mode1_max = j.at("mode1_max").get<long>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

/// Writes plan.json, load_profile.csv, battery_hist.csv, utilization.csv,
/// costs.csv, and summary.txt into dir with deterministic ordering.
inline void emit_report(const PlanReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw std::runtime_error(std::string("cannot open for write: ") + name);
    return out;
  };

  {
    auto out = open("plan.json");
    out << to_json(r).dump(2) << "\n";
  }
  {
    auto out = open("load_profile.csv");
    out << "step,kw\n";
    for (size_t t = 0; t < r.load_profile_kw.size(); ++t) {
      out << t << "," << r.load_profile_kw[t] << "\n";
    }
  }
  {
    auto out = open("battery_hist.csv");
    out << "bin_lo_kwh,bin_hi_kwh,count\n";
    if (!r.battery_kwh.empty()) {
      double top = 0.0;
      for (const auto& [id, kwh] : r.battery_kwh) top = std::max(top, kwh);
      const int bins = std::max(1, static_cast<int>(std::ceil(top / 100.0)));
      std::vector<long> count(static_cast<size_t>(bins), 0);
      for (const auto& [id, kwh] : r.battery_kwh) {
        int b = static_cast<int>(kwh / 100.0);
        if (b >= bins) b = bins - 1;
        count[static_cast<size_t>(b)]++;
      }
      for (int b = 0; b < bins; ++b) {
        out << b * 100 << "," << (b + 1) * 100 << "," << count[static_cast<size_t>(b)] << "\n";
      }
    }
  }
  {
    auto out = open("utilization.csv");
    out << "station_id,capacity_kw,utilization\n";
    for (const auto& s : r.stations) {
      out << s.id << "," << s.capacity_kw << ",";
      if (s.utilization.has_value()) out << *s.utilization;
      out << "\n";
    }
  }
  {
    auto out = open("costs.csv");
    out << "component,annual_usd\n";
    out << "truck," << r.costs.truck << "\n";
    out << "charging," << r.costs.charging << "\n";
    out << "power," << r.costs.power << "\n";
    out << "total," << r.costs.total << "\n";
  }
  {
    auto out = open("summary.txt");
    out << "mode: " << r.mode << "\n";
    out << "status: " << r.status << "\n";
    out << "objective: " << r.objective << "\n";
    out << "capacity_fraction: " << r.capacity_fraction << "\n";
    out << "electrified_trucks: " << r.electrified_trucks.size() << "\n";
    long deployed = 0;
    for (const auto& s : r.stations) deployed += s.deployed ? 1 : 0;
    out << "stations_deployed: " << deployed << "\n";
    long upgrades = 0;
    for (const auto& k : r.substations) upgrades += k.upgraded ? 1 : 0;
    out << "substation_upgrades: " << upgrades << "\n";
    out << "ghg_kg_per_day: " << r.ghg_kg_per_day << "\n";
    if (r.mode1_max.has_value()) out << "mode1_max: " << *r.mode1_max << "\n";
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  }
}

inline PlanReport load_plan_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return plan_report_from_json(j);
}

}  // namespace drayplan
