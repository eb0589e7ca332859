#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "drayplan/charger_catalog.hpp"
#include "drayplan/instance.hpp"
#include "drayplan/model_ir.hpp"
#include "drayplan/subsets.hpp"

namespace drayplan {

enum class PlanMode { MaxTrucks = 1, MinCost = 2, MinEmissions = 3 };

/// How the charging term of the energy balance scales the drawn power.
/// OneWay stores sqrt(kappa) of the drawn energy; PaperLiteral applies the
/// published (1 - sqrt(kappa)) loss factor as-is instead.
enum class EtaMode { OneWay, PaperLiteral };

struct BuildOptions {
  PlanMode mode = PlanMode::MinCost;
  EtaMode eta_mode = EtaMode::OneWay;
  bool strict_indicators = false;     // add the epsilon lower-bound rows for p-hat/gamma
  double e_cap_max_kwh = 1200.0;      // battery upper bound; kInf allows unbounded packs
  double n_target = -1.0;             // mode 2 yearly target
  double budget = std::numeric_limits<double>::quiet_NaN();  // mode 3; +inf omits the row
  std::optional<ChargerCatalog> tiers;
  TierLinParams tier_lin;             // filled from defaults when tiers are set

  bool tiers_active() const { return tiers.has_value(); }
};

/// Big-M constants, all provably at or above the maximum feasible value of
/// the expression they bound:
///   station_select[j] = p_max * max simultaneous trucks at j   (selection indicator)
///   upgrade_var[k]    = sum of station_select over the stations k can serve
///   flow[j,k]         = min(station_select[j],
///                           P_sbs_k + PF*P_upg_std + upgrade_var[k])
struct BigMBook {
  std::vector<double> station_select;
  std::vector<double> upgrade_var;
  std::map<std::pair<int, int>, double> flow;
  double epsilon = 1e-3;  // kW
};

inline BigMBook compute_bigm(const Instance& inst, const AccessIndex& ix) {
  BigMBook book;
  const int nJ = static_cast<int>(inst.stations.size());
  const int nK = static_cast<int>(inst.substations.size());
  book.station_select.assign(static_cast<size_t>(nJ), 0.0);
  for (int j = 0; j < nJ; ++j) {
    size_t peak = 0;
    for (const auto& trucks : ix.trucks_of_station[static_cast<size_t>(j)]) {
      peak = std::max(peak, trucks.size());
    }
    book.station_select[static_cast<size_t>(j)] = inst.params.p_max_kw * static_cast<double>(peak);
  }
  book.upgrade_var.assign(static_cast<size_t>(nK), 0.0);
  for (int k = 0; k < nK; ++k) {
    double sum = 0.0;
    for (int j : ix.stations_of_substation[static_cast<size_t>(k)]) {
      sum += book.station_select[static_cast<size_t>(j)];
    }
    book.upgrade_var[static_cast<size_t>(k)] = sum;
  }
  const double std_upgrade_kw = inst.params.p_upg_std_kva * inst.params.pf;
  for (int j = 0; j < nJ; ++j) {
    for (const auto& nb : ix.substations_of_station[static_cast<size_t>(j)]) {
      const double supply = inst.substations[static_cast<size_t>(nb.substation)].remaining_capacity_kw +
                            std_upgrade_kw + book.upgrade_var[static_cast<size_t>(nb.substation)];
      book.flow[{j, nb.substation}] = std::min(book.station_select[static_cast<size_t>(j)], supply);
    }
  }
  return book;
}

inline BigMBook compute_bigm(const Instance& inst) {
  return compute_bigm(inst, derive_subsets(inst));
}

/// Built model plus everything needed to read a solution back: variable
/// index maps per family, the named cost expressions, and build metadata.
struct PlanningModel {
  ModelIR ir;

  std::vector<int> x, ecap;                          // [i]
  std::vector<std::vector<int>> e, p;                // [i][t]
  std::map<std::tuple<int, int, int>, int> ptrk;     // (i,j,t)
  std::map<std::tuple<int, int, int>, int> phat;     // (i,j,t), base mode only
  std::vector<std::vector<int>> station_load;        // [j][t]
  std::vector<int> station_cap, station_sel;         // [j]
  std::map<std::pair<int, int>, int> flow, link;     // (j,k)
  std::vector<int> upgrade, upgrade_var, upgrade_sel;  // [k]

  std::map<std::tuple<int, int, int, int>, int> tier_up;     // (i,j,t,m)
  std::map<std::tuple<int, int, int, int>, int> tier_exact;  // (i,j,t,m)
  std::vector<std::vector<int>> chargers_installed;          // [j][m]
  std::map<std::tuple<int, int, int>, int> chargers_in_use;  // (j,t,m)
  std::vector<int> station_deploy;                           // [j], tier mode

  LinExpr cost_truck, cost_charging, cost_power;

  BuildOptions opts;
  BigMBook bigm;
  AccessIndex ix;
  std::vector<std::string> warnings;
  double eta = 1.0;

  LinExpr total_cost() const {
    LinExpr e;
    e.add(cost_truck);
    e.add(cost_charging);
    e.add(cost_power);
    return e;
  }
};

/// Exact variable/constraint counts as functions of the instance dimensions.
struct ModelCounts {
  long variables = 0;
  long constraints = 0;
  long binaries = 0;
  long general_integers = 0;
};

class ModelBuilder {
 public:
  ModelBuilder(const Instance& inst, BuildOptions opts, const BigMBook* bigm_override = nullptr)
      : inst_(inst), model_() {
    model_.opts = std::move(opts);
    model_.ix = derive_subsets(inst);
    model_.bigm = bigm_override != nullptr ? *bigm_override : compute_bigm(inst, model_.ix);
    model_.eta = model_.opts.eta_mode == EtaMode::OneWay
                     ? std::sqrt(inst.params.kappa)
                     : 1.0 - std::sqrt(inst.params.kappa);
    if (model_.opts.tiers_active()) {
      model_.opts.tiers->check(inst.params.p_max_kw);
      if (model_.opts.tier_lin.big_g <= 0.0) {
        model_.opts.tier_lin = TierLinParams::defaults(inst.params.p_max_kw, *model_.opts.tiers);
      }
    }
  }

  PlanningModel& model() { return model_; }
  const Instance& instance() const { return inst_; }

  /// Battery continuity (cyclic), SoC range, and the electrification binary.
  std::vector<std::string> build_truck_energy() {
    auto& m = model_;
    auto& ir = m.ir;
    const int nI = n_trucks();
    const int T = inst_.grid.step_count;
    const double dt = inst_.grid.step_hours;
    const double ecap_ub = m.opts.e_cap_max_kwh;

    m.x.resize(static_cast<size_t>(nI));
    m.ecap.resize(static_cast<size_t>(nI));
    m.e.assign(static_cast<size_t>(nI), std::vector<int>(static_cast<size_t>(T)));
    m.p.assign(static_cast<size_t>(nI), std::vector<int>(static_cast<size_t>(T)));
    for (int i = 0; i < nI; ++i) {
      m.x[static_cast<size_t>(i)] = ir.add_var("x[" + std::to_string(i) + "]", VarKind::Binary, 0, 1);
      m.ecap[static_cast<size_t>(i)] =
          ir.add_var("ecap[" + std::to_string(i) + "]", VarKind::Continuous, 0.0, ecap_ub);
      for (int t = 0; t < T; ++t) {
        m.e[static_cast<size_t>(i)][static_cast<size_t>(t)] =
            ir.add_var(idx2("e", i, t), VarKind::Continuous, 0.0, ecap_ub);
        m.p[static_cast<size_t>(i)][static_cast<size_t>(t)] =
            ir.add_var(idx2("p", i, t), VarKind::Continuous, 0.0, inst_.params.p_max_kw);
      }
    }

    std::vector<std::string> tags;
    for (int i = 0; i < nI; ++i) {
      const auto& trk = inst_.trucks[static_cast<size_t>(i)];
      for (int t = 0; t < T; ++t) {
        const int tn = (t + 1 < T) ? t + 1 : 0;
        LinExpr bal;  // e[i,t'] - e[i,t] - eta*r*dt*p[i,t] + dEcon*x[i] = 0
        bal.add(m.e[static_cast<size_t>(i)][static_cast<size_t>(tn)], 1.0);
        bal.add(m.e[static_cast<size_t>(i)][static_cast<size_t>(t)], -1.0);
        bal.add(m.p[static_cast<size_t>(i)][static_cast<size_t>(t)],
                -m.eta * trk.stop_fraction[static_cast<size_t>(t)] * dt);
        bal.add(m.x[static_cast<size_t>(i)], trk.consumption_kwh[static_cast<size_t>(t)]);
        tags.push_back(tag2("energy", i, t));
        ir.add_constraint(tags.back(), bal, Sense::EQ, 0.0);

        LinExpr lo;  // e - soc_min*ecap >= 0
        lo.add(m.e[static_cast<size_t>(i)][static_cast<size_t>(t)], 1.0);
        lo.add(m.ecap[static_cast<size_t>(i)], -inst_.params.soc_min);
        tags.push_back(tag2("soc_lo", i, t));
        ir.add_constraint(tags.back(), lo, Sense::GE, 0.0);

        LinExpr hi;  // e - soc_max*ecap <= 0
        hi.add(m.e[static_cast<size_t>(i)][static_cast<size_t>(t)], 1.0);
        hi.add(m.ecap[static_cast<size_t>(i)], -inst_.params.soc_max);
        tags.push_back(tag2("soc_hi", i, t));
        ir.add_constraint(tags.back(), hi, Sense::LE, 0.0);
      }
    }
    return tags;
  }

  /// Per-station charging power, access gating by variable omission, the
  /// one-station rule, and session continuity. In tier mode the binary
  /// station indicators come from the tier module instead.
  std::vector<std::string> build_charging_access() {
    auto& m = model_;
    if (m.x.empty()) {
      throw std::logic_error("build_charging_access: truck-energy variables missing");
    }
    auto& ir = m.ir;
    const int nI = n_trucks();
    const int T = inst_.grid.step_count;
    const double pmax = inst_.params.p_max_kw;
    std::vector<std::string> tags;

    for (int i = 0; i < nI; ++i) {
      for (int t = 0; t < T; ++t) {
        for (int j : m.ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(t)]) {
          const int v = ir.add_var(idx3("ptrk", i, j, t), VarKind::Continuous, 0.0, pmax);
          m.ptrk[{i, j, t}] = v;
          LinExpr cap;  // ptrk - pmax*x <= 0
          cap.add(v, 1.0);
          cap.add(m.x[static_cast<size_t>(i)], -pmax);
          tags.push_back(tag3("ptrk_max", i, j, t));
          ir.add_constraint(tags.back(), cap, Sense::LE, 0.0);

          if (!m.opts.tiers_active()) {
            const int h = ir.add_var(idx3("phat", i, j, t), VarKind::Binary, 0, 1);
            m.phat[{i, j, t}] = h;
            LinExpr ind;  // ptrk - pmax*phat <= 0
            ind.add(v, 1.0);
            ind.add(h, -pmax);
            tags.push_back(tag3("charge_ind", i, j, t));
            ir.add_constraint(tags.back(), ind, Sense::LE, 0.0);
            if (m.opts.strict_indicators) {
              LinExpr lo;  // ptrk - pmax*phat >= eps - pmax
              lo.add(v, 1.0);
              lo.add(h, -pmax);
              tags.push_back(tag3("charge_ind_lo", i, j, t));
              ir.add_constraint(tags.back(), lo, Sense::GE, m.bigm.epsilon - pmax);
            }
          }
        }
      }
    }

    for (int i = 0; i < nI; ++i) {
      for (int t = 0; t < T; ++t) {
        LinExpr sum;  // p[i,t] - sum_j ptrk = 0 (empty sum pins p to zero)
        sum.add(m.p[static_cast<size_t>(i)][static_cast<size_t>(t)], 1.0);
        for (int j : m.ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(t)]) {
          sum.add(m.ptrk[{i, j, t}], -1.0);
        }
        tags.push_back(tag2("psum", i, t));
        ir.add_constraint(tags.back(), sum, Sense::EQ, 0.0);
      }
    }

    if (!m.opts.tiers_active()) {
      auto indicator = [&](int i, int j, int t, LinExpr& e) { e.add(m.phat[{i, j, t}], 1.0); };
      auto one = build_single_station_rows("one_station", indicator);
      tags.insert(tags.end(), one.begin(), one.end());
      auto ses = build_session_rows(indicator);
      tags.insert(tags.end(), ses.begin(), ses.end());
    }
    return tags;
  }

  /// Station load aggregation, capacity limit, and the deployment indicator.
  std::vector<std::string> build_station_capacity() {
    auto& m = model_;
    if (m.p.empty()) {
      throw std::logic_error("build_station_capacity: charging-access variables missing");
    }
    auto& ir = m.ir;
    const int nJ = n_stations();
    const int T = inst_.grid.step_count;
    std::vector<std::string> tags;

    m.station_load.assign(static_cast<size_t>(nJ), std::vector<int>(static_cast<size_t>(T)));
    m.station_cap.resize(static_cast<size_t>(nJ));
    m.station_sel.resize(static_cast<size_t>(nJ));
    for (int j = 0; j < nJ; ++j) {
      const double mj = m.bigm.station_select[static_cast<size_t>(j)];
      m.station_cap[static_cast<size_t>(j)] =
          ir.add_var("Pchs[" + std::to_string(j) + "]", VarKind::Continuous, 0.0, mj);
      m.station_sel[static_cast<size_t>(j)] =
          ir.add_var("Pchshat[" + std::to_string(j) + "]", VarKind::Binary, 0, 1);
      for (int t = 0; t < T; ++t) {
        m.station_load[static_cast<size_t>(j)][static_cast<size_t>(t)] =
            ir.add_var(idx2("Pjt", j, t), VarKind::Continuous, 0.0, mj);
      }
    }

    for (int j = 0; j < nJ; ++j) {
      for (int t = 0; t < T; ++t) {
        LinExpr load;  // Pjt - sum_{i in I_jt} ptrk = 0
        load.add(m.station_load[static_cast<size_t>(j)][static_cast<size_t>(t)], 1.0);
        for (int i : m.ix.trucks_of_station[static_cast<size_t>(j)][static_cast<size_t>(t)]) {
          load.add(m.ptrk[{i, j, t}], -1.0);
        }
        tags.push_back(tag2("load", j, t));
        ir.add_constraint(tags.back(), load, Sense::EQ, 0.0);

        LinExpr cap;  // Pjt - Pchs <= 0
        cap.add(m.station_load[static_cast<size_t>(j)][static_cast<size_t>(t)], 1.0);
        cap.add(m.station_cap[static_cast<size_t>(j)], -1.0);
        tags.push_back(tag2("cap", j, t));
        ir.add_constraint(tags.back(), cap, Sense::LE, 0.0);
      }
      LinExpr sel;  // Pchs - M_j * Pchshat <= 0
      sel.add(m.station_cap[static_cast<size_t>(j)], 1.0);
      sel.add(m.station_sel[static_cast<size_t>(j)], -m.bigm.station_select[static_cast<size_t>(j)]);
      tags.push_back("select[" + std::to_string(j) + "]");
      ir.add_constraint(tags.back(), sel, Sense::LE, 0.0);
    }
    return tags;
  }

  /// Substation connections, flow reservations, hosting capacity, and the
  /// two-part upgrade definition.
  std::vector<std::string> build_grid_connection() {
    auto& m = model_;
    if (m.station_cap.empty()) {
      throw std::logic_error("build_grid_connection: station variables missing");
    }
    auto& ir = m.ir;
    const int nJ = n_stations();
    const int nK = n_substations();
    const auto& gp = inst_.params;
    const double std_upg_kw = gp.p_upg_std_kva * gp.pf;
    const bool no_upgrades = m.opts.mode == PlanMode::MaxTrucks;
    std::vector<std::string> tags;

    m.upgrade.resize(static_cast<size_t>(nK));
    m.upgrade_var.resize(static_cast<size_t>(nK));
    m.upgrade_sel.resize(static_cast<size_t>(nK));
    for (int k = 0; k < nK; ++k) {
      const double mvar = m.bigm.upgrade_var[static_cast<size_t>(k)];
      const double ub_total = no_upgrades ? 0.0 : std_upg_kw + mvar;
      m.upgrade[static_cast<size_t>(k)] =
          ir.add_var("Pupg[" + std::to_string(k) + "]", VarKind::Continuous, 0.0, ub_total);
      m.upgrade_var[static_cast<size_t>(k)] = ir.add_var(
          "Pupgvar[" + std::to_string(k) + "]", VarKind::Continuous, 0.0, no_upgrades ? 0.0 : mvar);
      m.upgrade_sel[static_cast<size_t>(k)] = ir.add_var("Pupghat[" + std::to_string(k) + "]",
                                                         VarKind::Binary, 0.0, no_upgrades ? 0.0 : 1.0);
    }

    for (int j = 0; j < nJ; ++j) {
      const auto& neighbors = m.ix.substations_of_station[static_cast<size_t>(j)];
      if (neighbors.empty() && m.bigm.station_select[static_cast<size_t>(j)] > 0.0) {
        m.warnings.push_back("station " + inst_.stations[static_cast<size_t>(j)].id +
                             " has truck access but no substation neighbors; capacity forced to 0");
      }
      for (const auto& nb : neighbors) {
        const double mjk = m.bigm.flow.at({j, nb.substation});
        const int f = ir.add_var(idx2("flow", j, nb.substation), VarKind::Continuous, 0.0, mjk);
        const int g = ir.add_var(idx2("gamma", j, nb.substation), VarKind::Binary, 0, 1);
        m.flow[{j, nb.substation}] = f;
        m.link[{j, nb.substation}] = g;
        LinExpr ind;  // flow - M_jk*gamma <= 0
        ind.add(f, 1.0);
        ind.add(g, -mjk);
        tags.push_back(tag2("flow_ind", j, nb.substation));
        ir.add_constraint(tags.back(), ind, Sense::LE, 0.0);
        if (m.opts.strict_indicators) {
          LinExpr lo;  // flow - M_jk*gamma >= eps - M_jk
          lo.add(f, 1.0);
          lo.add(g, -mjk);
          tags.push_back(tag2("flow_ind_lo", j, nb.substation));
          ir.add_constraint(tags.back(), lo, Sense::GE, m.bigm.epsilon - mjk);
        }
      }

      LinExpr cover;  // Pchs - sum_k flow <= 0
      cover.add(m.station_cap[static_cast<size_t>(j)], 1.0);
      for (const auto& nb : neighbors) cover.add(m.flow[{j, nb.substation}], -1.0);
      tags.push_back("flow_cover[" + std::to_string(j) + "]");
      ir.add_constraint(tags.back(), cover, Sense::LE, 0.0);

      if (neighbors.size() >= 2) {
        LinExpr one;  // sum_k gamma <= 1
        for (const auto& nb : neighbors) one.add(m.link[{j, nb.substation}], 1.0);
        tags.push_back("one_substation[" + std::to_string(j) + "]");
        ir.add_constraint(tags.back(), one, Sense::LE, 1.0);
      }
    }

    for (int k = 0; k < nK; ++k) {
      LinExpr host;  // sum_{j in J_k} flow - Pupg <= P_sbs
      for (int j : m.ix.stations_of_substation[static_cast<size_t>(k)]) {
        host.add(m.flow[{j, k}], 1.0);
      }
      host.add(m.upgrade[static_cast<size_t>(k)], -1.0);
      tags.push_back("substation_cap[" + std::to_string(k) + "]");
      ir.add_constraint(tags.back(), host, Sense::LE,
                        inst_.substations[static_cast<size_t>(k)].remaining_capacity_kw);

      LinExpr def;  // Pupg - std*PF*Pupghat - Pupgvar = 0
      def.add(m.upgrade[static_cast<size_t>(k)], 1.0);
      def.add(m.upgrade_sel[static_cast<size_t>(k)], -std_upg_kw);
      def.add(m.upgrade_var[static_cast<size_t>(k)], -1.0);
      tags.push_back("upgrade_def[" + std::to_string(k) + "]");
      ir.add_constraint(tags.back(), def, Sense::EQ, 0.0);

      LinExpr vind;  // Pupgvar - M*Pupghat <= 0
      vind.add(m.upgrade_var[static_cast<size_t>(k)], 1.0);
      vind.add(m.upgrade_sel[static_cast<size_t>(k)], -m.bigm.upgrade_var[static_cast<size_t>(k)]);
      tags.push_back("upgrade_var_ind[" + std::to_string(k) + "]");
      ir.add_constraint(tags.back(), vind, Sense::LE, 0.0);
    }
    return tags;
  }

  /// Named cost expressions for the truck, charging, and power sectors, and
  /// the battery floor rows that keep the upgrade term nonnegative. With a
  /// charger catalog the infrastructure term switches to per-charger counts.
  std::vector<std::string> build_costs() {
    auto& m = model_;
    auto& ir = m.ir;
    const auto& cb = inst_.costs;
    const auto& gp = inst_.params;
    const double dt = inst_.grid.step_hours;
    std::vector<std::string> tags;

    m.cost_truck = LinExpr{};
    for (int i = 0; i < n_trucks(); ++i) {
      m.cost_truck.add(m.x[static_cast<size_t>(i)], cb.c_veh() - cb.c_btr() * gp.e_base_kwh);
      m.cost_truck.add(m.ecap[static_cast<size_t>(i)], cb.c_btr());
      for (int t = 0; t < inst_.grid.step_count; ++t) {
        m.cost_truck.add(m.p[static_cast<size_t>(i)][static_cast<size_t>(t)],
                         gp.days_per_year * gp.tou_price[static_cast<size_t>(t)] * dt);
      }
      LinExpr floor;  // ecap - e_base*x >= 0
      floor.add(m.ecap[static_cast<size_t>(i)], 1.0);
      floor.add(m.x[static_cast<size_t>(i)], -gp.e_base_kwh);
      tags.push_back("ecap_min[" + std::to_string(i) + "]");
      ir.add_constraint(tags.back(), floor, Sense::GE, 0.0);
    }

    m.cost_charging = LinExpr{};
    for (int j = 0; j < n_stations(); ++j) {
      if (m.opts.tiers_active()) {
        m.cost_charging.add(m.station_deploy[static_cast<size_t>(j)], cb.c_ctr());
        m.cost_charging.add(m.station_cap[static_cast<size_t>(j)], cb.c_cap());
        const auto& cat = *m.opts.tiers;
        for (int mm = 1; mm <= cat.size(); ++mm) {
          m.cost_charging.add(m.chargers_installed[static_cast<size_t>(j)][static_cast<size_t>(mm - 1)],
                              cat.tiers[static_cast<size_t>(mm - 1)].unit_cost);
        }
      } else {
        m.cost_charging.add(m.station_sel[static_cast<size_t>(j)], cb.c_ctr());
        m.cost_charging.add(m.station_cap[static_cast<size_t>(j)], cb.c_cap() + cb.c_chg());
      }
    }

    m.cost_power = LinExpr{};
    for (int j = 0; j < n_stations(); ++j) {
      for (const auto& nb : m.ix.substations_of_station[static_cast<size_t>(j)]) {
        m.cost_power.add(m.link[{j, nb.substation}], cb.c_lne() * nb.distance_miles);
      }
    }
    for (int k = 0; k < n_substations(); ++k) {
      m.cost_power.add(m.upgrade_sel[static_cast<size_t>(k)], cb.c_upg_std());
      m.cost_power.add(m.upgrade_var[static_cast<size_t>(k)], cb.c_upg_var_per_kw());
    }
    return tags;
  }

  /// Total annual cost within budget; +inf omits the row entirely.
  std::vector<std::string> build_budget_constraint(double budget) {
    if (std::isnan(budget) || budget < 0.0) {
      throw std::invalid_argument("budget must be nonnegative");
    }
    if (std::isinf(budget)) return {};
    model_.ir.add_constraint("budget", model_.total_cost(), Sense::LE, budget);
    return {"budget"};
  }

  void set_objective() {
    auto& m = model_;
    switch (m.opts.mode) {
      case PlanMode::MaxTrucks: {
        LinExpr obj;
        for (int v : m.x) obj.add(v, 1.0);
        m.ir.set_objective(ObjSense::Maximize, obj);
        // Upgrade variables are already pinned to zero through their bounds.
        break;
      }
      case PlanMode::MinCost: {
        if (m.opts.n_target < 0.0) {
          throw std::invalid_argument("mode 2 requires a nonnegative truck target");
        }
        LinExpr target;
        for (int v : m.x) target.add(v, 1.0);
        m.ir.add_constraint("target", target, Sense::GE, m.opts.n_target);
        m.ir.set_objective(ObjSense::Minimize, m.total_cost());
        break;
      }
      case PlanMode::MinEmissions: {
        if (std::isnan(m.opts.budget)) {
          throw std::invalid_argument("mode 3 requires a budget");
        }
        LinExpr obj;
        const double dt = inst_.grid.step_hours;
        for (int i = 0; i < n_trucks(); ++i) {
          const double u = inst_.trucks[static_cast<size_t>(i)].diesel_emission_kg;
          obj.constant += u;
          obj.add(m.x[static_cast<size_t>(i)], -u);
          for (int t = 0; t < inst_.grid.step_count; ++t) {
            obj.add(m.p[static_cast<size_t>(i)][static_cast<size_t>(t)],
                    inst_.params.carbon_intensity[static_cast<size_t>(t)] * dt);
          }
        }
        m.ir.set_objective(ObjSense::Minimize, obj);
        break;
      }
    }
  }

  PlanningModel take() { return std::move(model_); }

  // Shared row generators, parameterized by the charging-at-(i,j,t)
  // indicator so the tier module can reuse them.
  using IndicatorFn = std::function<void(int, int, int, LinExpr&)>;

  std::vector<std::string> build_single_station_rows(const std::string& family,
                                                     const IndicatorFn& indicator) {
    std::vector<std::string> tags;
    for (int i = 0; i < n_trucks(); ++i) {
      for (int t = 0; t < inst_.grid.step_count; ++t) {
        const auto& stations = model_.ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(t)];
        if (stations.size() < 2) continue;
        LinExpr e;
        for (int j : stations) indicator(i, j, t, e);
        tags.push_back(tag2(family, i, t));
        model_.ir.add_constraint(tags.back(), e, Sense::LE, 1.0);
      }
    }
    return tags;
  }

  std::vector<std::string> build_session_rows(const IndicatorFn& indicator) {
    std::vector<std::string> tags;
    const int T = inst_.grid.step_count;
    for (int i = 0; i < n_trucks(); ++i) {
      for (int t = 0; t < T; ++t) {
        const int tn = (t + 1 < T) ? t + 1 : 0;
        const auto& now = model_.ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(t)];
        const auto& next = model_.ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(tn)];
        if (next.empty()) continue;
        for (int j : now) {
          if (std::find(next.begin(), next.end(), j) == next.end()) continue;
          bool any_other = false;
          LinExpr e;
          indicator(i, j, t, e);
          for (int j2 : next) {
            if (j2 == j) continue;
            indicator(i, j2, tn, e);
            any_other = true;
          }
          if (!any_other) continue;
          tags.push_back(tag3("session", i, j, t));
          model_.ir.add_constraint(tags.back(), e, Sense::LE, 1.0);
        }
      }
    }
    return tags;
  }

  int n_trucks() const { return static_cast<int>(inst_.trucks.size()); }
  int n_stations() const { return static_cast<int>(inst_.stations.size()); }
  int n_substations() const { return static_cast<int>(inst_.substations.size()); }

  static std::string idx2(const char* base, int a, int b) {
    return std::string(base) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
  }
  static std::string idx3(const char* base, int a, int b, int c) {
    return std::string(base) + "[" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(c) + "]";
  }
  static std::string tag2(const std::string& base, int a, int b) {
    return base + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
  }
  static std::string tag3(const std::string& base, int a, int b, int c) {
    return base + "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
  }

 private:
  const Instance& inst_;
  PlanningModel model_;
};

/// Predicted model dimensions from the instance alone; tests hold the built
/// model to these numbers exactly.
inline ModelCounts predict_model_counts(const Instance& inst, const BuildOptions& opts) {
  const AccessIndex ix = derive_subsets(inst);
  const long nI = static_cast<long>(inst.trucks.size());
  const long nJ = static_cast<long>(inst.stations.size());
  const long nK = static_cast<long>(inst.substations.size());
  const long T = inst.grid.step_count;
  const long A = static_cast<long>(inst.access.truck_station.size());
  const long E = static_cast<long>(inst.access.station_substation.size());
  const long M = opts.tiers_active() ? opts.tiers->size() : 0;

  long n1 = 0;  // (i,t) with at least two reachable stations
  long n2 = 0;  // session rows
  for (long i = 0; i < nI; ++i) {
    for (long t = 0; t < T; ++t) {
      const auto& now = ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(t)];
      if (now.size() >= 2) ++n1;
      const long tn = (t + 1 < T) ? t + 1 : 0;
      const auto& next = ix.stations_of_truck[static_cast<size_t>(i)][static_cast<size_t>(tn)];
      if (next.empty()) continue;
      for (int j : now) {
        const bool in_next = std::find(next.begin(), next.end(), j) != next.end();
        if (in_next && next.size() >= 2) ++n2;
      }
    }
  }
  long n3 = 0;  // stations with >= 2 substation neighbors
  for (long j = 0; j < nJ; ++j) {
    if (ix.substations_of_station[static_cast<size_t>(j)].size() >= 2) ++n3;
  }
  long nt = 0;  // (j,t) pairs with at least one reachable truck
  for (long j = 0; j < nJ; ++j) {
    for (long t = 0; t < T; ++t) {
      if (!ix.trucks_of_station[static_cast<size_t>(j)][static_cast<size_t>(t)].empty()) ++nt;
    }
  }

  ModelCounts c;
  c.variables = 2 * nI + 2 * nI * T + A + nJ * T + 2 * nJ + 2 * E + 3 * nK;
  c.binaries = nI + nJ + E + nK;
  if (opts.tiers_active()) {
    c.variables += 2 * A * M + nJ * M + nt * M + nJ;
    c.binaries += A * M + nJ;
    c.general_integers = nJ * M;
  } else {
    c.variables += A;  // phat
    c.binaries += A;
  }

  const long strict = opts.strict_indicators ? 1 : 0;
  c.constraints = nI * T          // energy
                  + 2 * nI * T    // soc
                  + A             // ptrk_max
                  + nI * T        // psum
                  + nJ * T * 2    // load + cap
                  + nJ            // select
                  + nJ            // flow_cover
                  + E * (1 + strict)  // flow_ind
                  + n3            // one_substation
                  + nK * 3        // substation_cap + upgrade_def + upgrade_var_ind
                  + nI            // ecap_min
                  + n1 + n2;      // one-station + session rows (either mode)
  if (opts.tiers_active()) {
    c.constraints += 3 * A * M    // tier_hi + tier_lo + tier_diff
                     + 2 * nt * M // in_use + charger_count
                     + nJ;        // deploy
  } else {
    c.constraints += A * (1 + strict);  // charge_ind
  }
  if (opts.mode == PlanMode::MinCost) c.constraints += 1;  // target
  const bool budget_row = !std::isnan(opts.budget) && std::isfinite(opts.budget);
  if (budget_row) c.constraints += 1;
  return c;
}

}  // namespace drayplan
