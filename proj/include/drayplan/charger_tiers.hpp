#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "drayplan/charger_catalog.hpp"
#include "drayplan/model_builder.hpp"

namespace drayplan {

/// Adds the multi-type charger machinery on top of the charging-access
/// variables: at-least-tier binaries with both big-G inequalities, the
/// exact-tier difference identities, in-use/installed counts, the
/// one-charger rule, and session continuity over the tier indicators.
///
/// The exact-tier and in-use variables are continuous; the identities make
/// them integral in every feasible point.
inline std::vector<std::string> build_tier_constraints(ModelBuilder& builder) {
  PlanningModel& m = builder.model();
  ModelIR& ir = m.ir;
  const ChargerCatalog& cat = *m.opts.tiers;
  const TierLinParams lin = m.opts.tier_lin;
  const int M = cat.size();
  const Instance& inst = builder.instance();
  const int T = inst.grid.step_count;
  std::vector<std::string> tags;

  auto id4 = [](const char* base, int i, int j, int t, int mm) {
    return std::string(base) + "[" + std::to_string(i) + "," + std::to_string(j) + "," +
           std::to_string(t) + "," + std::to_string(mm) + "]";
  };

  // Per accessible (i,j,t): the at-least chain and the exact-tier identities.
  for (const auto& [key, pvar] : m.ptrk) {
    const auto [i, j, t] = key;
    std::vector<int> ups(static_cast<size_t>(M));
    for (int mm = 1; mm <= M; ++mm) {
      ups[static_cast<size_t>(mm - 1)] =
          ir.add_var(id4("xup", i, j, t, mm), VarKind::Binary, 0, 1);
      m.tier_up[{i, j, t, mm}] = ups[static_cast<size_t>(mm - 1)];
    }
    for (int mm = 1; mm <= M; ++mm) {
      const int up = ups[static_cast<size_t>(mm - 1)];
      const double p_lo = cat.power(mm - 1);
      LinExpr hi;  // ptrk - G*xup <= p^{m-1}
      hi.add(pvar, 1.0);
      hi.add(up, -lin.big_g);
      tags.push_back(id4("tier_hi", i, j, t, mm));
      ir.add_constraint(tags.back(), hi, Sense::LE, p_lo);

      LinExpr lo;  // ptrk - G*xup >= p^{m-1} - G + eps
      lo.add(pvar, 1.0);
      lo.add(up, -lin.big_g);
      tags.push_back(id4("tier_lo", i, j, t, mm));
      ir.add_constraint(tags.back(), lo, Sense::GE, p_lo - lin.big_g + lin.epsilon);
    }
    for (int mm = 1; mm <= M; ++mm) {
      const int ex = ir.add_var(id4("xm", i, j, t, mm), VarKind::Continuous, 0.0, 1.0);
      m.tier_exact[{i, j, t, mm}] = ex;
      LinExpr diff;  // xm - xup_m + xup_{m+1} = 0; the top tier has no successor
      diff.add(ex, 1.0);
      diff.add(ups[static_cast<size_t>(mm - 1)], -1.0);
      if (mm < M) diff.add(ups[static_cast<size_t>(mm)], 1.0);
      tags.push_back(id4("tier_diff", i, j, t, mm));
      ir.add_constraint(tags.back(), diff, Sense::EQ, 0.0);
    }
  }

  // Installed and in-use counts.
  const int nJ = builder.n_stations();
  m.chargers_installed.assign(static_cast<size_t>(nJ), std::vector<int>(static_cast<size_t>(M)));
  for (int j = 0; j < nJ; ++j) {
    double peak = 0.0;
    for (const auto& trucks : m.ix.trucks_of_station[static_cast<size_t>(j)]) {
      peak = std::max(peak, static_cast<double>(trucks.size()));
    }
    for (int mm = 1; mm <= M; ++mm) {
      m.chargers_installed[static_cast<size_t>(j)][static_cast<size_t>(mm - 1)] =
          ir.add_var(ModelBuilder::idx2("N", j, mm), VarKind::Integer, 0.0, peak);
    }
  }
  for (int j = 0; j < nJ; ++j) {
    for (int t = 0; t < T; ++t) {
      const auto& trucks = m.ix.trucks_of_station[static_cast<size_t>(j)][static_cast<size_t>(t)];
      if (trucks.empty()) continue;
      for (int mm = 1; mm <= M; ++mm) {
        const int n = ir.add_var(ModelBuilder::idx3("n", j, t, mm), VarKind::Continuous, 0.0,
                                 static_cast<double>(trucks.size()));
        m.chargers_in_use[{j, t, mm}] = n;
        LinExpr use;  // n - sum_i xm = 0
        use.add(n, 1.0);
        for (int i : trucks) use.add(m.tier_exact[{i, j, t, mm}], -1.0);
        tags.push_back(ModelBuilder::tag3("in_use", j, t, mm));
        ir.add_constraint(tags.back(), use, Sense::EQ, 0.0);

        LinExpr fit;  // n - N <= 0
        fit.add(n, 1.0);
        fit.add(m.chargers_installed[static_cast<size_t>(j)][static_cast<size_t>(mm - 1)], -1.0);
        tags.push_back(ModelBuilder::tag3("charger_count", j, t, mm));
        ir.add_constraint(tags.back(), fit, Sense::LE, 0.0);
      }
    }
  }

  // One charging station and one charger per truck per step, and session
  // continuity, both over the exact-tier indicators.
  auto indicator = [&](int i, int j, int t, LinExpr& e) {
    for (int mm = 1; mm <= M; ++mm) e.add(m.tier_exact[{i, j, t, mm}], 1.0);
  };
  auto one = builder.build_single_station_rows("one_charger", indicator);
  tags.insert(tags.end(), one.begin(), one.end());
  auto ses = builder.build_session_rows(indicator);
  tags.insert(tags.end(), ses.begin(), ses.end());
  return tags;
}

/// Station deployment indicator over charger counts: sum_m N^m_j <= M*Nhat_j.
/// Nhat replaces the capacity-based selection binary in the fixed-cost term.
inline std::vector<std::string> build_station_deploy_indicator(ModelBuilder& builder) {
  PlanningModel& m = builder.model();
  ModelIR& ir = m.ir;
  const int nJ = builder.n_stations();
  const int M = m.opts.tiers->size();
  std::vector<std::string> tags;
  m.station_deploy.resize(static_cast<size_t>(nJ));
  for (int j = 0; j < nJ; ++j) {
    m.station_deploy[static_cast<size_t>(j)] =
        ir.add_var("Nhat[" + std::to_string(j) + "]", VarKind::Binary, 0, 1);
    double cap = 0.0;
    for (int mm = 0; mm < M; ++mm) {
      cap += ir.variables[static_cast<size_t>(
                 m.chargers_installed[static_cast<size_t>(j)][static_cast<size_t>(mm)])]
                 .upper;
    }
    LinExpr e;  // sum_m N - cap*Nhat <= 0
    for (int mm = 0; mm < M; ++mm) {
      e.add(m.chargers_installed[static_cast<size_t>(j)][static_cast<size_t>(mm)], 1.0);
    }
    e.add(m.station_deploy[static_cast<size_t>(j)], -std::max(cap, 1.0));
    tags.push_back("deploy[" + std::to_string(j) + "]");
    ir.add_constraint(tags.back(), e, Sense::LE, 0.0);
  }
  return tags;
}

}  // namespace drayplan
