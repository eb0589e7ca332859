#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "drayplan/time_grid.hpp"

namespace drayplan {

/// Annuity-due amortization: equal annual payments valued at period start.
/// A = C*r / (1 - (1+r)^-n) / (1+r); the zero-interest limit is C/n.
inline double amortize(double investment, double lifespan_years, double rate) {
  if (lifespan_years < 1.0) {
    throw std::invalid_argument("amortize: lifespan must be >= 1 year");
  }
  if (rate < 0.0) {
    throw std::invalid_argument("amortize: rate must be >= 0");
  }
  if (rate == 0.0) {
    return investment / lifespan_years;
  }
  const double annuity = investment * rate / (1.0 - std::pow(1.0 + rate, -lifespan_years));
  return annuity / (1.0 + rate);
}

/// One asset row: initial investment, lifespan, and the annualized cost.
struct CostRow {
  double investment = 0.0;
  double lifespan_years = 1.0;
  double annual = 0.0;  // amortized $ per year per unit

  static CostRow from_investment(double investment, double lifespan_years, double rate) {
    return CostRow{investment, lifespan_years, amortize(investment, lifespan_years, rate)};
  }
};

/// Annualized cost coefficients for every sector, plus the TOU tariff rates.
///
/// Units: c_veh $/vehicle-yr, c_btr $/kWh-yr, c_ctr $/station-yr,
/// c_cap and c_chg $/kW-yr, c_lne $/mile-yr, c_upg_std $/upgrade-yr,
/// c_upg_var $/MW-yr. Tariff rates are $/kWh.
struct CostBook {
  double interest_rate = 0.10;

  CostRow vehicle;        // c_veh
  CostRow battery;        // c_btr
  CostRow construction;   // c_ctr
  CostRow power_equip;    // c_cap
  CostRow charger;        // c_chg
  CostRow line;           // c_lne
  CostRow upgrade_fixed;  // c_upg_std
  CostRow upgrade_var;    // c_upg_var, per MW

  double tou_on_peak = 0.232;
  double tou_mid_peak = 0.177;
  double tou_off_peak = 0.130;

  double c_veh() const { return vehicle.annual; }
  double c_btr() const { return battery.annual; }
  double c_ctr() const { return construction.annual; }
  double c_cap() const { return power_equip.annual; }
  double c_chg() const { return charger.annual; }
  double c_lne() const { return line.annual; }
  double c_upg_std() const { return upgrade_fixed.annual; }
  double c_upg_var_per_mw() const { return upgrade_var.annual; }
  double c_upg_var_per_kw() const { return upgrade_var.annual / 1000.0; }

  /// Defaults for the Southern California drayage case. The power-equipment
  /// coefficient is the published rounded $20/kW; pass formula_power_equip to
  /// use the annuity value (~$21.36/kW) instead.
  static CostBook defaults(bool formula_power_equip = false) {
    const double r = 0.10;
    CostBook c;
    c.interest_rate = r;
    c.vehicle = CostRow::from_investment(250'000.0, 10, r);
    c.battery = CostRow::from_investment(150.0, 10, r);
    c.construction = CostRow::from_investment(1'000'000.0, 20, r);
    c.power_equip = CostRow::from_investment(200.0, 20, r);
    if (!formula_power_equip) {
      c.power_equip.annual = 20.0;
    }
    c.charger = CostRow::from_investment(587.0, 10, r);
    c.line = CostRow::from_investment(1'200'000.0, 30, r);
    c.upgrade_fixed = CostRow::from_investment(4'600'000.0, 25, r);
    c.upgrade_var = CostRow::from_investment(200'000.0, 25, r);
    return c;
  }

  /// Per-step electricity price from the three TOU windows:
  /// on-peak 16-21h, mid-peak 14-16h and 21-23h, off-peak otherwise.
  /// A step is priced by the window containing its start time.
  std::vector<double> tou_schedule(const TimeGrid& grid) const {
    std::vector<double> out(static_cast<size_t>(grid.step_count));
    for (int t = 0; t < grid.step_count; ++t) {
      const double h = std::fmod(t * grid.step_hours, 24.0);
      double price = tou_off_peak;
      if (h >= 16.0 && h < 21.0) {
        price = tou_on_peak;
      } else if ((h >= 14.0 && h < 16.0) || (h >= 21.0 && h < 23.0)) {
        price = tou_mid_peak;
      }
      out[static_cast<size_t>(t)] = price;
    }
    return out;
  }
};

}  // namespace drayplan
