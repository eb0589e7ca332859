#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace drayplan {

/// One charger model: rated power and annualized unit cost.
struct ChargerTier {
  double power_kw = 0.0;
  double unit_cost = 0.0;
};

/// Ascending list of charger models; the implicit tier 0 has zero power.
struct ChargerCatalog {
  std::vector<ChargerTier> tiers;

  int size() const { return static_cast<int>(tiers.size()); }

  /// Power of tier m using 1-based indexing; p^0 = 0.
  double power(int m) const {
    return m == 0 ? 0.0 : tiers[static_cast<size_t>(m - 1)].power_kw;
  }

  void check(double p_max_kw) const {
    if (tiers.empty()) throw std::invalid_argument("charger catalog: needs at least one tier");
    double prev = 0.0;
    for (const auto& t : tiers) {
      if (!(t.power_kw > prev)) {
        throw std::invalid_argument("charger catalog: powers must be strictly increasing and positive");
      }
      prev = t.power_kw;
    }
    if (prev < p_max_kw) {
      throw std::invalid_argument("charger catalog: max tier power below p_max");
    }
  }
};

/// Big-M/epsilon constants for the at-least-tier linearization.
struct TierLinParams {
  double big_g = 0.0;
  double epsilon = 1e-3;  // kW

  static TierLinParams defaults(double p_max_kw, const ChargerCatalog& catalog) {
    double top = 0.0;
    for (const auto& t : catalog.tiers) top = std::max(top, t.power_kw);
    return {p_max_kw + top, 1e-3};
  }
};

/// Reference (non-MILP) evaluation of the exact-tier indicator: entry m-1 is
/// 1 iff p^{m-1} < beta*power <= p^m. Boundary equality resolves toward the
/// lower tier within epsilon/2.
inline std::vector<int> tier_indicator_exact(double power, int beta, const ChargerCatalog& catalog,
                                             double epsilon = 1e-3) {
  if (power < 0.0) throw std::invalid_argument("tier_indicator_exact: negative power");
  std::vector<int> out(static_cast<size_t>(catalog.size()), 0);
  const double effective = beta == 0 ? 0.0 : power;
  if (effective <= epsilon / 2.0) return out;
  for (int m = 1; m <= catalog.size(); ++m) {
    if (effective <= catalog.power(m) + epsilon / 2.0) {
      out[static_cast<size_t>(m - 1)] = 1;
      return out;
    }
  }
  throw std::invalid_argument("tier_indicator_exact: power exceeds catalog");
}

inline ChargerCatalog charger_catalog_from_json(const nlohmann::json& j) {
  ChargerCatalog c;
  for (const auto& t : j.at("tiers")) {
    c.tiers.push_back({t.at("kw").get<double>(), t.at("cost").get<double>()});
  }
  return c;
}

inline nlohmann::json to_json(const ChargerCatalog& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : c.tiers) arr.push_back({{"kw", t.power_kw}, {"cost", t.unit_cost}});
  return nlohmann::json{{"tiers", arr}};
}

inline ChargerCatalog load_charger_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return charger_catalog_from_json(j);
}

}  // namespace drayplan
