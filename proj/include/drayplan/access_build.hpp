#pragma once

#include <algorithm>
#include <vector>

#include "drayplan/geo.hpp"
#include "drayplan/instance.hpp"

namespace drayplan {

/// Derives the access relation from processed profiles and site lists.
/// A truck can use station j at step t when the step is mostly a qualified
/// stop (stop fraction >= stop_threshold), the truck's step position lies
/// within access_radius_miles of the site, and the site is public or one of
/// the truck's own depots. Station-substation candidates are the k nearest
/// substations with their haversine distances.
inline AccessMatrix build_access_matrix(const std::vector<TruckProfile>& profiles,
                                        const std::vector<StationSite>& sites,
                                        const std::vector<SubstationNode>& substations,
                                        double access_radius_miles = 0.5, int k_nearest = 5,
                                        double stop_threshold = 0.5) {
  AccessMatrix access;
  access.neighbor_limit = std::max(k_nearest, 5);
  for (size_t i = 0; i < profiles.size(); ++i) {
    const auto& trk = profiles[i];
    if (trk.position.empty()) continue;
    for (size_t t = 0; t < trk.stop_fraction.size(); ++t) {
      if (trk.stop_fraction[t] < stop_threshold) continue;
      for (size_t j = 0; j < sites.size(); ++j) {
        const auto& site = sites[j];
        if (!site.is_public() && !site.owner_truck_ids.count(trk.id)) continue;
        if (haversine_miles(trk.position[t], site.location) <= access_radius_miles) {
          access.truck_station.push_back(
              {static_cast<int>(i), static_cast<int>(j), static_cast<int>(t)});
        }
      }
    }
  }
  const int kn = std::min<int>(k_nearest, static_cast<int>(substations.size()));
  for (size_t j = 0; j < sites.size(); ++j) {
    std::vector<std::pair<double, int>> dist;
    for (size_t k = 0; k < substations.size(); ++k) {
      dist.push_back({haversine_miles(sites[j].location, substations[k].location),
                      static_cast<int>(k)});
    }
    std::sort(dist.begin(), dist.end());
    for (int r = 0; r < kn; ++r) {
      access.station_substation.push_back(
          {static_cast<int>(j), dist[static_cast<size_t>(r)].second,
           dist[static_cast<size_t>(r)].first});
    }
  }
  return access;
}

}  // namespace drayplan
