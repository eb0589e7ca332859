#pragma once

#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "drayplan/geo.hpp"
#include "drayplan/instance.hpp"

namespace drayplan {

/// Classic density clustering over an explicit distance function. Returns
/// one index list per cluster; points in no cluster (noise) are left out.
/// With min_pts = 1 every point is a core point and the result is exactly
/// the connected components of the eps-neighbor graph.
inline std::vector<std::vector<int>> dbscan(int n_points, double eps,
                                            int min_pts,
                                            const std::function<double(int, int)>& distance) {
  std::vector<int> cluster_of(static_cast<size_t>(n_points), -1);
  std::vector<std::vector<int>> clusters;

  auto neighbors_of = [&](int p) {
    std::vector<int> out;
    for (int q = 0; q < n_points; ++q) {
      if (q != p && distance(p, q) <= eps) out.push_back(q);
    }
    return out;
  };

  for (int p = 0; p < n_points; ++p) {
    if (cluster_of[static_cast<size_t>(p)] != -1) continue;
    std::vector<int> seed = neighbors_of(p);
    if (static_cast<int>(seed.size()) + 1 < min_pts) continue;  // noise (for min_pts > 1)
    const int cid = static_cast<int>(clusters.size());
    clusters.push_back({p});
    cluster_of[static_cast<size_t>(p)] = cid;
    // Expand: core points recruit their neighborhoods.
    for (size_t k = 0; k < seed.size(); ++k) {
      const int q = seed[k];
      if (cluster_of[static_cast<size_t>(q)] != -1) continue;
      cluster_of[static_cast<size_t>(q)] = cid;
      clusters[static_cast<size_t>(cid)].push_back(q);
      std::vector<int> more = neighbors_of(q);
      if (static_cast<int>(more.size()) + 1 >= min_pts) {
        seed.insert(seed.end(), more.begin(), more.end());
      }
    }
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  return clusters;
}

/// Merges per-truck depot candidates (longest-stop locations) into depot
/// sites: DBSCAN with eps = radius_feet and min_pts = 1, one depot per
/// cluster at the member centroid, owned by the member trucks. Cluster
/// order follows the smallest member truck id, so the result does not
/// depend on the input ordering.
inline std::vector<StationSite> cluster_depots(
    const std::vector<std::pair<std::string, LonLat>>& candidates, double radius_feet = 1000.0) {
  const int n = static_cast<int>(candidates.size());
  // Order-independent handle: process points sorted by truck id.
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return candidates[static_cast<size_t>(a)].first < candidates[static_cast<size_t>(b)].first;
  });
  auto dist = [&](int a, int b) {
    return haversine_feet(candidates[static_cast<size_t>(order[static_cast<size_t>(a)])].second,
                          candidates[static_cast<size_t>(order[static_cast<size_t>(b)])].second);
  };
  const auto clusters = dbscan(n, radius_feet, 1, dist);

  std::vector<StationSite> depots;
  for (size_t c = 0; c < clusters.size(); ++c) {
    StationSite site;
    site.id = "D" + std::to_string(c);
    site.kind = StationKind::Depot;
    double lon = 0.0, lat = 0.0;
    for (int k : clusters[c]) {
      const auto& [truck, pos] = candidates[static_cast<size_t>(order[static_cast<size_t>(k)])];
      site.owner_truck_ids.insert(truck);
      lon += pos.lon;
      lat += pos.lat;
    }
    site.location = {lon / clusters[c].size(), lat / clusters[c].size()};
    depots.push_back(std::move(site));
  }
  return depots;
}

}  // namespace drayplan
