#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <set>

#include "drayplan/access_build.hpp"
#include "drayplan/cost_book.hpp"
#include "drayplan/dbscan.hpp"
#include "drayplan/instance_json.hpp"
#include "drayplan/synthetic.hpp"
#include "drayplan/trajectory.hpp"
#include "drayplan/validate.hpp"
#include "test_util.hpp"

using namespace drayplan;

namespace {

const double kMilesPerDegLat = M_PI * kEarthRadiusMiles / 180.0;

LonLat offset_miles(const LonLat& base, double miles_north) {
  return {base.lon, base.lat + miles_north / kMilesPerDegLat};
}

RawTrace walk_trace(const std::string& id, double t0, const std::vector<std::pair<double, double>>& legs,
                    LonLat start = {-118.2, 33.8}) {
  // legs: (duration_minutes, distance_miles); positions advance north.
  RawTrace tr;
  tr.truck_id = id;
  double t = t0;
  LonLat pos = start;
  tr.samples.push_back({t, pos});
  for (const auto& [mins, miles] : legs) {
    t += mins * 60.0;
    pos = offset_miles(pos, miles);
    tr.samples.push_back({t, pos});
  }
  return tr;
}

}  // namespace

TEST_CASE("amortize reproduces every cost-table row") {
  // Annuity-due at 10%, checked against the published annual costs.
  CHECK(std::abs(amortize(250000, 10, 0.10) - 36988.0) <= 1.0);
  CHECK(std::abs(amortize(150, 10, 0.10) - 22.0) <= 1.0);
  CHECK(std::abs(amortize(1000000, 20, 0.10) - 106781.0) <= 1.0);
  CHECK(std::abs(amortize(587, 10, 0.10) - 87.0) <= 1.0);
  CHECK(std::abs(amortize(1200000, 30, 0.10) - 115723.0) <= 1.0);
  CHECK(std::abs(amortize(4600000, 25, 0.10) - 460703.0) <= 1.0);
  CHECK(std::abs(amortize(200000, 25, 0.10) - 20031.0) <= 1.0);
  // The power-equipment row is published rounded to $20/kW; the formula
  // value is within 7%.
  const double cap = amortize(200, 20, 0.10);
  CHECK(std::abs(cap - 20.0) / 20.0 <= 0.07);
  // Zero-interest limit.
  CHECK(amortize(1000, 4, 0.0) == Catch::Approx(250.0));
  CHECK_THROWS_AS(amortize(100, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("cost book defaults carry the published power-equipment rounding") {
  const CostBook printed = CostBook::defaults();
  CHECK(printed.c_cap() == 20.0);
  const CostBook formula = CostBook::defaults(true);
  CHECK(formula.c_cap() == Catch::Approx(21.356).margin(0.01));
  CHECK(printed.c_upg_var_per_kw() == Catch::Approx(printed.c_upg_var_per_mw() / 1000.0));
}

TEST_CASE("tou schedule prices the three windows") {
  const CostBook cb = CostBook::defaults();
  const TimeGrid grid{96, 0.25};
  const auto tou = cb.tou_schedule(grid);
  REQUIRE(tou.size() == 96);
  CHECK(tou[0] == 0.130);                    // midnight: off-peak
  CHECK(tou[4 * 15] == 0.177);               // 15:00 mid-peak
  CHECK(tou[4 * 17] == 0.232);               // 17:00 on-peak
  CHECK(tou[4 * 21] == 0.177);               // 21:00 mid-peak
  CHECK(tou[4 * 23] == 0.130);               // 23:00 off-peak
  double revenue_weight = 0.0;
  for (double p : tou) revenue_weight += p;
  CHECK(revenue_weight == Catch::Approx(4 * (15 * 0.130 + 4 * 0.177 + 5 * 0.232)));
}

TEST_CASE("classify_stops: 45 stationary minutes become one qualified stop") {
  const RawTrace tr = walk_trace("T0", 0.0, {{45.0, 0.0}, {30.0, 5.0}});
  const auto segs = classify_stops(tr);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].label == MotionLabel::QualifiedStop);
  CHECK(segs[1].label == MotionLabel::Trip);
}

TEST_CASE("classify_stops: twenty minutes below threshold stay a trip") {
  const RawTrace tr = walk_trace("T0", 0.0, {{20.0, 0.0}, {30.0, 5.0}});
  const auto segs = classify_stops(tr);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].label == MotionLabel::Trip);
}

TEST_CASE("classify_stops: slow-fast-slow pattern stops only on the slow runs") {
  const RawTrace tr =
      walk_trace("T0", 0.0, {{30.0, 0.025}, {30.0, 0.1}, {30.0, 0.025}});
  const auto segs = classify_stops(tr, 0.1, 30.0);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].speed_mph == Catch::Approx(0.05).margin(1e-3));
  CHECK(segs[1].speed_mph == Catch::Approx(0.2).margin(1e-3));
  CHECK(segs[0].label == MotionLabel::QualifiedStop);
  CHECK(segs[1].label == MotionLabel::Trip);
  CHECK(segs[2].label == MotionLabel::QualifiedStop);
}

TEST_CASE("classify_stops rejects non-increasing timestamps") {
  RawTrace tr = walk_trace("T0", 0.0, {{30.0, 1.0}});
  tr.samples.push_back({tr.samples.back().time_s, tr.samples.back().pos});
  CHECK_THROWS_AS(classify_stops(tr), std::invalid_argument);
}

TEST_CASE("downsample: truck parked all day") {
  const TimeGrid grid{96, 0.25};
  const RawTrace tr = walk_trace("T0", 0.0, {{24.0 * 60.0, 0.0}});
  const auto segs = classify_stops(tr);
  const DownsampleResult res = downsample(tr, segs, grid, 0.0);
  for (int t = 0; t < 96; ++t) {
    CHECK(res.profile.stop_fraction[static_cast<size_t>(t)] == 1.0);
    CHECK(res.profile.consumption_kwh[static_cast<size_t>(t)] == 0.0);
  }
  CHECK(res.total_trip_miles == 0.0);
}

TEST_CASE("downsample: ten miles inside one step cost twenty kWh") {
  const TimeGrid grid{96, 0.25};
  // Parked 60 min, a 10-mile burst within one 15-minute step, parked after.
  const RawTrace tr = walk_trace("T0", 0.0, {{60.0, 0.0}, {15.0, 10.0}, {23.0 * 60.0 - 75.0, 0.0}});
  const auto segs = classify_stops(tr);
  const DownsampleResult res = downsample(tr, segs, grid, 0.0);
  CHECK(res.profile.consumption_kwh[4] == Catch::Approx(20.0).margin(1e-9));
  CHECK(res.total_trip_miles == Catch::Approx(10.0).margin(1e-9));
}

TEST_CASE("downsample: a stop tail spanning a boundary splits 1.0 / 0.5") {
  const TimeGrid grid{96, 0.25};
  // Qualified stop of 37.5 min from day start: steps 0-1 fully stopped,
  // step 2 half stopped.
  const RawTrace tr = walk_trace("T0", 0.0, {{37.5, 0.0}, {15.0, 3.0}, {22.5 * 60.0 + 45.0, 0.0}});
  const auto segs = classify_stops(tr);
  const DownsampleResult res = downsample(tr, segs, grid, 0.0);
  CHECK(res.profile.stop_fraction[1] == Catch::Approx(1.0));
  CHECK(res.profile.stop_fraction[2] == Catch::Approx(0.5));
}

TEST_CASE("downsample conserves distance and stop time on a random walk") {
  std::mt19937_64 rng(314);
  const TimeGrid grid{96, 0.25};
  std::vector<std::pair<double, double>> legs;
  double total_minutes = 0.0;
  while (total_minutes < 23.0 * 60.0) {
    const bool stop = (rng() & 1) != 0;
    const double mins = stop ? testutil::uniform(rng, 31.0, 90.0)
                             : testutil::uniform(rng, 10.0, 40.0);
    const double miles = stop ? 0.0 : testutil::uniform(rng, 1.0, 15.0);
    legs.push_back({mins, miles});
    total_minutes += mins;
  }
  const RawTrace tr = walk_trace("T0", 0.0, legs);
  const auto segs = classify_stops(tr);
  double trip_miles = 0.0, stop_hours = 0.0;
  const double day_end = 96 * 0.25 * 3600.0;
  for (const auto& s : segs) {
    const double start = std::max(s.t_begin, 0.0);
    const double end = std::min(s.t_end, day_end);
    if (end <= start) continue;
    const double frac = (end - start) / (s.t_end - s.t_begin);
    if (s.label == MotionLabel::Trip) trip_miles += s.distance_miles * frac;
    else stop_hours += (end - start) / 3600.0;
  }
  const DownsampleResult res = downsample(tr, segs, grid, 0.0);
  double got_miles = 0.0, got_stop_hours = 0.0, got_kwh = 0.0;
  for (int t = 0; t < 96; ++t) {
    got_kwh += res.profile.consumption_kwh[static_cast<size_t>(t)];
    got_stop_hours += res.profile.stop_fraction[static_cast<size_t>(t)] * grid.step_hours;
  }
  got_miles = got_kwh / 2.0;
  // Padding after the trace end adds stop time; account for it.
  const double pad_hours = (day_end - tr.samples.back().time_s) / 3600.0;
  CHECK(got_miles == Catch::Approx(trip_miles).margin(1e-6));
  CHECK(got_stop_hours == Catch::Approx(stop_hours + std::max(0.0, pad_hours)).margin(1e-6));
  CHECK(validate_instance([&] {
          Instance inst;
          inst.grid = grid;
          inst.trucks = {res.profile};
          inst.params.tou_price.assign(96, 0.13);
          inst.params.carbon_intensity.assign(96, 0.25);
          inst.costs = CostBook::defaults();
          return inst;
        }())
            .ok());
}

TEST_CASE("cluster_depots merges within the radius and splits beyond it") {
  const LonLat base{-118.2, 33.8};
  {
    const auto depots = cluster_depots(
        {{"T0", base}, {"T1", offset_miles(base, 500.0 / 5280.0)}}, 1000.0);
    REQUIRE(depots.size() == 1);
    CHECK(depots[0].owner_truck_ids == std::set<std::string>{"T0", "T1"});
    CHECK(depots[0].kind == StationKind::Depot);
  }
  {
    const auto depots = cluster_depots(
        {{"T0", base}, {"T1", offset_miles(base, 2000.0 / 5280.0)}}, 1000.0);
    CHECK(depots.size() == 2);
  }
}

TEST_CASE("cluster_depots matches a union-find oracle on chained points") {
  std::mt19937_64 rng(2718);
  const LonLat base{-118.2, 33.8};
  std::vector<std::pair<std::string, LonLat>> pts;
  for (int i = 0; i < 10; ++i) {
    pts.push_back({"T" + std::to_string(i),
                   offset_miles(base, testutil::uniform(rng, 0.0, 0.7))});
  }
  const double eps_ft = 800.0;

  // Union-find over the eps graph.
  std::vector<int> parent(10);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[static_cast<size_t>(a)] == a ? a : parent[static_cast<size_t>(a)] = find(parent[static_cast<size_t>(a)]); };
  for (int a = 0; a < 10; ++a) {
    for (int b = a + 1; b < 10; ++b) {
      if (haversine_feet(pts[static_cast<size_t>(a)].second, pts[static_cast<size_t>(b)].second) <= eps_ft) {
        parent[static_cast<size_t>(find(a))] = find(b);
      }
    }
  }
  std::map<int, std::set<std::string>> expected;
  for (int a = 0; a < 10; ++a) expected[find(a)].insert(pts[static_cast<size_t>(a)].first);
  std::set<std::set<std::string>> expected_sets;
  for (auto& [root, members] : expected) expected_sets.insert(members);

  const auto depots = cluster_depots(pts, eps_ft);
  std::set<std::set<std::string>> got;
  for (const auto& d : depots) got.insert(d.owner_truck_ids);
  CHECK(got == expected_sets);
}

TEST_CASE("cluster_depots is permutation invariant") {
  std::mt19937_64 rng(5);
  const LonLat base{-118.2, 33.8};
  std::vector<std::pair<std::string, LonLat>> pts;
  for (int i = 0; i < 8; ++i) {
    pts.push_back({"T" + std::to_string(i), offset_miles(base, testutil::uniform(rng, 0.0, 0.5))});
  }
  auto summarize = [](const std::vector<StationSite>& depots) {
    std::set<std::set<std::string>> sets;
    std::map<std::set<std::string>, LonLat> centers;
    for (const auto& d : depots) {
      sets.insert(d.owner_truck_ids);
      centers[d.owner_truck_ids] = d.location;
    }
    return std::make_pair(sets, centers);
  };
  const auto a = summarize(cluster_depots(pts, 900.0));
  std::reverse(pts.begin(), pts.end());
  const auto b = summarize(cluster_depots(pts, 900.0));
  CHECK(a.first == b.first);
  for (const auto& [members, center] : a.second) {
    CHECK(center.lat == Catch::Approx(b.second.at(members).lat).margin(1e-12));
  }
}

TEST_CASE("access matrix honors radius, ownership, and stop threshold") {
  TruckProfile trk;
  trk.id = "T0";
  trk.stop_fraction = {1.0, 0.4, 1.0, 0.0};
  trk.consumption_kwh = {0.0, 5.0, 0.0, 5.0};
  const LonLat here{-118.2, 33.8};
  trk.position = {here, here, here, here};

  StationSite near_stop;
  near_stop.id = "S0";
  near_stop.kind = StationKind::TruckStop;
  near_stop.location = offset_miles(here, 0.3);
  StationSite foreign_depot;
  foreign_depot.id = "S1";
  foreign_depot.kind = StationKind::Depot;
  foreign_depot.owner_truck_ids = {"OTHER"};
  foreign_depot.location = offset_miles(here, 0.2);
  StationSite own_depot;
  own_depot.id = "S2";
  own_depot.kind = StationKind::Depot;
  own_depot.owner_truck_ids = {"T0"};
  own_depot.location = offset_miles(here, 0.1);
  StationSite far_stop;
  far_stop.id = "S3";
  far_stop.kind = StationKind::TruckStop;
  far_stop.location = offset_miles(here, 0.8);

  SubstationNode sub{"K0", offset_miles(here, 1.0), 500.0};
  const AccessMatrix access = build_access_matrix(
      {trk}, {near_stop, foreign_depot, own_depot, far_stop}, {sub});

  std::set<std::tuple<int, int, int>> got;
  for (const auto& a : access.truck_station) got.insert({a.truck, a.station, a.step});
  // Steps 0 and 2 qualify (threshold 0.5); stations S0 and S2 only.
  const std::set<std::tuple<int, int, int>> expect{
      {0, 0, 0}, {0, 0, 2}, {0, 2, 0}, {0, 2, 2}};
  CHECK(got == expect);
}

TEST_CASE("station-substation edges carry haversine distances (two formulas)") {
  const LonLat a{-118.20, 33.80};
  const LonLat b{-118.05, 33.93};
  StationSite s;
  s.id = "S0";
  s.location = a;
  SubstationNode k{"K0", b, 100.0};
  const AccessMatrix access = build_access_matrix({}, {s}, {k});
  REQUIRE(access.station_substation.size() == 1);
  const double got = access.station_substation[0].distance_miles;
  // Spherical law of cosines as the independent route.
  const double phi1 = deg2rad(a.lat), phi2 = deg2rad(b.lat);
  const double dl = deg2rad(b.lon - a.lon);
  const double alt = kEarthRadiusMiles *
                     std::acos(std::sin(phi1) * std::sin(phi2) +
                               std::cos(phi1) * std::cos(phi2) * std::cos(dl));
  CHECK(std::abs(got - alt) / alt < 1e-3);
}

TEST_CASE("replicate_fleet: identity, fleet-size arithmetic, determinism") {
  SyntheticSpec spec;
  spec.n_trucks = 4;
  spec.steps = 8;
  spec.seed = 6;
  const Instance inst = generate_synthetic(spec);

  const auto same = replicate_fleet(inst.trucks, 1, 1.0, 1.0, 9);
  REQUIRE(same.size() == inst.trucks.size());
  for (size_t i = 0; i < same.size(); ++i) {
    CHECK(same[i].id == inst.trucks[i].id);
    CHECK(same[i].consumption_kwh == inst.trucks[i].consumption_kwh);
  }

  const auto big = replicate_fleet(inst.trucks, 30, 0.95, 1.05, 9);
  CHECK(big.size() == 120);

  const auto again = replicate_fleet(inst.trucks, 30, 0.95, 1.05, 9);
  for (size_t i = 0; i < big.size(); ++i) {
    CHECK(big[i].id == again[i].id);
    CHECK(big[i].consumption_kwh == again[i].consumption_kwh);  // bit-identical
  }
  const auto other = replicate_fleet(inst.trucks, 30, 0.95, 1.05, 10);
  bool any_diff = false;
  for (size_t i = 0; i < big.size(); ++i) {
    any_diff = any_diff || big[i].consumption_kwh != other[i].consumption_kwh;
  }
  CHECK(any_diff);
}

TEST_CASE("generate_synthetic produces valid instances across seeds") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticSpec spec;
    spec.n_trucks = 1 + static_cast<int>(seed % 3);
    spec.n_stations = 1 + static_cast<int>(seed % 2);
    spec.n_substations = 1 + static_cast<int>(seed % 2);
    spec.steps = 4 + static_cast<int>(seed % 5);
    spec.seed = seed;
    spec.second_station_access = seed % 2 == 0;
    spec.with_depot = seed % 3 == 0;
    const Instance inst = generate_synthetic(spec);
    const auto rep = validate_instance(inst);
    CAPTURE(seed, rep.to_string());
    CHECK(rep.ok());
  }
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{.n_trucks = 0}), std::invalid_argument);
}

TEST_CASE("trace CSV parsing groups, sorts, and converts timestamps") {
  const std::string path = "/tmp/drayplan_traces.csv";
  {
    std::ofstream out(path);
    out << "truck_id,timestamp_iso8601,lon,lat\n";
    out << "A,2021-09-29T00:30:00Z,-118.2,33.8\n";
    out << "B,2021-09-29T00:00:00Z,-118.3,33.9\n";
    out << "A,2021-09-29T00:00:00Z,-118.2,33.8\n";
  }
  const auto traces = load_traces_csv(path);
  REQUIRE(traces.size() == 2);
  CHECK(traces[0].truck_id == "A");
  REQUIRE(traces[0].samples.size() == 2);
  CHECK(traces[0].samples[0].time_s < traces[0].samples[1].time_s);
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0.0);
  CHECK(parse_iso8601("2021-09-29T12:00:00") == 1632916800.0);
}

TEST_CASE("downsample warns about gaps longer than one step and fills them") {
  const TimeGrid grid{96, 0.25};
  // The trace starts two hours into the day: that lead time is a gap.
  RawTrace tr = walk_trace("T0", 2.0 * 3600.0, {{45.0, 0.0}, {30.0, 6.0}, {20.0 * 3600.0 / 60.0, 0.0}});
  const auto segs = classify_stops(tr);
  const DownsampleResult res = downsample(tr, segs, grid, 0.0);
  REQUIRE_FALSE(res.warnings.empty());
  CHECK(res.warnings[0].find("leading gap") != std::string::npos);
  for (int t = 0; t < 8; ++t) {
    CHECK(res.profile.stop_fraction[static_cast<size_t>(t)] == 1.0);  // filled as stationary
  }
}

TEST_CASE("a trace shorter than the minimum stop duration is all trip") {
  const RawTrace tr = walk_trace("T0", 0.0, {{10.0, 0.0}, {10.0, 0.0}});
  const auto segs = classify_stops(tr);  // 20 stationary minutes in total
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].label == MotionLabel::Trip);
  CHECK(segs[1].label == MotionLabel::Trip);
}
