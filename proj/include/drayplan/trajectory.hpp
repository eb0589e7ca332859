#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drayplan/geo.hpp"
#include "drayplan/instance.hpp"
#include "drayplan/time_grid.hpp"

namespace drayplan {

struct RawTrace {
  struct Sample {
    double time_s = 0.0;  // seconds since epoch (UTC)
    LonLat pos;
  };
  std::string truck_id;
  std::vector<Sample> samples;  // strictly increasing timestamps
};

enum class MotionLabel { QualifiedStop, Trip };

/// One interval between consecutive GPS samples, with its average speed and
/// the stop/trip label assigned by classify_stops.
struct TraceSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  LonLat p_begin, p_end;
  double distance_miles = 0.0;
  double speed_mph = 0.0;
  MotionLabel label = MotionLabel::Trip;
};

/// Labels each inter-sample segment: a maximal run of segments slower than
/// speed_thresh_mph lasting at least min_duration_min becomes a qualified
/// stop; everything else is trip time. A trace shorter than the minimum
/// duration is all trip.
inline std::vector<TraceSegment> classify_stops(const RawTrace& trace,
                                                double speed_thresh_mph = 0.1,
                                                double min_duration_min = 30.0) {
  std::vector<TraceSegment> segs;
  if (trace.samples.size() < 2) return segs;
  for (size_t s = 0; s + 1 < trace.samples.size(); ++s) {
    const auto& a = trace.samples[s];
    const auto& b = trace.samples[s + 1];
    if (!(b.time_s > a.time_s)) {
      throw std::invalid_argument("trace " + trace.truck_id + ": timestamps not strictly increasing");
    }
    TraceSegment seg;
    seg.t_begin = a.time_s;
    seg.t_end = b.time_s;
    seg.p_begin = a.pos;
    seg.p_end = b.pos;
    seg.distance_miles = haversine_miles(a.pos, b.pos);
    seg.speed_mph = seg.distance_miles / ((b.time_s - a.time_s) / 3600.0);
    seg.label = MotionLabel::Trip;
    segs.push_back(seg);
  }
  // Maximal slow runs of sufficient duration become qualified stops.
  const double min_s = min_duration_min * 60.0;
  size_t s = 0;
  while (s < segs.size()) {
    if (segs[s].speed_mph >= speed_thresh_mph) {
      ++s;
      continue;
    }
    size_t e = s;
    while (e + 1 < segs.size() && segs[e + 1].speed_mph < speed_thresh_mph) ++e;
    if (segs[e].t_end - segs[s].t_begin >= min_s) {
      for (size_t k = s; k <= e; ++k) segs[k].label = MotionLabel::QualifiedStop;
    }
    s = e + 1;
  }
  return segs;
}

struct DownsampleResult {
  TruckProfile profile;
  std::vector<std::string> warnings;
  double total_trip_miles = 0.0;
  double total_stop_hours = 0.0;
};

/// Projects labeled segments onto the uniform grid starting at day_start_s.
/// Per step: the stop fraction is the covered qualified-stop time share; the
/// trip distance is prorated by time overlap and converted to consumption.
/// Uncovered time before the first or after the last sample is filled as
/// stationary, with a warning when the gap exceeds one step. Positions are
/// sampled at step midpoints.
inline DownsampleResult downsample(const RawTrace& trace, std::vector<TraceSegment> segments,
                                   const TimeGrid& grid, double day_start_s,
                                   double kwh_per_mile = 2.0, double diesel_kg_per_mile = 1.9) {
  DownsampleResult out;
  const double step_s = grid.step_hours * 3600.0;
  const double day_end_s = day_start_s + grid.step_count * step_s;
  const int T = grid.step_count;

  // Pad the uncovered edges of the day as stationary periods.
  if (!trace.samples.empty()) {
    const auto& first = trace.samples.front();
    const auto& last = trace.samples.back();
    if (first.time_s > day_start_s) {
      TraceSegment pad;
      pad.t_begin = day_start_s;
      pad.t_end = first.time_s;
      pad.p_begin = pad.p_end = first.pos;
      pad.label = MotionLabel::QualifiedStop;
      segments.insert(segments.begin(), pad);
      if (first.time_s - day_start_s > step_s) {
        out.warnings.push_back("trace " + trace.truck_id + ": leading gap of " +
                               std::to_string((first.time_s - day_start_s) / 3600.0) +
                               " h filled as stationary");
      }
    }
    if (last.time_s < day_end_s) {
      TraceSegment pad;
      pad.t_begin = last.time_s;
      pad.t_end = day_end_s;
      pad.p_begin = pad.p_end = last.pos;
      pad.label = MotionLabel::QualifiedStop;
      segments.push_back(pad);
      if (day_end_s - last.time_s > step_s) {
        out.warnings.push_back("trace " + trace.truck_id + ": trailing gap of " +
                               std::to_string((day_end_s - last.time_s) / 3600.0) +
                               " h filled as stationary");
      }
    }
  } else {
    TraceSegment pad;
    pad.t_begin = day_start_s;
    pad.t_end = day_end_s;
    pad.label = MotionLabel::QualifiedStop;
    segments.push_back(pad);
    out.warnings.push_back("trace " + trace.truck_id + ": empty trace treated as parked");
  }

  TruckProfile& prof = out.profile;
  prof.id = trace.truck_id;
  prof.stop_fraction.assign(static_cast<size_t>(T), 0.0);
  prof.consumption_kwh.assign(static_cast<size_t>(T), 0.0);
  prof.position.assign(static_cast<size_t>(T), LonLat{});

  std::vector<double> trip_miles(static_cast<size_t>(T), 0.0);
  for (const auto& seg : segments) {
    const double seg_dur = seg.t_end - seg.t_begin;
    if (seg_dur <= 0.0) continue;
    const int t_lo = std::max(0, static_cast<int>(std::floor((seg.t_begin - day_start_s) / step_s)));
    const int t_hi = std::min(T - 1, static_cast<int>(std::floor((seg.t_end - day_start_s) / step_s -
                                                                 1e-12)));
    for (int t = t_lo; t <= t_hi; ++t) {
      const double w_lo = day_start_s + t * step_s;
      const double w_hi = w_lo + step_s;
      const double overlap = std::min(seg.t_end, w_hi) - std::max(seg.t_begin, w_lo);
      if (overlap <= 0.0) continue;
      if (seg.label == MotionLabel::QualifiedStop) {
        prof.stop_fraction[static_cast<size_t>(t)] += overlap / step_s;
      } else {
        trip_miles[static_cast<size_t>(t)] += seg.distance_miles * (overlap / seg_dur);
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    auto& r = prof.stop_fraction[static_cast<size_t>(t)];
    r = std::min(1.0, std::max(0.0, r));
    // Snap near-complete stops so the "no consumption while fully stopped"
    // invariant survives floating-point overlap sums.
    if (r > 1.0 - 1e-9) r = 1.0;
    if (r == 1.0) trip_miles[static_cast<size_t>(t)] = 0.0;
    prof.consumption_kwh[static_cast<size_t>(t)] = trip_miles[static_cast<size_t>(t)] * kwh_per_mile;
    out.total_trip_miles += trip_miles[static_cast<size_t>(t)];
    out.total_stop_hours += prof.stop_fraction[static_cast<size_t>(t)] * grid.step_hours;
  }

  // Midpoint positions, linearly interpolated along the segment that covers
  // each midpoint.
  for (int t = 0; t < T; ++t) {
    const double mid = day_start_s + (t + 0.5) * step_s;
    LonLat pos = segments.front().p_begin;
    for (const auto& seg : segments) {
      if (mid >= seg.t_end) {
        pos = seg.p_end;
        continue;
      }
      if (mid >= seg.t_begin) {
        const double f = (mid - seg.t_begin) / (seg.t_end - seg.t_begin);
        pos = {seg.p_begin.lon + f * (seg.p_end.lon - seg.p_begin.lon),
               seg.p_begin.lat + f * (seg.p_end.lat - seg.p_begin.lat)};
      }
      break;
    }
    prof.position[static_cast<size_t>(t)] = pos;
  }

  prof.diesel_emission_kg = out.total_trip_miles * diesel_kg_per_mile;
  return out;
}

/// Longest qualified stop of a labeled trace; used as the depot candidate.
inline bool longest_stop_location(const std::vector<TraceSegment>& segments, LonLat* where) {
  double best = 0.0;
  bool found = false;
  size_t s = 0;
  while (s < segments.size()) {
    if (segments[s].label != MotionLabel::QualifiedStop) {
      ++s;
      continue;
    }
    size_t e = s;
    while (e + 1 < segments.size() && segments[e + 1].label == MotionLabel::QualifiedStop) ++e;
    const double dur = segments[e].t_end - segments[s].t_begin;
    if (dur > best) {
      best = dur;
      *where = segments[s].p_begin;
      found = true;
    }
    s = e + 1;
  }
  return found;
}

/// Duplicates profiles `copies` times; each copy's consumption is scaled by
/// an independent uniform draw from [factor_lo, factor_hi]. Copy 0 keeps the
/// original ids, later copies get an `_r<copy>` suffix. Deterministic per
/// seed, independent of platform.
inline std::vector<TruckProfile> replicate_fleet(const std::vector<TruckProfile>& profiles,
                                                 int copies, double factor_lo, double factor_hi,
                                                 uint64_t seed) {
  if (copies < 1) throw std::invalid_argument("replicate_fleet: copies must be >= 1");
  std::mt19937_64 rng(seed);
  auto draw = [&] {
    const double u = (rng() >> 11) * 0x1.0p-53;
    return factor_lo + (factor_hi - factor_lo) * u;
  };
  std::vector<TruckProfile> out;
  out.reserve(profiles.size() * static_cast<size_t>(copies));
  for (int c = 0; c < copies; ++c) {
    for (const auto& p : profiles) {
      TruckProfile t = p;
      if (c > 0) t.id += "_r" + std::to_string(c);
      const double f = draw();
      for (auto& v : t.consumption_kwh) v *= f;
      out.push_back(std::move(t));
    }
  }
  return out;
}

/// Parses "YYYY-MM-DDTHH:MM:SS[Z]" to seconds since the Unix epoch (UTC).
inline double parse_iso8601(const std::string& s) {
  int y, mo, d, h, mi;
  double sec;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%lf", &y, &mo, &d, &h, &mi, &sec) != 6) {
    throw std::invalid_argument("bad ISO-8601 timestamp: " + s);
  }
  // Days from civil date (Howard Hinnant's algorithm).
  const int yy = y - (mo <= 2);
  const int era = (yy >= 0 ? yy : yy - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(yy - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(mo + (mo > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  const long days = era * 146097L + static_cast<long>(doe) - 719468L;
  return days * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
}

/// Raw trace CSV: `truck_id,timestamp_iso8601,lon,lat` with a header line.
/// Samples are sorted per truck; duplicate timestamps are an error.
inline std::vector<RawTrace> load_traces_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<RawTrace> traces;
  std::map<std::string, size_t> by_id;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("truck_id") != std::string::npos) continue;  // header
    }
    std::istringstream ls(line);
    std::string id, ts, lon_s, lat_s;
    if (!std::getline(ls, id, ',') || !std::getline(ls, ts, ',') ||
        !std::getline(ls, lon_s, ',') || !std::getline(ls, lat_s, ',')) {
      throw std::runtime_error("bad trace CSV line: " + line);
    }
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      by_id.emplace(id, traces.size());
      traces.push_back(RawTrace{id, {}});
      it = by_id.find(id);
    }
    traces[it->second].samples.push_back(
        {parse_iso8601(ts), {std::stod(lon_s), std::stod(lat_s)}});
  }
  for (auto& t : traces) {
    std::sort(t.samples.begin(), t.samples.end(),
              [](const auto& a, const auto& b) { return a.time_s < b.time_s; });
    for (size_t s = 0; s + 1 < t.samples.size(); ++s) {
      if (t.samples[s].time_s == t.samples[s + 1].time_s) {
        throw std::runtime_error("trace " + t.truck_id + ": duplicate timestamp");
      }
    }
  }
  return traces;
}

/// Sites CSV: `id,kind,lon,lat` (public sites only; depots come from
/// clustering). Substations CSV: `id,lon,lat,capacity_kw`.
inline std::vector<StationSite> load_sites_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<StationSite> sites;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("id") == 0) continue;
    }
    std::istringstream ls(line);
    std::string id, kind, lon_s, lat_s;
    if (!std::getline(ls, id, ',') || !std::getline(ls, kind, ',') ||
        !std::getline(ls, lon_s, ',') || !std::getline(ls, lat_s, ',')) {
      throw std::runtime_error("bad sites CSV line: " + line);
    }
    StationSite s;
    s.id = id;
    s.kind = kind == "truck-stop"  ? StationKind::TruckStop
             : kind == "intermodal" ? StationKind::Intermodal
             : kind == "depot"      ? StationKind::Depot
                                    : throw std::runtime_error("unknown site kind: " + kind);
    s.location = {std::stod(lon_s), std::stod(lat_s)};
    sites.push_back(std::move(s));
  }
  return sites;
}

inline std::vector<SubstationNode> load_substations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<SubstationNode> subs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("id") == 0) continue;
    }
    std::istringstream ls(line);
    std::string id, lon_s, lat_s, cap_s;
    if (!std::getline(ls, id, ',') || !std::getline(ls, lon_s, ',') ||
        !std::getline(ls, lat_s, ',') || !std::getline(ls, cap_s, ',')) {
      throw std::runtime_error("bad substations CSV line: " + line);
    }
    subs.push_back({id, {std::stod(lon_s), std::stod(lat_s)}, std::stod(cap_s)});
  }
  return subs;
}

}  // namespace drayplan
