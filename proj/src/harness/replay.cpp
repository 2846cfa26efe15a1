#include "mm/harness/replay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mm::harness {

using json = nlohmann::ordered_json;

ErrorStats error_stats(const std::vector<double>& e) {
  ErrorStats s;
  s.count = e.size();
  if (e.empty()) return s;
  s.mean = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
  double var = 0.0;
  for (double v : e) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / e.size());
  s.max = *std::max_element(e.begin(), e.end());
  return s;
}

double jerk_metric(const std::vector<PointD>& p) {
  if (p.size() < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double ax = p[i + 1].x - 2 * p[i].x + p[i - 1].x;
    const double ay = p[i + 1].y - 2 * p[i].y + p[i - 1].y;
    sum += ax * ax + ay * ay;
  }
  return sum / static_cast<double>(p.size() - 2);
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

int RunMetrics::expected_total() const {
  int n = 0;
  for (const auto& t : tallies) n += t.expected;
  return n;
}

int RunMetrics::hits_total() const {
  int n = 0;
  for (const auto& t : tallies) n += t.hits;
  return n;
}

namespace {

struct MarkerAccumulator {
  std::vector<double> errors;
  // Runs of consecutive frames with a detection; jerk is computed per run.
  std::vector<std::vector<PointD>> raw_runs{{}};
  std::vector<std::vector<PointD>> filtered_runs{{}};
  std::optional<Reacquisition> pending;
  MarkerMetrics out;

  void add(const FrameReport& rep, const std::optional<Detection>& det, const TrackSummary& tr,
           const std::optional<MarkerTruth>& truth, TrackStatus prev_status) {
    if (det) {
      ++out.detections;
      raw_runs.back().push_back(to_double(det->center));
      filtered_runs.back().push_back(*tr.smoothed);
      if (truth && truth->clean) errors.push_back(distance(to_double(det->center), truth->rendered_center));
    } else if (!raw_runs.back().empty()) {
      raw_runs.emplace_back();
      filtered_runs.emplace_back();
    }

    if (pending) {
      pending->evals += tr.evals;
      if (det) {
        pending->reacquired_frame = rep.frame_index;
        out.reacquisitions.push_back(*pending);
        pending.reset();
      }
    } else if (tr.status == TrackStatus::Lost && prev_status != TrackStatus::Lost) {
      pending = Reacquisition{rep.frame_index, 0, 0};
    }
  }

  MarkerMetrics finish() {
    out.centroid_error = error_stats(errors);
    auto pooled = [](const std::vector<std::vector<PointD>>& runs) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& r : runs)
        if (r.size() >= 3) {
          sum += jerk_metric(r) * static_cast<double>(r.size() - 2);
          n += r.size() - 2;
        }
      return n ? sum / static_cast<double>(n) : 0.0;
    };
    out.raw_jerk = pooled(raw_runs);
    out.filtered_jerk = pooled(filtered_runs);
    return out;
  }
};

std::optional<MarkerTruth> first_truth(const std::vector<MarkerTruth>& truth, MarkerColor c) {
  for (const MarkerTruth& m : truth)
    if (m.color == c) return m;
  return std::nullopt;
}

}  // namespace

RunMetrics replay(const EngineConfig& cfg, TruthSource& source, const std::optional<std::vector<GestureKind>>& expected) {
  Engine engine(cfg);
  RunMetrics m;
  m.frame_budget = cfg.frame_budget;
  MarkerAccumulator red;
  MarkerAccumulator green;
  TrackStatus red_prev = TrackStatus::Lost;
  TrackStatus green_prev = TrackStatus::Lost;
  std::vector<double> elapsed;

  while (auto f = source.next()) {
    FrameReport rep = engine.process_frame(f->frame, f->t());
    m.eval_counts.push_back(rep.eval_count);
    elapsed.push_back(rep.elapsed);
    red.add(rep, rep.red, rep.red_track, first_truth(f->truth, MarkerColor::Red), red_prev);
    green.add(rep, rep.green, rep.green_track, first_truth(f->truth, MarkerColor::Green), green_prev);
    red_prev = rep.red_track.status;
    green_prev = rep.green_track.status;
    for (const GestureEvent& e : rep.events)
      if (is_discrete(e.kind)) m.discrete_events.push_back(e);
    m.reports.push_back(std::move(rep));
  }

  m.red = red.finish();
  m.green = green.finish();
  m.p50_elapsed = percentile(elapsed, 0.50);
  m.p95_elapsed = percentile(elapsed, 0.95);

  if (expected) {
    std::map<GestureKind, int> want;
    std::map<GestureKind, int> got;
    for (GestureKind k : *expected) ++want[k];
    for (const GestureEvent& e : m.discrete_events) ++got[e.kind];
    for (const auto& [k, n] : want) m.tallies.push_back({k, n, std::min(n, got[k])});
    for (const auto& [k, n] : got) m.unexpected_events += std::max(0, n - (want.count(k) ? want[k] : 0));
  } else {
    m.unexpected_events = 0;
  }
  return m;
}

json to_json(const RunMetrics& m) {
  auto stats = [](const ErrorStats& s) {
    return json{{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}, {"max", s.max}};
  };
  auto marker = [&](const MarkerMetrics& mm) {
    json re = json::array();
    for (const Reacquisition& r : mm.reacquisitions)
      re.push_back({{"lost_frame", r.lost_frame},
                    {"reacquired_frame", r.reacquired_frame},
                    {"frame_gap", r.reacquired_frame - r.lost_frame},
                    {"evals", r.evals}});
    return json{{"detections", mm.detections},
                {"centroid_error", stats(mm.centroid_error)},
                {"raw_jerk", mm.raw_jerk},
                {"filtered_jerk", mm.filtered_jerk},
                {"reacquisitions", std::move(re)}};
  };
  json events = json::array();
  for (const GestureEvent& e : m.discrete_events)
    events.push_back({{"kind", std::string(to_string(e.kind))}, {"frame_index", e.frame_index}, {"timestamp", e.timestamp}});
  json tallies = json::array();
  for (const CommandTally& t : m.tallies)
    tallies.push_back({{"kind", std::string(to_string(t.kind))}, {"expected", t.expected}, {"hits", t.hits}});
  return {{"frames", m.eval_counts.size()},
          {"eval_counts", m.eval_counts},
          {"red", marker(m.red)},
          {"green", marker(m.green)},
          {"events", std::move(events)},
          {"tallies", std::move(tallies)},
          {"unexpected_events", m.unexpected_events},
          {"timing", {{"p50_elapsed", m.p50_elapsed}, {"p95_elapsed", m.p95_elapsed}, {"frame_budget", m.frame_budget}}}};
}

}  // namespace mm::harness
