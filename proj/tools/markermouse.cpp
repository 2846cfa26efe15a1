// markermouse: command-line front end for the marker tracking engine.

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mm/calibrate.hpp"
#include "mm/errors.hpp"
#include "mm/harness/bench.hpp"
#include "mm/harness/fixture.hpp"
#include "mm/harness/replay.hpp"
#include "mm/harness/scenarios.hpp"
#include "mm/harness/synth.hpp"
#include "mm/serialize.hpp"
#include "mm/service.hpp"
#include "mm/wire.hpp"

namespace {

using nlohmann::ordered_json;

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mm::FormatError("cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw mm::FormatError(path + ": " + e.what());
  }
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mm::FormatError("cannot write " + path);
  out << text;
}

mm::EngineConfig engine_config(const std::string& path) {
  return path.empty() ? mm::EngineConfig{} : mm::load_engine_config(path);
}

std::vector<mm::GestureKind> parse_kinds(const std::string& list) {
  std::vector<mm::GestureKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto k = mm::gesture_from_string(item);
    if (!k) throw mm::ParameterError("unknown command: " + item);
    out.push_back(*k);
  }
  return out;
}

std::string fmt_opt(const std::optional<mm::PointD>& p, bool y) {
  if (!p) return "";
  std::ostringstream os;
  os << (y ? p->y : p->x);
  return os.str();
}

// ---- synth ----

struct SynthArgs {
  std::string script;
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out;
  bool raw = false;
  bool dump_script = false;
};

int run_synth(const SynthArgs& a) {
  mm::harness::SceneScript script;
  if (!a.script.empty()) {
    script = mm::harness::scene_from_json(read_json_file(a.script));
  } else if (!a.scenario.empty()) {
    auto s = mm::harness::find_scenario(a.scenario);
    if (!s) throw mm::ParameterError("unknown scenario: " + a.scenario);
    script = s->script;
  } else {
    throw mm::ParameterError("one of --script or --scenario is required");
  }
  if (a.dump_script) {
    emit(a.out, mm::harness::to_json(script).dump(2) + "\n");
    return 0;
  }
  if (a.out.empty()) throw mm::ParameterError("--out is required");
  auto seq = mm::harness::synth_sequence(script, a.seed);
  mm::harness::write_fixture(a.out, seq, a.raw ? mm::harness::Codec::Raw : mm::harness::Codec::Zlib);
  std::cerr << "wrote " << seq.size() << " frames to " << a.out << "\n";
  return 0;
}

// ---- replay ----

struct ReplayArgs {
  std::string fixture;
  std::string config;
  std::string out;
  std::string log;
  std::string events;
  std::string expected;
  std::string format = "json";
  bool timing = false;
  bool strict = false;
};

int run_replay(const ReplayArgs& a) {
  mm::EngineConfig cfg = engine_config(a.config);
  mm::harness::FixtureReader reader(a.fixture);
  std::optional<std::vector<mm::GestureKind>> expected;
  if (!a.expected.empty()) expected = parse_kinds(a.expected);
  mm::harness::RunMetrics m = mm::harness::replay(cfg, reader, expected);

  if (!a.log.empty()) {
    std::ostringstream os;
    for (const auto& r : m.reports) os << mm::report_line(r, a.timing) << "\n";
    emit(a.log, os.str());
  }
  if (!a.events.empty()) {
    std::ostringstream os;
    for (const auto& r : m.reports)
      for (const auto& line : mm::wire::event_lines(r, static_cast<std::uint32_t>(r.frame_index))) os << line << "\n";
    emit(a.events, os.str());
  }

  if (a.format == "csv") {
    std::ostringstream os;
    os << "frame,timestamp,red_x,red_y,red_status,green_x,green_y,green_status,evals,events\n";
    for (const auto& r : m.reports) {
      std::string events;
      for (const auto& e : r.events) {
        if (!events.empty()) events += ';';
        events += mm::to_string(e.kind);
      }
      os << r.frame_index << ',' << r.timestamp << ',' << fmt_opt(r.red_track.smoothed, false) << ','
         << fmt_opt(r.red_track.smoothed, true) << ',' << mm::to_string(r.red_track.status) << ','
         << fmt_opt(r.green_track.smoothed, false) << ',' << fmt_opt(r.green_track.smoothed, true) << ','
         << mm::to_string(r.green_track.status) << ',' << r.eval_count << ',' << events << "\n";
    }
    emit(a.out, os.str());
  } else {
    emit(a.out, mm::harness::to_json(m).dump(2) + "\n");
  }

  if (a.strict && expected && (m.hits_total() != m.expected_total() || m.unexpected_events != 0)) {
    std::cerr << "replay: expected events not matched (" << m.hits_total() << "/" << m.expected_total()
              << " hits, " << m.unexpected_events << " unexpected)\n";
    return 3;
  }
  return 0;
}

// ---- bench ----

struct BenchArgs {
  std::string suite = "all";
  std::string format = "json";
  std::string out;
  int reps = 3;
  std::uint64_t seed = 1;
};

int run_bench(const BenchArgs& a) {
  const bool matcher = a.suite == "all" || a.suite == "matcher";
  const bool reacquire = a.suite == "all" || a.suite == "reacquire";
  std::vector<mm::harness::MatcherBench> mb;
  if (matcher) {
    for (int mask : {5, 7, 11})
      for (int stride : {1, 2, 4})
        mb.push_back(mm::harness::bench_matcher({640, 480}, mask, mask, stride, a.reps, a.seed));
  }
  std::optional<mm::harness::ReacquireBench> rb;
  if (reacquire) rb = mm::harness::bench_reacquire(mm::harness::standard_reacquire_scenario());

  if (a.format == "csv") {
    std::ostringstream os;
    if (matcher) {
      os << "suite,mask,stride,positions,direct_terms,incremental_terms,model_direct_terms,"
            "model_incremental_terms,direct_ms,incremental_ms,outputs_equal\n";
      for (const auto& b : mb) {
        os << "matcher," << b.mask_width << 'x' << b.mask_height << ',' << b.stride << ',' << b.positions << ','
           << b.direct_terms << ',' << b.incremental_terms << ',' << b.model_direct_terms << ','
           << b.model_incremental_terms << ',' << 1000.0 * b.direct_seconds / b.repetitions << ','
           << 1000.0 * b.incremental_seconds / b.repetitions << ',' << (b.outputs_equal ? "true" : "false")
           << "\n";
      }
    }
    if (rb) {
      os << "suite,raster_evals,circular_evals,reduction_pct,found_in_window\n";
      os << "reacquire," << rb->raster_evals << ',' << rb->circular_evals << ',' << rb->reduction_pct << ','
         << (rb->found_in_window ? "true" : "false") << "\n";
    }
    emit(a.out, os.str());
  } else {
    ordered_json j = ordered_json::object();
    if (matcher) {
      j["matcher"] = ordered_json::array();
      for (const auto& b : mb) j["matcher"].push_back(mm::harness::to_json(b));
    }
    if (rb) j["reacquire"] = mm::harness::to_json(*rb);
    emit(a.out, j.dump(2) + "\n");
  }
  return 0;
}

// ---- serve ----

struct ServeArgs {
  std::string config;
  std::string endpoint;
  int max_dim = 0;
};

int run_serve(const ServeArgs& a) {
  mm::ServiceOptions opts = mm::service_options_from_env();
  if (!a.endpoint.empty()) opts.endpoint = mm::parse_endpoint(a.endpoint);
  if (a.max_dim > 0) opts.max_dim = a.max_dim;

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  auto server = mm::serve(engine_config(a.config), opts);
  std::cerr << "listening on " << opts.endpoint.host << ":" << server->port() << "\n";
  int sig = 0;
  sigwait(&set, &sig);
  server->stop();
  std::cerr << "served " << server->sessions_served() << " session(s)\n";
  return 0;
}

// ---- push ----

struct PushArgs {
  std::string fixture;
  std::string endpoint;
  std::string out;
  bool paced = false;
  bool live = false;
  int skip_every = 0;
};

int run_push(const PushArgs& a) {
  mm::Endpoint ep = a.endpoint.empty() ? mm::endpoint_from_env() : mm::parse_endpoint(a.endpoint);
  mm::PushOptions opts;
  opts.as_fast_as_possible = !a.paced;
  opts.live = a.live;
  opts.skip_every = a.skip_every;
  std::ostringstream os;
  for (const auto& line : mm::push_session(a.fixture, ep, opts)) os << line << "\n";
  emit(a.out, os.str());
  return 0;
}

// ---- calibrate ----

struct CalibrateArgs {
  std::string fixture;
  std::string config;
  std::string out;
  std::string marker = "red";
  std::vector<int> region;
  std::size_t frame = 0;
};

int run_calibrate(const CalibrateArgs& a) {
  mm::EngineConfig cfg = engine_config(a.config);
  mm::harness::FixtureReader reader(a.fixture);
  std::optional<mm::harness::SynthFrame> f;
  for (std::size_t i = 0; i <= a.frame; ++i) {
    f = reader.next();
    if (!f) throw mm::ParameterError("fixture has no frame " + std::to_string(a.frame));
  }
  if (a.region.size() != 4) throw mm::ParameterError("--region takes x y width height");
  mm::Rect r{a.region[0], a.region[1], a.region[2], a.region[3]};
  const mm::MarkerTemplate& base = a.marker == "green" ? cfg.green_template : cfg.red_template;
  mm::MarkerTemplate t = mm::calibrate_template(mm::rgb_to_hs(f->frame), r, base);
  emit(a.out, mm::to_json(t).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colour-marker tracking and gesture recognition"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Render a scene script into a fixture file");
  s->add_option("--script", synth.script, "Scene script JSON")->check(CLI::ExistingFile);
  s->add_option("--scenario", synth.scenario, "Built-in scenario name");
  s->add_option("--seed", synth.seed, "Noise seed");
  s->add_option("--out,-o", synth.out, "Output fixture (or script with --dump-script)");
  s->add_flag("--raw", synth.raw, "Store frames uncompressed");
  s->add_flag("--dump-script", synth.dump_script, "Write the scene script JSON instead of frames");

  ReplayArgs replay;
  auto* r = app.add_subcommand("replay", "Run the engine over a fixture and report metrics");
  r->add_option("fixture", replay.fixture, "Fixture file")->required()->check(CLI::ExistingFile);
  r->add_option("--config,-c", replay.config, "Engine configuration JSON")->check(CLI::ExistingFile);
  r->add_option("--out,-o", replay.out, "Metrics output (default stdout)");
  r->add_option("--log", replay.log, "Per-frame report log (JSON lines)");
  r->add_option("--events", replay.events, "Event log in the service's line format");
  r->add_option("--expected", replay.expected, "Comma-separated expected commands");
  r->add_option("--format", replay.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  r->add_flag("--timing", replay.timing, "Include elapsed time in the report log");
  r->add_flag("--strict", replay.strict, "Exit nonzero when expected commands do not match");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Matcher cost and reacquisition benchmarks");
  b->add_option("--suite", bench.suite, "matcher, reacquire or all")
      ->check(CLI::IsMember({"matcher", "reacquire", "all"}));
  b->add_option("--format", bench.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  b->add_option("--out,-o", bench.out, "Output file (default stdout)");
  b->add_option("--reps", bench.reps, "Timing repetitions")->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed, "Frame noise seed");

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Accept frames over TCP and stream events back");
  sv->add_option("--config,-c", serve.config, "Engine configuration JSON")->check(CLI::ExistingFile);
  sv->add_option("--endpoint", serve.endpoint, "host:port (default MM_ENDPOINT or 127.0.0.1:7878)");
  sv->add_option("--max-dim", serve.max_dim, "Largest accepted frame side");

  PushArgs push;
  auto* p = app.add_subcommand("push", "Stream a fixture to a running server");
  p->add_option("fixture", push.fixture, "Fixture file")->required()->check(CLI::ExistingFile);
  p->add_option("--endpoint", push.endpoint, "host:port");
  p->add_option("--out,-o", push.out, "Event lines output (default stdout)");
  p->add_flag("--paced", push.paced, "Send at the fixture's frame times");
  p->add_flag("--live", push.live, "Live mode; the server may drop frames");
  p->add_option("--skip-every", push.skip_every, "Only send every n-th frame");

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Sample a marker reference colour from a fixture frame");
  c->add_option("fixture", cal.fixture, "Fixture file")->required()->check(CLI::ExistingFile);
  c->add_option("--region", cal.region, "x y width height")->required()->expected(4);
  c->add_option("--frame", cal.frame, "Frame index");
  c->add_option("--marker", cal.marker, "red or green")->check(CLI::IsMember({"red", "green"}));
  c->add_option("--config,-c", cal.config, "Engine configuration JSON")->check(CLI::ExistingFile);
  c->add_option("--out,-o", cal.out, "Template JSON output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s) return run_synth(synth);
    if (*r) return run_replay(replay);
    if (*b) return run_bench(bench);
    if (*sv) return run_serve(serve);
    if (*p) return run_push(push);
    if (*c) return run_calibrate(cal);
  } catch (const mm::ConfigError& e) {
    std::cerr << "config error at " << e.field() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
