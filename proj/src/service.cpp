#include "mm/service.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <span>
#include <variant>

#include <json.hpp>

#include "mm/calibrate.hpp"
#include "mm/errors.hpp"
#include "mm/fifo.hpp"
#include "mm/harness/fixture.hpp"
#include "mm/wire.hpp"
#include "socket.hpp"

namespace mm {

using json = nlohmann::ordered_json;

Endpoint parse_endpoint(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw ParameterError("endpoint must be host:port, got \"" + s + "\"");
  Endpoint e;
  e.host = s.substr(0, colon);
  const std::string port = s.substr(colon + 1);
  char* end = nullptr;
  const long p = std::strtol(port.c_str(), &end, 10);
  if (port.empty() || *end != '\0' || p < 0 || p > 65535) throw ParameterError("bad port in endpoint \"" + s + "\"");
  e.port = static_cast<std::uint16_t>(p);
  if (e.host.empty()) e.host = "127.0.0.1";
  return e;
}

Endpoint endpoint_from_env() {
  if (const char* v = std::getenv("MM_ENDPOINT"); v && *v) return parse_endpoint(v);
  return {};
}

ServiceOptions service_options_from_env(ServiceOptions base) {
  if (const char* v = std::getenv("MM_ENDPOINT"); v && *v) base.endpoint = parse_endpoint(v);
  if (const char* v = std::getenv("MM_MAX_DIM"); v && *v) {
    const int d = std::atoi(v);
    if (d < 1) throw ConfigError("MM_MAX_DIM", "must be a positive integer");
    base.max_dim = d;
  }
  return base;
}

namespace {

struct FrameItem {
  std::uint32_t frame_id;
  std::uint64_t timestamp_us;
  RgbFrame frame;
};

struct CalibrateItem {
  MarkerColor marker;
  HueSat reference;
};

using SessionItem = std::variant<FrameItem, CalibrateItem>;

}  // namespace

Server::Server(EngineConfig cfg, ServiceOptions opts) : cfg_(std::move(cfg)), opts_(std::move(opts)) {
  cfg_.validate();
  port_ = opts_.endpoint.port;
  listen_fd_ = net::listen_tcp(opts_.endpoint.host, port_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

Server::~Server() { stop(); }

void Server::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    if (session_.joinable()) session_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (const int fd = session_fd_.load(); fd >= 0) ::shutdown(fd, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  if (session_.joinable()) session_.join();
}

void Server::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) break;
      continue;
    }
    if (stopping_) {
      ::close(fd);
      break;
    }
    if (busy_) {
      net::Connection c(fd);
      try {
        c.write_line(wire::error_line("busy: one session at a time"));
      } catch (const TransportError&) {
      }
      continue;
    }
    if (session_.joinable()) session_.join();
    busy_ = true;
    session_ = std::thread([this, fd] { run_session(fd); });
  }
}

void Server::run_session(int fd) {
  session_fd_ = fd;
  net::Connection conn(fd);
  std::mutex write_mu;
  auto send = [&](const std::string& line) {
    std::lock_guard lock(write_mu);
    try {
      conn.write_line(line);
    } catch (const TransportError&) {
    }
  };

  Engine engine(cfg_);
  BoundedFifo<SessionItem> fifo(opts_.fifo_capacity, OverflowPolicy::Block);
  send(wire::handshake_line(opts_.max_dim));

  std::thread worker([&] {
    bool failed = false;
    while (auto item = fifo.pop()) {
      if (failed) continue;
      if (auto* f = std::get_if<FrameItem>(&*item)) {
        try {
          const FrameReport rep = engine.process_frame(f->frame, wire::seconds_from_us(f->timestamp_us));
          for (const std::string& line : wire::event_lines(rep, f->frame_id)) send(line);
          send(wire::ack_line(f->frame_id));
        } catch (const std::exception& e) {
          send(wire::error_line(e.what(), f->frame_id));
          failed = true;
          conn.shutdown_both();
        }
      } else {
        const auto& c = std::get<CalibrateItem>(*item);
        MarkerTemplate tpl = c.marker == MarkerColor::Red ? engine.config().red_template : engine.config().green_template;
        tpl.ref_hue = c.reference.hue;
        tpl.ref_sat = c.reference.sat;
        engine.set_template(tpl);
        send(json{{"type", "calibrated"},
                  {"marker", std::string(to_string(c.marker))},
                  {"hue", tpl.ref_hue},
                  {"sat", tpl.ref_sat}}
                 .dump());
      }
    }
  });

  try {
    bool have_last = false;
    std::uint32_t last_id = 0;
    for (;;) {
      const auto first = conn.peek();
      if (!first) break;

      if (*first == '{') {
        const auto line = conn.read_line();
        if (!line) break;
        json msg;
        try {
          msg = json::parse(*line);
        } catch (const json::exception&) {
          send(wire::error_line("malformed control line"));
          continue;
        }
        const std::string type = msg.value("type", "");
        if (type == "mode") {
          const std::string v = msg.value("value", "");
          if (v == "live") fifo.set_policy(OverflowPolicy::DropOldest);
          else if (v == "replay") fifo.set_policy(OverflowPolicy::Block);
          else send(wire::error_line("mode must be \"live\" or \"replay\""));
        } else if (type == "calibrate") {
          const std::string marker = msg.value("marker", "");
          const int hue = msg.value("hue", -1);
          const int sat = msg.value("sat", -1);
          if ((marker != "red" && marker != "green") || hue < 0 || hue >= kHueFull || sat < 0 || sat > kSatMax) {
            send(wire::error_line("calibrate needs marker red|green, hue in [0,36000), sat in [0,10000]"));
          } else if (sat < kMinCalibrationSat) {
            send(wire::error_line("calibration sample is nearly achromatic; sample the coloured marker"));
          } else {
            fifo.push(CalibrateItem{marker == "red" ? MarkerColor::Red : MarkerColor::Green,
                                    {static_cast<std::uint16_t>(hue), static_cast<std::uint16_t>(sat)}});
          }
        } else {
          send(wire::error_line("unknown control message type \"" + type + "\""));
        }
        continue;
      }

      std::array<std::uint8_t, wire::kHeaderSize> head{};
      if (!conn.read_exact(head)) break;
      wire::FrameHeader h;
      try {
        h = wire::decode_header(head);
      } catch (const FormatError& e) {
        send(wire::error_line(e.what()));
        break;
      }
      if (h.pixel_format != wire::kPixelRgb8) {
        send(wire::error_line("unsupported pixel format " + std::to_string(h.pixel_format), h.frame_id));
        break;
      }
      if (have_last && h.frame_id <= last_id) {
        send(wire::error_line("frame_id must increase", h.frame_id));
        break;
      }
      if (h.width == 0 || h.height == 0) {
        send(wire::error_line("frame has zero size", h.frame_id));
        break;
      }
      have_last = true;
      last_id = h.frame_id;

      if (h.width > opts_.max_dim || h.height > opts_.max_dim) {
        // Discard the payload without buffering it so the stream stays in sync.
        std::vector<std::uint8_t> sink(1 << 16);
        for (std::size_t left = h.payload_size(); left > 0;) {
          const std::size_t n = std::min(left, sink.size());
          if (!conn.read_exact(std::span(sink.data(), n))) throw TransportError("connection closed mid-frame");
          left -= n;
        }
        send(wire::error_line("frame exceeds max dims " + std::to_string(opts_.max_dim), h.frame_id));
        continue;
      }
      std::vector<std::uint8_t> payload(h.payload_size());
      if (!conn.read_exact(payload)) throw TransportError("connection closed mid-frame");
      auto evicted = fifo.push(FrameItem{h.frame_id, h.timestamp_us, RgbFrame(h.width, h.height, std::move(payload))});
      if (evicted)
        if (auto* f = std::get_if<FrameItem>(&*evicted))
          send(json{{"type", "dropped"}, {"frame_id", f->frame_id}}.dump());
    }
  } catch (const std::exception& e) {
    send(wire::error_line(e.what()));
  }

  fifo.close();
  worker.join();
  // Release the session slot before the client can observe the close, so an
  // immediate reconnect is not turned away as busy.
  session_fd_ = -1;
  ++sessions_;
  busy_ = false;
  conn.shutdown_both();
}

std::vector<std::string> push_session(const std::string& fixture_path, const Endpoint& endpoint,
                                      const PushOptions& opts) {
  harness::FixtureReader reader(fixture_path);
  net::Connection conn(net::connect_tcp(endpoint.host, endpoint.port));

  const auto hello = conn.read_line();
  if (!hello) throw TransportError("server closed before handshake");
  try {
    const json h = json::parse(*hello);
    if (h.value("proto", 0) != wire::kProtocolVersion) throw TransportError("unexpected handshake: " + *hello);
  } catch (const json::exception&) {
    throw TransportError("malformed handshake: " + *hello);
  }
  if (opts.live) conn.write_line(json{{"type", "mode"}, {"value", "live"}}.dump());

  std::vector<std::string> log;
  // Reads until the ack (or rejection) for `id`; false if the server closed.
  auto await_ack = [&](std::uint32_t id) {
    while (auto line = conn.read_line()) {
      json j;
      try {
        j = json::parse(*line);
      } catch (const json::exception&) {
        log.push_back(*line);
        continue;
      }
      const std::string type = j.value("type", "");
      if (type == "ack" && j.value("frame_id", 0u) == id) return true;
      if (type == "ack") continue;
      log.push_back(*line);
      if (type == "error") {
        if (!j.contains("frame_id")) return false;
        if (j["frame_id"].get<std::uint32_t>() == id) return true;
      }
    }
    return false;
  };

  const auto start = std::chrono::steady_clock::now();
  std::uint32_t index = 0;
  bool open = true;
  while (open) {
    auto f = reader.next();
    if (!f) break;
    const std::uint32_t id = index++;
    if (opts.skip_every > 1 && id % static_cast<std::uint32_t>(opts.skip_every) != 0) continue;
    if (!opts.as_fast_as_possible)
      std::this_thread::sleep_until(start + std::chrono::microseconds(f->t_us));
    try {
      conn.write_all(wire::encode_frame(id, f->t_us, f->frame));
    } catch (const TransportError&) {
      break;
    }
    if (!opts.live) open = await_ack(id);
  }
  conn.shutdown_write();
  while (auto line = conn.read_line()) {
    try {
      if (json::parse(*line).value("type", "") == "ack") continue;
    } catch (const json::exception&) {
    }
    log.push_back(*line);
  }
  return log;
}

}  // namespace mm
