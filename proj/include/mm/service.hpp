#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "mm/pipeline.hpp"

namespace mm {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
};

/// Parses "host:port". Throws ParameterError.
Endpoint parse_endpoint(const std::string& s);

/// Endpoint from MM_ENDPOINT if set, otherwise the default.
Endpoint endpoint_from_env();

struct ServiceOptions {
  Endpoint endpoint;
  int max_dim = 4096;             // frames wider or taller than this are rejected
  std::size_t fifo_capacity = 4;  // frames buffered between reader and engine
};

/// Applies MM_ENDPOINT and MM_MAX_DIM on top of `base`.
ServiceOptions service_options_from_env(ServiceOptions base = {});

/// TCP server speaking the frame/event protocol. One session at a time; a
/// second concurrent client receives an error line and is disconnected.
/// Each session gets a fresh Engine built from the configuration.
///
/// Client to server: binary frame messages (see wire.hpp) interleaved with
/// JSON control lines beginning with '{':
///   {"type":"mode","value":"live"|"replay"}   drop-oldest vs never-drop buffering
///   {"type":"calibrate","marker":"red","hue":<centideg>,"sat":<1e-4 units>}
/// Server to client: a handshake line, then per frame the event lines
/// followed by {"type":"ack","frame_id":n}.
class Server {
 public:
  /// Binds and starts accepting. Throws TransportError if the endpoint cannot
  /// be bound, ConfigError for an invalid configuration.
  Server(EngineConfig cfg, ServiceOptions opts);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::uint64_t sessions_served() const noexcept { return sessions_.load(); }

  /// Stops accepting, ends any active session and joins threads.
  void stop();

 private:
  void accept_loop();
  void run_session(int fd);

  EngineConfig cfg_;
  ServiceOptions opts_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<bool> busy_{false};
  std::atomic<int> session_fd_{-1};
  std::atomic<std::uint64_t> sessions_{0};
  std::thread acceptor_;
  std::thread session_;
};

inline std::unique_ptr<Server> serve(EngineConfig cfg, ServiceOptions opts) {
  return std::make_unique<Server>(std::move(cfg), std::move(opts));
}

struct PushOptions {
  bool as_fast_as_possible = true;  // otherwise paced at the fixture's timestamps
  int skip_every = 0;               // when > 1, drop frames whose index % skip_every != 0
  bool live = false;                // live mode: no ack pacing, server may drop frames
};

/// Headless client: streams a fixture file to a running server and returns
/// every event line received (handshake and ack lines excluded). Throws
/// TransportError when the server cannot be reached.
std::vector<std::string> push_session(const std::string& fixture_path, const Endpoint& endpoint,
                                      const PushOptions& opts = {});

}  // namespace mm
