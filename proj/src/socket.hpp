#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mm::net {

/// Owning file descriptor for a connected TCP socket with a small read buffer.
class Connection {
 public:
  explicit Connection(int fd) : fd_(fd) {}
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  int fd() const noexcept { return fd_; }

  /// False on clean EOF before any byte; throws TransportError on error or
  /// EOF mid-read.
  bool read_exact(std::span<std::uint8_t> out);
  std::optional<std::uint8_t> peek();
  /// Line without its '\n'; nullopt on EOF. Throws TransportError when the line exceeds `max_len`.
  std::optional<std::string> read_line(std::size_t max_len = 1 << 16);

  void write_all(std::span<const std::uint8_t> data);
  void write_line(const std::string& line);

  void shutdown_write();
  void shutdown_both();

 private:
  bool fill();
  int fd_;
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

int connect_tcp(const std::string& host, std::uint16_t port);
/// Returns the listening fd; `port` is updated with the bound port.
int listen_tcp(const std::string& host, std::uint16_t& port);

}  // namespace mm::net
