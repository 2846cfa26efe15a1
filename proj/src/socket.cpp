#include "socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mm/errors.hpp"

namespace mm::net {

namespace {

std::string err(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0)
    throw TransportError("resolve " + host + ": " + gai_strerror(rc));
  return res;
}

}  // namespace

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

bool Connection::fill() {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  std::uint8_t tmp[65536];
  for (;;) {
    const ssize_t n = ::recv(fd_, tmp, sizeof tmp, 0);
    if (n > 0) {
      buf_.insert(buf_.end(), tmp, tmp + n);
      return true;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    throw TransportError(err("recv"));
  }
}

bool Connection::read_exact(std::span<std::uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    if (pos_ == buf_.size() && !fill()) {
      if (got == 0) return false;
      throw TransportError("connection closed mid-message");
    }
    const std::size_t n = std::min(out.size() - got, buf_.size() - pos_);
    std::memcpy(out.data() + got, buf_.data() + pos_, n);
    pos_ += n;
    got += n;
  }
  return true;
}

std::optional<std::uint8_t> Connection::peek() {
  if (pos_ == buf_.size() && !fill()) return std::nullopt;
  return buf_[pos_];
}

std::optional<std::string> Connection::read_line(std::size_t max_len) {
  std::string line;
  for (;;) {
    if (pos_ == buf_.size() && !fill()) {
      if (line.empty()) return std::nullopt;
      return line;
    }
    while (pos_ < buf_.size()) {
      const char c = static_cast<char>(buf_[pos_++]);
      if (c == '\n') return line;
      line.push_back(c);
      if (line.size() > max_len) throw TransportError("line too long");
    }
  }
}

void Connection::write_all(std::span<const std::uint8_t> data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(err("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

void Connection::write_line(const std::string& line) {
  std::string s = line;
  s.push_back('\n');
  write_all({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

void Connection::shutdown_write() { ::shutdown(fd_, SHUT_WR); }
void Connection::shutdown_both() { ::shutdown(fd_, SHUT_RDWR); }

int connect_tcp(const std::string& host, std::uint16_t port) {
  addrinfo* res = resolve(host, port, false);
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  freeaddrinfo(res);
  if (fd < 0) throw TransportError("connect to " + host + ":" + std::to_string(port) + " refused");
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

int listen_tcp(const std::string& host, std::uint16_t& port) {
  addrinfo* res = resolve(host, port, true);
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    freeaddrinfo(res);
    throw TransportError(err("socket"));
  }
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, res->ai_addr, res->ai_addrlen) != 0 || ::listen(fd, 4) != 0) {
    const std::string msg = err("bind/listen");
    freeaddrinfo(res);
    ::close(fd);
    throw TransportError(msg + " on " + host + ":" + std::to_string(port));
  }
  freeaddrinfo(res);
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port = ntohs(addr.sin_port);
  return fd;
}

}  // namespace mm::net
