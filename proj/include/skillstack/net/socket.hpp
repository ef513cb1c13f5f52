// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace skillstack::net {

class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Owning file descriptor of a TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close();
  // Unblocks pending reads and writes on other threads.
  void shutdown();

  // Throws NetError when the peer is gone.
  void send_all(std::span<const std::uint8_t> data);
  // Waits up to `timeout` for data. Returns 0 bytes on timeout, nullopt on EOF.
  std::optional<std::size_t> recv_some(std::span<std::uint8_t> buf, std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
};

// Listening socket bound to address:port (port 0 picks a free port).
class Listener {
 public:
  Listener(const std::string& address, std::uint16_t port);
  std::uint16_t port() const { return port_; }
  // Returns an invalid socket on timeout or after close().
  Socket accept(std::chrono::milliseconds timeout);
  void close() { sock_.shutdown(); sock_.close(); }

 private:
  Socket sock_;
  std::uint16_t port_ = 0;
};

Socket connect_tcp(const std::string& host, std::uint16_t port,
                   std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

}  // namespace skillstack::net
