// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/net/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace skillstack::net {

namespace {

[[noreturn]] void fail(const std::string& what) { throw NetError(what + ": " + std::strerror(errno)); }

bool wait_for(int fd, short events, std::chrono::milliseconds timeout) {
  pollfd p{fd, events, 0};
  for (;;) {
    const int r = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (r < 0 && errno == EINTR) continue;
    if (r < 0) fail("poll");
    return r > 0;
  }
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.fd_;
    o.fd_ = -1;
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::send_all(std::span<const std::uint8_t> data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail("send");
    sent += static_cast<std::size_t>(n);
  }
}

std::optional<std::size_t> Socket::recv_some(std::span<std::uint8_t> buf, std::chrono::milliseconds timeout) {
  if (!wait_for(fd_, POLLIN, timeout)) return std::size_t{0};
  for (;;) {
    const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == ECONNRESET || errno == ENOTCONN)) return std::nullopt;
    if (n < 0) fail("recv");
    if (n == 0) return std::nullopt;
    return static_cast<std::size_t>(n);
  }
}

Listener::Listener(const std::string& address, std::uint16_t port) {
  sock_ = Socket(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!sock_.valid()) fail("socket");
  int one = 1;
  ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
    throw NetError("bind " + address + ":" + std::to_string(port) + ": invalid IPv4 address");
  }
  if (::bind(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    fail("bind " + address + ":" + std::to_string(port));
  }
  if (::listen(sock_.fd(), 64) != 0) fail("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Socket Listener::accept(std::chrono::milliseconds timeout) {
  if (!sock_.valid()) return Socket();
  if (!wait_for(sock_.fd(), POLLIN, timeout)) return Socket();
  const int fd = ::accept4(sock_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) return Socket();
  set_nodelay(fd);
  return Socket(fd);
}

Socket connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw NetError("resolve " + host + ": " + ::gai_strerror(rc));
  }
  Socket s(::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, res->ai_protocol));
  if (!s.valid()) {
    ::freeaddrinfo(res);
    fail("socket");
  }
  const int flags = ::fcntl(s.fd(), F_GETFL);
  ::fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);
  const int rc = ::connect(s.fd(), res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc != 0 && errno != EINPROGRESS) fail("connect " + host + ":" + service);
  if (rc != 0) {
    if (!wait_for(s.fd(), POLLOUT, timeout)) throw NetError("connect " + host + ":" + service + ": timed out");
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      errno = err;
      fail("connect " + host + ":" + service);
    }
  }
  ::fcntl(s.fd(), F_SETFL, flags);
  set_nodelay(s.fd());
  return s;
}

}  // namespace skillstack::net
