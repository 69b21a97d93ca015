#pragma once

#include <string>

#include "hb/proto/frame.hpp"

namespace hb::proto {

struct TransportError : Error {
  using Error::Error;
};

// Thin RAII wrapper over a connected stream socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  static Socket connect_tcp(const std::string& host, std::uint16_t port);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  void shutdown_close();

  void write_all(const void* data, std::size_t size);
  void read_exact(void* data, std::size_t size);  // TransportError on EOF

  void send_frame(const Frame& frame, const FrameObserver& observer = nullptr);
  Frame recv_frame(const FrameObserver& observer = nullptr);

 private:
  int fd_ = -1;
};

}  // namespace hb::proto
