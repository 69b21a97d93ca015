#include "hb/proto/socket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace hb::proto {

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    shutdown_close();
    fd_ = o.fd_;
    o.fd_ = -1;
  }
  return *this;
}

Socket::~Socket() { shutdown_close(); }

void Socket::shutdown_close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

Socket Socket::connect_tcp(const std::string& host, std::uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw TransportError("bad host address: " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd);
    throw TransportError(std::string("connect failed: ") + std::strerror(err));
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return Socket(fd);
}

void Socket::write_all(const void* data, std::size_t size) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  while (size > 0) {
    ssize_t n = ::send(fd_, p, size, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw TransportError("send failed");
    }
    p += n;
    size -= static_cast<std::size_t>(n);
  }
}

void Socket::read_exact(void* data, std::size_t size) {
  auto* p = static_cast<std::uint8_t*>(data);
  while (size > 0) {
    ssize_t n = ::recv(fd_, p, size, 0);
    if (n == 0) throw TransportError("connection closed by peer");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("recv failed");
    }
    p += n;
    size -= static_cast<std::size_t>(n);
  }
}

void Socket::send_frame(const Frame& frame, const FrameObserver& observer) {
  if (observer) observer(true, frame);
  auto bytes = encode_frame(frame);
  write_all(bytes.data(), bytes.size());
}

Frame Socket::recv_frame(const FrameObserver& observer) {
  std::uint8_t header[kFrameHeaderBytes];
  read_exact(header, sizeof header);
  MsgType type;
  std::size_t len = decode_frame_header(header, &type);
  Frame f;
  f.type = type;
  f.payload.resize(len);
  if (len) read_exact(f.payload.data(), len);
  if (observer) observer(false, f);
  return f;
}

}  // namespace hb::proto
