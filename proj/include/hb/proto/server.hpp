#pragma once

#include <atomic>
#include <memory>
#include <thread>

#include "hb/proto/messages.hpp"
#include "hb/proto/socket.hpp"
#include "hb/proto/store.hpp"

namespace hb::proto {

struct ServerConfig {
  std::string listen_host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 = ephemeral
  std::string store_root;
  rlwe::ContextPtr ctx;
  unsigned compute_threads = 0;  // per-verify parallelism over templates
  FrameObserver observer;        // test tap on every frame in/out
};

// Enrollment/verification server. Holds only public material: the store is
// validated to contain no secret-key container, and any frame carrying one
// is refused before deserialization. Matching runs entirely on ciphertexts;
// results stream back one frame per gallery template.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();

  std::uint16_t port() const { return port_; }
  GalleryStore& store() { return *store_; }

  void start();
  void stop();

 private:
  void accept_loop();
  void handle_connection(Socket sock);
  void handle_enroll(Socket& sock, const Frame& frame);
  void handle_verify(Socket& sock, const Frame& frame);

  ServerConfig config_;
  std::unique_ptr<GalleryStore> store_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex conn_mu_;
  std::vector<std::thread> conn_threads_;
};

}  // namespace hb::proto
