#include "hb/proto/server.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "hb/log.hpp"
#include "hb/match/matcher.hpp"

namespace hb::proto {

Server::Server(ServerConfig config) : config_(std::move(config)) {
  if (!config_.ctx) throw UsageError("server needs a parameter context");
  store_ = std::make_unique<GalleryStore>(config_.store_root, config_.ctx);
  store_->validate();

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError("socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(config_.port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (config_.listen_host != "127.0.0.1" && config_.listen_host != "localhost")
    addr.sin_addr.s_addr = INADDR_ANY;
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(listen_fd_);
    throw TransportError("bind failed");
  }
  if (::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw TransportError("listen failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

Server::~Server() { stop(); }

void Server::start() {
  if (running_.exchange(true)) return;
  accept_thread_ = std::thread([this] { accept_loop(); });
  log::info("server listening on port " + std::to_string(port_));
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard<std::mutex> lock(conn_mu_);
    threads.swap(conn_threads_);
  }
  for (auto& t : threads)
    if (t.joinable()) t.join();
}

void Server::accept_loop() {
  while (running_.load()) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_.load()) return;
      continue;
    }
    std::lock_guard<std::mutex> lock(conn_mu_);
    conn_threads_.emplace_back([this, fd] { handle_connection(Socket(fd)); });
  }
}

void Server::handle_connection(Socket sock) {
  for (;;) {
    Frame frame;
    try {
      frame = sock.recv_frame(config_.observer);
    } catch (const FrameLengthError&) {
      // oversized or garbled length: the stream cannot be resynchronized
      return;
    } catch (const FrameTypeError&) {
      try {
        sock.send_frame(make_error_frame(ErrorCode::kMalformed, "unknown frame type"),
                        config_.observer);
      } catch (const TransportError&) {
      }
      return;  // cannot skip an unknown frame reliably once the type is wrong
    } catch (const TransportError&) {
      return;  // peer went away
    }

    try {
      switch (frame.type) {
        case MsgType::kEnrollReq:
          handle_enroll(sock, frame);
          break;
        case MsgType::kVerifyReq:
          handle_verify(sock, frame);
          break;
        default:
          sock.send_frame(make_error_frame(ErrorCode::kMalformed, "unexpected frame type"),
                          config_.observer);
          break;
      }
    } catch (const TransportError&) {
      return;
    } catch (const std::exception& e) {
      try {
        sock.send_frame(make_error_frame(ErrorCode::kInternal, e.what()), config_.observer);
      } catch (const TransportError&) {
        return;
      }
    }
  }
}

void Server::handle_enroll(Socket& sock, const Frame& frame) {
  EnrollRequest req;
  try {
    req = parse_enroll_request(frame);
  } catch (const SecretKeyRefusedError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kSecretKeyRefused, e.what()), config_.observer);
    return;
  } catch (const DecodeError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kMalformed, e.what()), config_.observer);
    return;
  }
  try {
    EnrollAck ack;
    ack.template_ids = store_->enroll_subject(
        req.subject_id, req.pk_bytes, req.rlk_bytes ? &*req.rlk_bytes : nullptr,
        req.gks_bytes ? &*req.gks_bytes : nullptr, req.templates, req.modality);
    sock.send_frame(encode_enroll_ack(ack), config_.observer);
    log::info("enrolled subject " + req.subject_id + " with " +
              std::to_string(req.templates.size()) + " templates");
  } catch (const rlwe::FingerprintMismatchError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kParamsMismatch, e.what()), config_.observer);
  } catch (const KeyMaterialError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kSecretKeyRefused, e.what()), config_.observer);
  } catch (const DecodeError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kMalformed, e.what()), config_.observer);
  } catch (const UsageError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kMalformed, e.what()), config_.observer);
  }
}

void Server::handle_verify(Socket& sock, const Frame& frame) {
  VerifyRequest req;
  try {
    req = parse_verify_request(frame);
  } catch (const SecretKeyRefusedError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kSecretKeyRefused, e.what()), config_.observer);
    return;
  } catch (const DecodeError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kMalformed, e.what()), config_.observer);
    return;
  }
  if (req.mode != 1 && req.mode != 2) {
    sock.send_frame(make_error_frame(ErrorCode::kUnsupportedMode, "mode must be 1 or 2"),
                    config_.observer);
    return;
  }
  auto record = store_->lookup(req.subject_id);
  if (!record) {
    sock.send_frame(make_error_frame(ErrorCode::kNotEnrolled, req.subject_id), config_.observer);
    return;
  }

  const auto& ctx = *config_.ctx;
  rlwe::Ciphertext probe;
  try {
    probe = rlwe::parse_ciphertext(ctx, req.probe_ct);
  } catch (const rlwe::FingerprintMismatchError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kParamsMismatch, e.what()), config_.observer);
    return;
  } catch (const DecodeError& e) {
    sock.send_frame(make_error_frame(ErrorCode::kMalformed, e.what()), config_.observer);
    return;
  }

  auto mode = req.mode == 1 ? match::MatchMode::kEuclid : match::MatchMode::kInnerProd;
  std::optional<rlwe::RelinKey> rlk;
  std::optional<rlwe::GaloisKeySet> gks;
  if (mode == match::MatchMode::kInnerProd) {
    if (record->rlk_path.empty() || record->gks_path.empty()) {
      sock.send_frame(make_error_frame(ErrorCode::kKeyMaterial,
                                       "inner-product mode needs relin and Galois keys uploaded "
                                       "at enrollment"),
                      config_.observer);
      return;
    }
    rlk = rlwe::parse_relin_key(ctx, store_->read_blob(record->rlk_path));
    gks = rlwe::parse_galois_keys(ctx, store_->read_blob(record->gks_path));
  }

  // compute per gallery template, streaming results in enrollment order
  std::vector<rlwe::Ciphertext> gallery(record->templates.size());
  for (std::size_t i = 0; i < record->templates.size(); ++i)
    gallery[i] = rlwe::parse_ciphertext(ctx, store_->read_blob(record->templates[i].ct_path));

  std::vector<std::vector<std::uint8_t>> results(gallery.size());
  parallel_for(
      gallery.size(),
      [&](std::size_t i) {
        auto enc = match::server_compute(ctx, mode, probe, gallery[i],
                                         rlk ? &*rlk : nullptr, gks ? &*gks : nullptr);
        results[i] = rlwe::serialize_ciphertext(ctx, enc);
      },
      config_.compute_threads);

  for (std::size_t i = 0; i < results.size(); ++i) {
    VerifyRespItem item;
    item.entry_index = static_cast<std::uint32_t>(i);
    item.rotation = record->templates[i].rotation;
    item.result_ct = std::move(results[i]);
    sock.send_frame(encode_verify_resp_item(item), config_.observer);
  }
  sock.send_frame(Frame{MsgType::kVerifyDone, {}}, config_.observer);
}

}  // namespace hb::proto
