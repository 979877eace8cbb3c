#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

namespace egress::service {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  double tick_rate = 10.0;    // default ticks per second for new sessions
  double max_events_per_second = 30.0;
  std::chrono::seconds idle_timeout{30 * 60};
};

/// Serves the session protocol on one port. A client that opens with an HTTP
/// `GET` is upgraded to WebSocket (one JSON message per text frame); anything else
/// is treated as newline-delimited JSON over plain TCP.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting. Returns the bound port.
  std::uint16_t listen();

  /// Runs the event loop on the calling thread until stop().
  void run();

  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace egress::service
