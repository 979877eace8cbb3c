#include "egress/server.hpp"

#include <deque>
#include <map>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "egress/session.hpp"

namespace egress::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using boost::system::error_code;

namespace {

constexpr std::size_t kMaxMessageBytes = 1 << 20;

struct Hub {
  virtual ~Hub() = default;
  virtual void on_message(ConnectionId conn, std::string_view text) = 0;
  virtual void on_closed(ConnectionId conn) = 0;
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(Hub& server, ConnectionId id) : server_(server), id_(id) {}
  virtual ~Connection() = default;

  ConnectionId id() const noexcept { return id_; }
  virtual void start() = 0;
  virtual void send(std::string text) = 0;
  virtual void close() = 0;

 protected:
  Hub& server_;
  ConnectionId id_;
};

class LineConnection final : public Connection {
 public:
  LineConnection(Hub& server, ConnectionId id, tcp::socket socket)
      : Connection(server, id), socket_(std::move(socket)), buffer_(kMaxMessageBytes) {}

  void start() override { read(); }

  void send(std::string text) override {
    text.push_back('\n');
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void close() override {
    error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
  }

 private:
  void read() {
    asio::async_read_until(socket_, buffer_, '\n',
                           [self = shared_from_this(), this](error_code ec, std::size_t n) {
                             if (ec) return server_.on_closed(id_);
                             std::string line(asio::buffers_begin(buffer_.data()),
                                              asio::buffers_begin(buffer_.data()) +
                                                  static_cast<std::ptrdiff_t>(n));
                             buffer_.consume(n);
                             while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
                               line.pop_back();
                             }
                             if (line.find_first_not_of(" \t") != std::string::npos) {
                               server_.on_message(id_, line);
                             }
                             read();
                           });
  }

  void write() {
    asio::async_write(socket_, asio::buffer(queue_.front()),
                      [self = shared_from_this(), this](error_code ec, std::size_t) {
                        if (ec) return close();
                        queue_.pop_front();
                        if (!queue_.empty()) write();
                      });
  }

  tcp::socket socket_;
  asio::streambuf buffer_;
  std::deque<std::string> queue_;
};

class WsConnection final : public Connection {
 public:
  WsConnection(Hub& server, ConnectionId id, tcp::socket socket)
      : Connection(server, id), ws_(std::move(socket)) {}

  void start() override {
    ws_.read_message_max(kMaxMessageBytes);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this(), this](error_code ec) {
      if (ec) return server_.on_closed(id_);
      open_ = true;
      read();
    });
  }

  void send(std::string text) override {
    if (!open_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void close() override {
    if (!open_) return;
    open_ = false;
    ws_.async_close(websocket::close_code::going_away,
                    [self = shared_from_this()](error_code) {});
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this(), this](error_code ec, std::size_t) {
      if (ec) {
        open_ = false;
        return server_.on_closed(id_);
      }
      const auto text = beast::buffers_to_string(buffer_.data());
      buffer_.consume(buffer_.size());
      server_.on_message(id_, text);
      read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this(), this](error_code ec, std::size_t) {
                      if (ec) {
                        queue_.clear();
                        return;
                      }
                      queue_.pop_front();
                      if (!queue_.empty()) write();
                    });
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool open_ = false;
};

}  // namespace

struct Server::Impl final : Hub {
  explicit Impl(ServerOptions o) : options(std::move(o)), manager(options.tick_rate) {}

  ServerOptions options;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  SessionManager manager;
  ConnectionId next_conn = 1;
  std::map<ConnectionId, std::weak_ptr<Connection>> connections;
  std::map<std::string, std::shared_ptr<asio::steady_timer>> streams;
  asio::steady_timer sweeper{ioc};

  void accept();
  void sniff(std::shared_ptr<tcp::socket> socket);
  void adopt(std::shared_ptr<Connection> conn);

  void on_message(ConnectionId conn, std::string_view text) override;
  void on_closed(ConnectionId conn) override;
  void broadcast(const std::string& session_id, const std::vector<Json>& events);
  void sync_streams();
  void schedule(const std::string& session_id);
  void sweep();
};

void Server::Impl::accept() {
  acceptor.async_accept([this](error_code ec, tcp::socket socket) {
    if (ec == asio::error::operation_aborted) return;
    if (!ec) sniff(std::make_shared<tcp::socket>(std::move(socket)));
    accept();
  });
}

void Server::Impl::sniff(std::shared_ptr<tcp::socket> socket) {
  // Peek so the protocol handler still sees the first byte.
  auto first = std::make_shared<char>('\0');
  socket->async_receive(asio::buffer(first.get(), 1), tcp::socket::message_peek,
                        [this, socket, first](error_code ec, std::size_t n) {
                          if (ec || n == 0) return;
                          const ConnectionId id = next_conn++;
                          if (*first == 'G') {
                            adopt(std::make_shared<WsConnection>(*this, id, std::move(*socket)));
                          } else {
                            adopt(std::make_shared<LineConnection>(*this, id, std::move(*socket)));
                          }
                        });
}

void Server::Impl::adopt(std::shared_ptr<Connection> conn) {
  connections[conn->id()] = conn;
  conn->start();
}

void Server::Impl::on_message(ConnectionId conn_id, std::string_view text) {
  const auto events = manager.handle_text(conn_id, text);
  if (const auto it = connections.find(conn_id); it != connections.end()) {
    if (auto conn = it->second.lock()) {
      for (const auto& e : events) conn->send(e.dump());
    }
  }
  sync_streams();
}

void Server::Impl::on_closed(ConnectionId conn) {
  connections.erase(conn);
  manager.disconnect(conn);
}

void Server::Impl::broadcast(const std::string& session_id, const std::vector<Json>& events) {
  for (const auto conn_id : manager.subscribers(session_id)) {
    const auto it = connections.find(conn_id);
    if (it == connections.end()) continue;
    if (auto conn = it->second.lock()) {
      for (const auto& e : events) conn->send(e.dump());
    }
  }
}

void Server::Impl::sync_streams() {
  for (const auto& id : manager.running_sessions()) {
    if (!streams.count(id)) schedule(id);
  }
}

void Server::Impl::schedule(const std::string& session_id) {
  auto* session = manager.find(session_id);
  if (!session) return;
  const auto ticks = session->ticks_per_event(options.max_events_per_second);
  const auto delay = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(ticks / session->tick_rate()));
  auto& timer = streams[session_id];
  if (!timer) timer = std::make_shared<asio::steady_timer>(ioc);
  timer->expires_after(delay);
  timer->async_wait([this, session_id, ticks, keep = timer](error_code ec) {
    if (ec) return;
    auto* s = manager.find(session_id);
    if (!s || s->mode() != Mode::Running) {
      streams.erase(session_id);
      return;
    }
    broadcast(session_id, s->advance(ticks));
    if (s->mode() == Mode::Running) {
      schedule(session_id);
    } else {
      streams.erase(session_id);
    }
  });
}

void Server::Impl::sweep() {
  sweeper.expires_after(std::chrono::seconds(30));
  sweeper.async_wait([this](error_code ec) {
    if (ec) return;
    for (const auto& id : manager.expire_idle(Clock::now(), options.idle_timeout)) {
      streams.erase(id);
    }
    sweep();
  });
}

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() = default;

std::uint16_t Server::listen() {
  auto& i = *impl_;
  const tcp::endpoint ep(asio::ip::make_address(i.options.address), i.options.port);
  i.acceptor.open(ep.protocol());
  i.acceptor.set_option(asio::socket_base::reuse_address(true));
  i.acceptor.bind(ep);
  i.acceptor.listen();
  i.accept();
  i.sweep();
  return i.acceptor.local_endpoint().port();
}

void Server::run() { impl_->ioc.run(); }

void Server::stop() {
  asio::post(impl_->ioc, [&i = *impl_] {
    error_code ec;
    i.acceptor.close(ec);
    i.sweeper.cancel();
    for (auto& [id, timer] : i.streams) timer->cancel();
    for (auto& [id, weak] : i.connections) {
      if (auto c = weak.lock()) c->close();
    }
    i.ioc.stop();
  });
}

}  // namespace egress::service
