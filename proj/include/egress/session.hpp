#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "egress/engine.hpp"
#include "egress/world.hpp"
#include "json.hpp"

namespace egress::service {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

enum class Mode { Editing, Running, Paused, Ended };
std::string_view mode_name(Mode m) noexcept;

/// Protocol error codes carried by `error` events.
enum class ErrorKind { BadMessage, BadState, NoExit, OutOfBounds };
std::string_view error_kind_name(ErrorKind k) noexcept;

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

Json error_event(ErrorKind kind, std::string_view detail);

/// Snapshot payload shared by the service and its tests.
Json snapshot_json(const Snapshot& snap);
Json stats_json(const RunStats& stats);

/// One interactive simulation: a draft world, an optional engine state and a mode.
/// Not thread-safe; the owner serialises calls.
class Session {
 public:
  Session(std::string id, int width, int height, double tick_rate);

  const std::string& id() const noexcept { return id_; }
  Mode mode() const noexcept { return mode_; }
  double tick_rate() const noexcept { return tick_rate_; }
  const World& draft_world() const noexcept { return draft_; }
  const SimState* state() const noexcept { return state_ ? &*state_ : nullptr; }

  /// Handles every message type except create_session. Returns the events to send
  /// back, in order. Throws ProtocolError.
  std::vector<Json> handle(const Json& msg);

  /// Ticks per streamed snapshot so that at most `max_events_per_second` are emitted.
  std::uint32_t ticks_per_event(double max_events_per_second) const noexcept;

  /// Advances a Running session by up to `ticks` and emits one snapshot, plus `ended`
  /// if the run finished. No-op (empty) unless Running.
  std::vector<Json> advance(std::uint32_t ticks);

  /// Running -> Paused; used when the last client goes away.
  void pause() noexcept;

  Clock::time_point last_active() const noexcept { return last_active_; }
  void touch(Clock::time_point now) noexcept { last_active_ = now; }

  Json session_event() const;

 private:
  Json take_snapshot(bool with_world);
  std::vector<Json> step_ticks(std::uint32_t ticks);

  std::vector<Json> on_load_preset(const Json& msg);
  std::vector<Json> on_set_patch(const Json& msg);
  std::vector<Json> on_setup(const Json& msg);
  std::vector<Json> on_clear(const Json& msg);

  std::string id_;
  World draft_;
  std::optional<SimState> state_;
  Mode mode_ = Mode::Editing;
  double tick_rate_;
  std::uint64_t sent_revision_ = 0;
  Clock::time_point last_active_ = Clock::now();
};

using ConnectionId = std::uint64_t;

/// Owns all sessions and routes messages from connections to them. A connection is
/// bound to one session at a time: the one it created, or the one named by the
/// `session_id` field of its latest message.
class SessionManager {
 public:
  explicit SessionManager(double default_tick_rate = 10.0) : default_tick_rate_(default_tick_rate) {}

  /// Never throws; protocol failures become `error` events.
  std::vector<Json> handle(ConnectionId conn, const Json& msg,
                           Clock::time_point now = Clock::now());
  std::vector<Json> handle_text(ConnectionId conn, std::string_view text,
                                Clock::time_point now = Clock::now());

  /// Pauses any running session that no longer has a bound connection.
  void disconnect(ConnectionId conn);

  /// Drops sessions that are not running and have had no message for longer than
  /// `timeout`. Returns the ids removed.
  std::vector<std::string> expire_idle(Clock::time_point now, Clock::duration timeout);

  Session* find(const std::string& id);
  std::optional<std::string> bound_session(ConnectionId conn) const;
  std::vector<ConnectionId> subscribers(const std::string& session_id) const;
  std::vector<std::string> running_sessions() const;
  std::size_t size() const noexcept { return sessions_.size(); }

 private:
  void bind(ConnectionId conn, const std::string& session_id);

  double default_tick_rate_;
  std::uint64_t next_id_ = 1;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::map<ConnectionId, std::string> bindings_;
};

}  // namespace egress::service
