#include "egress/session.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "egress/error.hpp"
#include "egress/scenarios.hpp"

namespace egress::service {

std::string_view mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::Editing: return "editing";
    case Mode::Running: return "running";
    case Mode::Paused: return "paused";
    case Mode::Ended: return "ended";
  }
  return "editing";
}

std::string_view error_kind_name(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::BadMessage: return "BadMessage";
    case ErrorKind::BadState: return "BadState";
    case ErrorKind::NoExit: return "NoExit";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
  }
  return "BadMessage";
}

Json error_event(ErrorKind kind, std::string_view detail) {
  return {{"type", "error"}, {"code", error_kind_name(kind)}, {"detail", detail}};
}

namespace {

[[noreturn]] void bad_message(const std::string& detail) {
  throw ProtocolError(ErrorKind::BadMessage, detail);
}

[[noreturn]] void bad_state(const std::string& detail) {
  throw ProtocolError(ErrorKind::BadState, detail);
}

template <typename T>
T field_or(const Json& msg, const char* key, T fallback) {
  const auto it = msg.find(key);
  if (it == msg.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    bad_message(fmt::format("field '{}' has the wrong type", key));
  }
}

std::uint32_t count_field(const Json& msg, const char* key, std::uint32_t fallback) {
  const auto it = msg.find(key);
  if (it == msg.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0 ||
      it->get<std::int64_t>() > static_cast<std::int64_t>(UINT32_MAX)) {
    bad_message(fmt::format("field '{}' must be a non-negative integer", key));
  }
  return it->get<std::uint32_t>();
}

int coord_field(const Json& msg, const char* key) {
  const auto it = msg.find(key);
  if (it == msg.end() || !it->is_number_integer()) {
    bad_message(fmt::format("field '{}' must be an integer", key));
  }
  const auto v = it->get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) {
    throw ProtocolError(ErrorKind::OutOfBounds, fmt::format("{} = {} is outside the world", key, v));
  }
  return static_cast<int>(v);
}

Json world_rows(const World& w) {
  Json rows = Json::array();
  const auto text = serialize_world(w);
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string::npos) {
      rows.push_back(text.substr(start));
      break;
    }
    rows.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return rows;
}

[[noreturn]] void rethrow_sim_error(const SimError& e) {
  if (e.code() == ErrorCode::NoExit) throw ProtocolError(ErrorKind::NoExit, e.what());
  bad_message(e.what());
}

}  // namespace

Json stats_json(const RunStats& s) {
  return {{"total_citizens", s.total_citizens},
          {"successful_escapes", s.successful_escapes},
          {"failed_evacuations", s.failed_evacuations},
          {"total_contagions", s.total_contagions},
          {"pct_panicked", s.percentages.panicked},
          {"pct_alerted", s.percentages.alerted},
          {"pct_calm", s.percentages.calm},
          {"duration", s.duration}};
}

Json snapshot_json(const Snapshot& snap) {
  Json agents = Json::array();
  for (const auto& a : snap.agents) {
    agents.push_back({{"id", a.id},
                      {"kind", a.authority ? "authority" : "citizen"},
                      {"x", a.x},
                      {"y", a.y},
                      {"state", state_name(a.state)},
                      {"color", a.color()},
                      {"guided", a.guided},
                      {"failed", a.failed}});
  }
  Json patches = Json::array();
  for (const auto& p : snap.changed_patches) {
    patches.push_back({{"x", p.coord.x}, {"y", p.coord.y}, {"kind", kind_name(p.kind)}});
  }
  return {{"type", "snapshot"},
          {"tick", snap.tick},
          {"agents", std::move(agents)},
          {"stats", stats_json(snap.stats)},
          {"patches", std::move(patches)},
          {"revision", snap.revision}};
}

Session::Session(std::string id, int width, int height, double tick_rate)
    : id_(std::move(id)), draft_(width, height), tick_rate_(tick_rate) {}

Json Session::session_event() const {
  return {{"type", "session"},
          {"session_id", id_},
          {"mode", mode_name(mode_)},
          {"width", draft_.width()},
          {"height", draft_.height()},
          {"tick_rate", tick_rate_},
          {"world", world_rows(state_ ? state_->config.world : draft_)}};
}

Json Session::take_snapshot(bool with_world) {
  Json j;
  if (state_) {
    j = snapshot_json(snapshot(*state_, sent_revision_));
    sent_revision_ = state_->revision;
  } else {
    j = snapshot_json(Snapshot{});
  }
  j["session_id"] = id_;
  j["mode"] = mode_name(mode_);
  if (with_world) j["world"] = world_rows(state_ ? state_->config.world : draft_);
  return j;
}

std::uint32_t Session::ticks_per_event(double max_events_per_second) const noexcept {
  if (max_events_per_second <= 0.0 || tick_rate_ <= max_events_per_second) return 1;
  return static_cast<std::uint32_t>(std::ceil(tick_rate_ / max_events_per_second));
}

std::vector<Json> Session::step_ticks(std::uint32_t ticks) {
  for (std::uint32_t i = 0; i < ticks && state_->phase == Phase::Running; ++i) tick(*state_);
  if (state_->phase == Phase::Ended) mode_ = Mode::Ended;
  std::vector<Json> out{take_snapshot(false)};
  if (mode_ == Mode::Ended) {
    out.push_back({{"type", "ended"},
                   {"session_id", id_},
                   {"tick", state_->tick},
                   {"stats", stats_json(state_->stats)}});
  }
  return out;
}

std::vector<Json> Session::advance(std::uint32_t ticks) {
  if (mode_ != Mode::Running || !state_) return {};
  return step_ticks(std::max<std::uint32_t>(ticks, 1));
}

void Session::pause() noexcept {
  if (mode_ == Mode::Running) mode_ = Mode::Paused;
}

std::vector<Json> Session::on_load_preset(const Json& msg) {
  if (mode_ == Mode::Running) bad_state("pause before loading a preset");
  const auto name = field_or<std::string>(msg, "name", "");
  if (name.empty()) bad_message("load_preset needs a 'name'");
  try {
    draft_ = load_preset(name).world;
  } catch (const SimError& e) {
    bad_message(e.what());
  }
  state_.reset();
  sent_revision_ = 0;
  mode_ = Mode::Editing;
  return {session_event()};
}

std::vector<Json> Session::on_set_patch(const Json& msg) {
  if (mode_ != Mode::Editing && mode_ != Mode::Paused) {
    bad_state(fmt::format("set_patch is not allowed while {}", mode_name(mode_)));
  }
  const Coord c{coord_field(msg, "x"), coord_field(msg, "y")};
  const auto kind_text = field_or<std::string>(msg, "kind", "");
  auto kind = kind_from_name(kind_text);
  if (!kind && kind_text == "erase") kind = PatchKind::Empty;
  if (!kind) bad_message(fmt::format("unknown patch kind '{}'", kind_text));
  if (!draft_.in_bounds(c)) {
    throw ProtocolError(ErrorKind::OutOfBounds,
                        fmt::format("({}, {}) is outside the {}x{} world", c.x, c.y,
                                    draft_.width(), draft_.height()));
  }

  if (state_) {
    const World& live = state_->config.world;
    if (*kind == PatchKind::Structure) {
      const auto occupied = [&](Position p) { return patch_at(p) == c; };
      const bool taken =
          std::any_of(state_->citizens.begin(), state_->citizens.end(),
                      [&](const Citizen& a) { return occupied(a.position); }) ||
          std::any_of(state_->authorities.begin(), state_->authorities.end(),
                      [&](const Authority& a) { return occupied(a.position); });
      if (taken) bad_state(fmt::format("patch ({}, {}) is occupied by an agent", c.x, c.y));
    }
    if (live.at(c) == PatchKind::Exit && *kind != PatchKind::Exit &&
        live.count(PatchKind::Exit) == 1) {
      throw ProtocolError(ErrorKind::NoExit, "cannot remove the last exit during a run");
    }
    apply_patch_edit(*state_, c, *kind);
  }
  draft_.set(c, *kind);
  return {{{"type", "patch"}, {"session_id", id_}, {"x", c.x}, {"y", c.y},
           {"kind", kind_name(*kind)}}};
}

std::vector<Json> Session::on_setup(const Json& msg) {
  if (mode_ == Mode::Running) bad_state("pause before running setup again");
  SimConfig config;
  config.world = draft_;
  config.initial_population = count_field(msg, "population", config.initial_population);
  config.initial_authorities = count_field(msg, "authorities", config.initial_authorities);
  config.spawn_exit_authority =
      field_or<bool>(msg, "spawn_exit_authority", config.spawn_exit_authority);
  config.seed = field_or<std::uint64_t>(msg, "seed", config.seed);
  config.deadline = count_field(msg, "deadline", config.deadline);
  config.hazards = count_field(msg, "hazards", 0);
  config.authorities_wander = field_or<bool>(msg, "authorities_wander", false);
  if (const auto it = msg.find("tick_rate"); it != msg.end()) {
    if (!it->is_number() || it->get<double>() <= 0.0) bad_message("tick_rate must be positive");
    tick_rate_ = it->get<double>();
  }
  try {
    state_.emplace(setup(config));
  } catch (const SimError& e) {
    rethrow_sim_error(e);
  }
  sent_revision_ = 0;
  mode_ = state_->phase == Phase::Ended ? Mode::Ended : Mode::Paused;
  return {session_event(), take_snapshot(false)};
}

std::vector<Json> Session::on_clear(const Json& msg) {
  const auto scope = field_or<std::string>(msg, "scope", "turtles");
  if (scope == "all") {
    draft_ = World(draft_.width(), draft_.height());
  } else if (scope != "turtles") {
    bad_message(fmt::format("unknown clear scope '{}'", scope));
  }
  state_.reset();
  sent_revision_ = 0;
  mode_ = Mode::Editing;
  return {session_event()};
}

std::vector<Json> Session::handle(const Json& msg) {
  const auto type = field_or<std::string>(msg, "type", "");
  if (type == "load_preset") return on_load_preset(msg);
  if (type == "set_patch") return on_set_patch(msg);
  if (type == "setup") return on_setup(msg);
  if (type == "clear") return on_clear(msg);
  if (type == "get_snapshot") return {take_snapshot(true)};
  if (type == "run") {
    if (mode_ == Mode::Running) return {session_event()};
    if (mode_ != Mode::Paused || !state_) bad_state("run needs a set-up, unfinished simulation");
    mode_ = Mode::Running;
    return {session_event()};
  }
  if (type == "pause") {
    if (mode_ != Mode::Running && mode_ != Mode::Paused) bad_state("nothing is running");
    mode_ = Mode::Paused;
    return {session_event()};
  }
  if (type == "step") {
    if (mode_ != Mode::Paused || !state_) bad_state("step is only allowed while paused");
    const auto n = count_field(msg, "n", 1);
    if (n < 1) bad_message("step needs n >= 1");
    return step_ticks(n);
  }
  if (type.empty()) bad_message("message has no 'type'");
  bad_message(fmt::format("unknown message type '{}'", type));
}

std::vector<Json> SessionManager::handle(ConnectionId conn, const Json& msg,
                                         Clock::time_point now) {
  try {
    if (!msg.is_object()) bad_message("message must be a JSON object");
    const auto type = field_or<std::string>(msg, "type", "");
    if (type.empty()) bad_message("missing message type");

    if (type == "create_session") {
      const int w = static_cast<int>(count_field(msg, "width", 61));
      const int h = static_cast<int>(count_field(msg, "height", 61));
      if (w < 1 || h < 1 || w > 1024 || h > 1024) bad_message("world size must be 1..1024");
      double rate = default_tick_rate_;
      if (const auto it = msg.find("tick_rate"); it != msg.end()) {
        if (!it->is_number() || it->get<double>() <= 0.0) bad_message("tick_rate must be positive");
        rate = it->get<double>();
      }
      auto id = fmt::format("s{}", next_id_++);
      auto session = std::make_unique<Session>(id, w, h, rate);
      session->touch(now);
      auto event = session->session_event();
      sessions_.emplace(id, std::move(session));
      bind(conn, id);
      return {std::move(event)};
    }

    std::string id;
    if (const auto it = msg.find("session_id"); it != msg.end() && !it->is_null()) {
      if (!it->is_string()) bad_message("session_id must be a string");
      id = it->get<std::string>();
      if (!sessions_.count(id)) bad_state(fmt::format("no session '{}'", id));
      bind(conn, id);
    } else if (const auto b = bound_session(conn)) {
      id = *b;
    } else {
      bad_state("no session; send create_session first");
    }
    auto& session = *sessions_.at(id);
    session.touch(now);
    return session.handle(msg);
  } catch (const ProtocolError& e) {
    return {error_event(e.kind(), e.what())};
  }
}

std::vector<Json> SessionManager::handle_text(ConnectionId conn, std::string_view text,
                                              Clock::time_point now) {
  Json msg = Json::parse(text, nullptr, false);
  if (msg.is_discarded()) return {error_event(ErrorKind::BadMessage, "malformed JSON")};
  return handle(conn, msg, now);
}

void SessionManager::bind(ConnectionId conn, const std::string& session_id) {
  bindings_[conn] = session_id;
}

void SessionManager::disconnect(ConnectionId conn) {
  const auto it = bindings_.find(conn);
  if (it == bindings_.end()) return;
  const auto id = it->second;
  bindings_.erase(it);
  if (!subscribers(id).empty()) return;
  if (auto* s = find(id)) s->pause();
}

std::vector<std::string> SessionManager::expire_idle(Clock::time_point now,
                                                     Clock::duration timeout) {
  std::vector<std::string> removed;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (it->second->mode() != Mode::Running && now - it->second->last_active() > timeout) {
      removed.push_back(it->first);
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = bindings_.begin(); it != bindings_.end();) {
    if (!sessions_.count(it->second)) {
      it = bindings_.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

Session* SessionManager::find(const std::string& id) {
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.get();
}

std::optional<std::string> SessionManager::bound_session(ConnectionId conn) const {
  const auto it = bindings_.find(conn);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

std::vector<ConnectionId> SessionManager::subscribers(const std::string& session_id) const {
  std::vector<ConnectionId> out;
  for (const auto& [conn, id] : bindings_) {
    if (id == session_id) out.push_back(conn);
  }
  return out;
}

std::vector<std::string> SessionManager::running_sessions() const {
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) {
    if (s->mode() == Mode::Running) out.push_back(id);
  }
  return out;
}

}  // namespace egress::service
