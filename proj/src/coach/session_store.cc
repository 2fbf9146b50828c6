// Copyright 2026 The Rallycoach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rallycoach/coach/session_store.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace rallycoach::coach {
namespace {

using nlohmann::json;

std::string Today() {
  const auto now = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  const std::chrono::year_month_day ymd{now};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

void CheckSessionId(const std::string& id) {
  if (id.empty() || id.size() > 64) throw ValidationError("session id must be 1-64 characters");
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) throw ValidationError("session id '" + id + "' may only use [A-Za-z0-9_-]");
  }
}

}  // namespace

SessionStore::SessionStore(StoreOptions options) : options_(std::move(options)) {
  options_.defaults.Finalize();
  if (!options_.data_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options_.data_dir, ec);
    if (ec) throw Error("cannot create data directory '" + options_.data_dir.string() + "'");
  }
}

std::filesystem::path SessionStore::LogPath(const std::string& id) const {
  return options_.data_dir / (id + ".log");
}

std::string SessionStore::ResolveRef(const std::string& ref) const {
  if (ref.empty() || ref == "default") {
    if (!options_.default_dataset) throw ValidationError("no dataset given and no default set");
    return std::filesystem::absolute(*options_.default_dataset).lexically_normal().string();
  }
  std::filesystem::path p(ref);
  if (p.is_relative() && !options_.data_dir.empty() &&
      std::filesystem::exists(options_.data_dir / p)) {
    p = options_.data_dir / p;
  }
  return std::filesystem::absolute(p).lexically_normal().string();
}

std::shared_ptr<const Dataset> SessionStore::ResolveDataset(const std::string& resolved) {
  {
    std::lock_guard lock(mu_);
    auto it = datasets_.find(resolved);
    if (it != datasets_.end()) return it->second;
  }
  auto d = std::make_shared<const Dataset>(LoadDataset(resolved, options_.load));
  std::lock_guard lock(mu_);
  return datasets_.emplace(resolved, std::move(d)).first->second;
}

void SessionStore::AppendLog(const std::string& id, const SessionEvent& event) const {
  if (options_.data_dir.empty()) return;
  std::ofstream out(LogPath(id), std::ios::binary | std::ios::app);
  out << event.ToJson().dump() << "\n";
  out.flush();
  if (!out) throw Error("failed writing session log for '" + id + "'");
}

std::shared_ptr<const Session> SessionStore::Create(const CreateRequest& request) {
  const std::string ref = ResolveRef(request.dataset);
  auto base = ResolveDataset(ref);
  EngineConfig config = options_.defaults;
  if (request.config) config = ConfigFromJson(*request.config, config);

  auto slot = std::make_shared<Slot>();
  std::string id;
  {
    std::lock_guard lock(mu_);
    if (request.session_id) {
      id = *request.session_id;
      CheckSessionId(id);
    } else {
      do {
        id = "s-" + std::to_string(next_id_++);
      } while (slots_.count(id) != 0 ||
               (!options_.data_dir.empty() && std::filesystem::exists(LogPath(id))));
    }
    if (slots_.count(id) != 0 ||
        (!options_.data_dir.empty() && std::filesystem::exists(LogPath(id)))) {
      throw ValidationError("session '" + id + "' already exists");
    }
    slots_[id] = slot;  // reserve the id
  }
  try {
    std::lock_guard write(slot->write);
    Session s = Session::Create(id, ref, base, request.focal, request.opponent, config,
                                request.date.empty() ? Today() : request.date);
    AppendLog(id, s.CreatedEvent());
    auto snapshot = std::make_shared<const Session>(std::move(s));
    std::lock_guard lock(mu_);
    slot->snapshot = snapshot;
    return snapshot;
  } catch (...) {
    std::lock_guard lock(mu_);
    slots_.erase(id);
    throw;
  }
}

std::shared_ptr<SessionStore::Slot> SessionStore::FindSlot(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end() || !it->second->snapshot) throw SessionNotFoundError(id);
  return it->second;
}

std::shared_ptr<const Session> SessionStore::Get(const std::string& id) const {
  auto slot = FindSlot(id);
  std::lock_guard lock(mu_);
  return slot->snapshot;
}

std::vector<std::string> SessionStore::Ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, slot] : slots_) {
    if (slot->snapshot) ids.push_back(id);
  }
  return ids;
}

std::shared_ptr<const Session> SessionStore::Mutate(const std::string& id,
                                                    const SessionEvent& event) {
  auto slot = FindSlot(id);
  std::lock_guard write(slot->write);
  std::shared_ptr<const Session> current;
  {
    std::lock_guard lock(mu_);
    current = slot->snapshot;
  }
  auto next = std::make_shared<const Session>(current->Apply(event));
  AppendLog(id, event);  // durable before anyone can observe it
  std::lock_guard lock(mu_);
  slot->snapshot = next;
  return next;
}

std::shared_ptr<const Session> SessionStore::RecordShot(const std::string& id,
                                                        const std::string& actor,
                                                        const std::string& shot) {
  SessionEvent e;
  e.kind = SessionEvent::Kind::kShot;
  e.actor = actor;
  e.shot = shot;
  return Mutate(id, e);
}

std::shared_ptr<const Session> SessionStore::EndRally(const std::string& id,
                                                      const std::string& winner,
                                                      const std::string& termination) {
  SessionEvent e;
  e.kind = SessionEvent::Kind::kRallyEnd;
  e.winner = winner;
  e.termination = termination;
  return Mutate(id, e);
}

std::shared_ptr<const Session> SessionStore::Undo(const std::string& id) {
  SessionEvent e;
  e.kind = SessionEvent::Kind::kUndo;
  return Mutate(id, e);
}

Session SessionStore::ReplayLog(
    const std::filesystem::path& log, const StoreOptions& options,
    std::function<std::shared_ptr<const Dataset>(const std::string&)> resolve) {
  std::ifstream in(log, std::ios::binary);
  if (!in) throw Error("cannot read '" + log.string() + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  std::vector<SessionEvent> events;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j = json::parse(lines[i], nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      if (i + 1 == lines.size()) break;  // torn write at crash time
      throw ParseError(log.string() + ": corrupt event", i + 1);
    }
    events.push_back(SessionEvent::FromJson(j));
  }
  if (events.empty() || events.front().kind != SessionEvent::Kind::kCreated) {
    throw ParseError(log.string() + ": log must start with a created event");
  }
  const SessionEvent& c = events.front();
  Session s = Session::Create(c.session_id, c.dataset, resolve(c.dataset), c.focal, c.opponent,
                              ConfigFromJson(c.config, options.defaults), c.date);
  for (std::size_t i = 1; i < events.size(); ++i) s = s.Apply(events[i]);
  return s;
}

std::size_t SessionStore::LoadAll() {
  if (options_.data_dir.empty() || !std::filesystem::exists(options_.data_dir)) return 0;
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(options_.data_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".log") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  std::size_t loaded = 0;
  for (const auto& path : logs) {
    Session s = ReplayLog(path, options_,
                          [this](const std::string& ref) { return ResolveDataset(ref); });
    auto slot = std::make_shared<Slot>();
    slot->snapshot = std::make_shared<const Session>(std::move(s));
    std::lock_guard lock(mu_);
    slots_[slot->snapshot->id()] = slot;
    ++loaded;
  }
  return loaded;
}

}  // namespace rallycoach::coach
