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


// Sessions held in memory and persisted as one JSON-lines event log per
// session under a data directory.

#ifndef RALLYCOACH_COACH_SESSION_STORE_H_
#define RALLYCOACH_COACH_SESSION_STORE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rallycoach/coach/session.h"

namespace rallycoach::coach {

class SessionNotFoundError : public Error {
 public:
  explicit SessionNotFoundError(const std::string& id)
      : Error("unknown session '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

struct StoreOptions {
  std::filesystem::path data_dir;           // session logs; relative datasets
  std::optional<std::filesystem::path> default_dataset;
  EngineConfig defaults;
  LoadOptions load;
};

struct CreateRequest {
  std::optional<std::string> session_id;  // generated when absent
  std::string dataset;                    // empty: the default dataset
  std::string focal;
  std::string opponent;
  std::optional<nlohmann::json> config;   // overrides on top of the defaults
  std::string date;                       // empty: today
};

class SessionStore {
 public:
  explicit SessionStore(StoreOptions options);

  // Replays every *.log in the data directory. Returns the number loaded.
  std::size_t LoadAll();

  std::shared_ptr<const Session> Create(const CreateRequest& request);
  // Throws SessionNotFoundError.
  std::shared_ptr<const Session> Get(const std::string& id) const;
  std::vector<std::string> Ids() const;

  std::shared_ptr<const Session> RecordShot(const std::string& id, const std::string& actor,
                                            const std::string& shot);
  std::shared_ptr<const Session> EndRally(const std::string& id, const std::string& winner,
                                          const std::string& termination);
  std::shared_ptr<const Session> Undo(const std::string& id);

  std::filesystem::path LogPath(const std::string& id) const;
  const StoreOptions& options() const { return options_; }

  // Rebuilds a session from its event log. A torn final line is ignored.
  static Session ReplayLog(const std::filesystem::path& log, const StoreOptions& options,
                           std::function<std::shared_ptr<const Dataset>(const std::string&)>
                               resolve);

 private:
  struct Slot {
    std::mutex write;  // one writer per session
    std::shared_ptr<const Session> snapshot;
  };

  std::shared_ptr<Slot> FindSlot(const std::string& id) const;
  std::shared_ptr<const Session> Mutate(const std::string& id, const SessionEvent& event);
  std::shared_ptr<const Dataset> ResolveDataset(const std::string& ref);
  std::string ResolveRef(const std::string& ref) const;
  void AppendLog(const std::string& id, const SessionEvent& event) const;

  StoreOptions options_;
  mutable std::mutex mu_;  // guards slots_, datasets_, next_id_ and snapshot swaps
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
  std::size_t next_id_ = 1;
};

}  // namespace rallycoach::coach

#endif  // RALLYCOACH_COACH_SESSION_STORE_H_
