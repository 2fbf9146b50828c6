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


// HTTP/JSON front end for a SessionStore. Routes are listed in
// docs/json_schemas.md.

#ifndef RALLYCOACH_COACH_SERVER_H_
#define RALLYCOACH_COACH_SERVER_H_

#include <memory>
#include <string>

#include "json.hpp"
#include "rallycoach/coach/session_store.h"

namespace httplib {
class Server;
}

namespace rallycoach::coach {

struct Reply {
  int status = 200;
  nlohmann::json body;
};

class CoachServer {
 public:
  explicit CoachServer(SessionStore& store);
  ~CoachServer();

  // Transport-free dispatch; the HTTP routes call this.
  Reply Handle(const std::string& method, const std::string& path, const std::string& body);

  // Blocks until Stop().
  bool Listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  Reply Dispatch(const std::string& method, const std::string& path, const nlohmann::json& body);

  SessionStore& store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace rallycoach::coach

#endif  // RALLYCOACH_COACH_SERVER_H_
