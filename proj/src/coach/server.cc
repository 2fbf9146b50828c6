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


#include "rallycoach/coach/server.h"

#include <vector>

#include "httplib.h"
#include "rallycoach/json_io.h"

namespace rallycoach::coach {
namespace {

using nlohmann::json;

Reply ErrorReply(int status, std::string_view type, const std::string& message) {
  return {status, json{{"schema", kApiSchema}, {"error", {{"type", type}, {"message", message}}}}};
}

std::vector<std::string> SplitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::string Field(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body.at(key).is_string()) {
    throw ValidationError(std::string("request needs string field '") + key + "'");
  }
  return body.at(key).get<std::string>();
}

std::string OptionalField(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return "";
  if (!body.at(key).is_string()) {
    throw ValidationError(std::string("field '") + key + "' must be a string");
  }
  return body.at(key).get<std::string>();
}

json TaxonomyJson(const Taxonomy& taxonomy) {
  json shots = json::array();
  for (ShotId s : taxonomy.All()) {
    const ShotType& t = taxonomy.at(s);
    shots.push_back({{"id", t.id},
                     {"category", std::string(CategoryName(t.category))},
                     {"side", std::string(SideName(t.side))}});
  }
  return json{{"schema", kApiSchema}, {"shots", shots}};
}

}  // namespace

CoachServer::CoachServer(SessionStore& store)
    : store_(store), http_(std::make_unique<httplib::Server>()) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    Reply r = Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  http_->Get(R"(/.*)", route);
  http_->Post(R"(/.*)", route);
  http_->Put(R"(/.*)", route);
  http_->Delete(R"(/.*)", route);
}

CoachServer::~CoachServer() = default;

Reply CoachServer::Handle(const std::string& method, const std::string& path,
                          const std::string& body) {
  try {
    json parsed = json::object();
    if (!body.empty()) {
      parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
      if (parsed.is_discarded()) return ErrorReply(400, "bad_request", "body is not valid JSON");
    }
    return Dispatch(method, path, parsed);
  } catch (const SessionNotFoundError& e) {
    return ErrorReply(404, "not_found", e.what());
  } catch (const UnknownShotError& e) {
    return ErrorReply(400, "unknown_shot", e.what());
  } catch (const UnknownPlayerError& e) {
    return ErrorReply(400, "unknown_player", e.what());
  } catch (const ValidationError& e) {
    return ErrorReply(400, "validation", e.what());
  } catch (const ConfigError& e) {
    return ErrorReply(400, "config", e.what());
  } catch (const ParseError& e) {
    return ErrorReply(400, "parse", e.what());
  } catch (const std::exception& e) {
    return ErrorReply(500, "internal", e.what());
  }
}

Reply CoachServer::Dispatch(const std::string& method, const std::string& path,
                            const json& body) {
  const std::vector<std::string> parts = SplitPath(path);
  const bool get = method == "GET";
  const bool post = method == "POST";
  auto wrong_method = [&] { return ErrorReply(405, "method_not_allowed", method + " " + path); };

  if (parts.size() == 1 && parts[0] == "taxonomy") {
    if (!get) return wrong_method();
    return {200, TaxonomyJson(*Taxonomy::Default())};
  }
  if (parts.empty() || parts[0] != "sessions") {
    return ErrorReply(404, "not_found", "no route " + path);
  }

  if (parts.size() == 1) {
    if (get) return {200, json{{"schema", kApiSchema}, {"sessions", store_.Ids()}}};
    if (!post) return wrong_method();
    CreateRequest req;
    if (body.contains("session_id") && !body.at("session_id").is_null()) {
      req.session_id = Field(body, "session_id");
    }
    req.dataset = OptionalField(body, "dataset");
    req.focal = Field(body, "focal");
    req.opponent = Field(body, "opponent");
    req.date = OptionalField(body, "date");
    if (body.contains("config") && !body.at("config").is_null()) req.config = body.at("config");
    return {201, store_.Create(req)->StateJson()};
  }

  const std::string& id = parts[1];
  if (parts.size() == 2) {
    if (!get) return wrong_method();
    return {200, store_.Get(id)->StateJson()};
  }
  if (parts.size() != 3) return ErrorReply(404, "not_found", "no route " + path);

  const std::string& action = parts[2];
  if (action == "shots") {
    if (!post) return wrong_method();
    return {200, store_.RecordShot(id, Field(body, "actor"), Field(body, "shot"))->StateJson()};
  }
  if (action == "rally-end") {
    if (!post) return wrong_method();
    std::string termination = OptionalField(body, "termination");
    if (termination.empty()) termination = "winner_shot";
    return {200, store_.EndRally(id, Field(body, "winner"), termination)->StateJson()};
  }
  if (action == "undo") {
    if (!post) return wrong_method();
    return {200, store_.Undo(id)->StateJson()};
  }
  if (action == "advice") {
    if (!get) return wrong_method();
    auto s = store_.Get(id);
    return {200, ToJson(s->Advise(), s->focal_model().taxonomy())};
  }
  if (action == "whatif") {
    if (!post) return wrong_method();
    auto s = store_.Get(id);
    const Taxonomy& taxonomy = s->focal_model().taxonomy();
    return {200, ToJson(s->WhatIf(taxonomy.Parse(Field(body, "shot"))), taxonomy)};
  }
  if (action == "export") {
    if (!get) return wrong_method();
    return {200, ToJson(store_.Get(id)->Export())};
  }
  return ErrorReply(404, "not_found", "no route " + path);
}

bool CoachServer::Listen(const std::string& host, int port) { return http_->listen(host, port); }

int CoachServer::BindToAnyPort(const std::string& host) { return http_->bind_to_any_port(host); }

bool CoachServer::ListenAfterBind() { return http_->listen_after_bind(); }

void CoachServer::Stop() { http_->stop(); }

void CoachServer::WaitUntilReady() const { http_->wait_until_ready(); }

}  // namespace rallycoach::coach
