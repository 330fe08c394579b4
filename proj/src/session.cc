// Copyright 2026 The cuedist Authors. All Rights Reserved.
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

#include "cuedist/session.h"

#include <cctype>
#include <chrono>
#include <climits>
#include <cstdio>
#include <ctime>
#include <random>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "cuedist/fileio.h"
#include "cuedist/score_csv.h"

namespace cuedist {

using nlohmann::json;

namespace {

[[noreturn]] void Reject(int status, const std::string& what) {
  throw ServiceError(status, ErrorKind::kData, what);
}

uint64_t Fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool SafeId(const std::string& id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' &&
        c != '.') {
      return false;
    }
  }
  return true;
}

std::string NowUtc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string AudioUrl(const std::string& token) { return "/audio/" + token + ".wav"; }

json ConfigJson(const SessionConfig& c) {
  json items = json::array();
  for (const SessionItem& item : c.items) {
    json stimuli = json::array();
    for (const SessionStimulus& s : item.stimuli) {
      stimuli.push_back({{"label", s.label},
                         {"icld_level", LevelName(s.icld_level)},
                         {"icc_level", LevelName(s.icc_level)},
                         {"path", s.path.string()},
                         {"token", s.token}});
    }
    items.push_back({{"item_id", item.item_id},
                     {"reference_path", item.reference_path.string()},
                     {"reference_token", item.reference_token},
                     {"stimuli", std::move(stimuli)}});
  }
  return {{"session_id", c.session_id}, {"subject_id", c.subject_id},
          {"seed", c.seed},             {"scale_min", c.scale_min},
          {"scale_max", c.scale_max},   {"items", std::move(items)}};
}

SessionConfig ConfigFromJson(const json& j) {
  SessionConfig c;
  c.session_id = j.at("session_id").get<std::string>();
  c.subject_id = j.at("subject_id").get<std::string>();
  c.seed = j.at("seed").get<uint64_t>();
  c.scale_min = j.at("scale_min").get<int>();
  c.scale_max = j.at("scale_max").get<int>();
  for (const json& it : j.at("items")) {
    SessionItem item;
    item.item_id = it.at("item_id").get<std::string>();
    item.reference_path = it.at("reference_path").get<std::string>();
    item.reference_token = it.at("reference_token").get<std::string>();
    for (const json& s : it.at("stimuli")) {
      SessionStimulus st;
      st.label = s.at("label").get<std::string>();
      st.icld_level = ParseLevel(s.at("icld_level").get<std::string>());
      st.icc_level = ParseLevel(s.at("icc_level").get<std::string>());
      st.path = s.at("path").get<std::string>();
      st.token = s.at("token").get<std::string>();
      item.stimuli.push_back(std::move(st));
    }
    c.items.push_back(std::move(item));
  }
  return c;
}

void ValidateConfig(const SessionConfig& c) {
  if (!SafeId(c.session_id)) {
    Reject(400, "session id must be 1-128 characters of [A-Za-z0-9._-]");
  }
  if (c.subject_id.empty()) Reject(400, "subject id is empty");
  if (c.scale_min != 0 || c.scale_max != 100) {
    Reject(400, "the rating scale must be [0, 100]");
  }
  if (c.items.empty()) Reject(400, "session has no items");
  std::set<std::string> ids;
  for (const SessionItem& item : c.items) {
    if (!ids.insert(item.item_id).second) {
      Reject(400, "item " + item.item_id + " listed twice");
    }
    std::set<std::string> labels;
    int refs = 0, anchors = 0;
    for (const SessionStimulus& s : item.stimuli) {
      if (!labels.insert(s.label).second) {
        Reject(400, "item " + item.item_id + " repeats a condition");
      }
      refs += s.label == kHiddenRefLabel;
      anchors += s.label == kAnchorLabel;
      if (!std::filesystem::exists(s.path)) {
        Reject(400, "stimulus file '" + s.path.string() + "' does not exist");
      }
    }
    if (refs != 1 || anchors != 1) {
      Reject(400, "item " + item.item_id +
                      " needs exactly one hidden reference and one anchor");
    }
    if (!std::filesystem::exists(item.reference_path)) {
      Reject(400, "reference file '" + item.reference_path.string() +
                      "' does not exist");
    }
  }
}

}  // namespace

SessionConfig SessionFromManifest(const std::vector<ManifestEntry>& manifest,
                                  const std::string& session_id,
                                  const std::string& subject_id, uint64_t seed,
                                  const std::vector<std::string>& items) {
  std::vector<std::string> order = items;
  std::map<std::string, SessionItem> by_item;
  for (const ManifestEntry& e : manifest) {
    auto [it, inserted] = by_item.try_emplace(e.item);
    if (inserted) {
      it->second.item_id = e.item;
      it->second.reference_path = e.reference_path;
      if (items.empty()) order.push_back(e.item);
    }
    it->second.stimuli.push_back({e.label, e.icld_level, e.icc_level, e.path, ""});
  }
  SessionConfig c;
  c.session_id = session_id;
  c.subject_id = subject_id;
  c.seed = seed;
  for (const std::string& id : order) {
    const auto it = by_item.find(id);
    if (it == by_item.end()) Reject(400, "item " + id + " is not in the manifest");
    c.items.push_back(it->second);
  }
  ValidateConfig(c);
  return c;
}

std::vector<size_t> PresentationOrder(uint64_t seed, const std::string& subject,
                                      const std::string& item, size_t n) {
  uint64_t state = seed;
  state = SplitMix64(state) ^ Fnv1a(subject);
  state = SplitMix64(state) ^ Fnv1a(item);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with rejection sampling, so the order is portable.
  for (size_t i = n; i > 1; --i) {
    const uint64_t bound = i;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t r;
    do r = SplitMix64(state); while (r >= limit);
    std::swap(order[i - 1], order[r % bound]);
  }
  return order;
}

// -------------------------------------------------------------- the store

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "session.json")) {
      Load(entry.path());
    }
  }
}

void SessionStore::ApplyRatingLine(Session& s, const std::string& line) {
  const json j = json::parse(line);
  auto& slot = s.ratings[j.at("item_id").get<std::string>()];
  slot = j.at("scores").get<std::map<std::string, int>>();
}

void SessionStore::Load(const std::filesystem::path& dir) {
  auto session = std::make_unique<Session>();
  try {
    session->config = ConfigFromJson(json::parse(ReadFileText(dir / "session.json")));
  } catch (const json::exception& e) {
    Fail(ErrorKind::kData, (dir / "session.json").string() + ": " + e.what());
  }
  const auto ratings = dir / "ratings.jsonl";
  if (std::filesystem::exists(ratings)) {
    const std::string text = ReadFileText(ratings);
    size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
      const size_t end = text.find('\n', pos);
      const std::string line = text.substr(pos, end == std::string::npos ? end : end - pos);
      ++line_no;
      try {
        if (!line.empty()) ApplyRatingLine(*session, line);
      } catch (const json::exception& e) {
        // Only an unterminated final line can be a write that was never
        // acknowledged.
        if (end != std::string::npos) {
          Fail(ErrorKind::kData, ratings.string() + " line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
      }
      if (end == std::string::npos) break;
      pos = end + 1;
    }
  }
  for (const SessionItem& item : session->config.items) {
    tokens_[item.reference_token] = item.reference_path;
    for (const SessionStimulus& s : item.stimuli) tokens_[s.token] = s.path;
  }
  const std::string id = session->config.session_id;
  sessions_[id] = std::move(session);
}

std::string SessionStore::NewToken() {
  std::lock_guard lock(token_mu_);
  static std::random_device device;
  char buf[33];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf + 8 * i, 9, "%08x", static_cast<unsigned>(device()));
  }
  return buf;
}

void SessionStore::Create(SessionConfig config) {
  ValidateConfig(config);
  std::unique_lock lock(mu_);
  if (sessions_.contains(config.session_id) ||
      std::filesystem::exists(root_ / config.session_id)) {
    Reject(409, "session " + config.session_id + " already exists");
  }
  auto fresh = [this] {
    std::string t;
    do t = NewToken(); while (tokens_.contains(t));
    return t;
  };
  for (SessionItem& item : config.items) {
    item.reference_token = fresh();
    tokens_[item.reference_token] = item.reference_path;
    for (SessionStimulus& s : item.stimuli) {
      s.token = fresh();
      tokens_[s.token] = s.path;
    }
  }
  const auto dir = root_ / config.session_id;
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "session.json", ConfigJson(config).dump(2) + "\n");
  auto session = std::make_unique<Session>();
  session->config = std::move(config);
  sessions_[session->config.session_id] = std::move(session);
}

bool SessionStore::Contains(const std::string& session_id) const {
  std::shared_lock lock(mu_);
  return sessions_.contains(session_id);
}

std::vector<std::string> SessionStore::SessionIds() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

SessionStore::Session& SessionStore::Find(const std::string& session_id) const {
  std::shared_lock lock(mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw ServiceError(404, ErrorKind::kData, "unknown session " + session_id);
  }
  return *it->second;  // sessions are never removed
}

TrialView SessionStore::Trial(const std::string& session_id, size_t index) const {
  const Session& s = Find(session_id);
  const SessionConfig& c = s.config;
  if (index >= c.items.size()) {
    throw ServiceError(404, ErrorKind::kData,
                       "trial " + std::to_string(index) + " out of range");
  }
  const SessionItem& item = c.items[index];
  TrialView v;
  v.session_id = c.session_id;
  v.index = index;
  v.count = c.items.size();
  v.item_id = item.item_id;
  v.reference_url = AudioUrl(item.reference_token);
  v.scale_min = c.scale_min;
  v.scale_max = c.scale_max;
  for (size_t k : PresentationOrder(c.seed, c.subject_id, item.item_id,
                                    item.stimuli.size())) {
    const std::string& token = item.stimuli[k].token;
    v.stimuli.push_back({token, AudioUrl(token)});
  }
  return v;
}

SubmitResult SessionStore::Submit(const std::string& session_id,
                                  const RatingSubmission& sub) {
  Session& s = Find(session_id);
  const SessionConfig& c = s.config;
  if (sub.subject_id != c.subject_id) {
    Reject(400, "subject does not match the session");
  }
  const SessionItem* item = nullptr;
  for (const SessionItem& it : c.items) {
    if (it.item_id == sub.item_id) item = &it;
  }
  if (item == nullptr) Reject(400, "item " + sub.item_id + " is not in the session");
  for (const SessionStimulus& st : item->stimuli) {
    if (!sub.scores.contains(st.token)) {
      Reject(400, "incomplete ratings: stimulus " + st.token + " has no score");
    }
  }
  if (sub.scores.size() != item->stimuli.size()) {
    Reject(400, "ratings name stimuli that do not belong to this trial");
  }
  for (const auto& [token, score] : sub.scores) {
    if (score < c.scale_min || score > c.scale_max) {
      Reject(400, "score " + std::to_string(score) + " outside [" +
                      std::to_string(c.scale_min) + ", " +
                      std::to_string(c.scale_max) + "]");
    }
  }

  std::lock_guard lock(s.mu);
  const auto dir = root_ / c.session_id;
  const std::string received = NowUtc();
  json line = {{"item_id", sub.item_id},
               {"scores", sub.scores},
               {"timestamp", sub.timestamp},
               {"received", received}};
  AppendLineDurable(dir / "ratings.jsonl", line.dump());
  SubmitResult result;
  result.rows = item->stimuli.size();
  const auto previous = s.ratings.find(sub.item_id);
  if (previous != s.ratings.end()) {
    result.replaced = true;
    json audit = {{"item_id", sub.item_id},
                  {"previous", previous->second},
                  {"replacement", sub.scores},
                  {"received", received}};
    AppendLineDurable(dir / "audit.jsonl", audit.dump());
  }
  s.ratings[sub.item_id] = sub.scores;
  return result;
}

ScoreTable SessionStore::Export(const std::string& session_id) const {
  const Session& s = Find(session_id);
  std::lock_guard lock(s.mu);
  if (s.ratings.empty()) Reject(409, "session has no submissions yet");
  ScoreTable table;
  for (const SessionItem& item : s.config.items) {
    const auto r = s.ratings.find(item.item_id);
    if (r == s.ratings.end()) continue;
    for (const SessionStimulus& st : item.stimuli) {
      table.push_back({s.config.subject_id, item.item_id, st.icld_level,
                       st.icc_level, st.label, r->second.at(st.token)});
    }
  }
  return table;
}

ScoreTable SessionStore::ExportAll() const {
  ScoreTable all;
  for (const std::string& id : SessionIds()) {
    const Session& s = Find(id);
    {
      std::lock_guard lock(s.mu);
      if (s.ratings.empty()) continue;
    }
    for (ScoreRow& r : Export(id)) all.push_back(std::move(r));
  }
  if (all.empty()) Reject(409, "no submissions yet");
  ValidateScoreTable(all);
  return all;
}

std::optional<std::filesystem::path> SessionStore::AudioPath(
    const std::string& token) const {
  std::shared_lock lock(mu_);
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

// ------------------------------------------------------------- the server

struct SessionServer::Impl {
  SessionStore& store;
  ServerOptions options;
  httplib::Server server;

  Impl(SessionStore& s, ServerOptions o) : store(s), options(std::move(o)) {}

  static void SendJson(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  // Runs a handler, mapping failures onto status codes.
  template <typename F>
  static void Guard(httplib::Response& res, F&& handler) {
    try {
      handler();
    } catch (const ServiceError& e) {
      SendJson(res, e.status(), {{"error", e.what()}});
    } catch (const json::exception& e) {
      SendJson(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
    } catch (const Error& e) {
      SendJson(res, e.kind() == ErrorKind::kIo ? 500 : 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
      SendJson(res, 500, {{"error", e.what()}});
    }
  }

  void CreateSession(const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    if (!body.is_object()) Reject(400, "request body must be a JSON object");
    const std::string id = body.at("session_id").get<std::string>();
    const std::string subject = body.at("subject_id").get<std::string>();
    const uint64_t seed = body.value("seed", uint64_t{0});
    std::filesystem::path manifest = options.default_manifest;
    if (body.contains("manifest")) manifest = body["manifest"].get<std::string>();
    if (manifest.empty()) Reject(400, "no manifest given and no default configured");
    std::vector<std::string> items;
    if (body.contains("items")) items = body["items"].get<std::vector<std::string>>();
    std::vector<ManifestEntry> entries;
    try {
      entries = ReadManifest(manifest);
    } catch (const Error& e) {
      Reject(400, e.what());
    }
    if (store.Contains(id)) Reject(409, "session " + id + " already exists");
    SessionConfig config = SessionFromManifest(entries, id, subject, seed, items);
    const size_t trials = config.items.size();
    store.Create(std::move(config));
    SendJson(res, 201, {{"session_id", id}, {"trials", trials}});
  }

  void GetTrial(const httplib::Request& req, httplib::Response& res) {
    size_t index = 0;
    try {
      index = std::stoul(req.matches[2].str());
    } catch (const std::exception&) {
      Reject(404, "trial index out of range");
    }
    const TrialView v = store.Trial(req.matches[1].str(), index);
    json stimuli = json::array();
    for (const TrialStimulus& s : v.stimuli) {
      stimuli.push_back({{"token", s.token}, {"audio_url", s.audio_url}});
    }
    SendJson(res, 200,
             {{"session_id", v.session_id},
              {"index", v.index},
              {"count", v.count},
              {"item_id", v.item_id},
              {"reference_url", v.reference_url},
              {"scale", {{"min", v.scale_min}, {"max", v.scale_max}}},
              {"stimuli", std::move(stimuli)}});
  }

  void PostRatings(const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    if (!body.is_object()) Reject(400, "request body must be a JSON object");
    RatingSubmission sub;
    sub.subject_id = body.at("subject_id").get<std::string>();
    sub.item_id = body.at("item_id").get<std::string>();
    sub.timestamp = body.value("timestamp", "");
    const json& scores = body.at("scores");
    if (!scores.is_object()) Reject(400, "scores must map tokens to integers");
    for (const auto& [token, value] : scores.items()) {
      if (!value.is_number_integer()) {
        Reject(400, "score for " + token + " is not an integer");
      }
      const auto v = value.get<int64_t>();
      if (v < INT32_MIN || v > INT32_MAX) Reject(400, "score out of range");
      sub.scores[token] = static_cast<int>(v);
    }
    const SubmitResult r = store.Submit(req.matches[1].str(), sub);
    SendJson(res, 200, {{"status", "stored"}, {"rows", r.rows}, {"replaced", r.replaced}});
  }

  void Register() {
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      Guard(res, [&] { CreateSession(req, res); });
    });
    server.Get(R"(/sessions/([^/]+)/trials/(\d+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] { GetTrial(req, res); });
               });
    server.Post(R"(/sessions/([^/]+)/ratings)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  Guard(res, [&] { PostRatings(req, res); });
                });
    server.Get(R"(/sessions/([^/]+)/export\.csv)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] {
                   res.set_content(FormatScoreCsv(store.Export(req.matches[1].str())),
                                   "text/csv; charset=utf-8");
                 });
               });
    server.Get("/export.csv", [this](const httplib::Request&, httplib::Response& res) {
      Guard(res, [&] {
        res.set_content(FormatScoreCsv(store.ExportAll()), "text/csv; charset=utf-8");
      });
    });
    server.Get(R"(/audio/([0-9a-f]+)\.wav)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] {
                   const auto path = store.AudioPath(req.matches[1].str());
                   if (!path) Reject(404, "unknown audio token");
                   const auto bytes = ReadFileBytes(*path);
                   res.set_header("Cache-Control", "no-store");
                   res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
                 });
               });
  }
};

SessionServer::SessionServer(SessionStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  impl_->Register();
}

SessionServer::~SessionServer() { Stop(); }

int SessionServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool SessionServer::Run() { return impl_->server.listen_after_bind(); }

void SessionServer::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace cuedist
