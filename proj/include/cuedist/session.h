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

// MUSHRA listening sessions: a durable session store and the HTTP service in
// front of it.
//
// Stimuli reach the client only as opaque tokens. Each session lives in its
// own directory under the store root:
//
//   session.json    configuration and token map, written once
//   ratings.jsonl   one line per accepted submission, fsync'ed before ack
//   audit.jsonl     one line per submission that replaced an earlier one
//
// HTTP endpoints (JSON bodies unless noted):
//
//   POST /sessions                  {"session_id", "subject_id", "seed",
//                                    "manifest"?, "items"?} -> 201
//   GET  /sessions/{id}/trials/{n}  trial descriptor
//   POST /sessions/{id}/ratings     {"subject_id", "item_id",
//                                    "scores": {token: int}, "timestamp"?}
//   GET  /sessions/{id}/export.csv  score table CSV
//   GET  /export.csv                all sessions
//   GET  /audio/{token}.wav         stimulus audio, byte ranges supported

#ifndef CUEDIST_SESSION_H_
#define CUEDIST_SESSION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cuedist/error.h"
#include "cuedist/manifest.h"
#include "cuedist/stats.h"

namespace cuedist {

// An Error with the HTTP status it maps to.
class ServiceError : public Error {
 public:
  ServiceError(int status, ErrorKind kind, const std::string& what)
      : Error(kind, what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct SessionStimulus {
  std::string label;
  Level icld_level = Level::kNa;
  Level icc_level = Level::kNa;
  std::filesystem::path path;
  std::string token;  // assigned by the store
};

struct SessionItem {
  std::string item_id;
  std::filesystem::path reference_path;
  std::string reference_token;  // assigned by the store
  std::vector<SessionStimulus> stimuli;
};

struct SessionConfig {
  std::string session_id;
  std::string subject_id;
  uint64_t seed = 0;
  int scale_min = 0;
  int scale_max = 100;
  std::vector<SessionItem> items;
};

// Builds a session from manifest entries, optionally restricted to `items`
// (in that order; manifest order otherwise). Every item needs exactly one
// hidden reference and one anchor and every file must exist.
SessionConfig SessionFromManifest(const std::vector<ManifestEntry>& manifest,
                                  const std::string& session_id,
                                  const std::string& subject_id, uint64_t seed,
                                  const std::vector<std::string>& items = {});

// Presentation order of n stimuli: a permutation that depends only on
// (seed, subject, item).
std::vector<size_t> PresentationOrder(uint64_t seed, const std::string& subject,
                                      const std::string& item, size_t n);

struct TrialStimulus {
  std::string token;
  std::string audio_url;
};

struct TrialView {
  std::string session_id;
  size_t index = 0;
  size_t count = 0;
  std::string item_id;
  std::string reference_url;
  std::vector<TrialStimulus> stimuli;  // in presentation order
  int scale_min = 0;
  int scale_max = 100;
};

struct RatingSubmission {
  std::string subject_id;
  std::string item_id;
  std::map<std::string, int> scores;  // token -> score
  std::string timestamp;              // client supplied, informational
};

struct SubmitResult {
  size_t rows = 0;
  bool replaced = false;
};

class SessionStore {
 public:
  // Loads every session found under `root`, creating it if needed. A final
  // ratings line that was cut short (never acknowledged) is ignored.
  explicit SessionStore(std::filesystem::path root);

  // Assigns fresh tokens and persists the session. Duplicate ids and
  // malformed configs throw ServiceError.
  void Create(SessionConfig config);
  bool Contains(const std::string& session_id) const;
  std::vector<std::string> SessionIds() const;

  TrialView Trial(const std::string& session_id, size_t index) const;
  // Durable before returning.
  SubmitResult Submit(const std::string& session_id,
                      const RatingSubmission& submission);
  // Latest submission per item, in item order then condition order.
  ScoreTable Export(const std::string& session_id) const;
  ScoreTable ExportAll() const;

  std::optional<std::filesystem::path> AudioPath(const std::string& token) const;

 private:
  struct Session {
    SessionConfig config;
    // item id -> token -> score, latest submission only
    std::map<std::string, std::map<std::string, int>> ratings;
    mutable std::mutex mu;  // serializes writers of this session
  };

  Session& Find(const std::string& session_id) const;
  void Load(const std::filesystem::path& dir);
  static void ApplyRatingLine(Session& s, const std::string& line);
  std::string NewToken();

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;  // guards sessions_ and tokens_
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::map<std::string, std::filesystem::path> tokens_;
  std::mutex token_mu_;  // std::random_device is not thread safe
};

struct ServerOptions {
  // Used by POST /sessions when the request names no manifest.
  std::filesystem::path default_manifest;
};

// HTTP front end. Handlers run on the server's worker threads.
class SessionServer {
 public:
  SessionServer(SessionStore& store, ServerOptions options = {});
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  // Returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cuedist

#endif  // CUEDIST_SESSION_H_
