#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cmc/graph/algorithms.hpp"

namespace httplib {
class Server;
}

namespace cmc::session {

enum class Phase { ConceptualRefinement, StatisticalDisambiguation, Finalized };

std::string_view phase_name(Phase p);

// Carries the HTTP status and the `{code, message, details[]}` body.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message,
           nlohmann::json details = nlohmann::json::array())
      : std::runtime_error(message),
        status_(status),
        code_(std::move(code)),
        details_(std::move(details)) {}

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }
  nlohmann::json body() const;

 private:
  int status_;
  std::string code_;
  nlohmann::json details_;
};

struct ManagerOptions {
  graph::CycleSearchOptions cycles;
  std::size_t max_program_bytes = std::size_t{1} << 20;
  std::optional<std::filesystem::path> snapshot_dir;  // one JSON file per session
};

struct Session;

// Every operation returns the session summary JSON or throws ApiError.
// Mutations of one session are serialized; distinct sessions never share state.
class SessionManager {
 public:
  explicit SessionManager(ManagerOptions options = {});
  ~SessionManager();

  // Body: {program, data_path?, script_data_path?}.
  nlohmann::json create(const nlohmann::json& body);
  nlohmann::json get(const std::string& id) const;
  // Body: {ambiguity_id, choice}.
  nlohmann::json post_resolution(const std::string& id, const nlohmann::json& body);
  // Body: {keep_covariates?, keep_interactions?, family?, link?}.
  nlohmann::json post_statistical_choices(const std::string& id, const nlohmann::json& body);
  // {script_text, model_json, choices_log}.
  nlohmann::json get_artifacts(const std::string& id) const;

  // Rebuilds sessions from snapshot_dir by replaying their answer logs.
  // Returns the number restored; unreadable snapshots are skipped.
  std::size_t load_snapshots();
  std::size_t size() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  void persist(const Session& s) const;
  std::string fresh_id();

  ManagerOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

// Routing without sockets; the HTTP server forwards every request here.
HttpResponse dispatch(SessionManager& manager, const std::string& method,
                      const std::string& path, const std::string& body);

void install_routes(httplib::Server& server, SessionManager& manager);

}  // namespace cmc::session
