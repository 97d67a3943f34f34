#include "cmc/session/session.hpp"

#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "cmc/error.hpp"
#include "cmc/pipeline/pipeline.hpp"

namespace cmc::session {

using nlohmann::json;

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::ConceptualRefinement: return "ConceptualRefinement";
    case Phase::StatisticalDisambiguation: return "StatisticalDisambiguation";
    case Phase::Finalized: return "Finalized";
  }
  return "ConceptualRefinement";
}

json ApiError::body() const {
  return {{"code", code_}, {"message", what()}, {"details", details_}};
}

struct Session {
  mutable std::mutex mu;
  std::string id;
  std::string program_text;
  std::optional<std::string> data_path;
  std::optional<std::string> script_data_path;
  std::vector<Diagnostic> diagnostics;  // warnings and notes from loading
  pipeline::FrontEnd front;
  pipeline::Refinement refinement;
  Phase phase = Phase::ConceptualRefinement;
  std::optional<derivation::Suggestions> suggestions;
  std::optional<pipeline::Finalized> finalized;

  Session(pipeline::FrontEnd f, graph::CycleSearchOptions cycles)
      : front(std::move(f)), refinement(front.graph, cycles) {}
};

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::StaleAmbiguity: return 409;
    case ErrorCode::UnknownNode:
    case ErrorCode::InvalidArgument:
    case ErrorCode::GraphNotAcyclic:
    case ErrorCode::MalformedModelJson:
      return 500;
    default:
      return 422;
  }
}

ApiError from_error(const Error& e) {
  return ApiError(status_for(e.code()), std::string(error_code_name(e.code())), e.what());
}

std::optional<std::string> optional_string(const json& body, const char* field) {
  if (!body.contains(field) || body[field].is_null()) return std::nullopt;
  if (!body[field].is_string()) {
    throw ApiError(400, "MalformedRequest", std::string("'") + field + "' must be a string");
  }
  return body[field].get<std::string>();
}

std::optional<std::string> script_path(const Session& s) {
  return s.script_data_path ? s.script_data_path : s.data_path;
}

// Moves to the statistical phase once refinement is complete.
void advance(Session& s) {
  if (s.phase == Phase::ConceptualRefinement && s.refinement.complete()) {
    s.suggestions = derivation::suggest(s.refinement.graph(), s.front.program.model,
                                        s.front.program.query);
    s.phase = Phase::StatisticalDisambiguation;
  }
}

void apply_choices(Session& s, const derivation::StatisticalChoices& choices) {
  s.finalized = pipeline::finalize(s.front, s.refinement.graph(), s.refinement.answers(),
                                   choices, script_path(s));
  s.phase = Phase::Finalized;
}

json summary(const Session& s) {
  json pending = json::array();
  for (const auto& a : s.refinement.pending()) pending.push_back(disambiguation::to_json(a));
  json diagnostics = json::array();
  for (const auto& d : s.diagnostics) diagnostics.push_back(pipeline::to_json(d));

  pipeline::AnswerLog log{s.refinement.answers(), std::nullopt};
  json warnings = json::array();
  if (s.finalized) {
    log.statistical = s.finalized->normalized;
    for (const auto& w : s.finalized->model.warnings) warnings.push_back(pipeline::to_json(w));
  }
  return {{"id", s.id},
          {"phase", phase_name(s.phase)},
          {"query", {{"iv", s.front.program.query.iv}, {"dv", s.front.program.query.dv}}},
          {"graph", graph::to_json(s.refinement.graph(), true)},
          {"pending", std::move(pending)},
          {"statistical", s.suggestions ? pipeline::to_json(*s.suggestions) : json(nullptr)},
          {"answers", pipeline::answer_log_json(log)},
          {"warnings", std::move(warnings)},
          {"diagnostics", std::move(diagnostics)},
          {"data_notes", s.front.data_notes}};
}

json snapshot(const Session& s) {
  pipeline::AnswerLog log{s.refinement.answers(), std::nullopt};
  if (s.finalized) log.statistical = s.finalized->normalized;
  json j = {{"id", s.id},
            {"program", s.program_text},
            {"answers", pipeline::answer_log_json(log)}};
  if (s.data_path) j["data_path"] = *s.data_path;
  if (s.script_data_path) j["script_data_path"] = *s.script_data_path;
  return j;
}

}  // namespace

SessionManager::SessionManager(ManagerOptions options) : options_(std::move(options)) {}
SessionManager::~SessionManager() = default;

std::string SessionManager::fresh_id() {
  static std::mutex rng_mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(rng_mu);
  std::ostringstream out;
  out << std::hex;
  for (int i = 0; i < 2; ++i) {
    std::uint64_t word = rng();
    for (int b = 0; b < 16; ++b) out << ((word >> (60 - 4 * b)) & 0xF);
  }
  return out.str();
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ApiError(404, "UnknownSession", "no session with id '" + id + "'");
  }
  return it->second;
}

std::size_t SessionManager::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

void SessionManager::persist(const Session& s) const {
  if (!options_.snapshot_dir) return;
  std::filesystem::create_directories(*options_.snapshot_dir);
  const auto path = *options_.snapshot_dir / (s.id + ".json");
  const auto tmp = *options_.snapshot_dir / (s.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << snapshot(s).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

json SessionManager::create(const json& body) {
  if (!body.is_object() || !body.contains("program") || !body["program"].is_string()) {
    throw ApiError(400, "MalformedRequest", "body must be an object with a string 'program'");
  }
  const std::string program = body["program"].get<std::string>();
  if (program.size() > options_.max_program_bytes) {
    throw ApiError(413, "ProgramTooLarge",
                   "program is " + std::to_string(program.size()) +
                       " bytes; the limit is " + std::to_string(options_.max_program_bytes));
  }
  const auto data_path = optional_string(body, "data_path");
  const auto script_data_path = optional_string(body, "script_data_path");

  std::shared_ptr<Session> s;
  try {
    auto loaded = pipeline::load_program(program, data_path);
    if (!loaded.ok()) {
      json details = json::array();
      for (const auto& d : loaded.diagnostics) details.push_back(pipeline::to_json(d));
      throw ApiError(422, "ValidationFailed", "the program has errors", std::move(details));
    }
    s = std::make_shared<Session>(std::move(*loaded.front), options_.cycles);
    s->diagnostics = std::move(loaded.diagnostics);
    advance(*s);
  } catch (const Error& e) {
    throw from_error(e);
  }
  s->program_text = program;
  s->data_path = data_path;
  s->script_data_path = script_data_path;

  std::lock_guard session_lock(s->mu);
  {
    std::unique_lock lock(mu_);
    do {
      s->id = fresh_id();
    } while (sessions_.count(s->id));
    sessions_.emplace(s->id, s);
  }
  persist(*s);
  return summary(*s);
}

json SessionManager::get(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return summary(*s);
}

json SessionManager::post_resolution(const std::string& id, const json& body) {
  auto s = find(id);
  if (!body.is_object() || !body.contains("ambiguity_id") ||
      !body["ambiguity_id"].is_string() || !body.contains("choice") ||
      !pipeline::is_choice_index(body["choice"])) {
    throw ApiError(400, "MalformedRequest",
                   "body must carry a string 'ambiguity_id' and a non-negative 'choice'");
  }
  disambiguation::Resolution r{body["ambiguity_id"].get<std::string>(),
                               body["choice"].get<std::size_t>()};

  std::lock_guard lock(s->mu);
  if (s->phase != Phase::ConceptualRefinement) {
    throw ApiError(409, "WrongPhase",
                   "resolutions are only accepted during ConceptualRefinement; the session is "
                   "in " + std::string(phase_name(s->phase)));
  }
  // Work on copies so a failure leaves the committed state intact.
  pipeline::Refinement next = s->refinement;
  std::optional<derivation::Suggestions> suggestions;
  try {
    next.apply(r);
    if (next.complete()) {
      suggestions = derivation::suggest(next.graph(), s->front.program.model,
                                        s->front.program.query);
    }
  } catch (const Error& e) {
    throw from_error(e);
  }
  s->refinement = std::move(next);
  if (suggestions) {
    s->suggestions = std::move(suggestions);
    s->phase = Phase::StatisticalDisambiguation;
  }
  persist(*s);
  return summary(*s);
}

json SessionManager::post_statistical_choices(const std::string& id, const json& body) {
  auto s = find(id);
  derivation::StatisticalChoices choices;
  try {
    choices = pipeline::parse_statistical_choices(body);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedAnswerLog) {
      throw ApiError(400, "MalformedRequest", e.what());
    }
    throw from_error(e);
  }

  std::lock_guard lock(s->mu);
  if (s->phase != Phase::StatisticalDisambiguation) {
    throw ApiError(409, "WrongPhase",
                   "statistical choices are only accepted during StatisticalDisambiguation; "
                   "the session is in " + std::string(phase_name(s->phase)));
  }
  try {
    apply_choices(*s, choices);
  } catch (const Error& e) {
    throw from_error(e);
  }
  persist(*s);
  return summary(*s);
}

json SessionManager::get_artifacts(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (!s->finalized) {
    throw ApiError(409, "NotFinalized", "the session is in " +
                                            std::string(phase_name(s->phase)) +
                                            "; artifacts exist once it is Finalized");
  }
  const auto& a = s->finalized->artifact;
  return {{"script_text", a.script_text},
          {"model_json", a.model_json},
          {"choices_log", a.choices_log}};
}

std::size_t SessionManager::load_snapshots() {
  if (!options_.snapshot_dir || !std::filesystem::is_directory(*options_.snapshot_dir)) {
    return 0;
  }
  std::size_t restored = 0;
  for (const auto& entry : std::filesystem::directory_iterator(*options_.snapshot_dir)) {
    if (entry.path().extension() != ".json") continue;
    try {
      std::ifstream in(entry.path(), std::ios::binary);
      json snap = json::parse(in);
      const std::string id = snap.at("id").get<std::string>();
      const auto data_path = optional_string(snap, "data_path");
      auto loaded = pipeline::load_program(snap.at("program").get<std::string>(), data_path);
      if (!loaded.ok()) continue;
      auto s = std::make_shared<Session>(std::move(*loaded.front), options_.cycles);
      s->id = id;
      s->program_text = snap["program"].get<std::string>();
      s->data_path = data_path;
      s->script_data_path = optional_string(snap, "script_data_path");
      s->diagnostics = std::move(loaded.diagnostics);
      advance(*s);
      auto log = pipeline::parse_answer_log(snap.at("answers").dump());
      for (const auto& a : log.conceptual) {
        s->refinement.apply(a.resolution);
        advance(*s);
      }
      if (log.statistical) apply_choices(*s, *log.statistical);
      std::unique_lock lock(mu_);
      sessions_[id] = std::move(s);
      ++restored;
    } catch (const std::exception&) {
      continue;
    }
  }
  return restored;
}

}  // namespace cmc::session
