// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "cmc/cli/cli.hpp"
#include "cmc/codegen/codegen.hpp"
#include "cmc/derivation/derivation.hpp"
#include "cmc/graph/algorithms.hpp"
#include "cmc/pipeline/pipeline.hpp"
#include "cmc/session/session.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cmc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fixture(const std::string& name) {
  return std::string(CMC_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- 1 ------------------------------------------------------------------

Outcome family_tables() {
  using derivation::Family;
  using dsl::MeasureKind;
  const std::vector<std::pair<MeasureKind, std::vector<Family>>> expected{
      {MeasureKind::Continuous, {Family::Gaussian, Family::InverseGaussian, Family::Gamma}},
      {MeasureKind::Counts, {Family::Poisson, Family::NegativeBinomial}},
      {MeasureKind::OrderedCategories,
       {Family::Binomial, Family::Multinomial, Family::Gaussian, Family::InverseGaussian,
        Family::Gamma}},
      {MeasureKind::UnorderedCategories, {Family::Binomial, Family::Multinomial}},
  };
  Outcome o;
  for (const auto& [kind, families] : expected) {
    dsl::MeasureType t;
    t.kind = kind;
    std::vector<Family> got;
    for (const auto& fl : derivation::candidate_family_links(t)) {
      if (got.empty() || got.back() != fl.family) got.push_back(fl.family);
    }
    if (got != families) {
      o.ok = false;
      o.detail = "wrong families for " + std::string(dsl::measure_kind_name(kind));
    }
  }
  if (o.ok) o.detail = "4 dv types";
  return o;
}

// --- 2, 3 ---------------------------------------------------------------

struct Compiled {
  int code = -1;
  std::string script, model, choices, err;
};

Compiled compile(const std::vector<std::string>& extra, const fs::path& out) {
  std::vector<std::string> args{"compile"};
  args.insert(args.end(), extra.begin(), extra.end());
  args.push_back("--out");
  args.push_back(out.string());
  std::ostringstream o, e;
  Compiled c;
  c.code = cli::run(args, o, e);
  c.err = e.str();
  if (c.code == 0) {
    c.script = slurp(out.string() + ".R");
    c.model = slurp(out.string() + ".model.json");
    c.choices = slurp(out.string() + ".choices.json");
  }
  return c;
}

std::vector<std::string> fixture_args(const std::string& stem) {
  std::vector<std::string> args{fixture(stem + ".cms"), "--answers",
                                fixture(stem + ".answers.json")};
  if (stem.rfind("income_", 0) == 0) {
    args.insert(args.end(), {"--data", fixture("census.csv")});
  } else {
    args.insert(args.end(), {"--script-data", "data.csv"});
  }
  return args;
}

Outcome demographics_terms(const fs::path& work) {
  auto c = compile(fixture_args("income_demographics"), work / "demographics");
  if (c.code != 0) return {false, "compile exited " + std::to_string(c.code) + ": " + c.err};
  auto model = codegen::parse_model_json(c.model);
  auto terms = derivation::expanded_terms(model);
  const std::set<std::string> got(terms.begin(), terms.end());
  const std::set<std::string> expected{"Employment", "Age",       "Race",         "Sex",
                                       "Education",  "Race:Sex", "Age:Education"};
  if (got != expected) return {false, "term set differs"};
  if (model.family_link !=
      derivation::FamilyLink{derivation::Family::Gaussian, derivation::Link::Identity}) {
    return {false, "family/link is " + derivation::to_string(model.family_link)};
  }
  return {true, "7 terms, gaussian/identity"};
}

Outcome employment_line(const fs::path& work) {
  auto c = compile(fixture_args("income_employment"), work / "employment");
  if (c.code != 0) return {false, "compile exited " + std::to_string(c.code)};
  const std::string golden =
      "glm(formula=Income ~ Employment, family=gaussian(link='identity'), data=data)";
  std::istringstream in(c.script);
  for (std::string line; std::getline(in, line);) {
    if (line == "m <- " + golden) return {true, "byte-exact"};
  }
  return {false, "golden line not found"};
}

// --- 4 ------------------------------------------------------------------

Outcome dsep_oracle() {
  std::size_t checked = 0, mismatches = 0;
  auto sweep = [&](const oracle::Digraph& d) {
    const auto g = oracle::to_concept_graph(d);
    const int n = d.n;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (x == y) continue;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
          if (mask & ((1u << x) | (1u << y))) continue;
          std::vector<bool> given(n, false);
          std::vector<int> z;
          for (int k = 0; k < n; ++k) {
            if (mask & (1u << k)) {
              given[k] = true;
              z.push_back(k);
            }
          }
          ++checked;
          if (graph::d_separated(g, oracle::name(x), oracle::name(y), oracle::names(z)) !=
              oracle::d_separated(d, x, y, given)) {
            ++mismatches;
          }
        }
      }
    }
  };
  const auto all4 = oracle::all_dags(4);
  for (const auto& d : all4) sweep(d);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int i = 0; i < 500; ++i) sweep(oracle::random_dag(rng, 5, density(rng)));
  return {mismatches == 0, std::to_string(all4.size()) + " 4-node + 500 5-node DAGs, " +
                               std::to_string(checked) + " queries, " +
                               std::to_string(mismatches) + " mismatches"};
}

// --- 5 ------------------------------------------------------------------

Outcome backdoor_soundness() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> density(0.2, 0.7);
  std::size_t dags = 0, checked = 0, failures = 0;
  while (checked < 300 && dags < 5000) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const auto d = oracle::random_dag(rng, n, density(rng));
    const int iv = static_cast<int>(rng() % n);
    int dv = static_cast<int>(rng() % (n - 1));
    if (dv >= iv) ++dv;
    ++dags;
    const auto g = oracle::to_concept_graph(d);
    dsl::Query q{oracle::name(iv), oracle::name(dv), {}};
    const auto result = derivation::select_adjustment_set(g, q);
    if (!result.warnings.empty()) continue;
    ++checked;
    std::vector<int> z;
    for (const auto& v : result.adjustment_set) z.push_back(std::stoi(v.substr(1)));
    std::sort(z.begin(), z.end());
    const auto valid = oracle::backdoor_sets(d, iv, dv);
    if (std::find(valid.begin(), valid.end(), z) == valid.end()) ++failures;
  }
  return {checked >= 300 && failures == 0,
          std::to_string(checked) + " warning-free queries over " + std::to_string(dags) +
              " DAGs, " + std::to_string(failures) + " invalid sets"};
}

// --- 6 ------------------------------------------------------------------

Outcome cycle_oracle() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> density(0.1, 0.5);
  std::size_t mismatches = 0, cycles = 0;
  const int graphs = 250;
  for (int i = 0; i < graphs; ++i) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto d = oracle::random_digraph(rng, n, density(rng));
    std::set<std::vector<int>> got;
    for (const auto& c : graph::find_simple_cycles(oracle::to_concept_graph(d))) {
      std::vector<int> ids;
      for (const auto& v : c.nodes) ids.push_back(std::stoi(v.substr(1)));
      got.insert(ids);
    }
    const auto expected = oracle::simple_cycles(d);
    cycles += expected.size();
    if (got != expected) ++mismatches;
  }
  return {mismatches == 0, std::to_string(graphs) + " digraphs, " + std::to_string(cycles) +
                               " cycles, " + std::to_string(mismatches) + " mismatches"};
}

// --- 7 ------------------------------------------------------------------

std::string random_program(std::mt19937_64& rng) {
  const int n = 3 + static_cast<int>(rng() % 5);
  std::ostringstream src;
  src << "unit u\n";
  for (int i = 0; i < n; ++i) src << "measure " << oracle::name(i) << " = continuous(u)\n";
  std::set<std::pair<int, int>> causes;
  std::set<std::pair<int, int>> relates;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      switch (rng() % 6) {
        case 0: causes.insert({a, b}); break;
        case 1: causes.insert({b, a}); break;
        case 2: relates.insert({a, b}); break;
        case 3:
          causes.insert({a, b});
          causes.insert({b, a});
          break;
        default: break;
      }
    }
  }
  // Inject a directed cycle over a random subset of at least three nodes.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int k = 3 + static_cast<int>(rng() % (n - 2));
  for (int i = 0; i < k; ++i) {
    const int a = order[i], b = order[(i + 1) % k];
    if (!relates.count({std::min(a, b), std::max(a, b)})) causes.insert({a, b});
  }
  if (!causes.count({0, 1}) && !causes.count({1, 0}) && !relates.count({0, 1})) {
    causes.insert({0, 1});
  }
  for (const auto& [a, b] : causes) {
    src << (rng() % 2 ? "assume" : "hypothesize") << " causes(" << oracle::name(a) << ", "
        << oracle::name(b) << ")\n";
  }
  for (const auto& [a, b] : relates) {
    src << "assume relates(" << oracle::name(a) << ", " << oracle::name(b) << ")\n";
  }
  src << "query ace(V0 -> V1)\n";
  return src.str();
}

Outcome refinement_termination() {
  std::mt19937_64 rng(7);
  const int models = 250;
  int failures = 0, with_cycles = 0, with_relates = 0;
  std::string first_failure;
  for (int i = 0; i < models; ++i) {
    const auto src = random_program(rng);
    auto loaded = pipeline::load_program(src, std::nullopt);
    if (!loaded.ok()) {
      ++failures;
      if (first_failure.empty()) first_failure = "invalid generated program";
      continue;
    }
    const auto& start = loaded.front->graph;
    if (start.has_unresolved()) ++with_relates;
    if (!graph::find_simple_cycles(start).empty()) ++with_cycles;
    std::set<std::pair<std::string, std::string>> original;
    for (const auto& e : start.edges()) original.insert({e.from, e.to});

    pipeline::Refinement r(start, {});
    int steps = 0;
    while (!r.complete() && steps < 10000) {
      r.apply({r.pending().front().id, 0});
      ++steps;
    }
    bool ok = r.complete() && disambiguation::refinement_complete(r.graph()) &&
              graph::is_acyclic(r.graph());
    for (const auto& e : r.graph().edges()) {
      if (!original.count({e.from, e.to})) ok = false;
    }
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = "model " + std::to_string(i);
    }
  }
  std::string detail = std::to_string(models) + " models (" + std::to_string(with_relates) +
                       " with relates, " + std::to_string(with_cycles) + " with cycles), " +
                       std::to_string(failures) + " failures";
  if (!first_failure.empty()) detail += "; first: " + first_failure;
  return {failures == 0, detail};
}

// --- 8 ------------------------------------------------------------------

struct HttpReply {
  int status = 0;
  json body;
};

HttpReply call(httplib::Client& client, const std::string& method, const std::string& path,
               const json& body = nullptr) {
  httplib::Result res = method == "GET"
                            ? client.Get(path)
                            : client.Post(path, body.dump(), "application/json");
  if (!res) return {};
  return {res->status, json::parse(res->body, nullptr, false)};
}

// Drives one fixture through the HTTP API, answering exactly as its answer
// log does, then replays the session's choices log through the CLI.
std::string session_replay(httplib::Client& client, const std::string& stem,
                           const fs::path& work) {
  json create = {{"program", slurp(fixture(stem + ".cms"))}};
  if (stem.rfind("income_", 0) == 0) {
    create["data_path"] = fixture("census.csv");
  } else {
    create["script_data_path"] = "data.csv";
  }
  auto s = call(client, "POST", "/sessions", create);
  if (s.status != 201) return "create returned " + std::to_string(s.status);
  const std::string id = s.body["id"];

  const auto log = json::parse(slurp(fixture(stem + ".answers.json")));
  for (const auto& entry : log) {
    if (entry["phase"] == "conceptual") {
      s = call(client, "POST", "/sessions/" + id + "/resolutions",
               {{"ambiguity_id", entry["ambiguity_id"]}, {"choice", entry["choice"]}});
    } else {
      json body = entry;
      body.erase("phase");
      s = call(client, "POST", "/sessions/" + id + "/statistical-choices", body);
    }
    if (s.status != 200) return "answer returned " + std::to_string(s.status);
  }
  auto a = call(client, "GET", "/sessions/" + id + "/artifacts");
  if (a.status != 200) return "artifacts returned " + std::to_string(a.status);

  const fs::path transcript = work / (stem + ".session.choices.json");
  std::ofstream(transcript, std::ios::binary) << a.body["choices_log"].get<std::string>();
  auto args = fixture_args(stem);
  args[2] = transcript.string();
  auto c = compile(args, work / (stem + "-replay"));
  if (c.code != 0) return "replay exited " + std::to_string(c.code);
  if (c.script != a.body["script_text"]) return "script differs";
  if (c.model != a.body["model_json"]) return "model JSON differs";
  if (c.choices != a.body["choices_log"]) return "choices log differs";
  return "";
}

Outcome replay_determinism(const fs::path& work) {
  const std::vector<std::string> stems{"income_employment", "income_demographics", "relates",
                                       "cycle"};
  for (const auto& stem : stems) {
    auto first = compile(fixture_args(stem), work / (stem + "-a"));
    auto second = compile(fixture_args(stem), work / (stem + "-b"));
    if (first.code != 0 || second.code != 0) return {false, stem + ": compile failed"};
    if (first.script != second.script || first.model != second.model ||
        first.choices != second.choices) {
      return {false, stem + ": CLI outputs differ between runs"};
    }
  }

  session::SessionManager manager;
  httplib::Server server;
  session::install_routes(server, manager);
  const int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) return {false, "cannot bind a local port"};
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  std::string failure;
  for (const auto& stem : stems) {
    failure = session_replay(client, stem, work);
    if (!failure.empty()) {
      failure = stem + ": " + failure;
      break;
    }
  }
  server.stop();
  worker.join();
  if (!failure.empty()) return {false, failure};
  return {true, std::to_string(stems.size()) + " fixtures, CLI x2 and HTTP session replay"};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "cmc-acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  struct Criterion {
    int number;
    std::string name;
    double limit_seconds;  // 0 means no time limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "family/link candidate tables", 1, family_tables},
      {2, "demographics golden term set", 1, [&] { return demographics_terms(work); }},
      {3, "employment golden model line", 0, [&] { return employment_line(work); }},
      {4, "d-separation vs path oracle", 60, dsep_oracle},
      {5, "backdoor soundness vs subset oracle", 60, backdoor_soundness},
      {6, "simple cycles vs brute force", 30, cycle_oracle},
      {7, "refinement termination and soundness", 0, refinement_termination},
      {8, "replay determinism", 0, [&] { return replay_determinism(work); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.ok = false;
      o.detail += "; over the time limit";
    }
    if (!o.ok) ++failed;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << (o.ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.name << " ("
         << o.detail << ") [" << secs << " s]";
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
