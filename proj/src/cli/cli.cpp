#include "cmc/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"

#include "cmc/error.hpp"
#include "cmc/pipeline/pipeline.hpp"
#include "cmc/session/session.hpp"

namespace cmc::cli {

namespace {

struct Options {
  std::string program_path;
  std::optional<std::string> data_path;
  std::optional<std::string> answers_path;
  std::optional<std::string> script_data_path;
  std::string out_prefix;
  bool emit_graph = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> snapshot_dir;
  std::optional<std::string> static_dir;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write '" + path.string() + "'");
  out << text;
}

void report(std::ostream& err, const std::string& path, const Error& e) {
  err << path << ": error: " << e.what() << " [" << error_code_name(e.code()) << "]\n";
}

// Parse, validate and reconcile; prints diagnostics. Empty on errors.
std::optional<pipeline::FrontEnd> front_end(const Options& o, std::ostream& err) {
  const std::string source = read_file(o.program_path);
  auto loaded = pipeline::load_program(source, o.data_path);
  for (const auto& d : loaded.diagnostics) {
    err << format_diagnostic(o.program_path, d) << '\n';
  }
  if (!loaded.ok()) return std::nullopt;
  return std::move(loaded.front);
}

int check(const Options& o, std::ostream& out, std::ostream& err) {
  pipeline::cycle_options_from_env();
  auto front = front_end(o, err);
  if (!front) return kExitDiagnostics;
  if (o.emit_graph) out << graph::to_json(front->graph, true).dump(2) << '\n';
  return kExitOk;
}

int compile(const Options& o, std::ostream& out, std::ostream& err) {
  const auto cycles = pipeline::cycle_options_from_env();
  auto front = front_end(o, err);
  if (!front) return kExitDiagnostics;

  pipeline::AnswerLog log;
  if (o.answers_path) log = pipeline::parse_answer_log(read_file(*o.answers_path));

  pipeline::Refinement refinement(front->graph, cycles);
  for (const auto& a : log.conceptual) {
    if (refinement.complete()) {
      throw Error(ErrorCode::UnknownAmbiguity,
                  "answer for '" + a.resolution.ambiguity_id +
                      "' given after every ambiguity was resolved");
    }
    refinement.apply(a.resolution);
  }
  if (!refinement.complete()) {
    err << o.program_path << ": error: " << refinement.pending().size()
        << " unanswered question(s); add answers to the answer log:\n";
    for (const auto& a : refinement.pending()) {
      err << "  " << a.id << ": " << a.question() << '\n';
      const auto labels = a.option_labels();
      for (std::size_t i = 0; i < labels.size(); ++i) {
        err << "    choice " << i << ": " << labels[i] << '\n';
      }
    }
    return kExitUnanswered;
  }

  const auto& q = front->program.query;
  if (!log.statistical) {
    auto s = derivation::suggest(refinement.graph(), front->program.model, q);
    if (s.family_choice_required) {
      err << o.program_path << ": error: unanswered statistical choice: a family and link for '"
          << q.dv << "'; add a {\"phase\": \"statistical\"} entry to the answer log. "
          << "Candidates:\n";
      for (const auto& c : s.candidates) err << "  " << derivation::to_string(c) << '\n';
      return kExitUnanswered;
    }
  }

  auto result = pipeline::finalize(*front, refinement.graph(), refinement.answers(),
                                   log.statistical.value_or(derivation::StatisticalChoices{}),
                                   o.script_data_path ? o.script_data_path : o.data_path);
  for (const auto& w : result.model.warnings) {
    err << o.program_path << ": warning: " << w.message << " ["
        << derivation::warning_code_name(w.code) << "]\n";
  }
  write_file(o.out_prefix + ".R", result.artifact.script_text);
  write_file(o.out_prefix + ".model.json", result.artifact.model_json);
  write_file(o.out_prefix + ".choices.json", result.artifact.choices_log);
  if (o.emit_graph) out << graph::to_json(refinement.graph(), true).dump(2) << '\n';
  return kExitOk;
}

int serve(const Options& o, std::ostream& err) {
  session::ManagerOptions mo;
  mo.cycles = pipeline::cycle_options_from_env();
  if (o.snapshot_dir) mo.snapshot_dir = *o.snapshot_dir;
  session::SessionManager manager(mo);
  const std::size_t restored = manager.load_snapshots();

  httplib::Server server;
  session::install_routes(server, manager);
  if (o.static_dir && !server.set_mount_point("/", *o.static_dir)) {
    err << "error: static directory '" << *o.static_dir << "' does not exist\n";
    return kExitUsage;
  }
  if (!server.bind_to_port(o.host, o.port)) {
    err << "error: cannot listen on " << o.host << ':' << o.port << '\n';
    return kExitDiagnostics;
  }
  err << "listening on http://" << o.host << ':' << o.port;
  if (restored) err << " (" << restored << " session(s) restored)";
  err << std::endl;
  server.listen_after_bind();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Compile conceptual models into GLM scripts", "cmc"};
  app.require_subcommand(1);

  auto* check_cmd = app.add_subcommand("check", "Parse and validate a program");
  check_cmd->add_option("program", o.program_path, "Program file (.cms)")->required();
  check_cmd->add_option("--data", o.data_path, "CSV file to reconcile against");
  check_cmd->add_flag("--emit-graph", o.emit_graph, "Print the concept graph as JSON");

  auto* compile_cmd = app.add_subcommand("compile", "Compile a program with an answer log");
  compile_cmd->add_option("program", o.program_path, "Program file (.cms)")->required();
  compile_cmd->add_option("--data", o.data_path, "CSV file to reconcile against");
  compile_cmd->add_option("--answers", o.answers_path, "Answer log (JSON)");
  compile_cmd->add_option("--script-data", o.script_data_path,
                          "Data path written into the script (default: --data)");
  compile_cmd->add_option("--out", o.out_prefix, "Output prefix for .R/.model.json/.choices.json")
      ->required();
  compile_cmd->add_flag("--emit-graph", o.emit_graph, "Print the refined graph as JSON");

  auto* serve_cmd = app.add_subcommand("serve", "Run the session HTTP service");
  serve_cmd->add_option("--host", o.host, "Address to bind");
  serve_cmd->add_option("--port", o.port, "Port to listen on")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--snapshot-dir", o.snapshot_dir, "Directory for session snapshots");
  serve_cmd->add_option("--static-dir", o.static_dir, "Static files to serve at /");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const std::string& where = o.program_path.empty() ? std::string("cmc") : o.program_path;
  try {
    if (check_cmd->parsed()) return check(o, out, err);
    if (compile_cmd->parsed()) return compile(o, out, err);
    return serve(o, err);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) {
      report(err, where, e);
      return kExitUsage;
    }
    report(err, where, e);
    return kExitDiagnostics;
  } catch (const std::exception& e) {
    err << where << ": error: " << e.what() << '\n';
    return kExitDiagnostics;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace cmc::cli
