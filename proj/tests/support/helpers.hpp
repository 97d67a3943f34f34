#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "cmc/dsl/model.hpp"
#include "cmc/dsl/parser.hpp"
#include "cmc/graph/concept_graph.hpp"

namespace testing {

inline std::string fixture(const std::string& name) {
  return std::string(CMC_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline cmc::dsl::ValidatedProgram load(const std::string& source) {
  auto parsed = cmc::dsl::parse_program(source);
  REQUIRE_MESSAGE(parsed.ok(), "parse failed for:\n" << source);
  auto validated = cmc::dsl::validate(*parsed.program);
  REQUIRE_MESSAGE(validated.ok(), "validation failed for:\n" << source);
  return *validated.program;
}

// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cmc-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
