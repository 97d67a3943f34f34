#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/diagnostics.hpp"
#include "cmc/dsl/ast.hpp"

namespace cmc::dsl {

struct ParseResult {
  std::optional<Program> program;  // empty iff diagnostics has an error
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

// Parses `.cms` source. Total over arbitrary bytes: never throws on bad input.
ParseResult parse_program(std::string_view source);

// Canonical rendering; the output reparses to a structurally equal program.
std::string print_program(const Program& program);

}  // namespace cmc::dsl
