#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cmc/diagnostics.hpp"

namespace cmc::dsl::detail {

enum class TokenKind {
  Identifier,
  String,
  Integer,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Assign,    // =
  EqualEq,   // ==
  NotEqual,  // !=
  Arrow,     // ->
  Invalid,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // unescaped contents for strings
  Span span;
};

std::string_view token_kind_name(TokenKind kind);

// Tokenizes the whole input. Lexical errors are appended to `diagnostics`
// and produce Invalid tokens so the parser can resynchronize.
std::vector<Token> tokenize(std::string_view source,
                            std::vector<Diagnostic>& diagnostics);

}  // namespace cmc::dsl::detail
