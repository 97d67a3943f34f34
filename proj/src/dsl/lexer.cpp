#include "lexer.hpp"

#include <cctype>

namespace cmc::dsl::detail {

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::Integer: return "integer";
    case TokenKind::Number: return "number";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Comma: return "','";
    case TokenKind::Assign: return "'='";
    case TokenKind::EqualEq: return "'=='";
    case TokenKind::NotEqual: return "'!='";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Invalid: return "invalid token";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<Diagnostic>& diags)
      : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        out.push_back(Token{TokenKind::End, "", here()});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  Span here() const { return Span{pos_, pos_, line_, col_}; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  Token finish(TokenKind kind, Span start, std::string text) {
    start.end = pos_;
    return Token{kind, std::move(text), start};
  }

  Token next() {
    Span start = here();
    char c = peek();
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      return finish(TokenKind::Identifier, start,
                    std::string(src_.substr(start.begin, pos_ - start.begin)));
    }
    if (is_digit(c) || (c == '-' && is_digit(peek(1)))) return number(start);
    if (c == '"') return string(start);

    auto single = [&](TokenKind kind) {
      advance();
      return finish(kind, start, std::string(1, c));
    };
    auto pair = [&](TokenKind kind, const char* text) {
      advance();
      advance();
      return finish(kind, start, text);
    };
    switch (c) {
      case '(': return single(TokenKind::LParen);
      case ')': return single(TokenKind::RParen);
      case '[': return single(TokenKind::LBracket);
      case ']': return single(TokenKind::RBracket);
      case ',': return single(TokenKind::Comma);
      case '=':
        if (peek(1) == '=') return pair(TokenKind::EqualEq, "==");
        return single(TokenKind::Assign);
      case '!':
        if (peek(1) == '=') return pair(TokenKind::NotEqual, "!=");
        break;
      case '-':
        if (peek(1) == '>') return pair(TokenKind::Arrow, "->");
        break;
      default:
        break;
    }
    // Consume one whole UTF-8 sequence so columns stay meaningful.
    advance();
    while (pos_ < src_.size() &&
           (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
      advance();
    }
    Token bad = finish(TokenKind::Invalid, start,
                       std::string(src_.substr(start.begin, pos_ - start.begin)));
    diags_.push_back(Diagnostic{Severity::Error, DiagCode::UnexpectedToken,
                                "unexpected character '" + bad.text + "'", bad.span});
    return bad;
  }

  Token number(Span start) {
    if (peek() == '-') advance();
    while (is_digit(peek())) advance();
    bool fractional = false;
    if (peek() == '.' && is_digit(peek(1))) {
      fractional = true;
      advance();
      while (is_digit(peek())) advance();
    }
    std::string text(src_.substr(start.begin, pos_ - start.begin));
    return finish(fractional ? TokenKind::Number : TokenKind::Integer, start,
                  std::move(text));
  }

  Token string(Span start) {
    advance();  // opening quote
    std::string value;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return finish(TokenKind::String, start, std::move(value));
      }
      if (c == '\n') break;
      if (c == '\\' && pos_ + 1 < src_.size() &&
          (src_[pos_ + 1] == '"' || src_[pos_ + 1] == '\\')) {
        advance();
        c = src_[pos_];
      }
      value.push_back(c);
      advance();
    }
    Token bad = finish(TokenKind::Invalid, start, std::move(value));
    diags_.push_back(Diagnostic{Severity::Error, DiagCode::UnterminatedString,
                                "unterminated string literal", bad.span});
    return bad;
  }

  std::string_view src_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source,
                            std::vector<Diagnostic>& diagnostics) {
  return Lexer(source, diagnostics).run();
}

}  // namespace cmc::dsl::detail
