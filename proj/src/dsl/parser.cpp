#include "cmc/dsl/parser.hpp"

#include <array>
#include <map>
#include <string>

#include "lexer.hpp"

namespace cmc::dsl {

using detail::Token;
using detail::TokenKind;

namespace {

constexpr std::array<std::string_view, 7> kStatementKeywords = {
    "unit", "participant", "measure", "assume", "hypothesize", "interacts", "query"};

bool is_statement_keyword(const Token& t) {
  if (t.kind != TokenKind::Identifier) return false;
  for (auto kw : kStatementKeywords) {
    if (t.text == kw) return true;
  }
  return false;
}

Span join(Span a, Span b) {
  a.end = b.end;
  return a;
}

// Thrown inside one statement; the statement loop resynchronizes.
struct StatementFailed {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : toks_(std::move(tokens)), diags_(diags) {}

  Program run() {
    Program program;
    while (!at(TokenKind::End)) {
      if (at(TokenKind::Invalid)) {
        // Already reported by the lexer.
        ++pos_;
        continue;
      }
      try {
        program.statements.push_back(statement());
      } catch (const StatementFailed&) {
        synchronize();
      }
    }
    return program;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& prev() const { return toks_[pos_ - 1]; }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_word(std::string_view w) const {
    return cur().kind == TokenKind::Identifier && cur().text == w;
  }

  const Token& bump() {
    const Token& t = toks_[pos_];
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(DiagCode code, std::string message, Span span) {
    // Lexer errors already explain invalid tokens; avoid a second report.
    if (cur().kind != TokenKind::Invalid) {
      diags_.push_back(Diagnostic{Severity::Error, code, std::move(message), span});
    }
    throw StatementFailed{};
  }

  [[noreturn]] void unexpected(std::string_view wanted) {
    std::string got = cur().kind == TokenKind::End
                          ? std::string("end of input")
                          : "'" + cur().text + "'";
    fail(DiagCode::UnexpectedToken,
         "expected " + std::string(wanted) + " but found " + got, cur().span);
  }

  const Token& expect(TokenKind k) {
    if (!at(k)) unexpected(detail::token_kind_name(k));
    return bump();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) unexpected("'" + std::string(w) + "'");
    bump();
  }

  Ident ident() {
    const Token& t = expect(TokenKind::Identifier);
    return Ident{t.text, t.span};
  }

  void synchronize() {
    if (pos_ < toks_.size() && !at(TokenKind::End)) ++pos_;
    while (!at(TokenKind::End) && !is_statement_keyword(cur())) ++pos_;
  }

  void declare(const Ident& name) {
    auto [it, inserted] = declared_.emplace(name.name, name.span);
    if (!inserted) {
      diags_.push_back(Diagnostic{
          Severity::Error, DiagCode::DuplicateDeclaration,
          "'" + name.name + "' is already declared at line " +
              std::to_string(it->second.line),
          name.span});
    }
  }

  Statement statement() {
    const Token& head = cur();
    if (head.kind != TokenKind::Identifier) unexpected("a statement");
    if (head.text == "unit" || head.text == "participant") return unit_decl();
    if (head.text == "measure") return measure_decl();
    if (head.text == "assume" || head.text == "hypothesize") return relationship();
    if (head.text == "interacts") return interacts();
    if (head.text == "query") return query();
    fail(DiagCode::UnknownKeyword, "unknown keyword '" + head.text + "'", head.span);
  }

  std::optional<IntLit> cardinality_clause() {
    expect_word("cardinality");
    expect(TokenKind::Assign);
    const Token& n = expect(TokenKind::Integer);
    IntLit lit{0, n.span};
    try {
      lit.value = std::stoll(n.text);
    } catch (const std::exception&) {
      fail(DiagCode::UnexpectedToken, "integer '" + n.text + "' is out of range",
           n.span);
    }
    return lit;
  }

  UnitDecl unit_decl() {
    UnitDecl decl;
    Span start = cur().span;
    decl.participant_sugar = bump().text == "participant";
    decl.name = ident();
    if (at(TokenKind::String)) {
      const Token& s = bump();
      decl.id_column = StringLit{s.text, s.span};
    }
    if (at_word("cardinality")) decl.cardinality = cardinality_clause();
    decl.span = join(start, prev().span);
    declare(decl.name);
    return decl;
  }

  MeasureDecl measure_decl() {
    MeasureDecl decl;
    Span start = bump().span;
    decl.name = ident();
    expect(TokenKind::Assign);
    const Token& type = expect(TokenKind::Identifier);
    if (type.text == "continuous") {
      decl.syntax = MeasureSyntax::Continuous;
    } else if (type.text == "counts") {
      decl.syntax = MeasureSyntax::Counts;
    } else if (type.text == "categories" || type.text == "condition") {
      decl.syntax = type.text == "categories" ? MeasureSyntax::Categories
                                              : MeasureSyntax::Condition;
      expect(TokenKind::LBracket);
      for (;;) {
        const Token& s = expect(TokenKind::String);
        decl.levels.push_back(StringLit{s.text, s.span});
        if (at(TokenKind::Comma)) {
          bump();
          continue;
        }
        expect(TokenKind::RBracket);
        break;
      }
      if (at_word("ordered")) {
        bump();
        decl.ordered = true;
      }
    } else {
      fail(DiagCode::UnknownKeyword, "unknown measure type '" + type.text + "'",
           type.span);
    }
    expect(TokenKind::LParen);
    decl.owner = ident();
    if (at(TokenKind::Comma)) {
      bump();
      decl.cardinality = cardinality_clause();
    }
    expect(TokenKind::RParen);
    decl.span = join(start, prev().span);
    declare(decl.name);
    return decl;
  }

  ComparisonAst comparison() {
    ComparisonAst cmp;
    cmp.variable = ident();
    if (at(TokenKind::Identifier)) {
      const Token& op = bump();
      if (op.text == "increases") {
        cmp.op = CompareOp::Increases;
      } else if (op.text == "decreases") {
        cmp.op = CompareOp::Decreases;
      } else {
        fail(DiagCode::UnknownKeyword, "unknown comparison '" + op.text + "'",
             op.span);
      }
    } else if (at(TokenKind::EqualEq) || at(TokenKind::NotEqual)) {
      cmp.op = bump().kind == TokenKind::EqualEq ? CompareOp::Equals
                                                  : CompareOp::NotEquals;
      Value v;
      switch (cur().kind) {
        case TokenKind::String: v.kind = Value::Kind::String; break;
        case TokenKind::Integer:
        case TokenKind::Number: v.kind = Value::Kind::Number; break;
        case TokenKind::Identifier: v.kind = Value::Kind::Identifier; break;
        default: unexpected("a value");
      }
      const Token& t = bump();
      v.text = t.text;
      v.span = t.span;
      cmp.value = std::move(v);
    } else {
      unexpected("'increases', 'decreases', '==' or '!='");
    }
    cmp.span = join(cmp.variable.span, prev().span);
    return cmp;
  }

  RelationshipStmt relationship() {
    RelationshipStmt rel;
    Span start = cur().span;
    rel.certainty = bump().text == "assume" ? Certainty::Assume : Certainty::Hypothesize;
    const Token& shape = expect(TokenKind::Identifier);
    if (shape.text == "causes") {
      rel.shape = RelationShape::Causes;
    } else if (shape.text == "relates") {
      rel.shape = RelationShape::Relates;
    } else {
      fail(DiagCode::UnknownKeyword,
           "unknown relationship '" + shape.text + "'; expected 'causes' or 'relates'",
           shape.span);
    }
    expect(TokenKind::LParen);
    rel.first = ident();
    expect(TokenKind::Comma);
    rel.second = ident();
    if (at(TokenKind::Comma) && toks_[pos_ + 1].kind == TokenKind::Identifier &&
        toks_[pos_ + 1].text == "when") {
      bump();
      bump();
      expect(TokenKind::Assign);
      rel.when = comparison();
    }
    if (at(TokenKind::Comma)) {
      bump();
      expect_word("then");
      expect(TokenKind::Assign);
      rel.then = comparison();
    }
    expect(TokenKind::RParen);
    rel.span = join(start, prev().span);
    return rel;
  }

  InteractsStmt interacts() {
    InteractsStmt stmt;
    Span start = bump().span;
    expect(TokenKind::LParen);
    stmt.variables.push_back(ident());
    do {
      expect(TokenKind::Comma);
      stmt.variables.push_back(ident());
    } while (at(TokenKind::Comma));
    expect(TokenKind::RParen);
    stmt.span = join(start, prev().span);
    return stmt;
  }

  QueryStmt query() {
    QueryStmt q;
    Span start = bump().span;
    expect_word("ace");
    expect(TokenKind::LParen);
    q.iv = ident();
    expect(TokenKind::Arrow);
    q.dv = ident();
    expect(TokenKind::RParen);
    q.span = join(start, prev().span);
    return q;
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  std::map<std::string, Span> declared_;
};

}  // namespace

ParseResult parse_program(std::string_view source) {
  ParseResult result;
  auto tokens = detail::tokenize(source, result.diagnostics);
  Program program = Parser(std::move(tokens), result.diagnostics).run();
  if (!has_errors(result.diagnostics)) result.program = std::move(program);
  return result;
}

}  // namespace cmc::dsl
