#include <random>

#include "doctest.h"

#include "cmc/dsl/model.hpp"
#include "cmc/dsl/parser.hpp"

using namespace cmc;
using namespace cmc::dsl;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, DiagCode code) {
  for (const auto& d : ds) {
    if (d.code == code) return true;
  }
  return false;
}

ValidationResult check(std::string_view source) {
  auto parsed = parse_program(source);
  REQUIRE_MESSAGE(parsed.ok(), "parse failed");
  return validate(*parsed.program);
}

const char* kHeader = R"(unit participant "pid"
measure age = continuous(participant)
measure income = continuous(participant)
measure race = categories["a", "b", "c"](participant)
measure grade = categories["low", "mid", "high"] ordered(participant)
measure visits = counts(participant)
)";

}  // namespace

TEST_SUITE("dsl") {

TEST_CASE("minimal program parses to one unit and one measure") {
  auto r = parse_program("unit participant \"pid\"\nmeasure income = continuous(participant)\n");
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  REQUIRE(r.program->statements.size() == 2);
  const auto& unit = std::get<UnitDecl>(r.program->statements[0]);
  CHECK(unit.name.name == "participant");
  REQUIRE(unit.id_column);
  CHECK(unit.id_column->value == "pid");
  CHECK(std::holds_alternative<MeasureDecl>(r.program->statements[1]));
}

TEST_CASE("participant keyword is unit sugar") {
  auto r = parse_program("participant p\nmeasure x = continuous(p)\n");
  REQUIRE(r.ok());
  const auto& unit = std::get<UnitDecl>(r.program->statements[0]);
  CHECK(unit.participant_sugar);
  CHECK(unit.name.name == "p");
}

TEST_CASE("empty source gives an empty program and no diagnostics") {
  auto r = parse_program("");
  REQUIRE(r.ok());
  CHECK(r.program->statements.empty());
  CHECK(r.diagnostics.empty());
  auto v = validate(*r.program);
  CHECK_FALSE(v.ok());
  CHECK(has_code(v.diagnostics, DiagCode::MissingQuery));
}

TEST_CASE("unknown unit is reported at the owner token") {
  const std::string src = "measure income = continuous(participant)\n";
  auto r = parse_program(src);
  REQUIRE(r.ok());
  auto v = validate(*r.program);
  REQUIRE_FALSE(v.ok());
  const Diagnostic* d = nullptr;
  for (const auto& x : v.diagnostics) {
    if (x.code == DiagCode::UnknownUnit) d = &x;
  }
  REQUIRE(d);
  const auto at = src.find("participant");
  CHECK(d->span.begin == at);
  CHECK(d->span.end == at + std::string("participant").size());
  CHECK(d->span.line == 1);
  CHECK(d->span.column == static_cast<int>(at) + 1);
}

TEST_CASE("a causes relationship with a query validates") {
  auto v = check(std::string(kHeader) +
                 "assume causes(age, income)\nquery ace(age -> income)\n");
  REQUIRE(v.ok());
  CHECK(v.program->model.relationships.size() == 1);
  CHECK(v.program->query.iv == "age");
  CHECK(v.program->query.dv == "income");
}

TEST_CASE("increases on unordered categories is a type mismatch") {
  auto v = check(std::string(kHeader) +
                 "assume causes(race, income, when = race increases)\n"
                 "query ace(race -> income)\n");
  CHECK_FALSE(v.ok());
  CHECK(has_code(v.diagnostics, DiagCode::ComparisonTypeMismatch));
}

TEST_CASE("increases is accepted for continuous, ordered and counts") {
  auto v = check(std::string(kHeader) +
                 "assume causes(grade, income, when = grade increases, then = income decreases)\n"
                 "assume causes(visits, income, when = visits increases)\n"
                 "query ace(grade -> income)\n");
  CHECK(v.ok());
}

TEST_CASE("equality values are checked against the measure type") {
  SUBCASE("declared level") {
    CHECK(check(std::string(kHeader) +
                "assume causes(race, income, when = race == \"a\")\nquery ace(race -> income)\n")
              .ok());
  }
  SUBCASE("undeclared level") {
    auto v = check(std::string(kHeader) +
                   "assume causes(race, income, when = race == \"z\")\n"
                   "query ace(race -> income)\n");
    CHECK(has_code(v.diagnostics, DiagCode::UnknownLevel));
  }
  SUBCASE("fractional count") {
    auto v = check(std::string(kHeader) +
                   "assume causes(visits, income, when = visits == 2.5)\n"
                   "query ace(visits -> income)\n");
    CHECK(has_code(v.diagnostics, DiagCode::ComparisonTypeMismatch));
  }
  SUBCASE("when must name the first variable") {
    auto v = check(std::string(kHeader) +
                   "assume causes(age, income, when = income increases)\n"
                   "query ace(age -> income)\n");
    CHECK(has_code(v.diagnostics, DiagCode::ComparisonVariableMismatch));
  }
}

TEST_CASE("query without a relationship between iv and dv") {
  auto v = check(std::string(kHeader) +
                 "assume causes(age, race)\nquery ace(visits -> income)\n");
  CHECK(has_code(v.diagnostics, DiagCode::QueryWithoutRelationship));
}

TEST_CASE("query may follow a relates or a reversed causes") {
  CHECK(check(std::string(kHeader) + "assume relates(age, income)\nquery ace(age -> income)\n")
            .ok());
  CHECK(check(std::string(kHeader) + "assume causes(income, age)\nquery ace(age -> income)\n")
            .ok());
}

TEST_CASE("validation errors") {
  const std::string base = std::string(kHeader) + "assume causes(age, income)\n";
  SUBCASE("missing and multiple queries") {
    CHECK(has_code(check(base).diagnostics, DiagCode::MissingQuery));
    CHECK(has_code(check(base + "query ace(age -> income)\nquery ace(age -> income)\n").diagnostics,
                   DiagCode::MultipleQueries));
  }
  SUBCASE("self relationship") {
    CHECK(has_code(check(base + "assume causes(age, age)\nquery ace(age -> income)\n").diagnostics,
                   DiagCode::SelfRelationship));
  }
  SUBCASE("duplicate relationship") {
    CHECK(has_code(
        check(base + "hypothesize causes(age, income)\nquery ace(age -> income)\n").diagnostics,
        DiagCode::DuplicateRelationship));
    CHECK(has_code(check(base + "assume relates(age, race)\nassume relates(race, age)\n"
                                "query ace(age -> income)\n")
                       .diagnostics,
                   DiagCode::DuplicateRelationship));
  }
  SUBCASE("opposed causes are not duplicates") {
    CHECK(check(base + "assume causes(income, age)\nquery ace(age -> income)\n").ok());
  }
  SUBCASE("unknown variable and unit in relationship") {
    CHECK(has_code(check(base + "assume causes(nope, income)\nquery ace(age -> income)\n")
                       .diagnostics,
                   DiagCode::UnknownVariable));
    CHECK(has_code(check(base + "assume causes(participant, income)\nquery ace(age -> income)\n")
                       .diagnostics,
                   DiagCode::NotAMeasure));
  }
  SUBCASE("interaction arity and duplicates") {
    CHECK(has_code(check(base + "interacts(age, age)\nquery ace(age -> income)\n").diagnostics,
                   DiagCode::DuplicateInteractionVariable));
  }
  SUBCASE("duplicate levels and bad cardinality") {
    CHECK(has_code(check("unit u\nmeasure c = categories[\"a\", \"a\"](u)\n").diagnostics,
                   DiagCode::DuplicateLevel));
    CHECK(has_code(check("unit u cardinality = 0\n").diagnostics,
                   DiagCode::InvalidCardinality));
    CHECK(has_code(check("unit u\nmeasure c = categories[\"a\", \"b\"](u, cardinality = 1)\n")
                       .diagnostics,
                   DiagCode::InvalidCardinality));
  }
}

TEST_CASE("condition sugar marks a categorical measure") {
  auto v = check("unit u\nmeasure t = condition[\"ctl\", \"trt\"](u)\nmeasure y = continuous(u)\n"
                 "assume causes(t, y)\nquery ace(t -> y)\n");
  REQUIRE(v.ok());
  const auto* t = v.program->model.find("t");
  REQUIRE(t);
  CHECK(t->mtype.is_condition);
  CHECK(t->mtype.kind == MeasureKind::UnorderedCategories);
}

TEST_CASE("parse errors carry positions and the parser recovers") {
  SUBCASE("unterminated string") {
    auto r = parse_program("unit u \"pid\n");
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagCode::UnterminatedString));
  }
  SUBCASE("duplicate declaration") {
    auto r = parse_program("unit u\nunit u\n");
    CHECK(has_code(r.diagnostics, DiagCode::DuplicateDeclaration));
    CHECK(r.diagnostics.front().span.line == 2);
  }
  SUBCASE("unknown keyword") {
    auto r = parse_program("unit u\nmeasure x = weird(u)\n");
    CHECK(has_code(r.diagnostics, DiagCode::UnknownKeyword));
    auto r2 = parse_program("assume implies(a, b)\n");
    CHECK(has_code(r2.diagnostics, DiagCode::UnknownKeyword));
  }
  SUBCASE("several errors are reported in one pass") {
    auto r = parse_program("unit u\nmeasure x = (u)\nmeasure y = continuous u)\nquery ace(x y)\n");
    CHECK(r.diagnostics.size() >= 3);
    CHECK(r.diagnostics[0].span.line == 2);
    CHECK(r.diagnostics[1].span.line == 3);
  }
  SUBCASE("diagnostic formatting") {
    auto r = parse_program("unit u\nunit u\n");
    CHECK(format_diagnostic("m.cms", r.diagnostics.front()) ==
          "m.cms:2:6: error: 'u' is already declared at line 1 "
          "[DuplicateDeclaration]");
  }
}

TEST_CASE("parsing arbitrary bytes never throws") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "unit measure causes relates query ace()[],=\"#->\n\t xyz012\\\xff";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 120);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (int k = len(rng); k > 0; --k) s.push_back(alphabet[pick(rng)]);
    ParseResult r;
    CHECK_NOTHROW(r = parse_program(s));
    CHECK(r.ok() != has_errors(r.diagnostics));
  }
}

TEST_CASE("pretty-printing round-trips") {
  const std::string src =
      std::string(kHeader) +
      "participant p2 cardinality = 30\n"
      "measure t = condition[\"a \\\"q\\\"\", \"b\\\\\"] ordered(p2, cardinality = 2)\n"
      "hypothesize relates(age, income, when = age == 3, then = income != -1.5)\n"
      "assume causes(race, income, when = race != \"b\")\n"
      "interacts(age, race, income)\n"
      "query ace(age -> income)\n";
  auto a = parse_program(src);
  REQUIRE(a.ok());
  const std::string printed = print_program(*a.program);
  auto b = parse_program(printed);
  REQUIRE(b.ok());
  CHECK(structurally_equal(*a.program, *b.program));
  CHECK(print_program(*b.program) == printed);
}

TEST_CASE("round-trip holds for generated programs") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    std::uniform_int_distribution<int> nm(2, 6);
    const int n = nm(rng);
    std::string src = "unit u\n";
    for (int i = 0; i < n; ++i) {
      switch (rng() % 4) {
        case 0: src += "measure m" + std::to_string(i) + " = continuous(u)\n"; break;
        case 1: src += "measure m" + std::to_string(i) + " = counts(u, cardinality = 4)\n"; break;
        case 2:
          src += "measure m" + std::to_string(i) + " = categories[\"x\", \"y\"](u)\n";
          break;
        default:
          src += "measure m" + std::to_string(i) + " = condition[\"p\", \"q\", \"r\"] ordered(u)\n";
      }
    }
    for (int k = 0; k < n; ++k) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      if (a == b) continue;
      src += std::string(rng() % 2 ? "assume" : "hypothesize");
      src += rng() % 2 ? " causes(" : " relates(";
      src += "m" + std::to_string(a) + ", m" + std::to_string(b) + ")\n";
    }
    src += "interacts(m0, m1)\nquery ace(m0 -> m1)\n";
    auto a = parse_program(src);
    REQUIRE(a.ok());
    auto b = parse_program(print_program(*a.program));
    REQUIRE(b.ok());
    CHECK(structurally_equal(*a.program, *b.program));
  }
}

TEST_CASE("validation is deterministic") {
  auto p = parse_program(std::string(kHeader) +
                         "assume causes(age, income)\nquery ace(age -> income)\n");
  REQUIRE(p.ok());
  auto a = validate(*p.program);
  auto b = validate(*p.program);
  REQUIRE(a.ok());
  CHECK(a.program->model == b.program->model);
  CHECK(a.diagnostics == b.diagnostics);
}

}  // TEST_SUITE
