#include "doctest.h"

#include "cmc/data/data.hpp"
#include "helpers.hpp"

using namespace cmc;
using namespace cmc::data;

namespace {

const ColumnProfile& column(const std::vector<ColumnProfile>& ps, const std::string& name) {
  for (const auto& p : ps) {
    if (p.name == name) return p;
  }
  FAIL("no column " << name);
  return ps.front();
}

std::vector<DiagCode> codes(const ReconcileResult& r) {
  std::vector<DiagCode> out;
  for (const auto& d : r.diagnostics) out.push_back(d.code);
  return out;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("profiles a small file") {
  auto ps = profile_csv_text("a,b\n1,x\n2,y\n3,x\n");
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].name == "a");
  CHECK(ps[0].row_count == 3);
  CHECK(ps[0].observed_distinct == 3);
  CHECK(ps[0].observed_type_guess == TypeGuess::Integer);
  CHECK(ps[1].observed_distinct == 2);
  CHECK(ps[1].observed_type_guess == TypeGuess::Text);
  CHECK(ps[1].distinct_values == std::set<std::string>{"x", "y"});
}

TEST_CASE("type guesses, missing cells and negatives") {
  auto ps = profile_csv_text("i,n,t,m\n-1,1.5,a,\n2,2e3,\"b,c\",4\n");
  CHECK(column(ps, "i").has_negative);
  CHECK(column(ps, "n").observed_type_guess == TypeGuess::Numeric);
  CHECK(column(ps, "t").distinct_values == std::set<std::string>{"a", "b,c"});
  CHECK(column(ps, "m").missing_count == 1);
  CHECK(column(ps, "m").observed_distinct == 1);
}

TEST_CASE("quoting, CRLF, BOM and blank lines") {
  auto ps = profile_csv_text(
      "\xEF\xBB\xBFq,r\r\n\"say \"\"hi\"\"\",\"line\nbreak\"\r\n\r\nz,w\r\n");
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].name == "q");
  CHECK(ps[0].row_count == 2);
  CHECK(ps[0].distinct_values.count("say \"hi\"") == 1);
  CHECK(ps[1].distinct_values.count("line\nbreak") == 1);
}

TEST_CASE("malformed input") {
  try {
    profile_csv_text("a,b\n1,2\n3,\"open\n4,5\n");
    FAIL("expected MalformedCsv");
  } catch (const CsvError& e) {
    CHECK(e.code() == ErrorCode::MalformedCsv);
    CHECK(e.line() == 3);
  }
  try {
    profile_csv_text("a,b\n1,2\n3\n");
    FAIL("expected MalformedCsv");
  } catch (const CsvError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(profile_csv_text("a,a\n1,2\n"), CsvError);
  try {
    profile_csv_text("");
    FAIL("expected EmptyFile");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyFile);
  }
  try {
    profile_csv("/nonexistent/data.csv");
    FAIL("expected FileNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FileNotFound);
  }
}

TEST_CASE("census fixture") {
  auto ps = profile_csv(testing::fixture("census.csv"));
  REQUIRE(ps.size() == 7);
  CHECK(column(ps, "pid").observed_distinct == 40);
  CHECK(column(ps, "Income").missing_count == 1);
  CHECK(column(ps, "Race").observed_type_guess == TypeGuess::Text);
}

TEST_CASE("reconcile fills cardinality for units and categorical measures") {
  auto prog = testing::load(
      "unit household\n"
      "measure Region = categories[\"N\", \"S\", \"E\", \"W\"](household)\n"
      "measure Rooms = counts(household)\n"
      "assume causes(Region, Rooms)\nquery ace(Region -> Rooms)\n");
  auto ps = profile_csv_text("household,Region,Rooms\n1,N,2\n2,S,3\n3,E,1\n4,W,2\n5,N,4\n");
  auto r = reconcile(prog.model, ps);
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  CHECK(r.model->find("Region")->cardinality == 4);
  CHECK(r.model->find("household")->cardinality == 5);
  CHECK_FALSE(r.model->find("Rooms")->cardinality.has_value());
}

TEST_CASE("negative counts are an error") {
  auto prog = testing::load(
      "unit u\nmeasure Rooms = counts(u)\nmeasure Rent = continuous(u)\n"
      "assume causes(Rooms, Rent)\nquery ace(Rooms -> Rent)\n");
  auto r = reconcile(prog.model, profile_csv_text("Rooms,Rent\n-1,3.5\n2,4\n"));
  CHECK_FALSE(r.ok());
  CHECK(codes(r) == std::vector<DiagCode>{DiagCode::NegativeCount});
}

TEST_CASE("declared cardinality wins over the data with a warning") {
  auto prog = testing::load(
      "unit u\n"
      "measure G = categories[\"a\", \"b\", \"c\", \"d\", \"e\"](u, cardinality = 5)\n"
      "measure Y = continuous(u)\n"
      "assume causes(G, Y)\nquery ace(G -> Y)\n");
  auto r = reconcile(prog.model, profile_csv_text("G,Y\na,1\nb,2\nc,3\n"));
  REQUIRE(r.ok());
  CHECK(codes(r) == std::vector<DiagCode>{DiagCode::CardinalityConflict});
  CHECK(r.diagnostics[0].severity == Severity::Warning);
  CHECK(r.model->find("G")->cardinality == 5);
}

TEST_CASE("missing columns and type mismatches") {
  auto prog = testing::load(
      "unit u \"uid\"\nmeasure Y = continuous(u)\nmeasure X = counts(u)\n"
      "assume causes(X, Y)\nquery ace(X -> Y)\n");
  auto r = reconcile(prog.model, profile_csv_text("Y,X\nhigh,1.5\n"));
  CHECK_FALSE(r.ok());
  auto c = codes(r);
  CHECK(std::count(c.begin(), c.end(), DiagCode::MissingColumn) == 1);
  CHECK(std::count(c.begin(), c.end(), DiagCode::TypeMismatch) == 2);
}

TEST_CASE("undeclared levels warn and missing values become notes") {
  auto prog = testing::load(
      "unit u\nmeasure G = categories[\"a\", \"b\"](u)\nmeasure Y = continuous(u)\n"
      "assume causes(G, Y)\nquery ace(G -> Y)\n");
  auto r = reconcile(prog.model, profile_csv_text("G,Y\na,1\nc,\nb,2\n"));
  REQUIRE(r.ok());
  CHECK(codes(r) == std::vector<DiagCode>{DiagCode::UndeclaredLevels, DiagCode::MissingValues});
  REQUIRE(r.data_notes.size() == 1);
  CHECK(r.data_notes[0] == "'Y' has 1 missing value in 3 rows");
}

TEST_CASE("reconcile is idempotent") {
  auto prog = testing::load(testing::slurp(testing::fixture("income_demographics.cms")));
  auto ps = profile_csv(testing::fixture("census.csv"));
  auto once = reconcile(prog.model, ps);
  REQUIRE(once.ok());
  auto twice = reconcile(*once.model, ps);
  REQUIRE(twice.ok());
  CHECK(*twice.model == *once.model);
}

}  // TEST_SUITE
