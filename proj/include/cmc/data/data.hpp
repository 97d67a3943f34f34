#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmc/diagnostics.hpp"
#include "cmc/dsl/model.hpp"
#include "cmc/error.hpp"

namespace cmc::data {

enum class TypeGuess { Integer, Numeric, Text };

std::string_view type_guess_name(TypeGuess t);

struct ColumnProfile {
  std::string name;
  std::size_t observed_distinct = 0;
  TypeGuess observed_type_guess = TypeGuess::Integer;  // narrowest type fitting every value
  std::size_t row_count = 0;
  std::size_t missing_count = 0;
  std::set<std::string> distinct_values;  // non-missing cell texts
  bool has_negative = false;

  bool operator==(const ColumnProfile&) const = default;
};

// Raised for MalformedCsv; `line` is 1-based.
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : Error(ErrorCode::MalformedCsv, "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Single streaming pass over an RFC-4180 file with a header row. Empty cells
// count as missing. Throws Error{FileNotFound | EmptyFile} or CsvError.
std::vector<ColumnProfile> profile_csv(const std::string& path);
std::vector<ColumnProfile> profile_csv_text(const std::string& text);

struct ReconcileResult {
  std::optional<dsl::ConceptualModel> model;  // empty iff an error was reported
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> data_notes;  // missing-value reports for the script header

  bool ok() const { return model.has_value(); }
};

// Columns are matched to measures by name; a unit is matched by its id column
// when it declares one, else by its own name when such a column exists.
ReconcileResult reconcile(const dsl::ConceptualModel& cm,
                          const std::vector<ColumnProfile>& profiles);

}  // namespace cmc::data
