#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmc {

// Failure codes raised by the compiler stages after parsing/validation.
// Parse and validation problems are reported as Diagnostics instead.
enum class ErrorCode {
  // graph
  UnknownNode,
  GraphTooLarge,
  GraphNotAcyclic,
  InvalidArgument,
  // disambiguation
  StaleAmbiguity,
  UnknownAmbiguity,
  ChoiceOutOfRange,
  // derivation
  RefinementIncomplete,
  DegenerateInteraction,
  InvalidFamilyLink,
  AddedCovariateNotSuggested,
  MissingFamilyChoice,
  // codegen
  MissingDataPath,
  MalformedModelJson,
  // data
  FileNotFound,
  MalformedCsv,
  EmptyFile,
  // answer logs
  MalformedAnswerLog,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cmc
