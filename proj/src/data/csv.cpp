#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cmc/data/data.hpp"

namespace cmc::data {

std::string_view type_guess_name(TypeGuess t) {
  switch (t) {
    case TypeGuess::Integer: return "Integer";
    case TypeGuess::Numeric: return "Numeric";
    case TypeGuess::Text: return "Text";
  }
  return "Text";
}

namespace {

class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  // False once the input is exhausted. Blank lines are skipped.
  bool next(std::vector<std::string>& fields, std::size_t& record_line) {
    fields.clear();
    while (in_.peek() == '\n' || in_.peek() == '\r') newline(in_.get());
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    record_line = line_;

    enum class State { FieldStart, Unquoted, Quoted, AfterQuote } state = State::FieldStart;
    std::string field;
    std::size_t quote_line = line_;
    for (;;) {
      const int c = in_.get();
      const bool eof = c == std::char_traits<char>::eof();
      switch (state) {
        case State::FieldStart:
        case State::Unquoted:
          if (eof || c == '\n' || c == '\r') {
            fields.push_back(std::move(field));
            if (!eof) newline(c);
            return true;
          }
          if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            state = State::FieldStart;
          } else if (c == '"') {
            if (state == State::Unquoted) {
              throw CsvError(line_, "quote character inside an unquoted field");
            }
            quote_line = line_;
            state = State::Quoted;
          } else {
            field.push_back(static_cast<char>(c));
            state = State::Unquoted;
          }
          break;
        case State::Quoted:
          if (eof) throw CsvError(quote_line, "quoted field is never closed");
          if (c == '"') {
            if (in_.peek() == '"') {
              in_.get();
              field.push_back('"');
            } else {
              state = State::AfterQuote;
            }
          } else {
            if (c == '\n') ++line_;
            field.push_back(static_cast<char>(c));
          }
          break;
        case State::AfterQuote:
          if (eof || c == '\n' || c == '\r') {
            fields.push_back(std::move(field));
            if (!eof) newline(c);
            return true;
          }
          if (c != ',') throw CsvError(line_, "unexpected character after closing quote");
          fields.push_back(std::move(field));
          field.clear();
          state = State::FieldStart;
          break;
      }
    }
  }

 private:
  void newline(int c) {
    if (c == '\r' && in_.peek() == '\n') in_.get();
    ++line_;
  }

  std::istream& in_;
  std::size_t line_ = 1;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_integer(std::string_view s, long long& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' ||
              c == 'E';
    if (!ok) return false;  // rules out inf / nan spellings
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void observe(ColumnProfile& p, const std::string& cell) {
  ++p.row_count;
  if (cell.empty()) {
    ++p.missing_count;
    return;
  }
  p.distinct_values.insert(cell);
  long long i = 0;
  double d = 0;
  if (parse_integer(cell, i)) {
    if (i < 0) p.has_negative = true;
  } else if (parse_number(cell, d)) {
    if (d < 0) p.has_negative = true;
    if (p.observed_type_guess == TypeGuess::Integer) {
      p.observed_type_guess = TypeGuess::Numeric;
    }
  } else {
    p.observed_type_guess = TypeGuess::Text;
  }
}

std::vector<ColumnProfile> profile_stream(std::istream& in) {
  RecordReader reader(in);
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!reader.next(fields, line)) throw Error(ErrorCode::EmptyFile, "the data file is empty");

  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
  std::vector<ColumnProfile> profiles;
  std::map<std::string, std::size_t> seen;
  for (auto& name : fields) {
    if (!seen.emplace(name, profiles.size()).second) {
      throw CsvError(line, "duplicate column name '" + name + "'");
    }
    ColumnProfile p;
    p.name = name;
    profiles.push_back(std::move(p));
  }

  while (reader.next(fields, line)) {
    if (fields.size() != profiles.size()) {
      throw CsvError(line, "expected " + std::to_string(profiles.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) observe(profiles[i], fields[i]);
  }
  for (auto& p : profiles) p.observed_distinct = p.distinct_values.size();
  return profiles;
}

}  // namespace

std::vector<ColumnProfile> profile_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open data file '" + path + "'");
  return profile_stream(in);
}

std::vector<ColumnProfile> profile_csv_text(const std::string& text) {
  std::istringstream in(text);
  return profile_stream(in);
}

}  // namespace cmc::data
