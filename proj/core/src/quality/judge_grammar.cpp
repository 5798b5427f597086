#include "counselforge/quality/judge_grammar.hpp"

#include <cctype>
#include <set>

#include "counselforge/common/text.hpp"

namespace counselforge::quality {

namespace {

bool is_sep(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';' || c == '/';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

JudgeFields parse_judge_fields(std::string_view out, std::span<const ScoreField> fields) {
  JudgeFields result;
  std::set<std::string> seen;
  std::size_t i = 0;
  const std::size_t n = out.size();

  auto fail = [&](const std::string& why) -> JudgeParseError {
    return JudgeParseError(why + " (at offset " + std::to_string(i) + ")");
  };

  while (true) {
    while (i < n && is_sep(out[i])) ++i;
    if (i == n) break;

    const std::size_t key_start = i;
    while (i < n && (std::isalpha(static_cast<unsigned char>(out[i])) || out[i] == '_')) ++i;
    if (i == key_start) throw fail("expected a field name");
    const std::string key = text::to_lower(out.substr(key_start, i - key_start));
    while (i < n && (out[i] == ' ' || out[i] == '\t')) ++i;
    if (i == n || out[i] != ':') throw fail("expected ':' after '" + key + "'");
    ++i;
    while (i < n && (out[i] == ' ' || out[i] == '\t')) ++i;

    if (key == "rationale") {
      result.rationale = text::trim(out.substr(i));
      break;
    }

    const ScoreField* field = nullptr;
    for (const auto& f : fields) {
      if (f.key == key) field = &f;
    }
    if (field == nullptr) throw fail("unexpected field '" + key + "'");
    if (!seen.insert(key).second) throw fail("duplicate field '" + key + "'");

    const std::size_t num_start = i;
    while (i < n && is_digit(out[i])) ++i;
    if (i == num_start) throw fail("field '" + key + "' has no numeric value");
    int decimals = 0;
    if (i < n && out[i] == '.') {
      ++i;
      const std::size_t frac_start = i;
      while (i < n && is_digit(out[i])) ++i;
      decimals = static_cast<int>(i - frac_start);
      if (decimals == 0) throw fail("field '" + key + "' has a dangling decimal point");
    }
    if (decimals > field->max_decimals) {
      throw fail("field '" + key + "' allows at most " + std::to_string(field->max_decimals) +
                 " decimal places");
    }
    const double value = std::stod(std::string(out.substr(num_start, i - num_start)));
    if (out.substr(i).starts_with("/10") && (i + 3 == n || is_sep(out[i + 3]))) i += 3;
    if (i < n && !is_sep(out[i])) throw fail("unexpected text after '" + key + "' value");
    if (value < field->min || value > field->max) {
      throw fail("field '" + key + "' value out of range");
    }
    result.scores[key] = value;
  }

  for (const auto& f : fields) {
    if (!seen.count(f.key)) throw JudgeParseError("missing field '" + f.key + "'");
  }
  return result;
}

}  // namespace counselforge::quality
