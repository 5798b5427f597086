#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/ingest/session.hpp"

namespace counselforge::ingest {

struct ScrubRule {
  std::string name;
  std::string pattern;  // ECMAScript regex
  std::string replacement;
  bool ignore_case = false;
};

struct CleanReport {
  std::size_t removed_tokens = 0;
  std::map<std::string, std::size_t> scrub_rule_hits;
  std::size_t dropped_segments = 0;

  CleanReport& operator+=(const CleanReport& other);
};

struct ScrubResult {
  SessionTranscript session;
  CleanReport report;
};

/// Compiled rule set. Construction throws PatternError for an unnamed rule or
/// an invalid regex.
class Scrubber {
 public:
  explicit Scrubber(std::vector<ScrubRule> rules);

  /// Applies every rule to every turn until nothing changes, drops turns left
  /// empty and re-merges neighbours. Idempotent. Throws PatternError when the
  /// rules rewrite each other without settling, AlternationError when fewer
  /// than two turns survive.
  ScrubResult operator()(const SessionTranscript& session) const;

  const std::vector<ScrubRule>& rules() const noexcept { return rules_; }

 private:
  std::vector<ScrubRule> rules_;
  std::vector<std::regex> compiled_;
};

ScrubResult scrub(const SessionTranscript& session, const std::vector<ScrubRule>& rules);

/// {"rules": [{"name", "pattern", "replacement", "ignore_case"}, ...]}
std::vector<ScrubRule> parse_scrub_rules(const nlohmann::json& doc);
std::vector<ScrubRule> load_scrub_rules(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const CleanReport& r);

}  // namespace counselforge::ingest
