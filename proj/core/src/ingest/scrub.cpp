#include "counselforge/ingest/scrub.hpp"

#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/ingest/errors.hpp"

namespace counselforge::ingest {

namespace {

constexpr int kMaxPasses = 8;

}  // namespace

CleanReport& CleanReport::operator+=(const CleanReport& other) {
  removed_tokens += other.removed_tokens;
  dropped_segments += other.dropped_segments;
  for (const auto& [rule, hits] : other.scrub_rule_hits) scrub_rule_hits[rule] += hits;
  return *this;
}

Scrubber::Scrubber(std::vector<ScrubRule> rules) : rules_(std::move(rules)) {
  compiled_.reserve(rules_.size());
  for (const auto& r : rules_) {
    if (r.name.empty()) throw PatternError("scrub rule without a name");
    if (r.pattern.empty()) throw PatternError("scrub rule '" + r.name + "' has an empty pattern");
    try {
      auto flags = std::regex::ECMAScript;
      if (r.ignore_case) flags |= std::regex::icase;
      compiled_.emplace_back(r.pattern, flags);
    } catch (const std::regex_error& e) {
      throw PatternError("scrub rule '" + r.name + "': " + e.what());
    }
  }
}

ScrubResult Scrubber::operator()(const SessionTranscript& session) const {
  ScrubResult result{session, {}};
  for (const auto& r : rules_) result.report.scrub_rule_hits[r.name] = 0;

  auto& turns = result.session.turns;
  for (int pass = 0;; ++pass) {
    if (pass == kMaxPasses) {
      throw PatternError("scrub rules did not settle after " + std::to_string(kMaxPasses) +
                         " passes");
    }
    bool changed = false;
    for (auto& turn : turns) {
      for (std::size_t i = 0; i < rules_.size(); ++i) {
        std::size_t hits = 0;
        std::size_t tokens = 0;
        for (auto it = std::sregex_iterator(turn.text.begin(), turn.text.end(), compiled_[i]);
             it != std::sregex_iterator(); ++it) {
          if (it->length(0) == 0) continue;
          ++hits;
          tokens += text::count_words(it->str());
        }
        if (hits == 0) continue;
        std::string replaced = std::regex_replace(turn.text, compiled_[i], rules_[i].replacement);
        if (replaced == turn.text) continue;
        turn.text = std::move(replaced);
        result.report.scrub_rule_hits[rules_[i].name] += hits;
        result.report.removed_tokens += tokens;
        changed = true;
      }
      std::string trimmed = text::trim(turn.text);
      if (trimmed != turn.text) {
        turn.text = std::move(trimmed);
        changed = true;
      }
    }

    const auto before = turns.size();
    std::erase_if(turns, [](const Turn& t) { return t.text.empty(); });
    result.report.dropped_segments += before - turns.size();
    if (before != turns.size()) changed = true;
    auto merged = merge_consecutive(std::move(turns));
    turns = std::move(merged);
    if (!changed) break;
  }
  validate_session(result.session);
  return result;
}

ScrubResult scrub(const SessionTranscript& session, const std::vector<ScrubRule>& rules) {
  return Scrubber(rules)(session);
}

std::vector<ScrubRule> parse_scrub_rules(const nlohmann::json& doc) {
  std::vector<ScrubRule> rules;
  try {
    for (const auto& r : doc.at("rules")) {
      rules.push_back(ScrubRule{r.at("name").get<std::string>(),
                                r.at("pattern").get<std::string>(),
                                r.value("replacement", std::string{}),
                                r.value("ignore_case", false)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw PatternError(std::string("scrub rules: ") + e.what());
  }
  Scrubber validate_only(rules);
  return rules;
}

std::vector<ScrubRule> load_scrub_rules(const std::filesystem::path& path) {
  try {
    return parse_scrub_rules(read_json_file(path));
  } catch (const PatternError& e) {
    throw PatternError(path.string() + ": " + e.what());
  }
}

void to_json(nlohmann::json& j, const CleanReport& r) {
  j = nlohmann::json{{"removed_tokens", r.removed_tokens},
                     {"scrub_rule_hits", r.scrub_rule_hits},
                     {"dropped_segments", r.dropped_segments}};
}

}  // namespace counselforge::ingest
