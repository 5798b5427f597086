#include "counselforge/synthgen/taxonomy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/random.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/synthgen/errors.hpp"

namespace counselforge::synthgen {

DistortionTaxonomy::DistortionTaxonomy(std::vector<DistortionEntry> entries)
    : entries_(std::move(entries)) {}

const DistortionTaxonomy& DistortionTaxonomy::cbt() {
  static const DistortionTaxonomy taxonomy({
      {"All-or-Nothing Thinking", {}},
      {"Overgeneralization", {}},
      {"Mental Filter", {}},
      {"Disqualifying the Positive", {}},
      {"Jumping to Conclusions", {"Mind Reading", "Fortune Telling"}},
      {"Magnification (Catastrophizing) or Minimization", {}},
      {"Emotional Reasoning", {}},
      {"Should Statements", {}},
      {"Labeling and Mislabeling", {}},
      {"Personalization", {}},
  });
  return taxonomy;
}

std::vector<std::string> DistortionTaxonomy::all_names() const {
  std::vector<std::string> names;
  for (const auto& e : entries_) {
    names.push_back(e.name);
    for (const auto& s : e.sub_entries) names.push_back(s);
  }
  return names;
}

std::optional<std::string> DistortionTaxonomy::canonical(std::string_view label) const {
  static const std::map<std::string, std::string> kShorthand{
      {"all or nothing thinking", "All-or-Nothing Thinking"},
      {"black and white thinking", "All-or-Nothing Thinking"},
      {"black-and-white thinking", "All-or-Nothing Thinking"},
      {"catastrophizing", "Magnification (Catastrophizing) or Minimization"},
      {"catastrophising", "Magnification (Catastrophizing) or Minimization"},
      {"magnification", "Magnification (Catastrophizing) or Minimization"},
      {"minimization", "Magnification (Catastrophizing) or Minimization"},
      {"labeling", "Labeling and Mislabeling"},
      {"labelling", "Labeling and Mislabeling"},
      {"mislabeling", "Labeling and Mislabeling"},
      {"should statement", "Should Statements"},
      {"overgeneralisation", "Overgeneralization"},
      {"personalisation", "Personalization"},
  };
  const std::string wanted = text::to_lower(text::trim(label));
  for (const auto& name : all_names()) {
    if (text::to_lower(name) == wanted) return name;
  }
  if (auto it = kShorthand.find(wanted); it != kShorthand.end()) return it->second;
  return std::nullopt;
}

bool DistortionTaxonomy::contains(std::string_view canonical_name) const {
  const auto names = all_names();
  return std::find(names.begin(), names.end(), canonical_name) != names.end();
}

std::string DistortionTaxonomy::render() const {
  std::string out;
  for (const auto& e : entries_) {
    out += "- " + e.name + "\n";
    for (const auto& s : e.sub_entries) out += "  - " + s + "\n";
  }
  return out;
}

std::vector<std::string> parse_distortion_labels(std::string_view field,
                                                 const DistortionTaxonomy& taxonomy) {
  std::string cleaned = text::trim(field);
  while (!cleaned.empty() && (cleaned.back() == '.')) cleaned.pop_back();
  const std::string lower = text::to_lower(cleaned);
  if (lower.empty() || lower == "n/a" || lower == "na" || lower == "none") return {};

  std::vector<std::string> out;
  std::string normalized = cleaned;
  std::replace(normalized.begin(), normalized.end(), ';', ',');
  for (const auto& part : text::split(normalized, ',')) {
    const auto label = text::trim(part);
    if (label.empty()) continue;
    auto name = taxonomy.canonical(label);
    if (!name) throw UnknownDistortion("not a recognised cognitive distortion: " + label);
    if (std::find(out.begin(), out.end(), *name) == out.end()) out.push_back(*name);
  }
  return out;
}

TechniqueCatalog::TechniqueCatalog(std::vector<std::string> techniques)
    : techniques_(std::move(techniques)) {
  if (techniques_.size() < 3) throw PreconditionError("technique catalog needs at least 3 entries");
  std::set<std::string> seen;
  for (const auto& t : techniques_) {
    if (text::trim(t).empty()) throw PreconditionError("empty technique name");
    if (!seen.insert(text::to_lower(t)).second) {
      throw PreconditionError("duplicate technique: " + t);
    }
  }
}

TechniqueCatalog TechniqueCatalog::with_core(const std::vector<std::string>& extra) {
  std::vector<std::string> all(kCore.begin(), kCore.end());
  all.insert(all.end(), extra.begin(), extra.end());
  return TechniqueCatalog(std::move(all));
}

std::vector<std::string> TechniqueCatalog::sample(std::size_t n, std::uint64_t seed) const {
  std::vector<std::string> pool = techniques_;
  deterministic_shuffle(pool, seed);
  pool.resize(std::min(n, pool.size()));
  return pool;
}

}  // namespace counselforge::synthgen
