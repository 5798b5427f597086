#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace counselforge::synthgen {

struct DistortionEntry {
  std::string name;
  std::vector<std::string> sub_entries;
};

/// The CBT cognitive-distortion categories used to label scenarios: ten
/// top-level entries, with Mind Reading and Fortune Telling nested under
/// Jumping to Conclusions.
class DistortionTaxonomy {
 public:
  static const DistortionTaxonomy& cbt();

  const std::vector<DistortionEntry>& entries() const noexcept { return entries_; }

  /// Canonical names of every top-level and nested entry.
  std::vector<std::string> all_names() const;

  /// Case-insensitive lookup that also accepts a few common shorthands
  /// ("catastrophizing", "labeling", ...). Returns the canonical name.
  std::optional<std::string> canonical(std::string_view label) const;

  bool contains(std::string_view canonical_name) const;

  /// Bulleted listing for prompts.
  std::string render() const;

 private:
  explicit DistortionTaxonomy(std::vector<DistortionEntry> entries);
  std::vector<DistortionEntry> entries_;
};

/// Splits a "Cognitive Distortions" field on commas/semicolons and
/// canonicalises each label. "n/a", "none" and empty parse to {}.
/// Throws UnknownDistortion for a label outside the taxonomy.
std::vector<std::string> parse_distortion_labels(
    std::string_view field, const DistortionTaxonomy& taxonomy = DistortionTaxonomy::cbt());

/// CBT techniques to hint at during session synthesis. Entries are unique and
/// there are at least three.
class TechniqueCatalog {
 public:
  static constexpr std::array<std::string_view, 3> kCore{
      "Socratic questioning", "cognitive restructuring", "reflective listening"};

  /// Throws PreconditionError on fewer than 3 or duplicate entries.
  explicit TechniqueCatalog(std::vector<std::string> techniques);

  /// kCore followed by `extra`.
  static TechniqueCatalog with_core(const std::vector<std::string>& extra);

  const std::vector<std::string>& techniques() const noexcept { return techniques_; }
  std::size_t size() const noexcept { return techniques_.size(); }

  /// `n` distinct techniques chosen by `seed` (all of them if n >= size).
  std::vector<std::string> sample(std::size_t n, std::uint64_t seed) const;

 private:
  std::vector<std::string> techniques_;
};

}  // namespace counselforge::synthgen
