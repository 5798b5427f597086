#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace counselforge::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Lowercased word tokens: maximal runs of ASCII alphanumerics, apostrophes
/// and non-ASCII bytes (so UTF-8 words stay whole).
std::vector<std::string> word_tokens(std::string_view s);

std::size_t count_words(std::string_view s);

/// Sorted, de-duplicated word n-gram shingles. Texts shorter than `n` tokens
/// yield a single shingle made of all their tokens; empty texts yield none.
std::vector<std::string> word_shingles(std::string_view s, std::size_t n = 4);

/// Jaccard similarity of two sorted unique shingle sets. Two empty sets
/// compare as 0.
double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b);

/// |a ∩ b| for sorted unique ranges.
std::size_t intersection_size(const std::vector<std::string>& a,
                              const std::vector<std::string>& b);

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool iequals(std::string_view a, std::string_view b);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

}  // namespace counselforge::text
