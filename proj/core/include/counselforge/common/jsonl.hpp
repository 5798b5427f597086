#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace counselforge {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames, so readers never observe a
/// half-written file.
void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view contents);

/// Parses JSON Lines. Blank lines are skipped; a malformed line throws IoError
/// naming the file and 1-based line number.
std::vector<json> read_jsonl(const std::filesystem::path& path);

std::string to_jsonl(const std::vector<json>& rows);

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<json>& rows);

void append_jsonl_line(const std::filesystem::path& path, const json& row);

json read_json_file(const std::filesystem::path& path);

void write_json_file(const std::filesystem::path& path, const json& value);

template <typename T>
std::vector<json> to_json_rows(const std::vector<T>& items) {
  std::vector<json> rows;
  rows.reserve(items.size());
  for (const auto& item : items) rows.emplace_back(item);
  return rows;
}

template <typename T>
std::vector<T> from_json_rows(const std::vector<json>& rows) {
  std::vector<T> items;
  items.reserve(rows.size());
  for (const auto& row : rows) items.push_back(row.get<T>());
  return items;
}

}  // namespace counselforge
