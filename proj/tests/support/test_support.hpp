#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/common/jsonl.hpp"
#include "counselforge/ingest/session.hpp"

namespace cftest {

namespace fs = std::filesystem;

inline fs::path fixture_dir() { return fs::path(COUNSELFORGE_FIXTURE_DIR); }
inline fs::path source_dir() { return fs::path(COUNSELFORGE_SOURCE_DIR); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "cf") {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (std::string(tag) + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// Alternating client-first session built from plain strings.
inline counselforge::ingest::SessionTranscript make_session(
    std::string id, const std::vector<std::string>& texts,
    counselforge::ingest::Source source = counselforge::ingest::Source::real) {
  using counselforge::ingest::Speaker;
  counselforge::ingest::SessionTranscript s;
  s.session_id = std::move(id);
  s.source = source;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    s.turns.push_back({i, i % 2 == 0 ? Speaker::client : Speaker::counselor, texts[i]});
  }
  return s;
}

/// Writes scripted-backend rules as JSON Lines.
inline fs::path write_rules(const fs::path& path, const std::vector<nlohmann::json>& rules) {
  counselforge::write_jsonl(path, rules);
  return path;
}

/// Random text over a small vocabulary so that sessions overlap by chance.
inline std::string random_text(std::mt19937_64& rng, std::size_t words, std::size_t vocab) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += "w" + std::to_string(rng() % vocab);
  }
  return out;
}

}  // namespace cftest
