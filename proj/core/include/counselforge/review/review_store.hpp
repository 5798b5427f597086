#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/common/clock.hpp"
#include "counselforge/common/errors.hpp"
#include "counselforge/ingest/session.hpp"
#include "counselforge/quality/scoring.hpp"

namespace counselforge::review {

class DuplicateItem : public Error {
 public:
  using Error::Error;
};

class ItemNotFound : public Error {
 public:
  using Error::Error;
};

class RevisionConflict : public Error {
 public:
  RevisionConflict(const std::string& what, std::size_t current)
      : Error(what), current_revision(current) {}
  std::size_t current_revision;
};

/// Edited turns break the transcript invariants, or the edit changes nothing.
class InvalidEdit : public Error {
 public:
  using Error::Error;
};

/// Decision on an item that has already left `pending`.
class InvalidTransition : public Error {
 public:
  using Error::Error;
};

enum class ReviewStatus { pending, approved, rejected, edited_approved };
enum class ReviewAction { approve, reject, edit_and_approve };

std::string_view to_string(ReviewStatus s);
ReviewStatus review_status_from_string(std::string_view s);
std::string_view to_string(ReviewAction a);
ReviewAction review_action_from_string(std::string_view s);

/// One changed turn position. `before`/`after` are empty when the turn did
/// not exist on that side.
struct TurnDiff {
  std::size_t index = 0;
  std::optional<std::string> before;
  std::optional<std::string> after;

  friend bool operator==(const TurnDiff&, const TurnDiff&) = default;
};

struct HistoryEntry {
  std::size_t revision = 0;
  std::string action;
  std::string editor_label;
  std::string timestamp;
  std::vector<TurnDiff> diffs;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct ReviewItem {
  std::string item_id;
  ingest::SessionTranscript session;
  std::vector<quality::Flag> flags;
  std::optional<quality::QualityScore> score;
  ReviewStatus status = ReviewStatus::pending;
  std::size_t revision = 0;
  std::string notes;
  std::vector<HistoryEntry> edit_history;

  friend bool operator==(const ReviewItem&, const ReviewItem&) = default;
};

struct ReviewDecision {
  std::string item_id;
  ReviewAction action = ReviewAction::approve;
  std::optional<std::vector<ingest::Turn>> edited_turns;
  std::size_t expected_revision = 0;
  std::string notes;
  std::string editor_label;
};

/// Turn-by-turn comparison by position.
std::vector<TurnDiff> diff_turns(const std::vector<ingest::Turn>& before,
                                 const std::vector<ingest::Turn>& after);

struct ReviewStats {
  std::map<std::string, std::size_t> by_status;
  std::size_t total = 0;
};

/// Review queue persisted under `dir` as an append-only events.jsonl (one
/// full item snapshot per write) plus a materialized state.json. Reopening a
/// directory replays the event log.
///
/// Readers take an immutable snapshot through an atomic shared_ptr and never
/// wait on writers; writers are serialized and publish a new snapshot.
class ReviewStore {
 public:
  explicit ReviewStore(std::filesystem::path dir, WallClock clock = system_wall_clock());

  ReviewStore(const ReviewStore&) = delete;
  ReviewStore& operator=(const ReviewStore&) = delete;

  /// Flags must be non-empty (PreconditionError). Throws DuplicateItem.
  ReviewItem enqueue(const ingest::SessionTranscript& session,
                     const std::vector<quality::Flag>& flags,
                     const std::optional<quality::QualityScore>& score = std::nullopt);

  /// Throws ItemNotFound, RevisionConflict, InvalidTransition, InvalidEdit.
  ReviewItem decide(const ReviewDecision& decision);

  std::optional<ReviewItem> get(const std::string& item_id) const;
  /// Items ordered by item_id, optionally filtered by status.
  std::vector<ReviewItem> items(std::optional<ReviewStatus> status = std::nullopt) const;
  bool contains(const std::string& item_id) const;
  std::size_t pending_count() const;

  /// Approved and edited_approved sessions (edits applied), by item_id.
  std::vector<ingest::SessionTranscript> export_approved() const;
  ReviewStats stats() const;

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path events_path() const { return dir_ / "events.jsonl"; }
  std::filesystem::path state_path() const { return dir_ / "state.json"; }

 private:
  using Snapshot = std::map<std::string, std::shared_ptr<const ReviewItem>>;

  std::shared_ptr<const Snapshot> snapshot() const;
  void commit(const std::string& event, const ReviewItem& item);

  std::filesystem::path dir_;
  WallClock clock_;
  std::mutex write_mu_;
  std::shared_ptr<const Snapshot> state_;
};

void to_json(nlohmann::json& j, const TurnDiff& d);
void from_json(const nlohmann::json& j, TurnDiff& d);
void to_json(nlohmann::json& j, const HistoryEntry& h);
void from_json(const nlohmann::json& j, HistoryEntry& h);
void to_json(nlohmann::json& j, const ReviewItem& item);
void from_json(const nlohmann::json& j, ReviewItem& item);
void to_json(nlohmann::json& j, const ReviewDecision& d);
/// Throws PreconditionError on a missing or mistyped field.
void from_json(const nlohmann::json& j, ReviewDecision& d);
void to_json(nlohmann::json& j, const ReviewStats& s);

/// Queue row: item_id, status, revision, flag reasons, turn count, mean score.
nlohmann::json summarize_item(const ReviewItem& item);

}  // namespace counselforge::review
