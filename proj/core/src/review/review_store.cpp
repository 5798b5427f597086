#include "counselforge/review/review_store.hpp"

#include <algorithm>
#include <atomic>

#include "counselforge/common/jsonl.hpp"
#include "counselforge/ingest/errors.hpp"

namespace counselforge::review {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(ReviewStatus s) {
  switch (s) {
    case ReviewStatus::pending: return "pending";
    case ReviewStatus::approved: return "approved";
    case ReviewStatus::rejected: return "rejected";
    case ReviewStatus::edited_approved: return "edited_approved";
  }
  return "pending";
}

ReviewStatus review_status_from_string(std::string_view s) {
  for (auto v : {ReviewStatus::pending, ReviewStatus::approved, ReviewStatus::rejected,
                 ReviewStatus::edited_approved}) {
    if (to_string(v) == s) return v;
  }
  throw PreconditionError("unknown review status: " + std::string(s));
}

std::string_view to_string(ReviewAction a) {
  switch (a) {
    case ReviewAction::approve: return "approve";
    case ReviewAction::reject: return "reject";
    case ReviewAction::edit_and_approve: return "edit_and_approve";
  }
  return "approve";
}

ReviewAction review_action_from_string(std::string_view s) {
  for (auto v : {ReviewAction::approve, ReviewAction::reject, ReviewAction::edit_and_approve}) {
    if (to_string(v) == s) return v;
  }
  throw PreconditionError("unknown review action: " + std::string(s));
}

std::vector<TurnDiff> diff_turns(const std::vector<ingest::Turn>& before,
                                 const std::vector<ingest::Turn>& after) {
  std::vector<TurnDiff> diffs;
  const auto n = std::max(before.size(), after.size());
  for (std::size_t i = 0; i < n; ++i) {
    const ingest::Turn* b = i < before.size() ? &before[i] : nullptr;
    const ingest::Turn* a = i < after.size() ? &after[i] : nullptr;
    if (b && a && b->speaker == a->speaker && b->text == a->text) continue;
    TurnDiff d;
    d.index = i;
    if (b) d.before = b->text;
    if (a) d.after = a->text;
    diffs.push_back(std::move(d));
  }
  return diffs;
}

ReviewStore::ReviewStore(fs::path dir, WallClock clock)
    : dir_(std::move(dir)), clock_(std::move(clock)) {
  fs::create_directories(dir_);
  auto snap = std::make_shared<Snapshot>();
  if (fs::exists(events_path())) {
    for (const auto& row : read_jsonl(events_path())) {
      auto item = row.at("item").get<ReviewItem>();
      auto id = item.item_id;
      (*snap)[id] = std::make_shared<const ReviewItem>(std::move(item));
    }
  }
  state_ = std::move(snap);
}

std::shared_ptr<const ReviewStore::Snapshot> ReviewStore::snapshot() const {
  return std::atomic_load(&state_);
}

void ReviewStore::commit(const std::string& event, const ReviewItem& item) {
  auto next = std::make_shared<Snapshot>(*snapshot());
  (*next)[item.item_id] = std::make_shared<const ReviewItem>(item);

  append_jsonl_line(events_path(), json{{"event", event}, {"item", item}});
  json state = json::array();
  for (const auto& [_, it] : *next) state.push_back(*it);
  write_json_file(state_path(), json{{"items", std::move(state)}});

  std::shared_ptr<const Snapshot> published = std::move(next);
  std::atomic_store(&state_, std::move(published));
}

ReviewItem ReviewStore::enqueue(const ingest::SessionTranscript& session,
                                const std::vector<quality::Flag>& flags,
                                const std::optional<quality::QualityScore>& score) {
  if (flags.empty()) {
    throw PreconditionError("unflagged session " + session.session_id + " bypasses review");
  }
  ingest::validate_session(session);
  std::lock_guard lock(write_mu_);
  if (snapshot()->count(session.session_id)) {
    throw DuplicateItem("already queued: " + session.session_id);
  }
  ReviewItem item;
  item.item_id = session.session_id;
  item.session = session;
  item.flags = flags;
  item.score = score;
  commit("enqueue", item);
  return item;
}

ReviewItem ReviewStore::decide(const ReviewDecision& decision) {
  std::lock_guard lock(write_mu_);
  auto snap = snapshot();
  auto it = snap->find(decision.item_id);
  if (it == snap->end()) throw ItemNotFound("no review item " + decision.item_id);
  ReviewItem item = *it->second;
  if (decision.expected_revision != item.revision) {
    throw RevisionConflict("item " + item.item_id + " is at revision " +
                               std::to_string(item.revision) + ", not " +
                               std::to_string(decision.expected_revision),
                           item.revision);
  }
  if (item.status != ReviewStatus::pending) {
    throw InvalidTransition("item " + item.item_id + " is already " +
                            std::string(to_string(item.status)));
  }

  HistoryEntry entry;
  entry.revision = item.revision + 1;
  entry.action = std::string(to_string(decision.action));
  entry.editor_label = decision.editor_label;
  entry.timestamp = format_iso8601(clock_());

  switch (decision.action) {
    case ReviewAction::approve:
      item.status = ReviewStatus::approved;
      break;
    case ReviewAction::reject:
      item.status = ReviewStatus::rejected;
      break;
    case ReviewAction::edit_and_approve: {
      if (!decision.edited_turns) throw InvalidEdit("edit_and_approve needs edited_turns");
      auto edited = item.session;
      edited.turns = *decision.edited_turns;
      try {
        ingest::validate_session(edited);
      } catch (const ingest::InvalidSession& e) {
        throw InvalidEdit(e.what());
      }
      entry.diffs = diff_turns(item.session.turns, edited.turns);
      if (entry.diffs.empty()) throw InvalidEdit("edited turns are identical to the original");
      item.session = std::move(edited);
      item.status = ReviewStatus::edited_approved;
      break;
    }
  }
  if (!decision.notes.empty()) item.notes = decision.notes;
  item.revision = entry.revision;
  item.edit_history.push_back(std::move(entry));
  commit("decide", item);
  return item;
}

std::optional<ReviewItem> ReviewStore::get(const std::string& item_id) const {
  auto snap = snapshot();
  auto it = snap->find(item_id);
  if (it == snap->end()) return std::nullopt;
  return *it->second;
}

std::vector<ReviewItem> ReviewStore::items(std::optional<ReviewStatus> status) const {
  std::vector<ReviewItem> out;
  const auto snap = snapshot();
  for (const auto& [_, item] : *snap) {
    if (!status || item->status == *status) out.push_back(*item);
  }
  return out;
}

bool ReviewStore::contains(const std::string& item_id) const {
  return snapshot()->count(item_id) > 0;
}

std::size_t ReviewStore::pending_count() const {
  auto snap = snapshot();
  return static_cast<std::size_t>(std::count_if(snap->begin(), snap->end(), [](const auto& kv) {
    return kv.second->status == ReviewStatus::pending;
  }));
}

std::vector<ingest::SessionTranscript> ReviewStore::export_approved() const {
  std::vector<ingest::SessionTranscript> out;
  const auto snap = snapshot();
  for (const auto& [_, item] : *snap) {
    if (item->status == ReviewStatus::approved || item->status == ReviewStatus::edited_approved) {
      out.push_back(item->session);
    }
  }
  return out;
}

ReviewStats ReviewStore::stats() const {
  ReviewStats s;
  for (auto v : {ReviewStatus::pending, ReviewStatus::approved, ReviewStatus::rejected,
                 ReviewStatus::edited_approved}) {
    s.by_status[std::string(to_string(v))] = 0;
  }
  const auto snap = snapshot();
  for (const auto& [_, item] : *snap) {
    ++s.by_status[std::string(to_string(item->status))];
    ++s.total;
  }
  return s;
}

void to_json(json& j, const TurnDiff& d) {
  j = json{{"index", d.index},
           {"before", d.before ? json(*d.before) : json(nullptr)},
           {"after", d.after ? json(*d.after) : json(nullptr)}};
}

void from_json(const json& j, TurnDiff& d) {
  d.index = j.at("index").get<std::size_t>();
  d.before.reset();
  d.after.reset();
  if (j.contains("before") && !j["before"].is_null()) d.before = j["before"].get<std::string>();
  if (j.contains("after") && !j["after"].is_null()) d.after = j["after"].get<std::string>();
}

void to_json(json& j, const HistoryEntry& h) {
  j = json{{"revision", h.revision},
           {"action", h.action},
           {"editor_label", h.editor_label},
           {"timestamp", h.timestamp},
           {"diffs", h.diffs}};
}

void from_json(const json& j, HistoryEntry& h) {
  h.revision = j.at("revision").get<std::size_t>();
  h.action = j.value("action", std::string{});
  h.editor_label = j.value("editor_label", std::string{});
  h.timestamp = j.value("timestamp", std::string{});
  h.diffs = j.value("diffs", std::vector<TurnDiff>{});
}

void to_json(json& j, const ReviewItem& item) {
  j = json{{"item_id", item.item_id},
           {"session", item.session},
           {"flags", item.flags},
           {"score", item.score ? json(*item.score) : json(nullptr)},
           {"status", to_string(item.status)},
           {"revision", item.revision},
           {"notes", item.notes},
           {"edit_history", item.edit_history}};
}

void from_json(const json& j, ReviewItem& item) {
  item.item_id = j.at("item_id").get<std::string>();
  item.session = j.at("session").get<ingest::SessionTranscript>();
  item.flags = j.at("flags").get<std::vector<quality::Flag>>();
  item.score.reset();
  if (j.contains("score") && !j["score"].is_null()) {
    item.score = j["score"].get<quality::QualityScore>();
  }
  item.status = review_status_from_string(j.at("status").get<std::string>());
  item.revision = j.at("revision").get<std::size_t>();
  item.notes = j.value("notes", std::string{});
  item.edit_history = j.value("edit_history", std::vector<HistoryEntry>{});
}

void to_json(json& j, const ReviewDecision& d) {
  j = json{{"item_id", d.item_id},
           {"action", to_string(d.action)},
           {"expected_revision", d.expected_revision},
           {"notes", d.notes},
           {"editor_label", d.editor_label}};
  if (d.edited_turns) j["edited_turns"] = *d.edited_turns;
}

void from_json(const json& j, ReviewDecision& d) {
  try {
    if (!j.is_object()) throw PreconditionError("decision must be a JSON object");
    d.item_id = j.value("item_id", std::string{});
    d.action = review_action_from_string(j.at("action").get<std::string>());
    d.expected_revision = j.at("expected_revision").get<std::size_t>();
    d.notes = j.value("notes", std::string{});
    d.editor_label = j.value("editor_label", std::string{});
    d.edited_turns.reset();
    if (j.contains("edited_turns") && !j["edited_turns"].is_null()) {
      d.edited_turns = j["edited_turns"].get<std::vector<ingest::Turn>>();
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed decision: ") + e.what());
  } catch (const ingest::FormatError& e) {
    throw PreconditionError(std::string("malformed decision: ") + e.what());
  }
}

void to_json(json& j, const ReviewStats& s) {
  j = json{{"by_status", s.by_status}, {"total", s.total}};
}

json summarize_item(const ReviewItem& item) {
  std::vector<std::string> reasons;
  for (const auto& f : item.flags) reasons.emplace_back(quality::to_string(f.reason));
  return json{{"item_id", item.item_id},
              {"status", to_string(item.status)},
              {"revision", item.revision},
              {"flag_reasons", reasons},
              {"turn_count", item.session.turns.size()},
              {"mean_score", item.score ? json(item.score->mean()) : json(nullptr)}};
}

}  // namespace counselforge::review
