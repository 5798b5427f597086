#include <gtest/gtest.h>

#include <barrier>
#include <thread>

#include "counselforge/common/clock.hpp"
#include "counselforge/common/errors.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/review/review_server.hpp"
#include "counselforge/review/review_store.hpp"
#include "review_harness.hpp"
#include "test_support.hpp"

namespace cf = counselforge;
namespace rv = counselforge::review;
using nlohmann::json;

namespace {

cf::WallClock fixed_clock() { return cf::frozen_wall_clock(*cf::parse_iso8601("2025-01-01T00:00:00Z")); }

rv::ReviewDecision decision(const std::string& id, rv::ReviewAction a, std::size_t rev) {
  rv::ReviewDecision d;
  d.item_id = id;
  d.action = a;
  d.expected_revision = rev;
  d.editor_label = "r1";
  return d;
}

void enqueue(rv::ReviewStore& store, const std::string& id, int realism = 4) {
  auto [s, flags] = cftest::flagged_session(id);
  cf::quality::QualityScore sc{id, 7, realism, 7, ""};
  store.enqueue(s, flags, sc);
}

}  // namespace

TEST(ReviewStore, EnqueueValidatesAndRejectsDuplicates) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  auto [s, flags] = cftest::flagged_session("a");
  auto item = store.enqueue(s, flags);
  EXPECT_EQ(item.status, rv::ReviewStatus::pending);
  EXPECT_EQ(item.revision, 0u);
  EXPECT_THROW(store.enqueue(s, flags), rv::DuplicateItem);
  auto [s2, _] = cftest::flagged_session("b");
  EXPECT_THROW(store.enqueue(s2, {}), cf::PreconditionError);
  EXPECT_EQ(store.pending_count(), 1u);
}

TEST(ReviewStore, TransitionsAndHistory) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  enqueue(store, "a");
  enqueue(store, "b");
  auto approved = store.decide(decision("a", rv::ReviewAction::approve, 0));
  EXPECT_EQ(approved.status, rv::ReviewStatus::approved);
  EXPECT_EQ(approved.revision, 1u);
  ASSERT_EQ(approved.edit_history.size(), 1u);
  EXPECT_EQ(approved.edit_history[0].timestamp, "2025-01-01T00:00:00Z");
  EXPECT_EQ(approved.edit_history[0].editor_label, "r1");

  EXPECT_THROW(store.decide(decision("a", rv::ReviewAction::reject, 1)), rv::InvalidTransition);
  EXPECT_THROW(store.decide(decision("b", rv::ReviewAction::reject, 3)), rv::RevisionConflict);
  EXPECT_THROW(store.decide(decision("nope", rv::ReviewAction::reject, 0)), rv::ItemNotFound);
  store.decide(decision("b", rv::ReviewAction::reject, 0));
  EXPECT_EQ(store.export_approved().size(), 1u);
  auto stats = store.stats();
  EXPECT_EQ(stats.total, 2u);
  EXPECT_EQ(stats.by_status["approved"], 1u);
  EXPECT_EQ(stats.by_status["rejected"], 1u);
}

TEST(ReviewStore, EditAppliesAndRecordsDiff) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  enqueue(store, "a");
  auto turns = store.get("a")->session.turns;
  turns[3].text = "Let's write those worries down and test them.";
  auto d = decision("a", rv::ReviewAction::edit_and_approve, 0);
  d.edited_turns = turns;
  auto item = store.decide(d);
  EXPECT_EQ(item.status, rv::ReviewStatus::edited_approved);
  ASSERT_EQ(item.edit_history[0].diffs.size(), 1u);
  EXPECT_EQ(item.edit_history[0].diffs[0].index, 3u);
  EXPECT_EQ(store.export_approved()[0].turns[3].text, turns[3].text);
}

TEST(ReviewStore, InvalidEditsRejected) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  enqueue(store, "a");
  auto unchanged = decision("a", rv::ReviewAction::edit_and_approve, 0);
  unchanged.edited_turns = store.get("a")->session.turns;
  EXPECT_THROW(store.decide(unchanged), rv::InvalidEdit);
  auto broken = unchanged;
  broken.edited_turns->at(1).speaker = cf::ingest::Speaker::client;
  EXPECT_THROW(store.decide(broken), rv::InvalidEdit);
  auto missing = decision("a", rv::ReviewAction::edit_and_approve, 0);
  EXPECT_THROW(store.decide(missing), rv::InvalidEdit);
  EXPECT_EQ(store.get("a")->revision, 0u);
}

TEST(ReviewStore, DiffTurnsByPosition) {
  auto a = cftest::make_session("x", {"one", "two", "three"}).turns;
  auto b = cftest::make_session("x", {"one", "TWO"}).turns;
  auto diffs = rv::diff_turns(a, b);
  ASSERT_EQ(diffs.size(), 2u);
  EXPECT_EQ(diffs[0], (rv::TurnDiff{1, "two", "TWO"}));
  EXPECT_EQ(diffs[1], (rv::TurnDiff{2, "three", std::nullopt}));
}

TEST(ReviewStore, ReopenReplaysEventLog) {
  cftest::TempDir dir;
  {
    rv::ReviewStore store(dir.path(), fixed_clock());
    enqueue(store, "a");
    enqueue(store, "b");
    store.decide(decision("a", rv::ReviewAction::approve, 0));
  }
  rv::ReviewStore reopened(dir.path(), fixed_clock());
  EXPECT_EQ(reopened.get("a")->status, rv::ReviewStatus::approved);
  EXPECT_EQ(reopened.pending_count(), 1u);
  EXPECT_EQ(cf::read_jsonl(reopened.events_path()).size(), 3u);
  EXPECT_EQ(cf::read_json_file(reopened.state_path())["items"].size(), 2u);
}

TEST(ReviewStore, ConcurrentConflictingDecisionsOneWins) {
  for (int round = 0; round < 20; ++round) {
    cftest::TempDir dir;
    rv::ReviewStore store(dir.path(), fixed_clock());
    enqueue(store, "a");
    std::atomic<int> ok{0}, conflicts{0}, other{0};
    std::barrier sync(2);
    auto racer = [&](rv::ReviewAction action) {
      sync.arrive_and_wait();
      try {
        store.decide(decision("a", action, 0));
        ++ok;
      } catch (const rv::RevisionConflict&) {
        ++conflicts;
      } catch (...) {
        ++other;
      }
    };
    std::thread t1(racer, rv::ReviewAction::approve);
    std::thread t2(racer, rv::ReviewAction::reject);
    t1.join();
    t2.join();
    EXPECT_EQ(ok, 1);
    EXPECT_EQ(conflicts, 1);
    EXPECT_EQ(other, 0);
    EXPECT_EQ(store.get("a")->revision, 1u);
  }
}

TEST(ReviewStore, ReadersSeeConsistentSnapshotsDuringWrites) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  for (int i = 0; i < 20; ++i) enqueue(store, "i" + std::to_string(100 + i));
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      for (const auto& item : store.items()) {
        if (item.edit_history.size() != item.revision) ++bad;
      }
    }
  });
  for (int i = 0; i < 20; ++i) store.decide(decision("i" + std::to_string(100 + i), rv::ReviewAction::approve, 0));
  done = true;
  reader.join();
  EXPECT_EQ(bad, 0);
}

TEST(ReviewApi, QueueOrdersWorstFirstAndFilters) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  enqueue(store, "a", 5);
  enqueue(store, "b", 2);
  enqueue(store, "c", 4);
  store.decide(decision("c", rv::ReviewAction::approve, 0));
  cftest::RunningReviewServer server(store);
  auto cli = server.client();
  auto res = cli.Get("/api/queue");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  auto items = json::parse(res->body)["items"];
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(items[0]["item_id"], "b");
  EXPECT_EQ(items[2]["item_id"], "a");
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  auto pending = json::parse(cli.Get("/api/queue?status=pending")->body)["items"];
  EXPECT_EQ(pending.size(), 2u);
  EXPECT_EQ(cli.Get("/api/queue?status=bogus")->status, 400);
  EXPECT_EQ(cli.Options("/api/queue")->status, 204);
}

TEST(ReviewApi, DecisionStatusCodes) {
  cftest::TempDir dir;
  rv::ReviewStore store(dir.path(), fixed_clock());
  enqueue(store, "a");
  enqueue(store, "b");
  cftest::RunningReviewServer server(store);
  auto cli = server.client();
  auto post = [&](const std::string& id, const std::string& body) {
    return cli.Post("/api/items/" + id + "/decision", body, "application/json");
  };
  EXPECT_EQ(cli.Get("/api/items/a")->status, 200);
  EXPECT_EQ(cli.Get("/api/items/zzz")->status, 404);
  EXPECT_EQ(post("a", "{not json")->status, 400);
  EXPECT_EQ(post("a", json{{"action", "approve"}}.dump())->status, 400);
  auto wrong_id = cftest::decision_body("approve", 0);
  wrong_id["item_id"] = "b";
  EXPECT_EQ(post("a", wrong_id.dump())->status, 400);
  EXPECT_EQ(post("zzz", cftest::decision_body("approve", 0).dump())->status, 404);

  auto stale = post("a", cftest::decision_body("approve", 7).dump());
  EXPECT_EQ(stale->status, 409);
  EXPECT_EQ(json::parse(stale->body)["current_revision"], 0);

  auto ok = post("a", cftest::decision_body("approve", 0).dump());
  ASSERT_EQ(ok->status, 200);
  EXPECT_EQ(json::parse(ok->body)["status"], "approved");
  auto again = post("a", cftest::decision_body("reject", 1).dump());
  EXPECT_EQ(again->status, 409);
  EXPECT_EQ(json::parse(again->body)["error"], "invalid_transition");

  auto bad_edit = cftest::decision_body("edit_and_approve", 0);
  bad_edit["edited_turns"] = json::array({{{"index", 0}, {"speaker", "client"}, {"text", "only one"}}});
  EXPECT_EQ(post("b", bad_edit.dump())->status, 422);

  auto exported = cli.Get("/api/export");
  EXPECT_EQ(exported->status, 200);
  EXPECT_EQ(std::count(exported->body.begin(), exported->body.end(), '\n'), 1);
  auto stats = json::parse(cli.Get("/api/stats")->body);
  EXPECT_EQ(stats["total"], 2);
  EXPECT_EQ(stats["by_status"]["approved"], 1);
}
