#include "counselforge/pipeline/cli.hpp"

#include <atomic>
#include <csignal>
#include <ctime>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "counselforge/pipeline/pipeline.hpp"
#include "counselforge/review/review_server.hpp"

namespace counselforge::pipeline {

using nlohmann::json;

namespace {

void print_outcome(std::ostream& out, const StageOutcome& o) {
  json line = o.details;
  line["stage"] = o.stage;
  line["status"] = o.status;
  out << line.dump() << '\n';
  out.flush();
}

int serve_review(Pipeline& pipeline, std::ostream& out, const ServeReadyHook& on_serving) {
  const auto& cfg = pipeline.config();
  review::ReviewStore store(pipeline.workspace() / "review", pipeline.wall_clock());
  review::ReviewServer server(store);
  const int port = server.bind(cfg.review.host, cfg.review.port);
  out << json{{"stage", "review-serve"},
              {"status", "serving"},
              {"url", "http://" + cfg.review.host + ":" + std::to_string(port)},
              {"pending", store.pending_count()}}
             .dump()
      << '\n';
  out.flush();

  std::atomic<bool> done{false};
  std::jthread watcher;
  if (on_serving) {
    on_serving(port, [&server] { server.stop(); });
  } else {
    // Block SIGINT/SIGTERM here and in the server's worker threads; a
    // watcher picks them up and shuts the server down cleanly.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    watcher = std::jthread([&server, &done, set] {
      const timespec tick{0, 200'000'000};
      while (!done.load()) {
        if (sigtimedwait(&set, nullptr, &tick) > 0) {
          server.stop();
          return;
        }
      }
    });
  }
  server.serve();
  done = true;
  out << json{{"stage", "review-serve"}, {"status", "stopped"}, {"stats", store.stats()}}.dump()
      << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const ServeReadyHook& on_serving) {
  CLI::App app{"Synthetic counseling-dialogue pipeline and benchmark harness", "counselforge"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallelism;
  RunFlags flags;
  app.add_option("--config", config_path, "Pipeline config file (JSON)")->required();
  app.add_option("--seed", seed, "Override the global seed");
  app.add_option("--parallelism", parallelism, "Concurrent backend calls per stage")
      ->check(CLI::PositiveNumber);
  app.add_flag("--force", flags.force, "Rerun stages even when their inputs are unchanged");
  app.add_flag("--skip-review", flags.skip_review,
               "Assemble without waiting for pending review items (they are left out)");

  const std::vector<std::pair<Stage, std::string>> commands{
      {Stage::ingest, "Parse, scrub, filter and deduplicate real transcripts"},
      {Stage::personas, "Generate client personas"},
      {Stage::scenarios, "Generate therapy scenarios per persona"},
      {Stage::synth, "Synthesize sessions from scenarios"},
      {Stage::judge, "Score sessions, flag weak ones into the review queue"},
      {Stage::review_serve, "Serve the review API until interrupted"},
      {Stage::assemble, "Build the fine-tuning dataset and manifest"},
      {Stage::bench, "Run the counselor benchmark"},
      {Stage::report, "Summarize the benchmark into tables and charts"},
      {Stage::all, "Run every stage in order"},
  };
  for (const auto& [stage, help] : commands) app.add_subcommand(std::string(to_string(stage)), help);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  Stage stage = Stage::all;
  for (const auto* sub : app.get_subcommands()) stage = *stage_from_string(sub->get_name());

  std::optional<Pipeline> pipeline;
  try {
    ConfigOverrides overrides;
    overrides.seed = seed;
    overrides.parallelism = parallelism;
    pipeline.emplace(load_config(config_path, overrides), flags);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    WorkspaceLock lock(pipeline->workspace());
    if (stage == Stage::review_serve) return serve_review(*pipeline, out, on_serving);
    pipeline->run(stage, [&out](const StageOutcome& o) { print_outcome(out, o); });
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error (" << to_string(stage) << "): " << e.what() << "\n";
    return kExitStageFailure;
  }
}

}  // namespace counselforge::pipeline
