#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace counselforge::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitStageFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Hook for tests: called with the bound port once review-serve is listening,
/// plus a function that stops the server.
using ServeReadyHook = std::function<void(int port, std::function<void()> stop)>;

/// The counselforge command line. `args` excludes the program name.
/// Stage summaries go to `out` as JSON lines, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const ServeReadyHook& on_serving = {});

}  // namespace counselforge::pipeline
