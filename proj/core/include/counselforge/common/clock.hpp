#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace counselforge {

using WallClock = std::function<std::chrono::system_clock::time_point()>;
using MonotonicClock = std::function<std::chrono::steady_clock::time_point()>;

WallClock system_wall_clock();
MonotonicClock system_monotonic_clock();

/// Always returns `at`. Used for reproducible workspaces.
WallClock frozen_wall_clock(std::chrono::system_clock::time_point at);
MonotonicClock frozen_monotonic_clock();

/// "YYYY-MM-DDThh:mm:ssZ" (UTC, second resolution).
std::string format_iso8601(std::chrono::system_clock::time_point tp);
std::optional<std::chrono::system_clock::time_point> parse_iso8601(
    std::string_view text);

}  // namespace counselforge
