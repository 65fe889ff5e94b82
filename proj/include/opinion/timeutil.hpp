// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace opinion {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

/// Parses an ISO-8601 date (`2020-01-23`, midnight UTC) or date-time
/// (`2020-01-23T08:30[:15[.250]]` with optional `Z`, `+08:00` or `+0800`).
/// A space may replace the `T`. Date-times without an offset are UTC.
std::optional<Timestamp> parse_timestamp(std::string_view s);

/// `YYYY-MM-DD` only.
std::optional<Date> parse_date(std::string_view s);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(Timestamp t);
std::string format_date(Date d);

inline Date date_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

}  // namespace opinion
