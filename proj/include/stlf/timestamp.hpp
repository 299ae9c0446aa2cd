#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace stlf {

using Timestamp = std::chrono::sys_seconds;

namespace detail {

inline bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

inline std::optional<Timestamp> make_timestamp(int y, int mo, int d, int h, int mi, int sec) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 59) return std::nullopt;
    return Timestamp{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{sec}};
}

}  // namespace detail

/// Parses `MM/DD/YYYY HH:MM` (hour may be one digit, as in "11/11/2018 0:00")
/// or ISO-8601 `YYYY-MM-DD[T ]HH:MM[:SS]`. A trailing `Z` is accepted.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);

    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (s.size() >= 10 && s[4] == '-' && s[7] == '-') {
        if (!detail::parse_int(s, 0, 4, y) || !detail::parse_int(s, 5, 2, mo) ||
            !detail::parse_int(s, 8, 2, d))
            return std::nullopt;
        if (s.size() == 10) return detail::make_timestamp(y, mo, d, 0, 0, 0);
        if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
        if (s.size() < 16 || s[13] != ':' || !detail::parse_int(s, 11, 2, h) ||
            !detail::parse_int(s, 14, 2, mi))
            return std::nullopt;
        if (s.size() == 19) {
            if (s[16] != ':' || !detail::parse_int(s, 17, 2, sec)) return std::nullopt;
        } else if (s.size() != 16) {
            return std::nullopt;
        }
        return detail::make_timestamp(y, mo, d, h, mi, sec);
    }

    // MM/DD/YYYY H:MM or MM/DD/YYYY HH:MM; month/day may also be single digit.
    auto slash1 = s.find('/');
    auto slash2 = s.find('/', slash1 == std::string_view::npos ? 0 : slash1 + 1);
    auto space = s.find(' ');
    auto colon = s.find(':');
    if (slash1 == std::string_view::npos || slash2 == std::string_view::npos ||
        space == std::string_view::npos || colon == std::string_view::npos || colon < space)
        return std::nullopt;
    if (!detail::parse_int(s, 0, slash1, mo) ||
        !detail::parse_int(s, slash1 + 1, slash2 - slash1 - 1, d) ||
        !detail::parse_int(s, slash2 + 1, space - slash2 - 1, y) ||
        !detail::parse_int(s, space + 1, colon - space - 1, h) ||
        !detail::parse_int(s, colon + 1, s.size() - colon - 1, mi))
        return std::nullopt;
    if (slash1 == 0 || slash1 > 2 || space - slash2 - 1 != 4 || colon - space - 1 == 0 ||
        colon - space - 1 > 2 || s.size() - colon - 1 != 2)
        return std::nullopt;
    return detail::make_timestamp(y, mo, d, h, mi, 0);
}

/// ISO-8601 `YYYY-MM-DDTHH:MM`.
inline std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    auto rem = t - day_point;
    auto h = duration_cast<hours>(rem).count();
    auto m = duration_cast<minutes>(rem).count() % 60;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(h), static_cast<long>(m));
    return buf;
}

}  // namespace stlf
