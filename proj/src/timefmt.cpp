#include "bwtrace/timefmt.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace bwtrace::timefmt {

namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

constexpr std::int64_t kMsPerDay = 86'400'000;

int month_index(std::string_view token) {
    if (token.size() != 3)
        return -1;
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        bool same = true;
        for (std::size_t k = 0; k < 3; ++k)
            same = same && std::tolower(static_cast<unsigned char>(token[k])) ==
                               std::tolower(static_cast<unsigned char>(kMonths[i][k]));
        if (same)
            return static_cast<int>(i);
    }
    return -1;
}

std::string_view next_token(std::string_view& rest) {
    std::size_t b = 0;
    while (b < rest.size() && rest[b] == ' ')
        ++b;
    std::size_t e = b;
    while (e < rest.size() && rest[e] != ' ')
        ++e;
    std::string_view tok = rest.substr(b, e - b);
    rest.remove_prefix(e);
    return tok;
}

// Unsigned decimal with a digit count in [min_digits, max_digits].
std::optional<int> parse_digits(std::string_view s, std::size_t min_digits, std::size_t max_digits) {
    if (s.size() < min_digits || s.size() > max_digits)
        return std::nullopt;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return std::nullopt;
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

struct Civil {
    int year;
    unsigned month;  // 1..12
    unsigned day;
    std::int64_t ms_of_day;
};

Civil to_civil(Timestamp t) {
    std::int64_t days = t.epoch_ms / kMsPerDay;
    std::int64_t rem = t.epoch_ms % kMsPerDay;
    if (rem < 0) {
        rem += kMsPerDay;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return Civil{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                 static_cast<unsigned>(ymd.day()), rem};
}

int two_digit(int year) { return ((year % 100) + 100) % 100; }

}  // namespace

bool is_month_name(std::string_view token) { return month_index(token) >= 0; }

std::optional<Timestamp> parse_date(std::string_view text) {
    std::string_view rest = text;
    const int mon = month_index(next_token(rest));
    if (mon < 0)
        return std::nullopt;
    const auto day = parse_digits(next_token(rest), 1, 2);
    if (!day)
        return std::nullopt;
    const std::string_view year_tok = next_token(rest);
    int year = 0;
    if (auto yy = parse_digits(year_tok, 2, 2)) {
        year = kPivotFirstYear + ((*yy - kPivotFirstYear % 100) + 100) % 100;
    } else if (auto y4 = parse_digits(year_tok, 4, 4)) {
        year = *y4;
    } else {
        return std::nullopt;
    }

    std::int64_t ms_of_day = 0;
    const std::string_view clock = next_token(rest);
    if (!clock.empty()) {
        // HH:MM:SS or HH:MM:SS.mmm
        if (clock.size() != 8 && clock.size() != 12)
            return std::nullopt;
        if (clock[2] != ':' || clock[5] != ':')
            return std::nullopt;
        const auto hh = parse_digits(clock.substr(0, 2), 2, 2);
        const auto mm = parse_digits(clock.substr(3, 2), 2, 2);
        const auto ss = parse_digits(clock.substr(6, 2), 2, 2);
        if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 59)
            return std::nullopt;
        int frac = 0;
        if (clock.size() == 12) {
            if (clock[8] != '.')
                return std::nullopt;
            const auto f = parse_digits(clock.substr(9, 3), 3, 3);
            if (!f)
                return std::nullopt;
            frac = *f;
        }
        ms_of_day = ((static_cast<std::int64_t>(*hh) * 60 + *mm) * 60 + *ss) * 1000 + frac;
    }
    if (!next_token(rest).empty())
        return std::nullopt;

    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(mon + 1)},
                             std::chrono::day{static_cast<unsigned>(*day)}};
    if (!ymd.ok())
        return std::nullopt;
    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    return Timestamp{days * kMsPerDay + ms_of_day};
}

std::string format_day(Timestamp t) {
    const Civil c = to_civil(t);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s %02u %02d", kMonths[c.month - 1].data(), c.day, two_digit(c.year));
    return buf;
}

std::string format_datetime(Timestamp t) {
    const Civil c = to_civil(t);
    const std::int64_t ms = c.ms_of_day % 1000;
    const std::int64_t s = c.ms_of_day / 1000;
    char buf[48];
    const bool short_year = c.year >= kPivotFirstYear && c.year < kPivotFirstYear + 100;
    std::snprintf(buf, sizeof buf, "%s %02u %0*d %02lld:%02lld:%02lld.%03lld", kMonths[c.month - 1].data(), c.day,
                  short_year ? 2 : 4, short_year ? two_digit(c.year) : c.year, static_cast<long long>(s / 3600),
                  static_cast<long long>((s / 60) % 60), static_cast<long long>(s % 60),
                  static_cast<long long>(ms));
    return buf;
}

}  // namespace bwtrace::timefmt
