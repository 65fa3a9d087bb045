#ifndef BWTRACE_TIMEFMT_HPP
#define BWTRACE_TIMEFMT_HPP

#include <optional>
#include <string>
#include <string_view>

#include "bwtrace/model.hpp"

namespace bwtrace::timefmt {

/// Two-digit years map into [kPivotFirstYear, kPivotFirstYear + 99].
inline constexpr int kPivotFirstYear = 1970;

/// True for an English three-letter month abbreviation ("Jan".."Dec"),
/// case-insensitive.
bool is_month_name(std::string_view token);

/// Parses "Mon DD YY[ HH:MM:SS[.mmm]]" as UTC. A four-digit year is also
/// accepted. Fields may be separated by runs of spaces. Returns nullopt on
/// any syntax error or impossible calendar date.
std::optional<Timestamp> parse_date(std::string_view text);

/// "May 10 94": day granularity with a two-digit year.
std::string format_day(Timestamp t);

/// "May 10 94 13:05:09.250". The year has four digits when it falls outside
/// the two-digit pivot window, so the result always parses back exactly.
std::string format_datetime(Timestamp t);

}  // namespace bwtrace::timefmt

#endif  // BWTRACE_TIMEFMT_HPP
