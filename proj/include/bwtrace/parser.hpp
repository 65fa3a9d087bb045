#ifndef BWTRACE_PARSER_HPP
#define BWTRACE_PARSER_HPP

#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "bwtrace/errors.hpp"
#include "bwtrace/model.hpp"

namespace bwtrace {

enum class TraceFormat {
    lanl16,     // 16 positional fields, '#' comments
    archive18,  // 18 whitespace-separated numeric fields, ';' comments
};

/// Archive memory columns are Kbytes per processor. By default they are
/// multiplied by the allocated processor count to give a whole-job figure.
enum class ArchiveMemory { per_job, raw };

struct ParseError {
    std::size_t line_no = 0;
    std::string reason;  // stable reason code, used as the ParseReport key
    std::string detail;
};

using LineResult = std::variant<JobRecord, ParseError>;

/// Parses one non-comment, non-blank LANL16 line.
///
/// Lines containing a tab are split on every tab, so an empty cell is an
/// absent value. Lines without tabs are split on runs of spaces, and a
/// timestamp written as "Mon DD YY[ HH:MM:SS[.mmm]]" is read across the
/// space-separated tokens it spans. Timestamps are either that date form or
/// integer epoch seconds. "-1" or an empty cell marks an absent optional
/// field. Text fields are kept verbatim apart from surrounding spaces.
LineResult parse_lanl_line(std::string_view line, std::size_t line_no);

/// Parses one non-comment archive line (18 fields, -1 = missing).
///
/// start = submit + wait and end = start + runtime; an absent operand makes
/// the sum absent. The archive status column becomes exit_code and the
/// user/group/executable/queue numbers become the corresponding text fields.
LineResult parse_archive_line(std::string_view line, std::size_t line_no,
                              ArchiveMemory memory = ArchiveMemory::per_job);

/// Canonical LANL16 rendering: single tabs, "-1" for absent values,
/// timestamps as epoch seconds when second-aligned and otherwise as
/// timefmt::format_datetime. parse_lanl_line inverts it for every record
/// whose text fields contain no tab or line break and no surrounding
/// spaces, whose job_id is non-empty and does not start with '#', and whose
/// exit_code is not -1 (that value collides with the sentinel).
std::string format_lanl_line(const JobRecord& record);

/// Thrown when the underlying stream fails mid-parse. Carries the report
/// accumulated up to the failure.
class TraceReadError : public IoError {
public:
    TraceReadError(const std::string& what, ParseReport partial)
        : IoError(what), partial_(std::move(partial)) {}
    const ParseReport& partial_report() const { return partial_; }

private:
    ParseReport partial_;
};

/// Pull-style parse session over a line stream. Holds one line and one
/// record at a time regardless of input length.
class TraceReader {
public:
    TraceReader(std::istream& in, TraceFormat format, ArchiveMemory memory = ArchiveMemory::per_job);

    /// Next well-formed record in file order, or nullopt at end of input.
    /// Malformed lines are counted and skipped.
    std::optional<JobRecord> next();

    const ParseReport& report() const { return report_; }

    /// Most recent malformed line, if any.
    const std::optional<ParseError>& last_error() const { return last_error_; }

private:
    std::istream& in_;
    TraceFormat format_;
    ArchiveMemory memory_;
    std::string line_;
    ParseReport report_;
    std::optional<ParseError> last_error_;
};

using RecordSink = std::function<void(JobRecord&&)>;

/// Streams every record of `in` to `sink` in input order.
ParseReport parse_trace(std::istream& in, TraceFormat format, const RecordSink& sink,
                        ArchiveMemory memory = ArchiveMemory::per_job);

}  // namespace bwtrace

#endif  // BWTRACE_PARSER_HPP
