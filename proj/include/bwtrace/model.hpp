#ifndef BWTRACE_MODEL_HPP
#define BWTRACE_MODEL_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace bwtrace {

/// Point in time as integer milliseconds since the Unix epoch, UTC.
///
/// Source logs carry second or day granularity; everything is widened to
/// milliseconds on ingest so elapsed-time arithmetic stays exact.
struct Timestamp {
    std::int64_t epoch_ms = 0;

    static constexpr Timestamp from_seconds(std::int64_t s) { return Timestamp{s * 1000}; }

    auto operator<=>(const Timestamp&) const = default;
};

/// One job line of an accounting log.
///
/// Fields follow the 16-column accounting layout in order. Absent values are
/// std::nullopt; the "-1" sentinel exists only in the file formats.
struct JobRecord {
    std::string job_id;                        //  1
    std::optional<Timestamp> submit_time;      //  2
    std::optional<Timestamp> start_time;       //  3
    std::optional<Timestamp> end_time;         //  4
    std::optional<std::int64_t> req_procs;     //  5
    std::optional<std::int64_t> used_procs;    //  6
    std::optional<double> req_cpu_s;           //  7
    std::optional<double> used_cpu_s;          //  8
    std::optional<std::int64_t> req_mem_kb;    //  9
    std::optional<std::int64_t> used_mem_kb;   // 10
    std::string queue;                         // 11
    std::optional<bool> dedicated;             // 12
    std::string user;                          // 13
    std::string project;                       // 14
    std::string executable;                    // 15
    std::optional<std::int64_t> exit_code;     // 16

    bool operator==(const JobRecord&) const = default;
};

/// Throws std::invalid_argument if a count, memory or CPU-time field is
/// negative or a CPU time is not finite. end < start is allowed.
void validate(const JobRecord& record);

struct SampleFlags {
    bool negative_duration = false;
    bool carried_forward_start = false;

    bool operator==(const SampleFlags&) const = default;
};

/// Bandwidth estimate for one job.
///
/// Immutable. The constructor enforces the sample invariants: a rate is
/// present exactly when the duration is non-zero, the duration equals
/// end - start, the negative-duration flag matches the sign of the duration,
/// and rate * duration_ms reconstructs 1000 * n_bytes.
class RateSample {
public:
    RateSample(std::string job_id, Timestamp start, Timestamp end, std::uint64_t n_bytes,
               std::optional<double> rate_bytes_per_s, SampleFlags flags);

    const std::string& job_id() const { return job_id_; }
    Timestamp start() const { return start_; }
    Timestamp end() const { return end_; }
    std::uint64_t n_bytes() const { return n_bytes_; }
    std::int64_t duration_ms() const { return end_.epoch_ms - start_.epoch_ms; }
    const std::optional<double>& rate_bytes_per_s() const { return rate_; }
    SampleFlags flags() const { return flags_; }

    bool operator==(const RateSample&) const = default;

private:
    std::string job_id_;
    Timestamp start_;
    Timestamp end_;
    std::uint64_t n_bytes_;
    std::optional<double> rate_;
    SampleFlags flags_;
};

/// Line accounting for one parse session.
///
/// Every input line lands in exactly one bucket. Records lacking a start or
/// end time are still emitted to the consumer but counted under
/// skipped_missing_times rather than parsed.
struct ParseReport {
    std::uint64_t total_lines = 0;
    std::uint64_t parsed = 0;
    std::uint64_t skipped_missing_times = 0;
    std::uint64_t malformed = 0;
    std::uint64_t comments = 0;  // comment and blank lines
    std::map<std::string, std::uint64_t> reasons;

    /// Non-comment, non-blank lines: the job count of the trace.
    std::uint64_t job_lines() const { return parsed + skipped_missing_times + malformed; }
    /// Records handed to the consumer.
    std::uint64_t records() const { return parsed + skipped_missing_times; }
    bool conserved() const { return job_lines() + comments == total_lines; }

    bool operator==(const ParseReport&) const = default;
};

/// Aggregate statistics over defined rates, in the configured output unit.
struct TraceSummary {
    std::uint64_t n_rates = 0;  // samples with a defined rate
    std::uint64_t n_negative = 0;
    std::uint64_t n_undefined = 0;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> mean;
    std::optional<double> median;
    std::optional<double> p95;

    bool operator==(const TraceSummary&) const = default;
};

}  // namespace bwtrace

#endif  // BWTRACE_MODEL_HPP
