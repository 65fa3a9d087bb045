#ifndef BWTRACE_EXPORT_HPP
#define BWTRACE_EXPORT_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bwtrace/bandwidth.hpp"
#include "bwtrace/errors.hpp"
#include "bwtrace/model.hpp"

namespace bwtrace {

inline constexpr std::string_view kWorksheetHeader = "Start date,End date,Mbytes,Bytes";
inline constexpr std::string_view kFullCsvHeader =
    "job_id,start_ms,end_ms,duration_ms,n_bytes,rate_bytes_per_s,rate_out,flags";

/// Write failure on an output sink. rows() counts the data rows that were
/// written before the failure.
class SinkError : public IoError {
public:
    SinkError(const std::string& what, std::size_t rows) : IoError(what), rows_(rows) {}
    std::size_t rows() const { return rows_; }

private:
    std::size_t rows_;
};

/// Accumulates rates for summarize without keeping whole samples.
class SummaryBuilder {
public:
    explicit SummaryBuilder(MbBase base) : base_(base) {}
    void add(const RateSample& sample);
    /// Order of add() calls does not affect the result.
    TraceSummary finish() const;

private:
    MbBase base_;
    std::vector<double> rates_;  // output unit
    std::uint64_t undefined_ = 0;
};

/// Statistics over defined rates in the output unit. Median is the lower of
/// the two middle values for even counts; p95 is nearest-rank. The mean is
/// a compensated sum over the sorted rates, so it is exactly
/// permutation-invariant.
TraceSummary summarize(std::span<const RateSample> samples, MbBase base);

/// Shortest decimal rendering within 7 significant digits ("1024",
/// "204.7445", "-0.000278").
std::string format_sig7(double v);

/// Table-style worksheet: dates at day granularity, the rate in Mbytes/s,
/// and the trace's memory value in Kbytes under the "Bytes" column. An
/// undefined rate leaves the Mbytes cell empty.
class WorksheetWriter {
public:
    /// Writes the header immediately.
    WorksheetWriter(std::ostream& out, MbBase base);
    void write(const RateSample& sample);
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    MbBase base_;
    std::size_t rows_ = 0;
};

/// Full-precision CSV. Doubles use the shortest round-trip representation;
/// flags are '|'-joined names.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, MbBase base);
    void write(const RateSample& sample);
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    MbBase base_;
    std::size_t rows_ = 0;
};

std::size_t write_worksheet(std::span<const RateSample> samples, MbBase base, std::ostream& sink);
std::size_t write_csv(std::span<const RateSample> samples, MbBase base, std::ostream& sink);

/// RFC 4180-style quoting: wraps fields containing ',', '"', CR or LF.
std::string csv_quote(std::string_view field);

}  // namespace bwtrace

#endif  // BWTRACE_EXPORT_HPP
