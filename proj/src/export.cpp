#include "bwtrace/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bwtrace/timefmt.hpp"

namespace bwtrace {

namespace {

// Neumaier summation.
double compensated_sum(std::span<const double> xs) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string flags_text(SampleFlags f) {
    std::string s;
    if (f.negative_duration)
        s = "NEGATIVE_DURATION";
    if (f.carried_forward_start) {
        if (!s.empty())
            s.push_back('|');
        s += "CARRIED_FORWARD_START";
    }
    return s;
}

void check_sink(std::ostream& out, std::size_t rows) {
    if (!out)
        throw SinkError("write to output failed after " + std::to_string(rows) + " rows", rows);
}

}  // namespace

void SummaryBuilder::add(const RateSample& sample) {
    if (const auto& r = sample.rate_bytes_per_s())
        rates_.push_back(to_output_unit(*r, base_));
    else
        ++undefined_;
}

TraceSummary SummaryBuilder::finish() const {
    TraceSummary s;
    s.n_undefined = undefined_;
    s.n_rates = rates_.size();
    if (rates_.empty())
        return s;

    std::vector<double> sorted = rates_;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    s.n_negative = static_cast<std::uint64_t>(std::count_if(sorted.begin(), sorted.end(), [](double r) { return r < 0; }));
    s.min = sorted.front();
    s.max = sorted.back();
    s.mean = compensated_sum(sorted) / static_cast<double>(n);
    s.median = sorted[(n - 1) / 2];
    // Nearest rank: ceil(0.95 n), computed in integers.
    const std::size_t rank = (95 * n + 99) / 100;
    s.p95 = sorted[rank - 1];
    return s;
}

TraceSummary summarize(std::span<const RateSample> samples, MbBase base) {
    SummaryBuilder b(base);
    for (const auto& s : samples)
        b.add(s);
    return b.finish();
}

std::string format_sig7(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 7);
    return std::string(buf, res.ptr);
}

std::string csv_quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

WorksheetWriter::WorksheetWriter(std::ostream& out, MbBase base) : out_(out), base_(base) {
    out_ << kWorksheetHeader << '\n';
    check_sink(out_, 0);
}

void WorksheetWriter::write(const RateSample& sample) {
    std::string row = timefmt::format_day(sample.start());
    row += ',';
    row += timefmt::format_day(sample.end());
    row += ',';
    if (const auto& r = sample.rate_bytes_per_s())
        row += format_sig7(to_output_unit(*r, base_));
    row += ',';
    // n came from a Kbytes column; show the trace's own value.
    row += std::to_string(sample.n_bytes() / 1024);
    row += '\n';
    out_ << row;
    check_sink(out_, rows_);
    ++rows_;
}

CsvWriter::CsvWriter(std::ostream& out, MbBase base) : out_(out), base_(base) {
    out_ << kFullCsvHeader << '\n';
    check_sink(out_, 0);
}

void CsvWriter::write(const RateSample& s) {
    std::string row = csv_quote(s.job_id());
    row += ',' + std::to_string(s.start().epoch_ms);
    row += ',' + std::to_string(s.end().epoch_ms);
    row += ',' + std::to_string(s.duration_ms());
    row += ',' + std::to_string(s.n_bytes());
    row += ',';
    if (const auto& r = s.rate_bytes_per_s()) {
        row += shortest(*r);
        row += ',' + shortest(to_output_unit(*r, base_));
    } else {
        row += ',';
    }
    row += ',' + flags_text(s.flags());
    row += '\n';
    out_ << row;
    check_sink(out_, rows_);
    ++rows_;
}

std::size_t write_worksheet(std::span<const RateSample> samples, MbBase base, std::ostream& sink) {
    WorksheetWriter w(sink, base);
    for (const auto& s : samples)
        w.write(s);
    sink.flush();
    check_sink(sink, w.rows());
    return w.rows();
}

std::size_t write_csv(std::span<const RateSample> samples, MbBase base, std::ostream& sink) {
    CsvWriter w(sink, base);
    for (const auto& s : samples)
        w.write(s);
    sink.flush();
    check_sink(sink, w.rows());
    return w.rows();
}

}  // namespace bwtrace
