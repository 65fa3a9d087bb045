#include "bwtrace/parser.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <vector>

#include "bwtrace/timefmt.hpp"

namespace bwtrace {

namespace {

constexpr std::size_t kLanlColumns = 16;
constexpr std::size_t kArchiveColumns = 18;

struct FieldError {
    std::string reason;
    std::string detail;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "-1"; }

std::string column_detail(std::size_t column, std::string_view cell) {
    return "column " + std::to_string(column) + ": '" + std::string(cell) + "'";
}

std::optional<std::int64_t> to_int(std::string_view cell, std::size_t column, bool allow_negative) {
    cell = trim(cell);
    if (is_missing(cell))
        return std::nullopt;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw FieldError{"bad_integer", column_detail(column, cell)};
    if (v < 0 && !allow_negative)
        throw FieldError{"negative_value", column_detail(column, cell)};
    return v;
}

std::optional<double> to_real(std::string_view cell, std::size_t column) {
    cell = trim(cell);
    if (is_missing(cell))
        return std::nullopt;
    double v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw FieldError{"bad_real", column_detail(column, cell)};
    if (v == -1.0)
        return std::nullopt;
    if (v < 0)
        throw FieldError{"negative_value", column_detail(column, cell)};
    return v;
}

std::optional<Timestamp> to_timestamp(std::string_view cell, std::size_t column) {
    cell = trim(cell);
    if (is_missing(cell))
        return std::nullopt;
    std::int64_t seconds = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), seconds);
    if (ec == std::errc{} && ptr == cell.data() + cell.size()) {
        std::int64_t ms = 0;
        if (__builtin_mul_overflow(seconds, 1000, &ms))
            throw FieldError{"bad_timestamp", column_detail(column, cell)};
        return Timestamp{ms};
    }
    if (auto t = timefmt::parse_date(cell))
        return t;
    throw FieldError{"bad_timestamp", column_detail(column, cell)};
}

std::optional<bool> to_flag(std::string_view cell, std::size_t column) {
    cell = trim(cell);
    if (is_missing(cell))
        return std::nullopt;
    if (cell == "0")
        return false;
    if (cell == "1")
        return true;
    throw FieldError{"bad_flag", column_detail(column, cell)};
}

bool looks_like_clock(std::string_view tok) { return tok.size() >= 8 && tok[2] == ':' && tok[5] == ':'; }

// Splits a LANL16 line into cells; see parse_lanl_line for the rules.
std::vector<std::string_view> split_lanl(std::string_view line) {
    std::vector<std::string_view> cells;
    if (line.find('\t') != std::string_view::npos) {
        std::size_t pos = 0;
        while (true) {
            const std::size_t tab = line.find('\t', pos);
            cells.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
            if (tab == std::string_view::npos)
                break;
            pos = tab + 1;
        }
        return cells;
    }

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ')
            ++i;
        const std::size_t b = i;
        while (i < line.size() && line[i] != ' ')
            ++i;
        if (i > b)
            tokens.push_back(line.substr(b, i - b));
    }
    if (tokens.empty())
        return cells;

    // Columns 2-4 may be dates spanning several tokens; re-join them as a
    // view over the original line.
    cells.push_back(tokens[0]);
    std::size_t t = 1;
    for (int col = 0; col < 3 && t < tokens.size(); ++col) {
        std::size_t last = t;
        if (timefmt::is_month_name(tokens[t]) && t + 2 < tokens.size()) {
            last = t + 2;
            if (last + 1 < tokens.size() && looks_like_clock(tokens[last + 1]))
                ++last;
        }
        const char* b = tokens[t].data();
        const char* e = tokens[last].data() + tokens[last].size();
        cells.emplace_back(b, static_cast<std::size_t>(e - b));
        t = last + 1;
    }
    for (; t < tokens.size(); ++t)
        cells.push_back(tokens[t]);
    return cells;
}

std::string to_text(std::string_view cell) { return std::string(trim(cell)); }

std::int64_t seconds_to_ms(double s) { return std::llround(s * 1000.0); }

}  // namespace

LineResult parse_lanl_line(std::string_view line, std::size_t line_no) {
    const auto cells = split_lanl(line);
    if (cells.size() != kLanlColumns)
        return ParseError{line_no, "column_count",
                          "expected " + std::to_string(kLanlColumns) + " columns, got " + std::to_string(cells.size())};
    try {
        JobRecord r;
        r.job_id = to_text(cells[0]);
        r.submit_time = to_timestamp(cells[1], 2);
        r.start_time = to_timestamp(cells[2], 3);
        r.end_time = to_timestamp(cells[3], 4);
        r.req_procs = to_int(cells[4], 5, false);
        r.used_procs = to_int(cells[5], 6, false);
        r.req_cpu_s = to_real(cells[6], 7);
        r.used_cpu_s = to_real(cells[7], 8);
        r.req_mem_kb = to_int(cells[8], 9, false);
        r.used_mem_kb = to_int(cells[9], 10, false);
        r.queue = to_text(cells[10]);
        r.dedicated = to_flag(cells[11], 12);
        r.user = to_text(cells[12]);
        r.project = to_text(cells[13]);
        r.executable = to_text(cells[14]);
        r.exit_code = to_int(cells[15], 16, true);
        return r;
    } catch (const FieldError& e) {
        return ParseError{line_no, e.reason, e.detail};
    }
}

LineResult parse_archive_line(std::string_view line, std::size_t line_no, ArchiveMemory memory) {
    std::array<std::string_view, kArchiveColumns> tok;
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const std::size_t b = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > b) {
            if (n == kArchiveColumns)
                return ParseError{line_no, "column_count", "more than 18 columns"};
            tok[n++] = line.substr(b, i - b);
        }
    }
    if (n != kArchiveColumns)
        return ParseError{line_no, "column_count", "expected 18 columns, got " + std::to_string(n)};

    try {
        const auto submit = to_real(tok[1], 2);
        const auto wait = to_real(tok[2], 3);
        const auto runtime = to_real(tok[3], 4);
        const auto alloc = to_real(tok[4], 5);
        const auto avg_cpu = to_real(tok[5], 6);
        const auto used_mem = to_real(tok[6], 7);
        const auto req_procs = to_real(tok[7], 8);
        const auto req_time = to_real(tok[8], 9);
        const auto req_mem = to_real(tok[9], 10);
        const auto status = to_int(tok[10], 11, true);

        JobRecord r;
        r.job_id = std::string(tok[0]);
        if (submit)
            r.submit_time = Timestamp{seconds_to_ms(*submit)};
        if (submit && wait)
            r.start_time = Timestamp{seconds_to_ms(*submit + *wait)};
        if (r.start_time && runtime)
            r.end_time = Timestamp{seconds_to_ms(*submit + *wait + *runtime)};
        if (alloc)
            r.used_procs = std::llround(*alloc);
        if (req_procs)
            r.req_procs = std::llround(*req_procs);
        r.req_cpu_s = req_time;
        r.used_cpu_s = avg_cpu;

        const auto scale = [&](const std::optional<double>& per_proc) -> std::optional<std::int64_t> {
            if (!per_proc)
                return std::nullopt;
            if (memory == ArchiveMemory::raw)
                return std::llround(*per_proc);
            if (!alloc)
                return std::nullopt;
            return std::llround(*per_proc * *alloc);
        };
        r.used_mem_kb = scale(used_mem);
        r.req_mem_kb = scale(req_mem);
        r.exit_code = status;

        const auto id_text = [](std::string_view t) { return t == "-1" ? std::string() : std::string(t); };
        r.user = id_text(tok[11]);
        r.project = id_text(tok[12]);
        r.executable = id_text(tok[13]);
        r.queue = id_text(tok[14]);
        return r;
    } catch (const FieldError& e) {
        return ParseError{line_no, e.reason, e.detail};
    }
}

namespace {

void append_cell(std::string& out, std::string_view cell) {
    if (!out.empty())
        out.push_back('\t');
    out.append(cell);
}

template <class T>
void append_number(std::string& out, const std::optional<T>& v) {
    if (!v) {
        append_cell(out, "-1");
        return;
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, *v);
    append_cell(out, std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

void append_timestamp(std::string& out, const std::optional<Timestamp>& t) {
    if (!t) {
        append_cell(out, "-1");
        return;
    }
    // -1 s would read back as the sentinel, so it takes the date form.
    if (t->epoch_ms % 1000 == 0 && t->epoch_ms != -1000)
        append_number(out, std::optional<std::int64_t>(t->epoch_ms / 1000));
    else
        append_cell(out, timefmt::format_datetime(*t));
}

}  // namespace

std::string format_lanl_line(const JobRecord& r) {
    std::string out;
    out.reserve(160);
    out.append(r.job_id);
    append_timestamp(out, r.submit_time);
    append_timestamp(out, r.start_time);
    append_timestamp(out, r.end_time);
    append_number(out, r.req_procs);
    append_number(out, r.used_procs);
    append_number(out, r.req_cpu_s);
    append_number(out, r.used_cpu_s);
    append_number(out, r.req_mem_kb);
    append_number(out, r.used_mem_kb);
    append_cell(out, r.queue);
    append_cell(out, !r.dedicated ? "-1" : (*r.dedicated ? "1" : "0"));
    append_cell(out, r.user);
    append_cell(out, r.project);
    append_cell(out, r.executable);
    append_number(out, r.exit_code);
    return out;
}

TraceReader::TraceReader(std::istream& in, TraceFormat format, ArchiveMemory memory)
    : in_(in), format_(format), memory_(memory) {}

std::optional<JobRecord> TraceReader::next() {
    const char comment = format_ == TraceFormat::lanl16 ? '#' : ';';
    while (std::getline(in_, line_)) {
        ++report_.total_lines;
        const std::string_view body = trim(line_);
        if (body.empty() || body.front() == comment) {
            ++report_.comments;
            continue;
        }
        std::string_view raw = line_;
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);
        LineResult res = format_ == TraceFormat::lanl16 ? parse_lanl_line(raw, report_.total_lines)
                                                        : parse_archive_line(raw, report_.total_lines, memory_);
        if (auto* err = std::get_if<ParseError>(&res)) {
            ++report_.malformed;
            ++report_.reasons[err->reason];
            last_error_ = std::move(*err);
            continue;
        }
        auto& rec = std::get<JobRecord>(res);
        if (rec.start_time && rec.end_time)
            ++report_.parsed;
        else
            ++report_.skipped_missing_times;
        return std::move(rec);
    }
    if (in_.bad())
        throw TraceReadError("read failure after line " + std::to_string(report_.total_lines), report_);
    return std::nullopt;
}

ParseReport parse_trace(std::istream& in, TraceFormat format, const RecordSink& sink, ArchiveMemory memory) {
    TraceReader reader(in, format, memory);
    while (auto rec = reader.next())
        sink(std::move(*rec));
    return reader.report();
}

}  // namespace bwtrace
