// Acceptance run: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.
//
// Criterion 2 needs the archived LANL CM-5 trace. Point BWTRACE_LANL_TRACE at
// the file (uncompressed) and optionally set BWTRACE_LANL_FORMAT to "archive"
// (default) or "lanl".

#include <malloc.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bwtrace/bandwidth.hpp"
#include "bwtrace/cli.hpp"
#include "bwtrace/export.hpp"
#include "bwtrace/parser.hpp"
#include "bwtrace/synth.hpp"
#include "bwtrace/timefmt.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

// Live and peak heap bytes, for the streaming check.
namespace heap {
std::atomic<std::int64_t> live{0};
std::atomic<std::int64_t> peak{0};

void note_alloc(void* p) {
    const auto now = live.fetch_add(static_cast<std::int64_t>(malloc_usable_size(p))) +
                     static_cast<std::int64_t>(malloc_usable_size(p));
    auto prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
}

void reset_peak() { peak.store(live.load()); }
}  // namespace heap

void* operator new(std::size_t n) {
    void* p = std::malloc(n ? n : 1);
    if (!p)
        throw std::bad_alloc();
    heap::note_alloc(p);
    return p;
}
void* operator new[](std::size_t n) { return operator new(n); }
void operator delete(void* p) noexcept {
    if (!p)
        return;
    heap::live.fetch_sub(static_cast<std::int64_t>(malloc_usable_size(p)));
    std::free(p);
}
void operator delete[](void* p) noexcept { operator delete(p); }
void operator delete(void* p, std::size_t) noexcept { operator delete(p); }
void operator delete[](void* p, std::size_t) noexcept { operator delete(p); }

using namespace bwtrace;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome pass(std::string d) { return {Verdict::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::fail, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "bwtrace_acceptance";
    fs::create_directories(d);
    return d;
}

// 1. rate vs exact rational oracle.
Outcome formula_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    gen::Rng rng(1);
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const auto n = static_cast<std::uint64_t>(gen::between(rng, 0, std::int64_t{1} << 40));
        std::int64_t d = 0;
        while (d == 0)
            d = gen::between(rng, -1'000'000'000, 1'000'000'000);
        const auto r = rate(n, d);
        if (!r)
            return fail("undefined rate for nonzero duration " + std::to_string(d));
        worst = std::max(worst, oracle::relative_error(*r, oracle::exact_rate(n, d)));
        if (worst > 1e-12)
            return fail("n=" + std::to_string(n) + " d=" + std::to_string(d) + " rel.err=" + std::to_string(worst));
        if (rate(n, 0))
            return fail("duration 0 gave a value");
    }
    const double secs = seconds_since(t0);
    if (secs >= 5.0)
        return fail("took " + std::to_string(secs) + " s");
    std::ostringstream os;
    os << "10000 cases, max rel.err " << worst << ", " << secs << " s";
    return pass(os.str());
}

// 2. Counts on the archived LANL trace (data-gated).
Outcome archived_trace_counts() {
    const char* path = std::getenv("BWTRACE_LANL_TRACE");
    if (!path || !*path || !fs::exists(path))
        return {Verdict::skip, "trace not available; set BWTRACE_LANL_TRACE to the uncompressed file"};
    const char* fmt = std::getenv("BWTRACE_LANL_FORMAT");
    cli::RunConfig cfg;
    cfg.command = cli::Command::inspect;
    cfg.input_path = path;
    cfg.format = (fmt && std::string(fmt) == "lanl") ? TraceFormat::lanl16 : TraceFormat::archive18;
    std::istringstream in;
    std::ostringstream out, err;
    if (cli::run(cfg, {in, out, err}) != cli::kExitOk)
        return fail("inspect failed: " + err.str());
    const auto kv = oracle::read_kv(out.str());
    const std::string observed = "total=" + kv.at("total") + " valid=" + kv.at("valid");
    if (kv.at("total") != "201387" || kv.at("valid") != "135375")
        return fail("expected total=201387 valid=135375, observed " + observed);
    return pass(observed);
}

// 3. Generated fixture through the pipeline vs its sidecar.
Outcome synthetic_end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    synth::GenSpec spec;
    spec.count = 10'000;
    spec.seed = 42;
    spec.missing_start_frac = 0.2;
    spec.missing_end_frac = 0.1;
    std::stringstream trace, truth_text;
    synth::write_fixture(spec, trace, truth_text);

    std::vector<JobRecord> records;
    const auto rep = parse_trace(trace, TraceFormat::lanl16, [&](JobRecord&& r) { records.push_back(std::move(r)); });
    const auto truth = oracle::read_sidecar(truth_text);
    if (rep.malformed != 0 || rep.records() != spec.count)
        return fail("parse lost records: " + std::to_string(rep.records()));
    const auto part = partition_jobs(records, MemorySource::requested);
    if (part.valid.size() != truth.expected_valid || part.omitted.size() != truth.expected_omitted)
        return fail("valid/omitted " + std::to_string(part.valid.size()) + "/" + std::to_string(part.omitted.size()) +
                    " vs sidecar " + std::to_string(truth.expected_valid) + "/" +
                    std::to_string(truth.expected_omitted));
    const auto samples = compute_rates(records, MemorySource::requested, false);
    if (samples.size() != truth.rates.size())
        return fail("sample count " + std::to_string(samples.size()));
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].job_id() != truth.rates[i].first || !samples[i].rate_bytes_per_s())
            return fail("sample " + std::to_string(i) + " does not match " + truth.rates[i].first);
        worst = std::max(worst, oracle::relative_error(*samples[i].rate_bytes_per_s(), truth.rates[i].second));
    }
    const double secs = seconds_since(t0);
    if (worst > 1e-12)
        return fail("max rel.err " + std::to_string(worst));
    if (secs >= 10.0)
        return fail("took " + std::to_string(secs) + " s");
    std::ostringstream os;
    os << "valid=" << truth.expected_valid << " omitted=" << truth.expected_omitted << ", max rel.err " << worst
       << ", " << secs << " s";
    return pass(os.str());
}

// 4. format_lanl_line then parse_lanl_line is the identity.
Outcome round_trip() {
    gen::Rng rng(4);
    std::size_t absent = 0, negative = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto rec = gen::record(rng);
        absent += !rec.start_time || !rec.req_mem_kb || !rec.dedicated || rec.queue.empty();
        negative += rec.start_time && rec.end_time && rec.end_time->epoch_ms < rec.start_time->epoch_ms;
        const auto line = format_lanl_line(rec);
        const auto back = parse_lanl_line(line, 1);
        if (!std::holds_alternative<JobRecord>(back))
            return fail("did not parse: " + line);
        if (std::get<JobRecord>(back) != rec)
            return fail("changed on round trip: " + line);
    }
    return pass("1000 records, " + std::to_string(absent) + " with absent fields, " + std::to_string(negative) +
                " with negative duration");
}

bool is_day_form(const std::string& s) {
    // "Mon DD YY"
    return s.size() == 9 && timefmt::is_month_name(s.substr(0, 3)) && s[3] == ' ' && std::isdigit(s[4]) &&
           std::isdigit(s[5]) && s[6] == ' ' && std::isdigit(s[7]) && std::isdigit(s[8]);
}

// 5. Worksheet schema and sign policy.
Outcome worksheet_schema() {
    std::vector<RateSample> samples;
    gen::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t start = gen::timestamp(rng).epoch_ms;
        const std::int64_t d = gen::between(rng, -5'000'000, 50'000'000);
        const auto n = static_cast<std::uint64_t>(gen::between(rng, 0, 1 << 24)) * 1024;
        samples.emplace_back("j" + std::to_string(i), Timestamp{start}, Timestamp{start + d}, n, rate(n, d),
                             SampleFlags{d < 0, false});
    }
    std::ostringstream out;
    const auto rows = write_worksheet(samples, MbBase::binary, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    if (line != "Start date,End date,Mbytes,Bytes")
        return fail("header: " + line);
    std::size_t count = 0, negatives = 0;
    while (std::getline(in, line)) {
        const auto& s = samples.at(count);
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');)
            cells.push_back(c);
        if (line.back() == ',')
            cells.emplace_back();
        if (cells.size() != 4 || !is_day_form(cells[0]) || !is_day_form(cells[1]))
            return fail("row: " + line);
        if (s.rate_bytes_per_s()) {
            const double mb = std::stod(cells[2]);
            if ((*s.rate_bytes_per_s() < 0) != (mb < 0))
                return fail("sign lost: " + line);
            negatives += mb < 0;
        } else if (!cells[2].empty()) {
            return fail("undefined rate printed: " + line);
        }
        ++count;
    }
    if (count != samples.size() || rows != samples.size())
        return fail(std::to_string(count) + " rows for " + std::to_string(samples.size()) + " samples");
    if (negatives == 0)
        return fail("no negative rate exercised");
    return pass(std::to_string(count) + " rows, " + std::to_string(negatives) + " negative");
}

// 6. Property suite.
Outcome invariants() {
    constexpr int kCases = 500;
    gen::Rng rng(6);
    const auto random_n = [&] { return static_cast<std::uint64_t>(gen::between(rng, 0, std::int64_t{1} << 40)); };
    const auto random_d = [&] {
        std::int64_t d = 0;
        while (d == 0)
            d = gen::between(rng, -1'000'000'000, 1'000'000'000);
        return d;
    };

    for (int i = 0; i < kCases; ++i) {
        const auto n = random_n() >> 10;
        const auto k = static_cast<std::uint64_t>(gen::between(rng, 1, 1024));
        const auto d = random_d();
        const double scaled = *rate(k * n, d);
        if (oracle::relative_error(scaled, oracle::exact(*rate(n, d)) * k) > 1e-12)
            return fail("linearity n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
    for (int i = 0; i < kCases; ++i) {
        const auto n = random_n();
        const auto d = random_d();
        if (*rate(n, -d) != -*rate(n, d))
            return fail("antisymmetry n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    for (int i = 0; i < kCases; ++i) {
        const auto n = i % 10 == 0 ? 0 : random_n();
        const auto d = random_d();
        const double r = *rate(n, d);
        const int want = n == 0 ? 0 : (d > 0 ? 1 : -1);
        if ((r > 0) - (r < 0) != want)
            return fail("sign law n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    for (int i = 0; i < kCases; ++i) {
        std::vector<JobRecord> recs;
        const auto len = gen::between(rng, 0, 40);
        for (std::int64_t j = 0; j < len; ++j) {
            recs.push_back(gen::record(rng));
            recs.back().job_id = std::to_string(j);
        }
        const auto src = gen::coin(rng) ? MemorySource::requested : MemorySource::used;
        const auto p = partition_jobs(recs, src);
        if (p.valid.size() + p.omitted.size() != recs.size())
            return fail("partition lost records");
        // Merging the two sides by id must give back the input exactly.
        std::vector<JobRecord> merged(p.valid);
        merged.insert(merged.end(), p.omitted.begin(), p.omitted.end());
        std::sort(merged.begin(), merged.end(),
                  [](const JobRecord& a, const JobRecord& b) { return std::stoi(a.job_id) < std::stoi(b.job_id); });
        if (merged != recs)
            return fail("partition is not a split of the input");
        for (const auto& r : p.valid)
            if (!has_bandwidth_data(r, src))
                return fail("invalid record on valid side");
        for (const auto& r : p.omitted)
            if (has_bandwidth_data(r, src))
                return fail("valid record on omitted side");
    }
    for (int i = 0; i < kCases; ++i) {
        std::vector<RateSample> samples;
        const auto len = gen::between(rng, 0, 60);
        for (std::int64_t j = 0; j < len; ++j) {
            const auto n = random_n();
            const std::int64_t d = gen::coin(rng, 0.1) ? 0 : random_d();
            samples.emplace_back(std::to_string(j), Timestamp{0}, Timestamp{d}, n, rate(n, d), SampleFlags{d < 0, false});
        }
        const auto base = gen::coin(rng) ? MbBase::binary : MbBase::decimal;
        const auto before = summarize(samples, base);
        std::shuffle(samples.begin(), samples.end(), rng);
        if (summarize(samples, base) != before)
            return fail("summarize depends on order");
    }
    for (int i = 0; i < kCases; ++i) {
        std::vector<double> rates(static_cast<std::size_t>(gen::between(rng, 1, 60)));
        for (auto& r : rates)
            r = *rate(random_n(), random_d());
        const auto order = [&](MbBase base) {
            std::vector<std::size_t> idx(rates.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return to_output_unit(rates[a], base) < to_output_unit(rates[b], base);
            });
            return idx;
        };
        if (order(MbBase::binary) != order(MbBase::decimal))
            return fail("ordering changes with Mbyte base");
    }
    return pass("6 properties x " + std::to_string(kCases) + " cases");
}

struct StreamRun {
    std::int64_t parse_peak;
    std::int64_t pipeline_peak;
    double parse_seconds;
};

StreamRun stream_once(const fs::path& file) {
    StreamRun run{};
    {
        std::ifstream in(file);
        heap::reset_peak();
        const auto base = heap::live.load();
        const auto t0 = std::chrono::steady_clock::now();
        TraceReader reader(in, TraceFormat::lanl16);
        std::uint64_t n = 0;
        while (auto rec = reader.next())
            n += rec->job_id.size() > 0;
        run.parse_seconds = seconds_since(t0);
        run.parse_peak = heap::peak.load() - base;
    }
    {
        cli::RunConfig cfg;
        cfg.command = cli::Command::inspect;
        cfg.input_path = file.string();
        std::istringstream in;
        std::ostringstream out, err;
        heap::reset_peak();
        const auto base = heap::live.load();
        cli::run(cfg, {in, out, err});
        run.pipeline_peak = heap::peak.load() - base;
    }
    return run;
}

// 7. Streaming parse: time and memory flat in the line count.
Outcome streaming() {
    const auto dir = scratch_dir();
    const auto make = [&](std::uint64_t count) {
        synth::GenSpec spec;
        spec.count = count;
        spec.missing_start_frac = 0.1;
        const auto p = dir / ("stream_" + std::to_string(count) + ".txt");
        std::ofstream trace(p);
        std::ostringstream truth;
        synth::write_fixture(spec, trace, truth);
        return p;
    };
    const auto small = make(20'000);
    const auto mid = make(100'000);
    const auto large = make(200'000);
    const auto s = stream_once(small);
    const auto m = stream_once(mid);
    const auto l = stream_once(large);
    fs::remove_all(dir);

    std::ostringstream os;
    os << "200k lines parsed in " << l.parse_seconds << " s; parse peak " << s.parse_peak << " B @20k vs "
       << l.parse_peak << " B @200k; pipeline peak " << m.pipeline_peak << " B @100k vs " << l.pipeline_peak
       << " B @200k";
    if (l.parse_seconds >= 10.0)
        return fail(os.str());
    // Parsing holds one line and one record; the rate pipeline holds one batch.
    constexpr std::int64_t kSlack = 64 * 1024;
    if (l.parse_peak > s.parse_peak + kSlack)
        return fail(os.str());
    if (l.pipeline_peak > m.pipeline_peak + m.pipeline_peak / 10 + kSlack)
        return fail(os.str());
    return pass(os.str());
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 rate formula vs rational oracle", formula_oracle},
        {"2 archived trace counts", archived_trace_counts},
        {"3 synthetic end-to-end vs sidecar", synthetic_end_to_end},
        {"4 LANL line round trip", round_trip},
        {"5 worksheet schema", worksheet_schema},
        {"6 invariant suite", invariants},
        {"7 streaming parse", streaming},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        failures += o.verdict == Verdict::fail;
        std::cout << tag << "  " << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
