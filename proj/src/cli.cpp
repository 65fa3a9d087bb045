#include "bwtrace/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>

#include "bwtrace/export.hpp"
#include "bwtrace/synth.hpp"

namespace bwtrace::cli {

namespace {

// Records held in memory at once; bounds the pipeline's footprint.
constexpr std::size_t kBatch = 1 << 16;

const char* base_name(MbBase b) { return b == MbBase::binary ? "binary" : "decimal"; }

std::string number(const std::optional<double>& v) {
    if (!v)
        return {};
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, *v);
    return std::string(buf, res.ptr);
}

void print_report(std::ostream& os, const ParseReport& r) {
    os << "total_lines=" << r.total_lines << '\n'
       << "total=" << r.job_lines() << '\n'
       << "records=" << r.records() << '\n'
       << "parsed=" << r.parsed << '\n'
       << "skipped_missing_times=" << r.skipped_missing_times << '\n'
       << "malformed=" << r.malformed << '\n'
       << "comments=" << r.comments << '\n';
    for (const auto& [reason, n] : r.reasons)
        os << "reason." << reason << '=' << n << '\n';
}

class Input {
public:
    Input(const std::string& path, std::istream& fallback) {
        if (path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
        if (!*file_)
            throw IoError("cannot open input '" + path + "'");
        stream_ = file_.get();
    }
    std::istream& get() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

class Output {
public:
    Output(const std::optional<std::string>& path, std::ostream& fallback) {
        if (!path || *path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(*path, std::ios::binary | std::ios::trunc);
        if (!*file_)
            throw IoError("cannot open output '" + *path + "'");
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_)
            throw IoError("write to output failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

struct PipelineResult {
    ParseReport report;
    std::uint64_t valid = 0;
    std::uint64_t omitted = 0;
    std::uint64_t dropped_negative = 0;
};

// parse -> partition -> rates, batch by batch. `on_sample` sees every
// sample in file order.
template <class OnSample>
PipelineResult run_pipeline(const RunConfig& c, std::istream& in, OnSample&& on_sample) {
    TraceReader reader(in, c.format, c.archive_memory);
    RateStream stream({c.memory, c.carry_forward, c.drop_negative});
    std::vector<JobRecord> batch;
    std::vector<RateSample> samples;
    batch.reserve(kBatch);
    samples.reserve(kBatch);

    const auto flush = [&] {
        samples.clear();
        stream.push(batch, samples);
        for (const auto& s : samples)
            on_sample(s);
        batch.clear();
    };
    while (auto rec = reader.next()) {
        batch.push_back(std::move(*rec));
        if (batch.size() == kBatch)
            flush();
    }
    flush();
    return {reader.report(), stream.valid(), stream.omitted(), stream.dropped_negative()};
}

void print_partition(std::ostream& os, const PipelineResult& p) {
    os << "valid=" << p.valid << '\n' << "omitted=" << p.omitted << '\n';
}

int cmd_inspect(const RunConfig& c, Environment env) {
    Input in(c.input_path, env.in);
    Output out(c.output_path, env.out);
    const auto res = run_pipeline(c, in.get(), [](const RateSample&) {});
    print_report(out.get(), res.report);
    print_partition(out.get(), res);
    out.finish();
    return kExitOk;
}

int cmd_rates(const RunConfig& c, Environment env) {
    Input in(c.input_path, env.in);
    Output out(c.output_path, env.out);
    PipelineResult res;
    if (c.full) {
        CsvWriter w(out.get(), c.mb);
        res = run_pipeline(c, in.get(), [&](const RateSample& s) { w.write(s); });
    } else {
        WorksheetWriter w(out.get(), c.mb);
        res = run_pipeline(c, in.get(), [&](const RateSample& s) { w.write(s); });
    }
    out.finish();
    print_report(env.err, res.report);
    print_partition(env.err, res);
    env.err << "dropped_negative=" << res.dropped_negative << '\n';
    return kExitOk;
}

int cmd_summary(const RunConfig& c, Environment env) {
    Input in(c.input_path, env.in);
    Output out(c.output_path, env.out);
    SummaryBuilder builder(c.mb);
    const auto res = run_pipeline(c, in.get(), [&](const RateSample& s) { builder.add(s); });
    const TraceSummary s = builder.finish();
    auto& os = out.get();
    os << "mb_base=" << base_name(c.mb) << '\n'
       << "n_rates=" << s.n_rates << '\n'
       << "n_negative=" << s.n_negative << '\n'
       << "n_undefined=" << s.n_undefined << '\n'
       << "min=" << number(s.min) << '\n'
       << "max=" << number(s.max) << '\n'
       << "mean=" << number(s.mean) << '\n'
       << "median=" << number(s.median) << '\n'
       << "p95=" << number(s.p95) << '\n';
    out.finish();
    print_report(env.err, res.report);
    print_partition(env.err, res);
    return kExitOk;
}

int cmd_gen(const RunConfig& c, Environment env) {
    synth::GenSpec spec;
    {
        Input in(c.gen_spec_path, env.in);
        spec = synth::parse_gen_spec(in.get());
    }
    Output trace(c.output_path, env.out);
    const std::string truth_path = c.truth_path ? *c.truth_path : *c.output_path + ".truth";
    Output truth(truth_path, env.out);
    const auto gt = synth::write_fixture(spec, trace.get(), truth.get());
    trace.finish();
    truth.finish();
    env.err << "generated=" << spec.count << '\n'
            << "expected_valid=" << gt.expected_valid << '\n'
            << "expected_omitted=" << gt.expected_omitted << '\n'
            << "truth=" << truth_path << '\n';
    return kExitOk;
}

}  // namespace

void validate(const RunConfig& c) {
    const bool stdout_trace = !c.output_path || *c.output_path == "-";
    if (c.command == Command::gen) {
        if (c.gen_spec_path.empty())
            throw InvalidSpec("gen requires a spec file");
        if (stdout_trace && (!c.truth_path || *c.truth_path == "-"))
            throw InvalidSpec("gen writing the trace to standard output needs --truth PATH");
    } else if (c.input_path.empty()) {
        throw InvalidSpec("missing input path");
    }
    if (c.full && c.command != Command::rates)
        throw InvalidSpec("--full applies only to rates");
    if (c.truth_path && c.command != Command::gen)
        throw InvalidSpec("--truth applies only to gen");
    if (c.archive_memory == ArchiveMemory::raw && c.format != TraceFormat::archive18)
        throw InvalidSpec("--per-proc-memory=raw requires --format archive");
}

int run(const RunConfig& config, Environment env) {
    try {
        validate(config);
        switch (config.command) {
            case Command::inspect: return cmd_inspect(config, env);
            case Command::rates: return cmd_rates(config, env);
            case Command::summary: return cmd_summary(config, env);
            case Command::gen: return cmd_gen(config, env);
        }
    } catch (const TraceReadError& e) {
        env.err << "error: " << e.what() << '\n';
        print_report(env.err, e.partial_report());
        return kExitIo;
    } catch (const IoError& e) {
        env.err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        env.err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        env.err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace bwtrace::cli
