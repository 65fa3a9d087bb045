#include "bwtrace/synth.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <string_view>

#include "bwtrace/parser.hpp"

namespace bwtrace::synth {

namespace {

constexpr std::uint64_t kQueues = 4;
constexpr std::uint64_t kUsers = 50;
constexpr std::uint64_t kProjects = 10;
constexpr double kFailureFrac = 0.05;
// 1000 * 1024 * kb must fit in int64 for the exact rate numerator.
constexpr std::int64_t kMaxMemKb = INT64_MAX / 1'024'000;

bool is_fraction(double f) { return f >= 0.0 && f <= 1.0; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <class T>
T parse_scalar(std::string_view key, std::string_view text) {
    text = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw InvalidSpec("bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
    return v;
}

std::vector<std::int64_t> parse_list(std::string_view key, std::string_view text) {
    std::vector<std::int64_t> out;
    while (true) {
        const std::size_t comma = text.find(',');
        out.push_back(parse_scalar<std::int64_t>(key, text.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

Rational exact_rate(std::int64_t n_bytes, std::int64_t duration) {
    std::int64_t num = 1000 * n_bytes;
    std::int64_t den = duration;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return Rational{num / g, den / g};
}

}  // namespace

void validate(const GenSpec& s) {
    if (!(s.inter_arrival_mean_ms > 0.0) || !std::isfinite(s.inter_arrival_mean_ms))
        throw InvalidSpec("inter_arrival_mean_ms must be positive");
    if (s.runtime_min_ms <= 0 || s.runtime_max_ms < s.runtime_min_ms)
        throw InvalidSpec("runtime range must satisfy 0 < min <= max");
    if (s.wait_max_ms < 0)
        throw InvalidSpec("wait_max_ms must be non-negative");
    if (s.mem_kb_choices.empty() || s.procs_choices.empty())
        throw InvalidSpec("mem_kb_choices and procs_choices must be non-empty");
    for (auto kb : s.mem_kb_choices)
        if (kb <= 0 || kb > kMaxMemKb)
            throw InvalidSpec("mem_kb_choices entries must be in [1, " + std::to_string(kMaxMemKb) + "]");
    for (auto p : s.procs_choices)
        if (p <= 0)
            throw InvalidSpec("procs_choices entries must be positive");
    if (!is_fraction(s.missing_start_frac) || !is_fraction(s.missing_end_frac) || !is_fraction(s.missing_mem_frac))
        throw InvalidSpec("missing fractions must lie in [0, 1]");
}

GenSpec parse_gen_spec(std::istream& in) {
    GenSpec s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos)
            body = body.substr(0, hash);
        body = trim(body);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw InvalidSpec("line " + std::to_string(line_no) + ": expected key=value");
        const std::string_view key = trim(body.substr(0, eq));
        const std::string_view value = body.substr(eq + 1);

        if (key == "seed")
            s.seed = parse_scalar<std::uint64_t>(key, value);
        else if (key == "count")
            s.count = parse_scalar<std::uint64_t>(key, value);
        else if (key == "inter_arrival_mean_ms")
            s.inter_arrival_mean_ms = parse_scalar<double>(key, value);
        else if (key == "runtime_min_ms")
            s.runtime_min_ms = parse_scalar<std::int64_t>(key, value);
        else if (key == "runtime_max_ms")
            s.runtime_max_ms = parse_scalar<std::int64_t>(key, value);
        else if (key == "wait_max_ms")
            s.wait_max_ms = parse_scalar<std::int64_t>(key, value);
        else if (key == "mem_kb_choices")
            s.mem_kb_choices = parse_list(key, value);
        else if (key == "procs_choices")
            s.procs_choices = parse_list(key, value);
        else if (key == "missing_start_frac")
            s.missing_start_frac = parse_scalar<double>(key, value);
        else if (key == "missing_end_frac")
            s.missing_end_frac = parse_scalar<double>(key, value);
        else if (key == "missing_mem_frac")
            s.missing_mem_frac = parse_scalar<double>(key, value);
        else if (key == "epoch_origin_ms")
            s.epoch_origin_ms = parse_scalar<std::int64_t>(key, value);
        else
            throw InvalidSpec("unknown key '" + std::string(key) + "'");
    }
    if (in.bad())
        throw IoError("failed reading generator spec");
    validate(s);
    return s;
}

Generator::Generator(GenSpec spec) : spec_(std::move(spec)), rng_(spec_.seed), clock_ms_(spec_.epoch_origin_ms) {
    validate(spec_);
}

// Uniform integer in [0, bound) by rejection, so no modulo bias.
std::uint64_t Generator::below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    while (true) {
        const std::uint64_t x = rng_();
        if (x >= limit)
            return x % bound;
    }
}

// Uniform double in [0, 1) from the top 53 bits.
double Generator::unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::optional<GeneratedJob> Generator::next() {
    if (produced_ == spec_.count)
        return std::nullopt;

    const double gap = -spec_.inter_arrival_mean_ms * std::log1p(-unit());
    if (produced_ > 0)
        clock_ms_ += std::llround(gap);
    const auto wait = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(spec_.wait_max_ms) + 1));
    const std::int64_t runtime =
        spec_.runtime_min_ms +
        static_cast<std::int64_t>(below(static_cast<std::uint64_t>(spec_.runtime_max_ms - spec_.runtime_min_ms) + 1));
    const std::int64_t mem_kb = spec_.mem_kb_choices[below(spec_.mem_kb_choices.size())];
    const std::int64_t procs = spec_.procs_choices[below(spec_.procs_choices.size())];
    const bool drop_start = unit() < spec_.missing_start_frac;
    const bool drop_end = unit() < spec_.missing_end_frac;
    const bool drop_mem = unit() < spec_.missing_mem_frac;
    const bool failed = unit() < kFailureFrac;
    const std::uint64_t queue = below(kQueues);
    const std::uint64_t user = below(kUsers);
    const std::uint64_t project = below(kProjects);

    ++produced_;
    GeneratedJob job;
    JobRecord& r = job.record;
    r.job_id = "j" + std::to_string(produced_);
    r.submit_time = Timestamp{clock_ms_};
    const Timestamp start{clock_ms_ + wait};
    const Timestamp end{start.epoch_ms + runtime};
    if (!drop_start)
        r.start_time = start;
    if (!drop_end)
        r.end_time = end;
    r.req_procs = procs;
    r.used_procs = procs;
    r.req_cpu_s = static_cast<double>(runtime * procs) * 1.25 / 1000.0;
    r.used_cpu_s = static_cast<double>(runtime * procs) * 0.9 / 1000.0;
    if (!drop_mem)
        r.req_mem_kb = mem_kb;
    r.used_mem_kb = mem_kb - mem_kb / 4;
    r.queue = "q" + std::to_string(queue);
    r.dedicated = procs >= 512;
    r.user = "u" + std::to_string(user);
    r.project = "p" + std::to_string(project);
    r.executable = "a.out";
    r.exit_code = failed ? 1 : 0;

    if (!drop_start && !drop_end && !drop_mem)
        job.expected_rate = exact_rate(mem_kb * 1024, runtime);
    return job;
}

Workload generate(const GenSpec& spec) {
    Workload w;
    Generator gen(spec);
    w.records.reserve(spec.count);
    while (auto job = gen.next()) {
        if (job->expected_rate) {
            ++w.truth.expected_valid;
            w.truth.rates.push_back({job->record.job_id, *job->expected_rate});
        } else {
            ++w.truth.expected_omitted;
        }
        w.records.push_back(std::move(job->record));
    }
    return w;
}

GroundTruth write_fixture(const GenSpec& spec, std::ostream& trace, std::ostream& truth_out) {
    GroundTruth truth;
    Generator gen(spec);
    while (auto job = gen.next()) {
        trace << format_lanl_line(job->record) << '\n';
        if (job->expected_rate) {
            ++truth.expected_valid;
            truth.rates.push_back({job->record.job_id, *job->expected_rate});
        } else {
            ++truth.expected_omitted;
        }
    }
    trace.flush();
    if (!trace)
        throw IoError("failed writing generated trace");
    write_ground_truth(truth, truth_out);
    return truth;
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
    out << "expected_valid=" << truth.expected_valid << '\n';
    out << "expected_omitted=" << truth.expected_omitted << '\n';
    for (const auto& r : truth.rates)
        out << r.job_id << ' ' << r.rate.num << '/' << r.rate.den << '\n';
    out.flush();
    if (!out)
        throw IoError("failed writing ground truth");
}

}  // namespace bwtrace::synth
