#ifndef BWTRACE_SYNTH_HPP
#define BWTRACE_SYNTH_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bwtrace/errors.hpp"
#include "bwtrace/model.hpp"

namespace bwtrace::synth {

/// Parameters of a rigid-job trace: each job has an arrival time, a
/// processor count and a runtime, plus a memory request.
struct GenSpec {
    std::uint64_t seed = 42;
    std::uint64_t count = 1000;
    double inter_arrival_mean_ms = 60'000.0;  // exponential
    std::int64_t runtime_min_ms = 1'000;      // uniform, inclusive
    std::int64_t runtime_max_ms = 3'600'000;
    std::int64_t wait_max_ms = 10'000;  // uniform queue wait in [0, wait_max_ms]
    std::vector<std::int64_t> mem_kb_choices = {32768, 122880, 204800, 307200, 409600, 512000, 755712, 16777216};
    std::vector<std::int64_t> procs_choices = {32, 64, 128, 256, 512, 1024};
    double missing_start_frac = 0.0;
    double missing_end_frac = 0.0;
    double missing_mem_frac = 0.0;
    /// Submit time of the first job.
    std::int64_t epoch_origin_ms = 768'528'000'000;  // May 10 1994 00:00 UTC
};

/// Throws InvalidSpec describing the first violated invariant.
void validate(const GenSpec& spec);

/// Reads "key=value" lines. '#' starts a comment; list values are
/// comma-separated. Unknown keys and unparsable values throw InvalidSpec;
/// keys not given keep their defaults.
GenSpec parse_gen_spec(std::istream& in);

/// Exact bandwidth as a reduced fraction num/den bytes per second, den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool operator==(const Rational&) const = default;
};

struct ExpectedRate {
    std::string job_id;
    Rational rate;
};

/// What the pipeline must report for a generated trace under the default
/// settings (requested memory, no carry-forward).
struct GroundTruth {
    std::uint64_t expected_valid = 0;
    std::uint64_t expected_omitted = 0;
    std::vector<ExpectedRate> rates;  // valid jobs, in trace order
};

struct GeneratedJob {
    JobRecord record;
    std::optional<Rational> expected_rate;  // set exactly for valid jobs
};

/// Incremental generator. The pseudo-random source is std::mt19937_64
/// seeded with GenSpec::seed; every draw is mapped to a value with
/// arithmetic defined here rather than <random> distributions, so a given
/// spec yields the same trace on every standard library.
class Generator {
public:
    explicit Generator(GenSpec spec);

    /// Next job in submit order, or nullopt once `count` jobs were produced.
    std::optional<GeneratedJob> next();

private:
    std::uint64_t below(std::uint64_t bound);
    double unit();

    GenSpec spec_;
    std::mt19937_64 rng_;
    std::uint64_t produced_ = 0;
    std::int64_t clock_ms_;
};

struct Workload {
    std::vector<JobRecord> records;
    GroundTruth truth;
};

/// Materializes the whole trace. Throws InvalidSpec.
Workload generate(const GenSpec& spec);

/// Streams the LANL16 trace to `trace` and the ground-truth sidecar to
/// `truth`. Returns the ground truth. Throws InvalidSpec or IoError.
GroundTruth write_fixture(const GenSpec& spec, std::ostream& trace, std::ostream& truth);

/// Sidecar text:
///   expected_valid=N
///   expected_omitted=M
///   <job_id> <num>/<den>     (one line per valid job)
void write_ground_truth(const GroundTruth& truth, std::ostream& out);

}  // namespace bwtrace::synth

#endif  // BWTRACE_SYNTH_HPP
