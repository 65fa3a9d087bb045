#ifndef BWTRACE_BANDWIDTH_HPP
#define BWTRACE_BANDWIDTH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bwtrace/model.hpp"

namespace bwtrace {

/// Which memory column supplies the byte count n.
enum class MemorySource {
    requested,  // field 9
    used,       // field 10
};

/// Definition of the Mbyte used for output.
enum class MbBase {
    binary,   // 1048576 bytes
    decimal,  // 1000000 bytes
};

constexpr std::int64_t divisor(MbBase base) { return base == MbBase::binary ? 1'048'576 : 1'000'000; }

/// Selected memory field in bytes (Kbytes * 1024), or nullopt if absent.
/// Throws std::overflow_error if the product does not fit 64 bits.
std::optional<std::uint64_t> select_bytes(const JobRecord& record, MemorySource source);

/// Start, end and the selected memory field are all present.
bool has_bandwidth_data(const JobRecord& record, MemorySource source);

struct Partition {
    std::vector<JobRecord> valid;
    std::vector<JobRecord> omitted;
};

/// Splits records into those usable for bandwidth and the rest, preserving
/// relative order on both sides.
Partition partition_jobs(std::span<const JobRecord> records, MemorySource source);

/// end - start in milliseconds. Zero and negative values are legitimate.
constexpr std::int64_t duration_ms(Timestamp start, Timestamp end) { return end.epoch_ms - start.epoch_ms; }

/// Bandwidth in bytes/second: 1000 * n / duration. nullopt when the
/// duration is zero. A negative duration gives a negative rate.
std::optional<double> rate(std::uint64_t n_bytes, std::int64_t duration_ms);

inline double to_output_unit(double rate_bytes_per_s, MbBase base) {
    return rate_bytes_per_s / static_cast<double>(divisor(base));
}

/// Start time of records[idx], falling back to the previous record's end
/// when the start is missing. nullopt when neither is available.
std::optional<Timestamp> resolve_start(std::span<const JobRecord> records, std::size_t idx);

/// One-record form: `prev` is the record preceding `record` in file order,
/// or nullptr for the first record.
std::optional<Timestamp> resolve_start(const JobRecord& record, const JobRecord* prev);

/// Sample for one record, or nullopt when it lacks bandwidth data.
/// `resolved_start` overrides the record's own start (carry-forward).
std::optional<RateSample> make_sample(const JobRecord& record, MemorySource source,
                                      std::optional<Timestamp> resolved_start);

/// Full estimator over a record sequence: one sample per valid record, in
/// input order. With carry_forward the records must be in file order and a
/// missing start is taken from the previous record's end.
///
/// Without carry_forward this is an order-preserving map and runs on the
/// OpenMP kernel; with it the pass is sequential.
std::vector<RateSample> compute_rates(std::span<const JobRecord> records, MemorySource source,
                                      bool carry_forward);

struct RateOptions {
    MemorySource memory = MemorySource::requested;
    bool carry_forward = false;
    bool drop_negative = false;
};

/// compute_rates over a trace delivered in consecutive batches. Carry-forward
/// state crosses batch boundaries, so splitting the trace never changes the
/// result.
class RateStream {
public:
    explicit RateStream(RateOptions options) : options_(options) {}

    /// Appends the samples for `batch` to `out`.
    void push(std::span<const JobRecord> batch, std::vector<RateSample>& out);

    std::uint64_t valid() const { return valid_; }
    std::uint64_t omitted() const { return omitted_; }
    std::uint64_t dropped_negative() const { return dropped_negative_; }

private:
    RateOptions options_;
    std::optional<JobRecord> last_;  // final record of the previous batch
    std::uint64_t valid_ = 0;
    std::uint64_t omitted_ = 0;
    std::uint64_t dropped_negative_ = 0;
};

namespace kernels {

/// Reference implementation: plain loop, no threading.
namespace serial {
std::vector<RateSample> rate_map(std::span<const JobRecord> records, MemorySource source);
std::vector<RateSample> rate_map_carry_forward(std::span<const JobRecord> records, MemorySource source,
                                               const JobRecord* before_first = nullptr);
}  // namespace serial

/// OpenMP data-parallel map; output identical to serial::rate_map.
namespace omp {
std::vector<RateSample> rate_map(std::span<const JobRecord> records, MemorySource source);
/// Threads the runtime will use; 1 when built without OpenMP.
int max_threads();
}  // namespace omp

}  // namespace kernels

}  // namespace bwtrace

#endif  // BWTRACE_BANDWIDTH_HPP
