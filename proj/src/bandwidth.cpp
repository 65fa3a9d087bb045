#include "bwtrace/bandwidth.hpp"

#include <algorithm>
#include <stdexcept>

namespace bwtrace {

std::optional<std::uint64_t> select_bytes(const JobRecord& record, MemorySource source) {
    const auto& kb = source == MemorySource::requested ? record.req_mem_kb : record.used_mem_kb;
    if (!kb)
        return std::nullopt;
    if (*kb < 0)
        throw std::invalid_argument("negative memory field");
    std::uint64_t bytes = 0;
    if (__builtin_mul_overflow(static_cast<std::uint64_t>(*kb), std::uint64_t{1024}, &bytes))
        throw std::overflow_error("memory field overflows a 64-bit byte count");
    return bytes;
}

bool has_bandwidth_data(const JobRecord& record, MemorySource source) {
    const auto& kb = source == MemorySource::requested ? record.req_mem_kb : record.used_mem_kb;
    return record.start_time && record.end_time && kb;
}

Partition partition_jobs(std::span<const JobRecord> records, MemorySource source) {
    Partition p;
    for (const auto& r : records)
        (has_bandwidth_data(r, source) ? p.valid : p.omitted).push_back(r);
    return p;
}

std::optional<double> rate(std::uint64_t n_bytes, std::int64_t duration_ms) {
    if (duration_ms == 0)
        return std::nullopt;
    return 1000.0 * static_cast<double>(n_bytes) / static_cast<double>(duration_ms);
}

std::optional<Timestamp> resolve_start(const JobRecord& record, const JobRecord* prev) {
    if (record.start_time)
        return record.start_time;
    if (prev)
        return prev->end_time;
    return std::nullopt;
}

std::optional<Timestamp> resolve_start(std::span<const JobRecord> records, std::size_t idx) {
    if (idx >= records.size())
        throw std::out_of_range("resolve_start index out of range");
    return resolve_start(records[idx], idx >= 1 ? &records[idx - 1] : nullptr);
}

std::optional<RateSample> make_sample(const JobRecord& record, MemorySource source,
                                      std::optional<Timestamp> resolved_start) {
    if (!resolved_start || !record.end_time)
        return std::nullopt;
    const auto bytes = select_bytes(record, source);
    if (!bytes)
        return std::nullopt;
    const std::int64_t d = duration_ms(*resolved_start, *record.end_time);
    SampleFlags flags;
    flags.negative_duration = d < 0;
    flags.carried_forward_start = !record.start_time.has_value();
    return RateSample(record.job_id, *resolved_start, *record.end_time, *bytes, rate(*bytes, d), flags);
}

namespace kernels::serial {

std::vector<RateSample> rate_map(std::span<const JobRecord> records, MemorySource source) {
    std::vector<RateSample> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (auto s = make_sample(r, source, r.start_time))
            out.push_back(std::move(*s));
    return out;
}

std::vector<RateSample> rate_map_carry_forward(std::span<const JobRecord> records, MemorySource source,
                                               const JobRecord* before_first) {
    std::vector<RateSample> out;
    out.reserve(records.size());
    const JobRecord* prev = before_first;
    for (const auto& r : records) {
        if (auto s = make_sample(r, source, resolve_start(r, prev)))
            out.push_back(std::move(*s));
        prev = &r;
    }
    return out;
}

}  // namespace kernels::serial

std::vector<RateSample> compute_rates(std::span<const JobRecord> records, MemorySource source,
                                      bool carry_forward) {
    if (carry_forward)
        return kernels::serial::rate_map_carry_forward(records, source);
    return kernels::omp::rate_map(records, source);
}

void RateStream::push(std::span<const JobRecord> batch, std::vector<RateSample>& out) {
    if (batch.empty())
        return;
    std::vector<RateSample> samples =
        options_.carry_forward
            ? kernels::serial::rate_map_carry_forward(batch, options_.memory, last_ ? &*last_ : nullptr)
            : kernels::omp::rate_map(batch, options_.memory);
    valid_ += samples.size();
    omitted_ += batch.size() - samples.size();
    if (options_.drop_negative)
        dropped_negative_ += std::erase_if(samples, [](const RateSample& s) { return s.flags().negative_duration; });
    out.insert(out.end(), std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.end()));
    if (options_.carry_forward)
        last_ = batch.back();
}

}  // namespace bwtrace
