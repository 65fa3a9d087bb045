#include <exception>

#include "bwtrace/bandwidth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bwtrace::kernels::omp {

namespace {
// Below this the thread fork costs more than the map.
constexpr std::size_t kParallelThreshold = 4096;
}  // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<RateSample> rate_map(std::span<const JobRecord> records, MemorySource source) {
    if (records.size() < kParallelThreshold || max_threads() == 1)
        return serial::rate_map(records, source);

    // Each slot is written by exactly one iteration; compaction afterwards
    // restores input order.
    const auto n = static_cast<std::int64_t>(records.size());
    std::vector<std::optional<RateSample>> slots(records.size());
    std::exception_ptr failure;

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const auto& r = records[static_cast<std::size_t>(i)];
            slots[static_cast<std::size_t>(i)] = make_sample(r, source, r.start_time);
        } catch (...) {
#pragma omp critical(bwtrace_rate_map_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<RateSample> out;
    out.reserve(records.size());
    for (auto& s : slots)
        if (s)
            out.push_back(std::move(*s));
    return out;
}

}  // namespace bwtrace::kernels::omp
