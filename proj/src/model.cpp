#include "bwtrace/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bwtrace {

namespace {

void require_non_negative(const std::optional<std::int64_t>& v, const char* field) {
    if (v && *v < 0)
        throw std::invalid_argument(std::string("negative ") + field);
}

void require_non_negative(const std::optional<double>& v, const char* field) {
    if (v && (!std::isfinite(*v) || *v < 0.0))
        throw std::invalid_argument(std::string("negative or non-finite ") + field);
}

}  // namespace

void validate(const JobRecord& r) {
    require_non_negative(r.req_procs, "req_procs");
    require_non_negative(r.used_procs, "used_procs");
    require_non_negative(r.req_cpu_s, "req_cpu_s");
    require_non_negative(r.used_cpu_s, "used_cpu_s");
    require_non_negative(r.req_mem_kb, "req_mem_kb");
    require_non_negative(r.used_mem_kb, "used_mem_kb");
}

RateSample::RateSample(std::string job_id, Timestamp start, Timestamp end, std::uint64_t n_bytes,
                       std::optional<double> rate_bytes_per_s, SampleFlags flags)
    : job_id_(std::move(job_id)),
      start_(start),
      end_(end),
      n_bytes_(n_bytes),
      rate_(rate_bytes_per_s),
      flags_(flags) {
    const std::int64_t d = duration_ms();
    if (rate_.has_value() != (d != 0))
        throw std::invalid_argument("rate must be present exactly when duration is non-zero");
    if (flags_.negative_duration != (d < 0))
        throw std::invalid_argument("negative_duration flag disagrees with duration sign");
    if (rate_) {
        if (!std::isfinite(*rate_))
            throw std::invalid_argument("rate is not finite");
        const long double lhs = static_cast<long double>(*rate_) * static_cast<long double>(d);
        const long double rhs = 1000.0L * static_cast<long double>(n_bytes_);
        if (std::fabs(lhs - rhs) > 1e-12L * std::fabs(rhs))
            throw std::invalid_argument("rate * duration does not reconstruct 1000 * n_bytes");
    }
}

}  // namespace bwtrace
