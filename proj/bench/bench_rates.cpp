// Serial reference vs OpenMP rate kernel.
//   bwtrace_bench [records] [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bwtrace/bandwidth.hpp"
#include "support/generators.hpp"

using namespace bwtrace;

namespace {

template <class F>
double best_ms(int repeats, F&& f) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1'000'000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;

    gen::Rng rng(7);
    std::vector<JobRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        records.push_back(gen::record(rng));

    std::size_t sink = 0;
    const double serial = best_ms(repeats, [&] { sink += kernels::serial::rate_map(records, MemorySource::requested).size(); });
    std::printf("records=%zu repeats=%d\n", n, repeats);
    std::printf("%-8s %8s %12s %8s\n", "kernel", "threads", "best_ms", "speedup");
    std::printf("%-8s %8d %12.2f %8.2f\n", "serial", 1, serial, 1.0);

    const int max_threads = kernels::omp::max_threads();
    for (int t = 1; t <= max_threads; t *= 2) {
#ifdef _OPENMP
        omp_set_num_threads(t);
#endif
        const double par = best_ms(repeats, [&] { sink += kernels::omp::rate_map(records, MemorySource::requested).size(); });
        std::printf("%-8s %8d %12.2f %8.2f\n", "omp", t, par, serial / par);
    }
    std::printf("(checksum %zu)\n", sink);
}
