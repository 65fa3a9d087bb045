#ifndef BWTRACE_CLI_HPP
#define BWTRACE_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "bwtrace/bandwidth.hpp"
#include "bwtrace/parser.hpp"

namespace bwtrace::cli {

enum class Command { inspect, rates, summary, gen };

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
    Command command = Command::inspect;
    std::string input_path = "-";  // "-" is standard input
    std::optional<std::string> output_path;  // unset: standard output
    TraceFormat format = TraceFormat::lanl16;
    ArchiveMemory archive_memory = ArchiveMemory::per_job;
    MemorySource memory = MemorySource::requested;
    MbBase mb = MbBase::binary;
    bool carry_forward = false;
    bool drop_negative = false;
    bool full = false;                     // rates: full CSV instead of worksheet
    std::string gen_spec_path;             // gen: "-" is standard input
    std::optional<std::string> truth_path; // gen: defaults to <output>.truth
};

/// Throws InvalidSpec for missing command-specific fields and for flag
/// combinations that do not apply to the command.
void validate(const RunConfig& config);

struct Environment {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

/// Executes one command. Data goes to the output path or env.out;
/// diagnostics go to env.err only. Returns kExitOk, kExitIo or kExitUsage.
int run(const RunConfig& config, Environment env);

}  // namespace bwtrace::cli

#endif  // BWTRACE_CLI_HPP
