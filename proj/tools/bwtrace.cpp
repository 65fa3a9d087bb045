// bwtrace: per-job bandwidth estimates from supercomputer accounting traces.
//
//   bwtrace inspect  TRACE [--format lanl|archive] ...
//   bwtrace rates    TRACE [--full] [--out PATH] ...
//   bwtrace summary  TRACE [--mb binary|decimal] ...
//   bwtrace gen      SPEC  --out TRACE [--truth PATH]

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "bwtrace/cli.hpp"

using bwtrace::cli::Command;
using bwtrace::cli::RunConfig;

namespace {

void add_trace_options(CLI::App& sub, RunConfig& cfg, std::string& per_proc_memory) {
    const std::map<std::string, bwtrace::TraceFormat> formats{{"lanl", bwtrace::TraceFormat::lanl16},
                                                              {"archive", bwtrace::TraceFormat::archive18}};
    const std::map<std::string, bwtrace::MemorySource> sources{{"requested", bwtrace::MemorySource::requested},
                                                               {"used", bwtrace::MemorySource::used}};
    const std::map<std::string, bwtrace::MbBase> bases{{"binary", bwtrace::MbBase::binary},
                                                       {"decimal", bwtrace::MbBase::decimal}};

    sub.add_option("input", cfg.input_path, "Trace file, or - for standard input")->required();
    sub.add_option("--format", cfg.format, "Trace line format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub.add_option("--per-proc-memory", per_proc_memory, "Archive memory columns: scaled (per job) or raw")
        ->check(CLI::IsMember({"scaled", "raw"}));
    sub.add_option("--memory", cfg.memory, "Memory column used as the byte count")
        ->transform(CLI::CheckedTransformer(sources, CLI::ignore_case));
    sub.add_option("--mb", cfg.mb, "Mbyte definition for output")
        ->transform(CLI::CheckedTransformer(bases, CLI::ignore_case));
    sub.add_flag("--carry-forward", cfg.carry_forward, "Use the previous job's end time when a start time is missing");
    sub.add_flag("--drop-negative", cfg.drop_negative, "Exclude jobs whose end precedes their start");
    sub.add_option("--out", cfg.output_path, "Output path (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-job bandwidth estimation for supercomputer workload traces"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string per_proc_memory = "scaled";

    auto* inspect = app.add_subcommand("inspect", "Parse a trace and report line and job counts");
    add_trace_options(*inspect, cfg, per_proc_memory);

    auto* rates = app.add_subcommand("rates", "Write per-job bandwidth as a worksheet or full CSV");
    add_trace_options(*rates, cfg, per_proc_memory);
    rates->add_flag("--full", cfg.full, "Full-precision CSV instead of the worksheet");

    auto* summary = app.add_subcommand("summary", "Print summary statistics of per-job bandwidth");
    add_trace_options(*summary, cfg, per_proc_memory);

    auto* gen = app.add_subcommand("gen", "Generate a synthetic rigid-job trace and its ground truth");
    gen->add_option("spec", cfg.gen_spec_path, "Generator spec (key=value), or - for standard input")->required();
    gen->add_option("--out", cfg.output_path, "Trace output path (default: standard output)");
    gen->add_option("--truth", cfg.truth_path, "Ground-truth sidecar path (default: <out>.truth)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bwtrace::cli::kExitUsage;
    }

    if (*inspect)
        cfg.command = Command::inspect;
    else if (*rates)
        cfg.command = Command::rates;
    else if (*summary)
        cfg.command = Command::summary;
    else
        cfg.command = Command::gen;
    cfg.archive_memory = per_proc_memory == "raw" ? bwtrace::ArchiveMemory::raw : bwtrace::ArchiveMemory::per_job;

    std::ios::sync_with_stdio(false);
    return bwtrace::cli::run(cfg, {std::cin, std::cout, std::cerr});
}
