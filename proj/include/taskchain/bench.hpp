#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace taskchain::bench
{
    inline constexpr const char *kResultHeader = "model,s,n,seed,steps,wall_ms,digest";
    inline constexpr const char *kSummaryHeader = "model,s,n,mean_ms,sem_ms,runs";

    /// One timed run. `wall_ms` is -1 when the run was aborted by the watchdog.
    struct ResultRow
    {
        std::string model;
        std::uint64_t s = 0;
        std::uint32_t n = 0;
        std::uint64_t seed = 0;
        std::uint64_t steps = 0;
        double wall_ms = 0.0;
        std::uint64_t digest = 0;

        bool aborted() const noexcept { return wall_ms < 0.0; }
    };

    struct SummaryRow
    {
        std::string model;
        std::uint64_t s = 0;
        std::uint32_t n = 0;
        double mean_ms = 0.0;
        double sem_ms = 0.0; // NaN with fewer than two runs
        std::uint64_t runs = 0;
    };

    struct MeanSem
    {
        double mean = 0.0;
        double sem = 0.0;
    };

    /// Mean and standard error of the mean (sample standard deviation / sqrt(count)).
    MeanSem mean_sem(std::span<const double> values);

    /// Groups rows by (model, s, n) in order of first appearance. Aborted runs
    /// are excluded from the statistics. Cells with fewer than two usable runs
    /// are still emitted and described in `warnings`.
    std::vector<SummaryRow> summarize(std::span<const ResultRow> rows, std::vector<std::string> &warnings);

    void write_summary_csv(std::ostream &out, std::span<const SummaryRow> rows);

    /// Throws std::runtime_error naming the offending line.
    std::vector<ResultRow> read_results_csv(std::istream &in);
}
