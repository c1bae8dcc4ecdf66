#pragma once

#include "taskchain/taskchain.h"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace taskchain::cli
{
    inline constexpr const char *kResultHeader = "model,s,n,seed,steps,wall_ms,digest";

    struct SweepSpec
    {
        std::string model = "cultural";
        // Task size proxy: F for the cultural model, subset size for SIR.
        std::vector<std::uint64_t> s_values;
        std::vector<std::uint32_t> n_values{1, 2, 3, 4, 5};
        std::uint32_t seeds = 5;
        std::uint64_t base_seed = 1;
        std::uint32_t cycle_cap = 6;
        tc_cultural_params cultural{};
        tc_sir_params sir{};
        // Runs with n > 1 are aborted after factor x (n = 1 time of the same s and seed).
        double watchdog_factor = 20.0;
        // Used when no n = 1 reference time exists; 0 disables.
        double watchdog_seconds = 0.0;
        std::string trace_path;
        bool validate = false;

        SweepSpec();
        /// Throws std::invalid_argument with a readable message.
        void check() const;
        std::size_t cell_count() const { return s_values.size() * n_values.size() * seeds; }
    };

    struct SweepRow
    {
        std::string model;
        std::uint64_t s = 0;
        std::uint32_t n = 0;
        std::uint64_t seed = 0;
        std::uint64_t steps = 0;
        double wall_ms = 0.0; // -1 on watchdog abort
        std::uint64_t digest = 0;
    };

    struct SweepOutcome
    {
        std::vector<SweepRow> rows;
        std::uint64_t aborted = 0;
        std::uint64_t validation_failures = 0;
        std::uint64_t digest_mismatches = 0; // engine vs sequential reference, when validating
        std::uint64_t inconsistent_digests = 0; // digest differs across n for one (s, seed)
    };

    std::string format_digest(std::uint64_t digest);
    void write_row(std::ostream &out, const SweepRow &row);

    /// Runs every (s, seed, n) cell one at a time, writing each CSV row to
    /// `csv` as soon as it is measured. Progress and warnings go to `log`.
    SweepOutcome run_sweep(const SweepSpec &spec, std::ostream &csv, std::ostream &log);
}
