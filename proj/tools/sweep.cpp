#include "sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

namespace taskchain::cli
{
    namespace
    {
        struct ModelDeleter
        {
            void operator()(tc_model *m) const noexcept { tc_model_destroy(m); }
        };
        struct RunDeleter
        {
            void operator()(tc_run *r) const noexcept { tc_run_destroy(r); }
        };
        using ModelHandle = std::unique_ptr<tc_model, ModelDeleter>;
        using RunHandle = std::unique_ptr<tc_run, RunDeleter>;

        void check_status(tc_status status, const std::string &what)
        {
            if (status != TC_OK)
                throw std::runtime_error(what + ": " + tc_status_string(status) + ": " + tc_last_error());
        }

        ModelHandle make_model(const SweepSpec &spec, std::uint64_t s, std::uint64_t seed)
        {
            tc_model *raw = nullptr;
            if (spec.model == "cultural")
            {
                auto p = spec.cultural;
                p.features = static_cast<std::uint32_t>(s);
                p.seed = seed;
                check_status(tc_model_create_cultural(&p, &raw), "creating cultural model");
            }
            else
            {
                auto p = spec.sir;
                p.subset_size = static_cast<std::uint32_t>(s);
                p.seed = seed;
                check_status(tc_model_create_sir(&p, &raw), "creating sir model");
            }
            return ModelHandle(raw);
        }

        std::string cell_path(const std::string &base, const SweepSpec &spec, std::uint64_t s, std::uint32_t n,
                              std::uint64_t seed)
        {
            if (spec.cell_count() == 1)
                return base;
            const auto dot = base.find_last_of('.');
            const auto slash = base.find_last_of('/');
            const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
            const std::string stem = has_ext ? base.substr(0, dot) : base;
            const std::string ext = has_ext ? base.substr(dot) : "";
            return stem + "_" + spec.model + "_s" + std::to_string(s) + "_n" + std::to_string(n) + "_seed" +
                   std::to_string(seed) + ext;
        }
    }

    SweepSpec::SweepSpec()
    {
        tc_cultural_params_default(&cultural);
        tc_sir_params_default(&sir);
    }

    void SweepSpec::check() const
    {
        if (model != "cultural" && model != "sir")
            throw std::invalid_argument("--model must be 'cultural' or 'sir', got '" + model + "'");
        if (s_values.empty())
            throw std::invalid_argument("--sweep needs at least one value");
        if (n_values.empty())
            throw std::invalid_argument("--workers needs at least one value");
        if (seeds < 1)
            throw std::invalid_argument("--seeds must be at least 1");
        if (cycle_cap < 1)
            throw std::invalid_argument("--cycle-cap must be at least 1");
        if (!(watchdog_factor >= 0.0) || !(watchdog_seconds >= 0.0))
            throw std::invalid_argument("watchdog settings must be non-negative");
        for (auto n : n_values)
            if (n < 1)
                throw std::invalid_argument("--workers values must be at least 1");
        for (auto s : s_values)
        {
            if (s < 1 || s > 0xffffffffULL)
                throw std::invalid_argument("--sweep value " + std::to_string(s) + " out of range");
            if (model == "sir" && sir.agents % s != 0)
                throw std::invalid_argument("--sweep value " + std::to_string(s) + " does not divide N = " +
                                            std::to_string(sir.agents));
        }
    }

    std::string format_digest(std::uint64_t digest)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        return buf;
    }

    void write_row(std::ostream &out, const SweepRow &row)
    {
        char ms[64];
        std::snprintf(ms, sizeof ms, "%.6f", row.wall_ms);
        out << row.model << ',' << row.s << ',' << row.n << ',' << row.seed << ',' << row.steps << ',' << ms << ','
            << format_digest(row.digest) << '\n';
    }

    SweepOutcome run_sweep(const SweepSpec &spec, std::ostream &csv, std::ostream &log)
    {
        spec.check();
        SweepOutcome outcome;

        const auto max_n = *std::max_element(spec.n_values.begin(), spec.n_values.end());
        const auto cores = std::thread::hardware_concurrency();
        if (cores != 0 && max_n > cores)
            log << "warning: " << max_n << " workers requested but only " << cores
                << " hardware threads available; timings will be contended\n";

        std::vector<std::uint32_t> ns = spec.n_values;
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

        const std::uint64_t steps = spec.model == "cultural" ? spec.cultural.steps : spec.sir.steps;

        csv << kResultHeader << '\n';
        for (auto s : spec.s_values)
        {
            for (std::uint32_t k = 0; k < spec.seeds; ++k)
            {
                const std::uint64_t seed = spec.base_seed + k;
                double reference_ms = -1.0;
                std::map<std::uint64_t, int> digests_seen;
                for (auto n : ns)
                {
                    SweepRow row{spec.model, s, n, seed, steps, 0.0, 0};
                    try
                    {
                        auto model = make_model(spec, s, seed);
                        tc_engine_config cfg;
                        tc_engine_config_default(&cfg);
                        cfg.n_workers = n;
                        cfg.cycle_cap = spec.cycle_cap;
                        cfg.trace_enabled = spec.validate || !spec.trace_path.empty();
                        cfg.watchdog_seconds = spec.watchdog_seconds;
                        if (n > 1 && reference_ms > 0.0 && spec.watchdog_factor > 0.0)
                            cfg.watchdog_seconds = spec.watchdog_factor * reference_ms / 1000.0;

                        tc_run *raw = nullptr;
                        check_status(tc_run_engine(model.get(), &cfg, &raw), "running engine");
                        RunHandle run(raw);

                        row.digest = tc_run_digest(run.get());
                        if (tc_run_aborted(run.get()))
                        {
                            row.wall_ms = -1.0;
                            ++outcome.aborted;
                            log << "watchdog abort: s=" << s << " n=" << n << " seed=" << seed << '\n';
                        }
                        else
                        {
                            row.wall_ms = tc_run_wall_ms(run.get());
                            if (n == 1)
                                reference_ms = row.wall_ms;
                            digests_seen[row.digest]++;
                        }

                        std::string trace_file;
                        if (!spec.trace_path.empty())
                        {
                            trace_file = cell_path(spec.trace_path, spec, s, n, seed);
                            check_status(tc_run_write_trace(run.get(), trace_file.c_str()), "writing trace");
                        }
                        if (spec.validate && !tc_run_aborted(run.get()))
                        {
                            auto reference = make_model(spec, s, seed);
                            const std::string report = trace_file.empty() ? "" : trace_file + ".report.txt";
                            tc_validation v{};
                            check_status(tc_run_validate(run.get(), reference.get(),
                                                         report.empty() ? nullptr : report.c_str(), &v),
                                         "validating trace");
                            const auto bad = v.order_violations + v.lifecycle_violations + v.creation_violations;
                            if (bad != 0)
                            {
                                ++outcome.validation_failures;
                                log << "validation failed: s=" << s << " n=" << n << " seed=" << seed << ": "
                                    << v.order_violations << " order, " << v.lifecycle_violations
                                    << " lifecycle, " << v.creation_violations << " creation violations\n";
                            }
                            if (v.oracle_digest != row.digest)
                            {
                                ++outcome.digest_mismatches;
                                log << "digest mismatch vs sequential reference: s=" << s << " n=" << n
                                    << " seed=" << seed << '\n';
                            }
                        }
                    }
                    catch (const std::exception &e)
                    {
                        row.wall_ms = -1.0;
                        ++outcome.aborted;
                        log << "run failed: s=" << s << " n=" << n << " seed=" << seed << ": " << e.what() << '\n';
                    }
                    write_row(csv, row);
                    csv.flush();
                    outcome.rows.push_back(row);
                }
                if (digests_seen.size() > 1)
                {
                    ++outcome.inconsistent_digests;
                    log << "digest differs across worker counts: s=" << s << " seed=" << seed << '\n';
                }
            }
        }
        return outcome;
    }
}
