#include "sweep.hpp"

#include "taskchain/taskchain.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using taskchain::cli::SweepSpec;

namespace
{
    // Parameter blocks of the two reference experiments and smaller desk variants.
    void apply_preset(SweepSpec &spec, const std::string &preset)
    {
        if (spec.model == "cultural")
        {
            spec.cultural.agents = 10'000;
            spec.cultural.traits = 3;
            spec.cultural.omega_gate = 0.0;
            spec.cultural.steps = preset == "full" ? 2'000'000 : 200'000;
            spec.s_values = {10, 50, 100, 200};
        }
        else
        {
            spec.sir.agents = 4'000;
            spec.sir.degree = 14;
            spec.sir.p_si = 0.8;
            spec.sir.p_ir = 0.1;
            spec.sir.p_rs = 0.3;
            spec.sir.steps = preset == "full" ? 3'000 : 300;
            spec.s_values = {10, 25, 50, 100, 200};
        }
    }

    template <class T>
    void override_if(CLI::Option *opt, T &field, const T &value)
    {
        if (opt->count() > 0)
            field = value;
    }

    int fail(const std::string &message)
    {
        std::cerr << "error: " << message << '\n';
        return 2;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Parallel task-chain simulation runner"};
    app.require_subcommand(1);

    // run
    auto *run_cmd = app.add_subcommand("run", "Run a benchmark sweep and write one CSV row per (s, n, seed)");
    std::string model_name;
    std::string preset = "desk";
    std::vector<std::uint32_t> workers{1, 2, 3, 4, 5};
    std::vector<std::uint64_t> sweep;
    std::uint32_t cycle_cap = 6, seeds = 5;
    std::uint64_t base_seed = 1, steps = 0;
    std::uint32_t agents = 0, features = 0, traits = 0, degree = 0, subset_size = 0;
    double omega_gate = 0, p_si = 0, p_ir = 0, p_rs = 0, initial_infected = 0;
    double watchdog_factor = 20.0, watchdog_seconds = 0.0;
    std::string out_path, trace_path, summary_path;
    bool validate = false;

    run_cmd->add_option("--model", model_name, "Model: cultural | sir")
        ->required()
        ->check(CLI::IsMember({"cultural", "sir"}));
    run_cmd->add_option("--preset", preset, "Parameter preset: desk | full")
        ->check(CLI::IsMember({"desk", "full"}))
        ->capture_default_str();
    run_cmd->add_option("--workers", workers, "Comma-separated worker counts")->delimiter(',');
    run_cmd->add_option("--cycle-cap", cycle_cap, "Tasks a worker may create per cycle (C)")->capture_default_str();
    run_cmd->add_option("--seeds", seeds, "Seeds per cell")->capture_default_str();
    run_cmd->add_option("--base-seed", base_seed, "Seeds are base-seed + 0..seeds-1")->capture_default_str();
    auto *sweep_opt = run_cmd->add_option("--sweep", sweep, "Comma-separated task size values (F or subset size)")
                          ->delimiter(',');
    run_cmd->add_option("--steps", steps, "Interactions (cultural) or time steps (sir)");
    run_cmd->add_option("-N,--agents", agents, "Number of agents");
    auto *features_opt = run_cmd->add_option("-F,--features", features, "Cultural features (when not swept)");
    run_cmd->add_option("-q,--traits", traits, "Cultural traits per feature");
    run_cmd->add_option("--omega-gate", omega_gate, "Cultural minimum overlap to interact");
    run_cmd->add_option("-k,--degree", degree, "SIR ring degree (even)");
    run_cmd->add_option("--p-si", p_si, "SIR infection probability");
    run_cmd->add_option("--p-ir", p_ir, "SIR recovery probability");
    run_cmd->add_option("--p-rs", p_rs, "SIR immunity loss probability");
    auto *subset_opt = run_cmd->add_option("--subset-size", subset_size, "SIR subset size (when not swept)");
    run_cmd->add_option("--initial-infected", initial_infected, "SIR initial infected fraction");
    run_cmd->add_option("--watchdog-factor", watchdog_factor, "Abort n>1 runs after factor x the n=1 time")
        ->capture_default_str();
    run_cmd->add_option("--watchdog-seconds", watchdog_seconds, "Absolute watchdog when no n=1 time exists (0 = off)")
        ->capture_default_str();
    run_cmd->add_option("--out", out_path, "Results CSV (default: stdout)");
    run_cmd->add_option("--summary", summary_path, "Also write the summary CSV here");
    run_cmd->add_option("--trace", trace_path, "Write lifecycle trace CSV (per-cell suffix when several cells)");
    run_cmd->add_flag("--validate", validate, "Check traces against ground-truth dependences and the sequential run");

    // summarize
    auto *sum_cmd = app.add_subcommand("summarize", "Mean and standard error per (model, s, n)");
    std::string sum_in, sum_out;
    sum_cmd->add_option("--in", sum_in, "Results CSV")->required();
    sum_cmd->add_option("--out", sum_out, "Summary CSV")->required();

    // validate
    auto *val_cmd = app.add_subcommand("validate", "Validate a trace CSV written by 'run --trace'");
    std::string val_model, val_trace, val_report;
    std::uint64_t val_seed = 1, val_s = 0;
    val_cmd->add_option("--model", val_model)->required()->check(CLI::IsMember({"cultural", "sir"}));
    val_cmd->add_option("--trace", val_trace, "Trace CSV")->required();
    val_cmd->add_option("--report", val_report, "Plain-text report (default: stdout summary only)");
    val_cmd->add_option("--seed", val_seed)->capture_default_str();
    val_cmd->add_option("--s", val_s, "Task size value (F or subset size) the run used");
    val_cmd->add_option("--preset", preset)->check(CLI::IsMember({"desk", "full"}));
    val_cmd->add_option("--steps", steps);
    val_cmd->add_option("-N,--agents", agents);
    val_cmd->add_option("-q,--traits", traits);
    val_cmd->add_option("--omega-gate", omega_gate);
    val_cmd->add_option("-k,--degree", degree);
    val_cmd->add_option("--p-si", p_si);
    val_cmd->add_option("--p-ir", p_ir);
    val_cmd->add_option("--p-rs", p_rs);
    val_cmd->add_option("--initial-infected", initial_infected);

    CLI11_PARSE(app, argc, argv);

    if (sum_cmd->parsed())
    {
        std::uint64_t sparse = 0;
        const auto status = tc_summarize_csv(sum_in.c_str(), sum_out.c_str(), &sparse);
        if (status != TC_OK)
            return fail(tc_last_error());
        if (sparse > 0)
            std::cerr << "warning: " << sparse << " cell(s) with fewer than two usable runs\n";
        return 0;
    }

    const bool is_run = run_cmd->parsed();
    CLI::App *cmd = is_run ? run_cmd : val_cmd;
    SweepSpec spec;
    spec.model = is_run ? model_name : val_model;
    apply_preset(spec, preset);

    auto opt = [&](const char *name) { return cmd->get_option(name); };
    override_if(opt("--steps"), spec.cultural.steps, steps);
    override_if(opt("--steps"), spec.sir.steps, steps);
    override_if(opt("--agents"), spec.cultural.agents, agents);
    override_if(opt("--agents"), spec.sir.agents, agents);
    override_if(opt("--traits"), spec.cultural.traits, traits);
    override_if(opt("--omega-gate"), spec.cultural.omega_gate, omega_gate);
    override_if(opt("--degree"), spec.sir.degree, degree);
    override_if(opt("--p-si"), spec.sir.p_si, p_si);
    override_if(opt("--p-ir"), spec.sir.p_ir, p_ir);
    override_if(opt("--p-rs"), spec.sir.p_rs, p_rs);
    override_if(opt("--initial-infected"), spec.sir.initial_infected, initial_infected);

    if (!is_run)
    {
        if (val_s == 0)
            return fail("--s is required");
        spec.s_values = {val_s};
        spec.seeds = 1;
        spec.base_seed = val_seed;
        // Build the reference model the same way the sweep does.
        tc_model *reference = nullptr;
        tc_status status;
        if (spec.model == "cultural")
        {
            auto p = spec.cultural;
            p.features = static_cast<std::uint32_t>(val_s);
            p.seed = val_seed;
            status = tc_model_create_cultural(&p, &reference);
        }
        else
        {
            auto p = spec.sir;
            p.subset_size = static_cast<std::uint32_t>(val_s);
            p.seed = val_seed;
            status = tc_model_create_sir(&p, &reference);
        }
        if (status != TC_OK)
            return fail(tc_last_error());
        tc_validation v{};
        status = tc_validate_trace_file(val_trace.c_str(), reference, val_report.empty() ? nullptr : val_report.c_str(),
                                        &v);
        tc_model_destroy(reference);
        if (status != TC_OK)
            return fail(tc_last_error());
        const auto bad = v.order_violations + v.lifecycle_violations + v.creation_violations + v.parse_errors;
        std::cout << "events=" << v.events << " tasks=" << v.tasks << " pairs=" << v.pairs_checked
                  << " order=" << v.order_violations << " lifecycle=" << v.lifecycle_violations
                  << " creation=" << v.creation_violations << " parse_errors=" << v.parse_errors << '\n'
                  << (bad == 0 ? "OK" : "VIOLATIONS") << '\n';
        return bad == 0 ? 0 : 1;
    }

    if (sweep_opt->count() > 0)
        spec.s_values = sweep;
    else if (features_opt->count() > 0 && spec.model == "cultural")
        spec.s_values = {features};
    else if (subset_opt->count() > 0 && spec.model == "sir")
        spec.s_values = {subset_size};

    spec.n_values = workers;
    spec.cycle_cap = cycle_cap;
    spec.seeds = seeds;
    spec.base_seed = base_seed;
    spec.watchdog_factor = watchdog_factor;
    spec.watchdog_seconds = watchdog_seconds;
    spec.trace_path = trace_path;
    spec.validate = validate;

    try
    {
        spec.check();
    }
    catch (const std::exception &e)
    {
        return fail(e.what());
    }

    std::ofstream file;
    if (!out_path.empty())
    {
        file.open(out_path);
        if (!file)
            return fail("cannot open '" + out_path + "' for writing");
    }
    std::ostream &csv = out_path.empty() ? std::cout : file;

    const auto outcome = taskchain::cli::run_sweep(spec, csv, std::cerr);
    file.close();

    if (!summary_path.empty())
    {
        if (out_path.empty())
            return fail("--summary requires --out");
        std::uint64_t sparse = 0;
        if (tc_summarize_csv(out_path.c_str(), summary_path.c_str(), &sparse) != TC_OK)
            return fail(tc_last_error());
    }

    std::cerr << outcome.rows.size() << " rows, " << outcome.aborted << " aborted";
    if (spec.validate)
        std::cerr << ", " << outcome.validation_failures << " validation failures, " << outcome.digest_mismatches
                  << " digest mismatches";
    std::cerr << '\n';
    const bool ok = outcome.validation_failures == 0 && outcome.digest_mismatches == 0 &&
                    outcome.inconsistent_digests == 0;
    return ok ? 0 : 1;
}
