#include "taskchain/taskchain.h"

#include "taskchain/bench.hpp"
#include "taskchain/cultural.hpp"
#include "taskchain/engine.hpp"
#include "taskchain/sir.hpp"
#include "taskchain/trace.hpp"
#include "taskchain/verify.hpp"

#include <fstream>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

using namespace taskchain;

struct tc_model
{
    std::variant<CulturalModel, SirModel> model;
    bool used = false;
};

struct tc_run
{
    RunResult result;
};

namespace
{
    thread_local std::string g_last_error;

    struct StatusError : std::runtime_error
    {
        StatusError(tc_status s, const std::string &what) : std::runtime_error(what), status(s) {}
        tc_status status;
    };

    template <class F>
    tc_status guarded(F &&body) noexcept
    {
        try
        {
            body();
            return TC_OK;
        }
        catch (const StatusError &e)
        {
            g_last_error = e.what();
            return e.status;
        }
        catch (const std::invalid_argument &e)
        {
            g_last_error = e.what();
            return TC_ERR_INVALID_ARGUMENT;
        }
        catch (const std::bad_alloc &)
        {
            g_last_error = "out of memory";
            return TC_ERR_INTERNAL;
        }
        catch (const std::exception &e)
        {
            g_last_error = e.what();
            return TC_ERR_INTERNAL;
        }
        catch (...)
        {
            g_last_error = "unknown error";
            return TC_ERR_INTERNAL;
        }
    }

    void require(const void *p, const char *name)
    {
        if (!p)
            throw StatusError(TC_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
    }

    CulturalParams to_cpp(const tc_cultural_params &p)
    {
        return {p.agents, p.features, p.traits, p.omega_gate, p.steps, p.seed};
    }

    SirParams to_cpp(const tc_sir_params &p)
    {
        return {p.agents, p.degree, p.p_si, p.p_ir, p.p_rs, p.steps, p.subset_size, p.seed, p.initial_infected};
    }

    EngineConfig to_cpp(const tc_engine_config &c)
    {
        if (!(c.watchdog_seconds >= 0.0))
            throw std::invalid_argument("watchdog_seconds must be non-negative");
        EngineConfig cfg;
        cfg.n_workers = c.n_workers;
        cfg.cycle_cap = c.cycle_cap;
        cfg.trace_enabled = c.trace_enabled != 0;
        cfg.watchdog = std::chrono::nanoseconds(static_cast<std::int64_t>(c.watchdog_seconds * 1e9));
        return cfg;
    }

    void claim_fresh(tc_model &m)
    {
        if (m.used)
            throw StatusError(TC_ERR_STATE, "model has already been run; create a new one");
        m.used = true;
    }

    ValidationReport validate_against(std::span<const TraceEvent> trace, const tc_model &reference,
                                      std::uint64_t &oracle_digest)
    {
        if (reference.used)
            throw StatusError(TC_ERR_STATE, "reference model must be fresh");
        return std::visit(
            [&](const auto &fresh) {
                auto model = fresh;
                auto seq = run_sequential(model);
                oracle_digest = seq.digest;
                if constexpr (std::is_same_v<std::decay_t<decltype(model)>, SirModel>)
                    return validate_trace(trace, ground_truth_deps(seq.log, model.partition()));
                else
                    return validate_trace(trace, ground_truth_deps(seq.log));
            },
            reference.model);
    }

    void fill(tc_validation &out, const ValidationReport &report, std::uint64_t oracle_digest)
    {
        out.events = report.events;
        out.tasks = report.tasks;
        out.pairs_checked = report.pairs_checked;
        out.order_violations = report.order_violations;
        out.lifecycle_violations = report.lifecycle_violations;
        out.creation_violations = report.creation_violations;
        out.parse_errors = report.parse_errors.size();
        out.oracle_digest = oracle_digest;
    }

    void maybe_write_report(const char *path, const ValidationReport &report)
    {
        if (!path)
            return;
        std::ofstream out(path);
        if (!out)
            throw StatusError(TC_ERR_IO, std::string("cannot open report file '") + path + "'");
        write_report(out, report);
    }
}

extern "C" {

const char *tc_last_error(void) { return g_last_error.c_str(); }

const char *tc_status_string(tc_status status)
{
    switch (status)
    {
    case TC_OK:
        return "ok";
    case TC_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case TC_ERR_STATE:
        return "invalid state";
    case TC_ERR_IO:
        return "i/o error";
    case TC_ERR_PARSE:
        return "parse error";
    case TC_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void tc_cultural_params_default(tc_cultural_params *out)
{
    if (!out)
        return;
    const CulturalParams d;
    *out = {d.agents, d.features, d.traits, d.omega_gate, d.steps, d.seed};
}

void tc_sir_params_default(tc_sir_params *out)
{
    if (!out)
        return;
    const SirParams d;
    *out = {d.agents, d.degree, d.p_si, d.p_ir, d.p_rs, d.steps, d.subset_size, d.seed, d.initial_infected};
}

void tc_engine_config_default(tc_engine_config *out)
{
    if (!out)
        return;
    const EngineConfig d;
    *out = {d.n_workers, d.cycle_cap, d.trace_enabled ? 1 : 0, 0.0};
}

tc_status tc_model_create_cultural(const tc_cultural_params *params, tc_model **out)
{
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = new tc_model{CulturalModel(to_cpp(*params))};
    });
}

tc_status tc_model_create_sir(const tc_sir_params *params, tc_model **out)
{
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = new tc_model{SirModel(to_cpp(*params))};
    });
}

void tc_model_destroy(tc_model *model) { delete model; }

const char *tc_model_kind(const tc_model *model)
{
    if (!model)
        return "";
    return std::holds_alternative<CulturalModel>(model->model) ? "cultural" : "sir";
}

tc_status tc_model_digest(const tc_model *model, uint64_t *out)
{
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        *out = std::visit([](const auto &m) { return m.digest(); }, model->model);
    });
}

tc_status tc_model_task_count(const tc_model *model, uint64_t *out)
{
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        if (const auto *c = std::get_if<CulturalModel>(&model->model))
            *out = c->params().steps;
        else
            *out = std::get<SirModel>(model->model).total_tasks();
    });
}

tc_status tc_run_engine(tc_model *model, const tc_engine_config *config, tc_run **out)
{
    return guarded([&] {
        require(model, "model");
        require(config, "config");
        require(out, "out");
        const EngineConfig cfg = to_cpp(*config);
        cfg.validate();
        claim_fresh(*model);
        auto run = std::make_unique<tc_run>();
        run->result = std::visit([&](auto &m) { return taskchain::run(m, cfg); }, model->model);
        *out = run.release();
    });
}

tc_status tc_run_sequential(tc_model *model, uint64_t *digest)
{
    return guarded([&] {
        require(model, "model");
        require(digest, "digest");
        claim_fresh(*model);
        *digest = std::visit([](auto &m) { return run_sequential(m).digest; }, model->model);
    });
}

void tc_run_destroy(tc_run *run) { delete run; }

uint64_t tc_run_digest(const tc_run *run) { return run ? run->result.digest : 0; }

double tc_run_wall_ms(const tc_run *run)
{
    return run ? std::chrono::duration<double, std::milli>(run->result.wall).count() : 0.0;
}

int tc_run_aborted(const tc_run *run) { return run && run->result.aborted ? 1 : 0; }

uint64_t tc_run_tasks_executed(const tc_run *run) { return run ? run->result.tasks_erased : 0; }

size_t tc_run_trace_length(const tc_run *run) { return run ? run->result.trace.size() : 0; }

tc_status tc_run_write_trace(const tc_run *run, const char *path)
{
    return guarded([&] {
        require(run, "run");
        require(path, "path");
        std::ofstream out(path);
        if (!out)
            throw StatusError(TC_ERR_IO, std::string("cannot open trace file '") + path + "'");
        write_trace_csv(out, run->result.trace);
        if (!out)
            throw StatusError(TC_ERR_IO, std::string("failed writing trace file '") + path + "'");
    });
}

tc_status tc_run_validate(const tc_run *run, const tc_model *reference, const char *report_path,
                          tc_validation *out)
{
    return guarded([&] {
        require(run, "run");
        require(reference, "reference");
        require(out, "out");
        std::uint64_t oracle = 0;
        const auto report = validate_against(run->result.trace, *reference, oracle);
        maybe_write_report(report_path, report);
        fill(*out, report, oracle);
    });
}

tc_status tc_validate_trace_file(const char *trace_path, const tc_model *reference, const char *report_path,
                                 tc_validation *out)
{
    return guarded([&] {
        require(trace_path, "trace_path");
        require(reference, "reference");
        require(out, "out");
        std::ifstream in(trace_path);
        if (!in)
            throw StatusError(TC_ERR_IO, std::string("cannot open trace file '") + trace_path + "'");
        auto parsed = parse_trace_csv(in);
        std::uint64_t oracle = 0;
        auto report = validate_against(parsed.events, *reference, oracle);
        report.parse_errors = std::move(parsed.errors);
        maybe_write_report(report_path, report);
        fill(*out, report, oracle);
    });
}

tc_status tc_summarize_csv(const char *results_path, const char *summary_path, uint64_t *sparse_cells)
{
    return guarded([&] {
        require(results_path, "results_path");
        require(summary_path, "summary_path");
        std::ifstream in(results_path);
        if (!in)
            throw StatusError(TC_ERR_IO, std::string("cannot open results file '") + results_path + "'");
        std::vector<bench::ResultRow> rows;
        try
        {
            rows = bench::read_results_csv(in);
        }
        catch (const std::runtime_error &e)
        {
            throw StatusError(TC_ERR_PARSE, std::string(results_path) + ": " + e.what());
        }
        std::vector<std::string> warnings;
        const auto summary = bench::summarize(rows, warnings);
        std::ofstream out(summary_path);
        if (!out)
            throw StatusError(TC_ERR_IO, std::string("cannot open summary file '") + summary_path + "'");
        bench::write_summary_csv(out, summary);
        if (sparse_cells)
            *sparse_cells = warnings.size();
    });
}

}
