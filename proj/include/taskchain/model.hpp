#pragma once

#include <concepts>
#include <cstdint>
#include <optional>

namespace taskchain
{
    /// Contract between a simulation model and the engine.
    ///
    /// A model splits its work into tasks. `create` runs under the engine's
    /// creation serialization and returns the next recipe of a deterministic
    /// sequence (or nothing once the budget is spent). `execute` performs the
    /// remaining work of one task and may run concurrently with other
    /// executions the dependence rules consider independent.
    ///
    /// Records are worker-local summaries of traversed, uncompleted tasks.
    /// `depends` may over-approximate true dependence, never under-approximate
    /// it, and `absorb` must be monotone and idempotent.
    ///
    /// `prepare` runs at the start of the timed region, before any `create`.
    template <class M>
    concept SimulationModel = requires(M &model, const M &cmodel,
                                       typename M::Record &record,
                                       const typename M::Record &crecord,
                                       const typename M::Recipe &recipe) {
        typename M::Recipe;
        typename M::Record;
        requires std::copyable<typename M::Recipe>;
        { model.prepare() };
        { model.create() } -> std::same_as<std::optional<typename M::Recipe>>;
        { cmodel.make_record() } -> std::same_as<typename M::Record>;
        { cmodel.depends(crecord, recipe) } -> std::same_as<bool>;
        { cmodel.absorb(record, recipe) };
        { cmodel.reset(record) };
        { model.execute(recipe) };
        { cmodel.digest() } -> std::same_as<std::uint64_t>;
    };
}
