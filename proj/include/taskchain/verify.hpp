#pragma once

#include "taskchain/cultural.hpp"
#include "taskchain/model.hpp"
#include "taskchain/sir.hpp"
#include "taskchain/trace.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taskchain
{
    enum class ModelKind : std::uint8_t
    {
        Cultural,
        Sir,
    };

    /// "cultural" or "sir"; throws std::invalid_argument otherwise.
    ModelKind parse_model_kind(std::string_view name);
    std::string_view to_string(ModelKind kind) noexcept;

    template <class Recipe>
    struct SequentialResult
    {
        std::uint64_t digest = 0;
        std::vector<Recipe> log;
    };

    /// Reference executor: creates and immediately executes every task in
    /// creation order on a single stream.
    template <SimulationModel Model>
    SequentialResult<typename Model::Recipe> run_sequential(Model &model)
    {
        SequentialResult<typename Model::Recipe> result;
        model.prepare();
        while (auto recipe = model.create())
        {
            model.execute(*recipe);
            result.log.push_back(std::move(*recipe));
        }
        result.digest = model.digest();
        return result;
    }

    /// Ordered pairs (i, j), i < j, such that task i must complete before
    /// task j starts. Sorted by (j, i), no duplicates.
    struct GroundTruthDeps
    {
        std::uint64_t task_count = 0;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    };

    /// Conflicts of the cultural model: a task reads source and target rows
    /// and writes the target row. i precedes j when
    /// target_i in {source_j, target_j} or target_j == source_i.
    GroundTruthDeps ground_truth_deps(std::span<const CulturalRecipe> log);

    /// Conflicts of the SIR model at subset granularity: same-phase tasks on
    /// the same subset, and opposite-phase tasks on adjacent subsets.
    GroundTruthDeps ground_truth_deps(std::span<const SirRecipe> log, const Partition &partition);

    struct Violation
    {
        enum class Kind : std::uint8_t
        {
            Order,     // dependent pair executed out of order
            Lifecycle, // missing, duplicated or misordered lifecycle events
            Creation,  // Created events not in ascending task id order
        };

        Kind kind;
        std::uint64_t task = 0;
        std::uint64_t other = 0; // predecessor for Order violations
        std::string message;
    };

    struct ValidationReport
    {
        std::vector<Violation> violations;
        std::vector<TraceParseError> parse_errors;
        std::uint64_t events = 0;
        std::uint64_t tasks = 0;
        std::uint64_t pairs_checked = 0;
        std::uint64_t order_violations = 0;
        std::uint64_t lifecycle_violations = 0;
        std::uint64_t creation_violations = 0;

        bool ok() const noexcept { return violations.empty() && parse_errors.empty(); }
    };

    /// Checks a complete trace against lifecycle rules and the given
    /// dependences. Events need not be sorted.
    ValidationReport validate_trace(std::span<const TraceEvent> trace, const GroundTruthDeps &deps);

    /// Plain-text report, one violation per line after a summary block.
    void write_report(std::ostream &out, const ValidationReport &report);
}
