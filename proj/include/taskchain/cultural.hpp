#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace taskchain
{
    struct CulturalParams
    {
        std::uint32_t agents = 200;   // N
        std::uint32_t features = 20;  // F
        std::uint32_t traits = 3;     // q
        double omega_gate = 0.0;      // minimum overlap for an interaction to proceed
        std::uint64_t steps = 10'000; // number of pairwise interactions (tasks)
        std::uint64_t seed = 1;

        void validate() const;
    };

    struct CulturalRecipe
    {
        std::uint32_t source = 0;
        std::uint32_t target = 0;
        std::uint64_t child_seed = 0;

        friend bool operator==(const CulturalRecipe &, const CulturalRecipe &) = default;
    };

    /// Agents read or written by traversed, uncompleted tasks of one cycle.
    struct CulturalRecord
    {
        std::vector<std::uint32_t> targets_seen;
        std::vector<std::uint32_t> sources_seen;

        friend bool operator==(const CulturalRecord &, const CulturalRecord &) = default;
    };

    /// Axelrod-type cultural dynamics on a complete graph. One task is one
    /// source -> target interaction. Creation draws the pair from the master
    /// stream; execution compares all F features and possibly copies one
    /// trait from the source into the target.
    class CulturalModel
    {
    public:
        using Recipe = CulturalRecipe;
        using Record = CulturalRecord;

        /// Random initial traits from the initialization stream.
        explicit CulturalModel(const CulturalParams &params);
        /// Explicit initial traits, row-major N x F.
        CulturalModel(const CulturalParams &params, std::vector<std::uint8_t> traits);

        void prepare() {}
        std::optional<Recipe> create();
        Record make_record() const { return {}; }
        bool depends(const Record &record, const Recipe &recipe) const;
        void absorb(Record &record, const Recipe &recipe) const;
        void reset(Record &record) const;
        void execute(const Recipe &recipe);
        std::uint64_t digest() const;

        /// Fraction of features on which agents a and b hold the same trait.
        /// Throws std::out_of_range for invalid ids.
        double overlap(std::uint32_t a, std::uint32_t b) const;

        const CulturalParams &params() const noexcept { return params_; }
        std::span<const std::uint8_t> traits() const noexcept { return traits_; }
        std::span<const std::uint8_t> row(std::uint32_t agent) const;
        std::uint64_t created() const noexcept { return cursor_; }

    private:
        CulturalParams params_;
        std::vector<std::uint8_t> traits_;
        std::mt19937_64 master_;
        std::uint64_t cursor_ = 0;
    };
}
