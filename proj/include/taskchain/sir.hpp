#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace taskchain
{
    enum class SirStatus : std::uint8_t
    {
        S = 0,
        I = 1,
        R = 2,
    };

    /// Undirected graph in compressed adjacency form.
    struct RingGraph
    {
        std::uint32_t nodes = 0;
        std::uint32_t degree = 0;
        std::vector<std::uint32_t> offsets;   // nodes + 1 entries
        std::vector<std::uint32_t> neighbors; // sorted per node

        std::span<const std::uint32_t> neighbors_of(std::uint32_t node) const
        {
            return std::span<const std::uint32_t>(neighbors).subspan(offsets[node],
                                                                     offsets[node + 1] - offsets[node]);
        }
    };

    /// Ring lattice: node i is linked to i +- 1, ..., i +- k/2 (mod N).
    /// Throws std::invalid_argument unless k is even, k >= 2 and k < N.
    RingGraph build_ring(std::uint32_t nodes, std::uint32_t degree);

    /// Fixed partition of the agents into contiguous equal subsets, with the
    /// subset-level adjacency relation. A subset is adjacent to itself.
    class Partition
    {
    public:
        Partition() = default;
        Partition(std::uint32_t subset_size, std::uint32_t n_subsets);

        std::uint32_t subset_size() const noexcept { return subset_size_; }
        std::uint32_t n_subsets() const noexcept { return n_subsets_; }
        std::uint32_t subset_of(std::uint32_t agent) const noexcept { return agent / subset_size_; }

        bool adjacent(std::uint32_t a, std::uint32_t b) const noexcept
        {
            return adj_[std::size_t{a} * n_subsets_ + b] != 0;
        }
        std::span<const std::uint32_t> adjacent_subsets(std::uint32_t subset) const
        {
            return lists_[subset];
        }

        void connect(std::uint32_t a, std::uint32_t b);
        void finalize();

    private:
        std::uint32_t subset_size_ = 0;
        std::uint32_t n_subsets_ = 0;
        std::vector<std::uint8_t> adj_;
        std::vector<std::vector<std::uint32_t>> lists_;
    };

    /// Throws std::invalid_argument unless `subset_size` divides the node count.
    Partition partition_and_aggregate(const RingGraph &graph, std::uint32_t subset_size);

    struct SirParams
    {
        std::uint32_t agents = 400;     // N
        std::uint32_t degree = 14;      // k
        double p_si = 0.8;
        double p_ir = 0.1;
        double p_rs = 0.3;
        std::uint64_t steps = 300;
        std::uint32_t subset_size = 20; // s
        std::uint64_t seed = 1;
        double initial_infected = 0.1;

        void validate() const;
    };

    enum class SirPhase : std::uint8_t
    {
        ComputeNew,
        Commit,
    };

    struct SirRecipe
    {
        std::uint32_t subset = 0;
        SirPhase phase = SirPhase::ComputeNew;
        std::uint64_t child_seed = 0;

        friend bool operator==(const SirRecipe &, const SirRecipe &) = default;
    };

    struct SirRecord
    {
        std::vector<std::uint32_t> compute_seen;
        std::vector<std::uint32_t> commit_seen;

        friend bool operator==(const SirRecord &, const SirRecord &) = default;
    };

    /// SIR-type epidemic with synchronous updates on a ring lattice. Each step
    /// is a wave of ComputeNew tasks (one per subset, writing `next`) followed
    /// by a wave of Commit tasks (copying `next` into `current`).
    class SirModel
    {
    public:
        using Recipe = SirRecipe;
        using Record = SirRecord;

        /// Random initial state from the initialization stream.
        explicit SirModel(const SirParams &params);
        SirModel(const SirParams &params, std::vector<SirStatus> initial);

        /// Builds the partition and aggregate graph. Idempotent.
        void prepare();
        std::optional<Recipe> create();
        Record make_record() const { return {}; }
        bool depends(const Record &record, const Recipe &recipe) const;
        void absorb(Record &record, const Recipe &recipe) const;
        void reset(Record &record) const;
        void execute(const Recipe &recipe);
        std::uint64_t digest() const;

        void step_compute(std::uint32_t subset, std::uint64_t child_seed);
        void step_commit(std::uint32_t subset);

        /// Next state of one agent given the number of infected neighbours and a uniform draw.
        SirStatus transition(SirStatus state, std::uint32_t infected_neighbors, double u) const;

        const SirParams &params() const noexcept { return params_; }
        const RingGraph &graph() const noexcept { return graph_; }
        /// Throws std::logic_error before prepare().
        const Partition &partition() const;
        std::span<const SirStatus> current() const noexcept { return current_; }
        std::span<const SirStatus> next() const noexcept { return next_; }
        std::uint64_t created() const noexcept { return cursor_; }
        std::uint64_t total_tasks() const noexcept;

    private:
        SirParams params_;
        RingGraph graph_;
        std::optional<Partition> partition_;
        std::vector<SirStatus> current_;
        std::vector<SirStatus> next_;
        std::uint64_t cursor_ = 0;
    };
}
