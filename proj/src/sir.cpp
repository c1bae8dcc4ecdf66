#include "taskchain/sir.hpp"

#include "taskchain/digest.hpp"
#include "taskchain/rng.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace taskchain
{
    namespace
    {
        bool contains(const std::vector<std::uint32_t> &v, std::uint32_t x)
        {
            return std::find(v.begin(), v.end(), x) != v.end();
        }

        void insert_once(std::vector<std::uint32_t> &v, std::uint32_t x)
        {
            if (!contains(v, x))
                v.push_back(x);
        }

        bool valid_probability(double p) { return p > 0.0 && p < 1.0; }
    }

    RingGraph build_ring(std::uint32_t nodes, std::uint32_t degree)
    {
        if (degree % 2 != 0)
            throw std::invalid_argument("ring: degree k must be even");
        if (degree < 2 || degree >= nodes)
            throw std::invalid_argument("ring: degree k must satisfy 2 <= k < N");

        RingGraph g;
        g.nodes = nodes;
        g.degree = degree;
        g.offsets.reserve(std::size_t{nodes} + 1);
        g.neighbors.reserve(std::size_t{nodes} * degree);
        const std::uint32_t half = degree / 2;
        std::vector<std::uint32_t> row;
        for (std::uint32_t i = 0; i < nodes; ++i)
        {
            g.offsets.push_back(static_cast<std::uint32_t>(g.neighbors.size()));
            row.clear();
            for (std::uint32_t d = 1; d <= half; ++d)
            {
                row.push_back((i + d) % nodes);
                row.push_back((i + nodes - d) % nodes);
            }
            std::sort(row.begin(), row.end());
            g.neighbors.insert(g.neighbors.end(), row.begin(), row.end());
        }
        g.offsets.push_back(static_cast<std::uint32_t>(g.neighbors.size()));
        return g;
    }

    Partition::Partition(std::uint32_t subset_size, std::uint32_t n_subsets)
        : subset_size_(subset_size), n_subsets_(n_subsets),
          adj_(std::size_t{n_subsets} * n_subsets, 0), lists_(n_subsets)
    {
        for (std::uint32_t a = 0; a < n_subsets; ++a)
            connect(a, a);
    }

    void Partition::connect(std::uint32_t a, std::uint32_t b)
    {
        adj_[std::size_t{a} * n_subsets_ + b] = 1;
        adj_[std::size_t{b} * n_subsets_ + a] = 1;
    }

    void Partition::finalize()
    {
        for (std::uint32_t a = 0; a < n_subsets_; ++a)
        {
            auto &list = lists_[a];
            list.clear();
            for (std::uint32_t b = 0; b < n_subsets_; ++b)
                if (adjacent(a, b))
                    list.push_back(b);
        }
    }

    Partition partition_and_aggregate(const RingGraph &graph, std::uint32_t subset_size)
    {
        if (subset_size == 0 || graph.nodes % subset_size != 0)
            throw std::invalid_argument("partition: subset size must divide N");
        Partition p(subset_size, graph.nodes / subset_size);
        for (std::uint32_t a = 0; a < graph.nodes; ++a)
            for (auto b : graph.neighbors_of(a))
                p.connect(p.subset_of(a), p.subset_of(b));
        p.finalize();
        return p;
    }

    void SirParams::validate() const
    {
        if (!valid_probability(p_si) || !valid_probability(p_ir) || !valid_probability(p_rs))
            throw std::invalid_argument("sir: p_SI, p_IR, p_RS must lie in (0, 1)");
        if (!(initial_infected >= 0.0 && initial_infected <= 1.0))
            throw std::invalid_argument("sir: initial infected fraction must be in [0, 1]");
        if (subset_size == 0 || agents % subset_size != 0)
            throw std::invalid_argument("sir: subset size s must divide N");
    }

    SirModel::SirModel(const SirParams &params) : params_(params)
    {
        params_.validate();
        graph_ = build_ring(params_.agents, params_.degree);
        current_.resize(params_.agents, SirStatus::S);
        std::mt19937_64 init(derive_seed(params_.seed, kInitStreamTag));
        std::bernoulli_distribution infected(params_.initial_infected);
        for (auto &s : current_)
            s = infected(init) ? SirStatus::I : SirStatus::S;
        next_ = current_;
    }

    SirModel::SirModel(const SirParams &params, std::vector<SirStatus> initial)
        : params_(params), current_(std::move(initial))
    {
        params_.validate();
        graph_ = build_ring(params_.agents, params_.degree);
        if (current_.size() != params_.agents)
            throw std::invalid_argument("sir: initial state must have N entries");
        next_ = current_;
    }

    void SirModel::prepare()
    {
        if (!partition_)
            partition_ = partition_and_aggregate(graph_, params_.subset_size);
    }

    const Partition &SirModel::partition() const
    {
        if (!partition_)
            throw std::logic_error("sir: partition not built; call prepare() first");
        return *partition_;
    }

    std::uint64_t SirModel::total_tasks() const noexcept
    {
        return params_.steps * 2 * (params_.agents / params_.subset_size);
    }

    std::optional<SirRecipe> SirModel::create()
    {
        const std::uint32_t m = partition().n_subsets();
        if (cursor_ >= total_tasks())
            return std::nullopt;
        const std::uint64_t r = cursor_ % (2 * std::uint64_t{m});
        SirRecipe recipe;
        recipe.phase = r < m ? SirPhase::ComputeNew : SirPhase::Commit;
        recipe.subset = static_cast<std::uint32_t>(r % m);
        recipe.child_seed = derive_seed(params_.seed, cursor_);
        ++cursor_;
        return recipe;
    }

    // ComputeNew(x) reads `current` on every subset adjacent to x and writes
    // next[x]; Commit(x) reads next[x] and writes current[x].
    bool SirModel::depends(const Record &record, const Recipe &recipe) const
    {
        const Partition &p = partition();
        const auto &same_phase = recipe.phase == SirPhase::ComputeNew ? record.compute_seen : record.commit_seen;
        const auto &other_phase = recipe.phase == SirPhase::ComputeNew ? record.commit_seen : record.compute_seen;
        if (contains(same_phase, recipe.subset))
            return true;
        for (auto y : other_phase)
            if (p.adjacent(recipe.subset, y))
                return true;
        return false;
    }

    void SirModel::absorb(Record &record, const Recipe &recipe) const
    {
        insert_once(recipe.phase == SirPhase::ComputeNew ? record.compute_seen : record.commit_seen,
                    recipe.subset);
    }

    void SirModel::reset(Record &record) const
    {
        record.compute_seen.clear();
        record.commit_seen.clear();
    }

    void SirModel::execute(const Recipe &recipe)
    {
        if (recipe.phase == SirPhase::ComputeNew)
            step_compute(recipe.subset, recipe.child_seed);
        else
            step_commit(recipe.subset);
    }

    SirStatus SirModel::transition(SirStatus state, std::uint32_t infected_neighbors, double u) const
    {
        switch (state)
        {
        case SirStatus::S:
        {
            const double p = params_.p_si * static_cast<double>(infected_neighbors) / params_.degree;
            return u < p ? SirStatus::I : SirStatus::S;
        }
        case SirStatus::I:
            return u < params_.p_ir ? SirStatus::R : SirStatus::I;
        case SirStatus::R:
            return u < params_.p_rs ? SirStatus::S : SirStatus::R;
        }
        return state;
    }

    void SirModel::step_compute(std::uint32_t subset, std::uint64_t child_seed)
    {
        SplitMix64 rng(child_seed);
        const std::uint32_t s = params_.subset_size;
        const std::uint32_t first = subset * s;
        for (std::uint32_t a = first; a < first + s; ++a)
        {
            const double u = rng.uniform();
            std::uint32_t infected = 0;
            for (auto b : graph_.neighbors_of(a))
                infected += current_[b] == SirStatus::I;
            next_[a] = transition(current_[a], infected, u);
        }
    }

    void SirModel::step_commit(std::uint32_t subset)
    {
        const std::uint32_t s = params_.subset_size;
        const auto first = current_.begin() + std::ptrdiff_t{subset} * s;
        std::copy_n(next_.begin() + std::ptrdiff_t{subset} * s, s, first);
    }

    std::uint64_t SirModel::digest() const
    {
        Fnv1a64 h;
        h.update_u64(params_.agents);
        h.update(std::span<const SirStatus>(current_));
        h.update(std::span<const SirStatus>(next_));
        return h.value();
    }
}
