#include "taskchain/cultural.hpp"

#include "taskchain/digest.hpp"
#include "taskchain/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

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
    }

    void CulturalParams::validate() const
    {
        if (agents < 2)
            throw std::invalid_argument("cultural: N must be at least 2");
        if (features < 1)
            throw std::invalid_argument("cultural: F must be at least 1");
        if (traits < 1 || traits > 256)
            throw std::invalid_argument("cultural: q must be in [1, 256]");
        if (!(omega_gate >= 0.0 && omega_gate <= 1.0))
            throw std::invalid_argument("cultural: omega_gate must be in [0, 1]");
    }

    CulturalModel::CulturalModel(const CulturalParams &params)
        : params_(params), master_(derive_seed(params.seed, kMasterStreamTag))
    {
        params_.validate();
        traits_.resize(std::size_t{params_.agents} * params_.features);
        std::mt19937_64 init(derive_seed(params_.seed, kInitStreamTag));
        std::uniform_int_distribution<std::uint32_t> trait(0, params_.traits - 1);
        for (auto &t : traits_)
            t = static_cast<std::uint8_t>(trait(init));
    }

    CulturalModel::CulturalModel(const CulturalParams &params, std::vector<std::uint8_t> traits)
        : params_(params), traits_(std::move(traits)), master_(derive_seed(params.seed, kMasterStreamTag))
    {
        params_.validate();
        if (traits_.size() != std::size_t{params_.agents} * params_.features)
            throw std::invalid_argument("cultural: trait matrix must be N x F");
        for (auto t : traits_)
            if (t >= params_.traits)
                throw std::invalid_argument("cultural: trait out of range [0, q)");
    }

    std::optional<CulturalRecipe> CulturalModel::create()
    {
        if (cursor_ >= params_.steps)
            return std::nullopt;
        std::uniform_int_distribution<std::uint32_t> pick_source(0, params_.agents - 1);
        std::uniform_int_distribution<std::uint32_t> pick_other(0, params_.agents - 2);
        CulturalRecipe recipe;
        recipe.source = pick_source(master_);
        recipe.target = pick_other(master_);
        if (recipe.target >= recipe.source)
            ++recipe.target;
        recipe.child_seed = derive_seed(params_.seed, cursor_);
        ++cursor_;
        return recipe;
    }

    // Execution reads both rows and writes the target row. A later task must
    // wait if it touches an agent written earlier, or writes an agent read earlier.
    bool CulturalModel::depends(const Record &record, const Recipe &recipe) const
    {
        return contains(record.targets_seen, recipe.source) ||
               contains(record.targets_seen, recipe.target) ||
               contains(record.sources_seen, recipe.target);
    }

    void CulturalModel::absorb(Record &record, const Recipe &recipe) const
    {
        insert_once(record.targets_seen, recipe.target);
        insert_once(record.sources_seen, recipe.source);
    }

    void CulturalModel::reset(Record &record) const
    {
        record.targets_seen.clear();
        record.sources_seen.clear();
    }

    void CulturalModel::execute(const Recipe &recipe)
    {
        const std::uint32_t nf = params_.features;
        const std::uint8_t *src = traits_.data() + std::size_t{recipe.source} * nf;
        std::uint8_t *tgt = traits_.data() + std::size_t{recipe.target} * nf;

        std::uint32_t same = 0;
        for (std::uint32_t f = 0; f < nf; ++f)
            same += src[f] == tgt[f];

        const double o = static_cast<double>(same) / nf;
        if (same == nf || o < params_.omega_gate)
            return;

        SplitMix64 rng(recipe.child_seed);
        if (rng.uniform() >= o)
            return;

        std::uniform_int_distribution<std::uint32_t> pick(0, nf - same - 1);
        std::uint32_t k = pick(rng);
        for (std::uint32_t f = 0; f < nf; ++f)
        {
            if (src[f] != tgt[f] && k-- == 0)
            {
                tgt[f] = src[f];
                return;
            }
        }
    }

    std::uint64_t CulturalModel::digest() const
    {
        Fnv1a64 h;
        h.update_u64(params_.agents);
        h.update_u64(params_.features);
        h.update(std::span<const std::uint8_t>(traits_));
        return h.value();
    }

    std::span<const std::uint8_t> CulturalModel::row(std::uint32_t agent) const
    {
        if (agent >= params_.agents)
            throw std::out_of_range("cultural: agent id " + std::to_string(agent) + " out of range");
        return std::span<const std::uint8_t>(traits_).subspan(std::size_t{agent} * params_.features,
                                                              params_.features);
    }

    double CulturalModel::overlap(std::uint32_t a, std::uint32_t b) const
    {
        const auto ra = row(a);
        const auto rb = row(b);
        std::uint32_t same = 0;
        for (std::size_t f = 0; f < ra.size(); ++f)
            same += ra[f] == rb[f];
        return static_cast<double>(same) / params_.features;
    }
}
