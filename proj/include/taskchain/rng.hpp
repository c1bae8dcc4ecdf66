#pragma once

#include <cstdint>
#include <limits>

namespace taskchain
{
    /// SplitMix64 finalizer. Bijective 64-bit mixing.
    constexpr std::uint64_t mix64(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Counter-based derivation of an independent stream seed from a parent
    /// seed and a counter (task id, stream tag). Depends on nothing but its
    /// arguments, so the result does not depend on the order tasks run in.
    constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) noexcept
    {
        return mix64(parent ^ mix64(counter + 0x9e3779b97f4a7c15ULL));
    }

    // Stream tags for derive_seed; task ids use the low range, tags sit at the top.
    inline constexpr std::uint64_t kInitStreamTag = ~std::uint64_t{0};
    inline constexpr std::uint64_t kMasterStreamTag = ~std::uint64_t{0} - 1;

    /// Small SplitMix64 generator used for per-task execution streams.
    /// Satisfies UniformRandomBitGenerator.
    class SplitMix64
    {
    public:
        using result_type = std::uint64_t;

        explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

        static constexpr result_type min() noexcept { return 0; }
        static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

        constexpr result_type operator()() noexcept
        {
            state_ += 0x9e3779b97f4a7c15ULL;
            return mix64(state_);
        }

        /// Uniform double in [0, 1) from the top 53 bits.
        constexpr double uniform() noexcept
        {
            return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
        }

    private:
        std::uint64_t state_;
    };
}
