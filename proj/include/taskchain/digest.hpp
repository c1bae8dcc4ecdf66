#pragma once

#include <cstdint>
#include <span>

namespace taskchain
{
    /// FNV-1a over raw bytes. Stable across runs and platforms with the same
    /// element representation.
    class Fnv1a64
    {
    public:
        template <class T>
        void update(std::span<const T> values) noexcept
        {
            const auto *bytes = reinterpret_cast<const unsigned char *>(values.data());
            for (std::size_t i = 0; i < values.size_bytes(); ++i)
            {
                hash_ ^= bytes[i];
                hash_ *= 0x100000001b3ULL;
            }
        }

        void update_u64(std::uint64_t v) noexcept
        {
            for (int i = 0; i < 8; ++i)
            {
                hash_ ^= (v >> (8 * i)) & 0xffU;
                hash_ *= 0x100000001b3ULL;
            }
        }

        std::uint64_t value() const noexcept { return hash_; }

    private:
        std::uint64_t hash_ = 0xcbf29ce484222325ULL;
    };
}
