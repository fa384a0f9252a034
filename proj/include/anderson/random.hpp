#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace anderson {

// SplitMix64 finalizer. Bijective on 64-bit words, good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t word) noexcept
{
    return mix64(key ^ mix64(word));
}

inline std::uint64_t combine(std::uint64_t key, std::span<const int> words) noexcept
{
    std::uint64_t h = combine(key, static_cast<std::uint64_t>(words.size()));
    for (int w : words)
        h = combine(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(w)));
    return h;
}

// FNV-1a, used to turn experiment-kind names into stream tags.
constexpr std::uint64_t tag_of(std::string_view name) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Per-trial stream key: master seed + kind tag + trial index.
constexpr std::uint64_t trial_key(std::uint64_t master, std::uint64_t tag, std::uint64_t trial) noexcept
{
    return combine(combine(mix64(master), tag), trial);
}

// Top 53 bits as a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based stream: the n-th draw is a pure function of (key, n).
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) { }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept { return combine(key_, counter_++); }
    constexpr double uniform() noexcept { return to_unit((*this)()); }
    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace anderson
