#pragma once

#include <array>
#include <cstdint>

namespace hestonmc::rng {

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const auto p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

// philox4x64-10 counter-based generator: 256-bit counter, 128-bit key,
// 256 bits of output per call. Stateless, so any (key, counter) pair can be
// evaluated independently of all others.
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
    constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
    constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
    constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
    constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;
    for (int round = 0;; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        detail::mulhilo64(kMul0, ctr[0], hi0, lo0);
        detail::mulhilo64(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        if (round == 9) break;
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

// Map a 64-bit word to the open interval (0,1); never returns 0 or 1, so the
// result is always a valid argument for the inverse normal CDF. 52 bits keep
// the rounded endpoint strictly below 1.
inline double to_unit_open(std::uint64_t x) {
    return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

// Inverse standard normal CDF (Wichura's AS 241 PPND16 rational fits),
// accurate to ~1e-15 over (0,1).
double normal_icdf(double p);

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Fresh lineage id for the `ordinal`-th offspring of `parent`. Lineage ids
// key the per-particle streams, so offspring must never reuse a live id.
inline std::uint64_t derive_lineage(std::uint64_t parent, std::uint64_t ordinal) {
    return splitmix64(parent ^ splitmix64(ordinal ^ 0xA02BD8F793861CE5ull));
}

// Domain tags keep independent uses of the generator on disjoint counters.
enum : std::uint64_t {
    kDomainEvolve = 1,    // per-particle evolution draws, slot = step
    kDomainResample = 2,  // per-step resampling draws, slot = step
    kDomainGeneric = 3,   // tests and utilities
};

// A deterministic draw stream: (seed, stream id) form the philox key, the
// domain tag and slot pin the counter prefix, and successive draws advance
// the remaining counter word. Cheap to construct; no shared state.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t domain, std::uint64_t slot)
        : key_{seed, stream_id}, ctr_{slot, 0, domain, 0} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = philox4x64(ctr_, key_);
            ++ctr_[1];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    double next_unit() { return to_unit_open(next_u64()); }
    double next_normal() { return normal_icdf(next_unit()); }

    // Unbiased integer in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        const auto wide = static_cast<unsigned __int128>(next_u64()) * bound;
        return static_cast<std::uint64_t>(wide >> 64);
    }

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> ctr_;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace hestonmc::rng
