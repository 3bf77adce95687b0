// Deterministic counter-based random number generation.
//
// Everything random in this library is a pure function of (key, counter):
// the quenched field is re-computable per vertex, trajectories are replayable
// from their seed, and parallel workers never share generator state.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace remdyn {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function (Steele, Lea, Flood 2014). Full avalanche on
// 64-bit inputs; the sequence mix64(key + k*kGolden) is the SplitMix64 stream.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}
}  // namespace detail

// Stateless draw: the `ctr`-th output of the stream identified by `key`.
inline constexpr std::uint64_t keyed_u64(std::uint64_t key, std::uint64_t ctr) {
    return detail::mix64(key + (ctr + 1) * detail::kGolden);
}

// Key derivation: fold a tag and indices into a fresh stream key.
inline constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b) {
    return detail::mix64(a ^ detail::mix64(b + detail::kGolden));
}
inline constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash_key(hash_key(a, b), c);
}
inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag bytes
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}
inline std::uint64_t hash_key(std::uint64_t a, std::string_view tag) {
    return hash_key(a, hash_tag(tag));
}
inline std::uint64_t hash_key(std::uint64_t a, std::string_view tag, std::uint64_t c) {
    return hash_key(hash_key(a, hash_tag(tag)), c);
}

// Map a 64-bit word to the open interval (0,1); 52-bit resolution, never 0 or 1,
// so inverse-CDF transforms (log, normal quantile) are always finite. The
// endpoints (k + 0.5) * 2^-52 for k = 0 and k = 2^52 - 1 are exactly
// representable (2^-53 and 1 - 2^-53); one more mantissa bit would round the
// top value up to 1.0.
inline constexpr double u01_open(std::uint64_t w) {
    return (static_cast<double>(w >> 12) + 0.5) * 0x1p-52;
}

// Sequential counter stream with convenience draws. One instance per
// trajectory (or per sampling task); copying is cheap and intentional.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return keyed_u64(key_, ctr_++); }
    double next_u01() { return u01_open(next_u64()); }
    // Exp(1) by inverse CDF; strictly positive because u01 is open.
    double next_exp() { return -std::log(next_u01()); }
    // Uniform index in [0, m); 53-bit uniform scaling (bias < 2^-52, and
    // identical across implementations, which is what the replay tests need).
    std::uint32_t next_index(std::uint32_t m) {
        auto i = static_cast<std::uint32_t>(next_u01() * m);
        return i < m ? i : m - 1;
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return ctr_; }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace remdyn
