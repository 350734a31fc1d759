#pragma once

#include <cstdint>

namespace fpp {

// splitmix64: fixed-width, platform-stable mixer. Every random draw in the
// project is derived from explicit 64-bit keys through this function, so a
// result never depends on call order, thread count, or std library internals.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

// Counter-based stream: state advances one splitmix step per draw.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform on [0,1) with 53-bit resolution.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // j-th draw is a fair bit, j = 1..64 per word.
    std::uint64_t next_bits(unsigned count) {
        std::uint64_t w = next_u64();
        return count >= 64 ? w : (w >> (64 - count));
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

// Key for the weight of one lattice edge, identified by its absolute
// location (min endpoint + axis), never by a window-local index. Growing
// the window around a replica therefore preserves all shared weights.
inline std::uint64_t edge_stream_seed(std::uint64_t master_seed, std::uint64_t replica,
                                      const int* min_endpoint, int dim, int axis) {
    std::uint64_t h = mix64(master_seed, 0x66707031ULL);  // domain tag
    h = mix64(h, replica);
    for (int i = 0; i < dim; ++i)
        h = mix64(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(min_endpoint[i])));
    return mix64(h, static_cast<std::uint64_t>(axis));
}

// Derived stream for replica-level auxiliary draws (bootstrap, shuffles).
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream_tag,
                                    std::uint64_t index) {
    return mix64(mix64(master_seed, stream_tag), index);
}

}  // namespace fpp
