#pragma once

#include <array>
#include <cstdint>

namespace numkit {

/// Deterministic 64-bit generator: xoshiro256++ seeded through splitmix64.
///
/// The stream is fully specified so other implementations can match it
/// bit for bit:
///   - the four state words are the first four outputs of splitmix64(seed);
///   - next_u64() is the xoshiro256++ update (rotl(s0+s3, 23) + s0);
///   - next_double() is (next_u64() >> 11) * 2^-53, uniform on [0, 1);
///   - next_below(n) draws next_u64() masked to the smallest covering power
///     of two and rejects values >= n.
///
/// No hidden global state: identical seeds give identical streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    std::uint64_t next_below(std::uint64_t bound);  // uniform on [0, bound)
    double next_double();                           // uniform on [0, 1)
    double uniform(double lo, double hi);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

}  // namespace numkit
