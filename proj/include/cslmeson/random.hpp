#pragma once

// Counter-based random numbers: Philox4x32-10 with one substream per
// (seed, stream index), plus a fixed Box-Muller normal transform so draws
// are reproducible regardless of how work is split across threads.

#include <array>
#include <cstdint>

namespace cslmeson
{

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Substream `stream` of generator `seed`. Block i uses counter
/// (i_lo, i_hi, stream_lo, stream_hi) and key (seed_lo, seed_hi).
class CounterStream
{
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open_low();
    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();
    /// Standard normal via Box-Muller; pairs come from two consecutive u64.
    double normal();

private:
    void refill();

    PhiloxKey key_{};
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace cslmeson
