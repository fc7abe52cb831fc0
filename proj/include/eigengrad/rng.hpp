#pragma once

#include <array>
#include <cstdint>

namespace eigengrad {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
///
/// A stream is addressed by (seed, stream_id); draws within a stream are
/// addressed by a 64-bit block counter. Monte-Carlo code assigns one stream
/// per path, so results are a pure function of (seed, n_paths, dt) and are
/// independent of how paths are chunked across threads.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream_id)),
          stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

    /// Raw 10-round block function (exposed for known-answer tests).
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);

    std::uint32_t next_u32() {
        if (idx_ == 4) refill();
        return buf_[idx_++];
    }

    /// Uniform on (0,1): (u32 + 0.5) / 2^32, never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace eigengrad
