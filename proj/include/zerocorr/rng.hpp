#pragma once

#include <array>
#include <cstdint>

#include "zerocorr/linalg.hpp"

namespace zerocorr {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// Random stream addressed by (seed, index, stream). Two substreams with
/// different addresses never share a counter block, so per-sample streams
/// can be handed out in any order on any thread.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard circular complex Gaussian: re, im i.i.d. N(0, 1/2).
    Complex circular_normal() noexcept;

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace zerocorr
