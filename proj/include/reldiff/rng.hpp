#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams (Philox 4x32-10, Salmon et al. 2011).
// A stream is addressed by (seed, stream id); distinct ids give statistically
// independent sequences, so parallel workers can draw without coordination.

namespace reldiff {

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() {
        if (have_ == 0) {
            block();
            have_ = 4;
        }
        return buf_[--have_];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (second value cached)
    double normal() {
        if (have_gauss_) {
            have_gauss_ = false;
            return gauss_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586477 * u2;
        gauss_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

  private:
    static void single_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t c1 = ctr[1], c3 = ctr[3];
        ctr[0] = hi1 ^ c1 ^ key[0];
        ctr[1] = lo1;
        ctr[2] = hi0 ^ c3 ^ key[1];
        ctr[3] = lo0;
    }

    void block() {
        std::uint32_t ctr[4] = {static_cast<std::uint32_t>(counter_),
                                static_cast<std::uint32_t>(counter_ >> 32), stream_lo_,
                                stream_hi_};
        std::uint32_t key[2] = {key0_, key1_};
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int r = 0; r < 10; ++r) {
            single_round(ctr, key);
            key[0] += W0;
            key[1] += W1;
        }
        for (int i = 0; i < 4; ++i) buf_[i] = ctr[i];
        ++counter_;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t counter_ = 0;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int have_ = 0;
    bool have_gauss_ = false;
    double gauss_ = 0.0;
};

// stream-id layout used across the project: high bits tag the purpose so
// streams are never reused between different samplers under one master seed
enum class StreamDomain : std::uint64_t {
    FieldModes = 1,
    Trajectory = 2,
    SdeWalker = 3,
    TestProbe = 4,
};

inline std::uint64_t stream_id(StreamDomain domain, std::uint64_t index) {
    return (static_cast<std::uint64_t>(domain) << 56) | (index & 0x00FFFFFFFFFFFFFFull);
}

}  // namespace reldiff
