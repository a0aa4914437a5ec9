#pragma once

#include <cstdint>

namespace evasive {

// splitmix64: tiny, seedable, and identical on every platform, which matters
// because certificates embed the seed and must reproduce byte-for-byte.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) via rejection; bound = 0 means full range.
    uint64_t below(uint64_t bound) {
        if (bound == 0) return next();
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    uint64_t state() const { return state_; }

  private:
    uint64_t state_;
};

}  // namespace evasive
