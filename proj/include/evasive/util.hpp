#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evasive/error.hpp"

namespace evasive {

using u128 = unsigned __int128;
using i128 = __int128;

inline uint64_t ipow_u64(uint64_t base, uint32_t exp) {
    uint64_t r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

// base^exp, or saturate at cap (returns cap+1) without overflowing.
inline u128 ipow_capped(u128 base, uint32_t exp, u128 cap) {
    u128 r = 1;
    while (exp) {
        if (exp & 1) {
            if (base != 0 && r > cap / base) return cap + 1;
            r *= base;
        }
        exp >>= 1;
        if (exp) {
            if (base > cap / base) {
                base = cap + 1;
            } else {
                base *= base;
            }
            if (base > cap && exp) {
                // any further multiply (with exp bit set) would exceed cap; but
                // if remaining exp bits are all zero we never use base again.
                if (r > cap) return cap + 1;
            }
        }
    }
    return r;
}

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

// floor(log_base(v)) for v >= 1
inline uint32_t floor_log(u128 v, uint64_t base) {
    require(v >= 1 && base >= 2, Err::ParamError, "floor_log domain");
    uint32_t k = 0;
    while (v >= base) {
        v /= base;
        ++k;
    }
    return k;
}

// Trial division; complete for any 64-bit input. Factors (prime, multiplicity),
// ascending primes.
inline std::vector<std::pair<uint64_t, uint32_t>> factorize_u64(uint64_t n) {
    require(n >= 1, Err::ParamError, "factorize_u64: n >= 1");
    std::vector<std::pair<uint64_t, uint32_t>> out;
    auto strip = [&](uint64_t d) {
        if (n % d) return;
        uint32_t e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    };
    strip(2);
    strip(3);
    for (uint64_t d = 5; d <= n / d; d += 6) {
        strip(d);
        strip(d + 2);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[size_t(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace evasive
