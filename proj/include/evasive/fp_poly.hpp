#pragma once

// Dense univariate polynomials over a prime field GF(p), coefficients ascending
// in a std::vector<uint8_t>. Only what modulus validation and search need; the
// general polynomial type over an arbitrary FieldSpec lives in poly.hpp.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "evasive/error.hpp"
#include "evasive/util.hpp"

namespace evasive::fp {

using Poly = std::vector<uint8_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return int(a.size()) - 1; }

inline Poly mul(const Poly& a, const Poly& b, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] += uint32_t(a[i]) * b[j];
    }
    Poly r(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r[i] = uint8_t(acc[i] % p);
    trim(r);
    return r;
}

// a mod f, f monic
inline Poly mod(Poly a, const Poly& f, uint32_t p) {
    trim(a);
    int df = degree(f);
    require(df >= 0 && f.back() == 1, Err::ParamError, "fp::mod: monic modulus");
    while (degree(a) >= df) {
        uint32_t c = a.back();
        int shift = degree(a) - df;
        if (c) {
            for (int j = 0; j < df; ++j)
                a[size_t(j + shift)] = uint8_t((a[size_t(j + shift)] + c * (p - f[size_t(j)])) % p);
        }
        a.pop_back();
        trim(a);
    }
    return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& f, uint32_t p) {
    return mod(mul(a, b, p), f, p);
}

inline Poly powmod(Poly base, uint64_t e, const Poly& f, uint32_t p) {
    Poly r{1};
    base = mod(std::move(base), f, p);
    while (e) {
        if (e & 1) r = mulmod(r, base, f, p);
        base = mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, uint32_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint32_t av = i < a.size() ? a[i] : 0;
        uint32_t bv = i < b.size() ? b[i] : 0;
        r[i] = uint8_t((av + p - bv) % p);
    }
    trim(r);
    return r;
}

inline uint32_t inv_scalar(uint32_t v, uint32_t p) {
    uint32_t r = 1, b = v % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, uint32_t p) {
    require(!b.empty(), Err::DivisionByZero, "fp::divmod by zero");
    Poly q(a.size(), 0);
    uint32_t linv = inv_scalar(b.back(), p);
    while (degree(a) >= degree(b)) {
        uint32_t c = a.back() * linv % p;
        int shift = degree(a) - degree(b);
        q[size_t(shift)] = uint8_t(c);
        for (int j = 0; j <= degree(b); ++j)
            a[size_t(j + shift)] = uint8_t((a[size_t(j + shift)] + c * (p - b[size_t(j)])) % p);
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline Poly gcd(Poly a, Poly b, uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        a = divmod(std::move(a), b, p).second;
        std::swap(a, b);
    }
    if (!a.empty() && a.back() != 1) {
        uint32_t s = inv_scalar(a.back(), p);
        for (auto& c : a) c = uint8_t(c * s % p);
    }
    return a;
}

// u with u*a == 1 (mod f); requires gcd(a, f) = 1
inline Poly invmod(const Poly& a0, const Poly& f, uint32_t p) {
    Poly r0 = f, r1 = mod(a0, f, p);
    require(!r1.empty(), Err::DivisionByZero, "invmod of zero");
    Poly u0, u1{1};
    while (!r1.empty()) {
        auto [q, rem] = divmod(r0, r1, p);
        r0 = r1;
        r1 = rem;
        Poly nu = sub(u0, mul(q, u1, p), p);
        u0 = u1;
        u1 = nu;
    }
    require(degree(r0) == 0, Err::DivisionByZero, "not invertible mod f");
    uint32_t s = inv_scalar(r0[0], p);
    for (auto& c : u0) c = uint8_t(c * s % p);
    trim(u0);
    return mod(u0, f, p);
}

// Rabin's criterion: f (monic, degree m) is irreducible over GF(p) iff
// x^(p^m) == x mod f and gcd(x^(p^(m/l)) - x, f) == 1 for every prime l | m.
inline bool is_irreducible(const Poly& f, uint32_t p) {
    int m = degree(f);
    if (m <= 0) return false;
    if (m == 1) return true;
    require(f.back() == 1, Err::ParamError, "is_irreducible: monic input");

    auto factors = factorize_u64(uint64_t(m));
    Poly x{0, 1};
    Poly t = mod(x, f, p);
    std::vector<Poly> checkpoints;  // x^(p^(m/l)) for each prime l, in step order
    std::vector<int> steps;
    for (auto& [l, e] : factors) steps.push_back(m / int(l));
    std::sort(steps.begin(), steps.end());
    size_t next = 0;
    for (int i = 1; i <= m; ++i) {
        t = powmod(t, p, f, p);
        while (next < steps.size() && steps[next] == i) {
            checkpoints.push_back(t);
            ++next;
        }
    }
    if (t != mod(x, f, p)) return false;
    for (const auto& cp : checkpoints) {
        Poly d = sub(cp, x, p);
        if (degree(gcd(d, f, p)) != 0) return false;
    }
    return true;
}

// First monic irreducible of degree m over GF(p), coefficient vectors
// (c_0,...,c_{m-1}) ordered as ascending base-p integers c_0 + c_1 p + ...
inline Poly lex_first_irreducible(uint32_t p, uint32_t m) {
    require(m >= 1, Err::ParamError, "degree >= 1");
    uint64_t span = ipow_u64(p, m);
    for (uint64_t code = 1; code < span; ++code) {
        if (code % p == 0) continue;  // c_0 = 0 gives a factor of x
        Poly f(m + 1, 0);
        uint64_t v = code;
        for (uint32_t i = 0; i < m; ++i) {
            f[i] = uint8_t(v % p);
            v /= p;
        }
        f[m] = 1;
        if (is_irreducible(f, p)) return f;
    }
    fail(Err::ParamError, "no irreducible found (unreachable)");
}

}  // namespace evasive::fp
