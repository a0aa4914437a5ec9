#pragma once

// Dense univariate polynomials with coefficients in a FieldSpec field, plus
// deterministic root finding (equal-degree splitting seeded from the input).

#include <algorithm>
#include <vector>

#include "evasive/field.hpp"
#include "evasive/rng.hpp"

namespace evasive {

struct FPoly {
    const FieldSpec* f = nullptr;
    std::vector<Fe> c;  // ascending; normalized form has no trailing zeros

    static FPoly zero(const FieldSpec* f) { return FPoly{f, {}}; }
    static FPoly from(const FieldSpec* f, std::vector<Fe> coeffs) {
        FPoly r{f, std::move(coeffs)};
        r.normalize();
        return r;
    }
    static FPoly x(const FieldSpec* f) { return from(f, {f->zero(), f->one()}); }

    void normalize() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    int degree() const { return int(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Fe coeff(size_t i) const { return i < c.size() ? c[i] : f->zero(); }

    Fe eval(const Fe& x) const {
        Fe acc = f->zero();
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }
};

inline FPoly poly_add(const FPoly& a, const FPoly& b) {
    FPoly r{a.f, {}};
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (size_t i = 0; i < n; ++i) r.c.push_back(a.coeff(i) + b.coeff(i));
    r.normalize();
    return r;
}

inline FPoly poly_sub(const FPoly& a, const FPoly& b) {
    FPoly r{a.f, {}};
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (size_t i = 0; i < n; ++i) r.c.push_back(a.coeff(i) - b.coeff(i));
    r.normalize();
    return r;
}

inline FPoly poly_mul(const FPoly& a, const FPoly& b) {
    if (a.is_zero() || b.is_zero()) return FPoly::zero(a.f);
    FPoly r{a.f, std::vector<Fe>(a.c.size() + b.c.size() - 1, a.f->zero())};
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    r.normalize();
    return r;
}

inline std::pair<FPoly, FPoly> poly_divmod(FPoly a, const FPoly& b) {
    require(!b.is_zero(), Err::DivisionByZero, "polynomial division by zero");
    a.normalize();
    FPoly q{a.f, {}};
    if (a.degree() >= b.degree()) q.c.assign(size_t(a.degree() - b.degree() + 1), a.f->zero());
    Fe linv = b.c.back().inv();
    while (a.degree() >= b.degree()) {
        Fe coef = a.c.back() * linv;
        size_t shift = size_t(a.degree() - b.degree());
        q.c[shift] = coef;
        for (size_t j = 0; j < b.c.size(); ++j)
            a.c[j + shift] = a.c[j + shift] - coef * b.c[j];
        a.normalize();
    }
    q.normalize();
    return {q, a};
}

inline FPoly poly_mod(const FPoly& a, const FPoly& b) { return poly_divmod(a, b).second; }

inline FPoly poly_monic(FPoly a) {
    a.normalize();
    if (a.is_zero() || a.c.back().is_one()) return a;
    Fe s = a.c.back().inv();
    for (auto& x : a.c) x = x * s;
    return a;
}

inline FPoly poly_gcd(FPoly a, FPoly b) {
    a.normalize();
    b.normalize();
    while (!b.is_zero()) {
        a = poly_mod(a, b);
        std::swap(a, b);
    }
    return poly_monic(a);
}

inline FPoly poly_mulmod(const FPoly& a, const FPoly& b, const FPoly& f) {
    return poly_mod(poly_mul(a, b), f);
}

inline FPoly poly_powmod(FPoly base, uint64_t e, const FPoly& f) {
    FPoly r = FPoly::from(f.f, {f.f->one()});
    base = poly_mod(base, f);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, f);
        base = poly_mulmod(base, base, f);
        e >>= 1;
    }
    return r;
}

// a(X)^p mod f via coefficient Frobenius and exponent spreading
inline FPoly poly_pth_power_mod(const FPoly& a, const FPoly& f) {
    const FieldSpec* k = a.f;
    if (a.is_zero()) return a;
    FPoly spread{k, std::vector<Fe>(size_t(a.degree()) * k->p + 1, k->zero())};
    for (size_t i = 0; i < a.c.size(); ++i) spread.c[i * k->p] = a.c[i].frob(1);
    spread.normalize();
    return poly_mod(spread, f);
}

// X^(p^steps) mod f
inline FPoly poly_x_frob_power_mod(const FPoly& f, uint32_t steps) {
    FPoly t = poly_mod(FPoly::x(f.f), f);
    for (uint32_t i = 0; i < steps; ++i) t = poly_pth_power_mod(t, f);
    return t;
}

namespace detail {

inline void cz_split(const FPoly& g, Rng& rng, std::vector<Fe>& out);

inline void cz_collect(const FPoly& g, Rng& rng, std::vector<Fe>& out) {
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        out.push_back(-(g.c[0] / g.c[1]));
        return;
    }
    cz_split(g, rng, out);
}

inline void cz_split(const FPoly& g, Rng& rng, std::vector<Fe>& out) {
    const FieldSpec* k = g.f;
    for (;;) {
        Fe delta = k->from_code(rng.below(k->order));
        FPoly h;
        if (k->p == 2) {
            // trace map T(X) = sum (delta X)^(2^i), i < m; constant on each
            // root's F_2-trace class
            FPoly u = poly_mod(FPoly::from(k, {k->zero(), delta}), g);
            FPoly acc = u;
            for (uint32_t i = 1; i < k->m; ++i) {
                u = poly_mulmod(u, u, g);
                acc = poly_add(acc, u);
            }
            h = poly_gcd(acc, g);
        } else {
            // (X + delta)^((q-1)/2) - 1 separates quadratic residues
            FPoly base = FPoly::from(k, {delta, k->one()});
            FPoly t = poly_powmod(base, k->group_order / 2, g);
            t = poly_sub(t, FPoly::from(k, {k->one()}));
            h = poly_gcd(t, g);
        }
        if (h.degree() > 0 && h.degree() < g.degree()) {
            cz_collect(h, rng, out);
            cz_collect(poly_divmod(g, h).first, rng, out);
            return;
        }
    }
}

}  // namespace detail

// Distinct roots of a in its coefficient field, ascending under the canonical
// element order. Deterministic: the splitting randomness is seeded from the
// input polynomial.
inline std::vector<Fe> find_roots(const FPoly& a0) {
    FPoly a = a0;
    a.normalize();
    require(!a.is_zero(), Err::ZeroPolynomial, "find_roots of the zero polynomial");
    const FieldSpec* k = a.f;
    std::vector<Fe> out;
    if (a.degree() == 0) return out;

    uint64_t seed = fnv1a64(&k->p, sizeof(k->p));
    seed = fnv1a64(k->modulus.data(), k->modulus.size(), seed);
    for (const auto& ce : a.c) seed = fe_hash(ce, seed);
    Rng rng(seed);

    a = poly_monic(std::move(a));
    // strip a root at zero
    while (a.degree() >= 1 && a.c[0].is_zero()) {
        if (out.empty()) out.push_back(k->zero());
        a.c.erase(a.c.begin());
    }
    if (a.degree() >= 1) {
        FPoly xq = poly_x_frob_power_mod(a, k->m);  // X^(p^m) mod a
        FPoly g = poly_gcd(poly_sub(xq, FPoly::x(k)), a);
        detail::cz_collect(g, rng, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace evasive
