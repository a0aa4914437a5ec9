#pragma once

// The named constructions: Gabidulin kernels, subgeometries, the
// Guruswami-Xing common-kernel family, direct sums, random extensions,
// hyperplane lifts, and the two sharp-bound recipes built from them.

#include <optional>
#include <vector>

#include "evasive/ambient.hpp"
#include "evasive/rng.hpp"
#include "evasive/subfield.hpp"
#include "evasive/util.hpp"

namespace evasive {

inline std::pair<uint32_t, uint32_t> prime_power(uint64_t q) {
    auto factors = factorize_u64(q);
    require(factors.size() == 1, Err::ParamError, "q must be a prime power");
    return {uint32_t(factors[0].first), factors[0].second};
}

inline AmbPtr ambient_for_q(uint64_t q, uint32_t n, uint32_t r) {
    auto [p, s] = prime_power(q);
    return AmbientSpace::get(p, s, n, r);
}

// {(x, x^q, ..., x^(q^(r-1))) : x in GF(q^n)}
inline FqSubspace gabidulin(uint64_t q, uint32_t n, uint32_t r) {
    require(n >= r, Err::ParamError, "gabidulin needs n >= r");
    AmbPtr amb = ambient_for_q(q, n, r);
    std::vector<std::vector<Fe>> vecs;
    Fe zeta = amb->Kn->gen();
    for (uint32_t i = 0; i < n; ++i) {
        Fe x = zeta.pow(i);
        std::vector<Fe> v;
        v.reserve(r);
        for (uint32_t c = 0; c < r; ++c) {
            v.push_back(x);
            x = x.frob(amb->s);
        }
        vecs.push_back(std::move(v));
    }
    FqSubspace U = fq_span(amb, vecs);
    require(U.dim() == n, Err::RecipeFailed, "gabidulin dimension");
    return U;
}

// {(x_0, ..., x_(r-1)) : x_i in GF(q^m)}, the subgeometry over GF(q^m)
inline FqSubspace subgeometry(uint64_t q, uint32_t n, uint32_t r, uint32_t m) {
    require(m >= 1 && n % m == 0, Err::ParamError, "subgeometry needs m | n");
    AmbPtr amb = ambient_for_q(q, n, r);
    const auto& map = subfield_map(FieldSpec::get(amb->p, amb->s * m), amb->Kn);
    std::vector<std::vector<Fe>> vecs;
    for (uint32_t i = 0; i < r; ++i)
        for (uint32_t j = 0; j < m; ++j) {
            std::vector<Fe> v(r, amb->Kn->zero());
            v[i] = map.gen_image.pow(j);
            vecs.push_back(std::move(v));
        }
    FqSubspace U = fq_span(amb, vecs);
    require(U.dim() == size_t(m) * r, Err::RecipeFailed, "subgeometry dimension");
    return U;
}

// common kernel of f_i(x) = sum_j gamma_j^i x_j^(q^(r-j)), i = 1..h
inline FqSubspace guruswami(uint64_t q, uint32_t n, uint32_t r, uint32_t h,
                            std::vector<Fe> gammas = {}) {
    require(n >= r, Err::ParamError, "guruswami needs n >= r");
    require(h >= 1 && h < r, Err::ParamError, "guruswami needs 1 <= h < r");
    AmbPtr amb = ambient_for_q(q, n, r);
    if (gammas.empty()) {
        Fe xi = amb->Kn->gen();
        for (uint32_t j = 0; j < r; ++j) gammas.push_back(xi.pow(j));
    }
    require(gammas.size() == r, Err::ParamError, "guruswami needs r gammas");
    for (uint32_t a = 0; a < r; ++a) {
        require(!gammas[a].is_zero() && gammas[a].spec() == amb->Kn.get(), Err::ParamError,
                "gammas must be nonzero elements of GF(q^n)");
        for (uint32_t b = a + 1; b < r; ++b)
            require(!(gammas[a] == gammas[b]), Err::ParamError, "gammas must be distinct");
    }
    // constraint matrix over GF(q): rows = h Kn-valued forms flattened,
    // columns = flat basis vectors of V
    FlatMat A(amb->Fq, size_t(h) * amb->n, amb->flat_dim);
    std::vector<uint8_t> unit(amb->n), img(amb->n);
    for (uint32_t j = 0; j < r; ++j) {
        for (uint32_t b = 0; b < amb->n; ++b) {
            std::fill(unit.begin(), unit.end(), 0);
            unit[b] = 1;
            Fe x = amb->unflatten_elem(unit.data());
            Fe xq = x.frob(amb->s * (r - 1 - j));  // x^(q^(r-(j+1)))
            Fe g = amb->Kn->one();
            for (uint32_t i = 1; i <= h; ++i) {
                g = g * gammas[j];
                amb->flatten_elem(g * xq, img.data());
                for (uint32_t c = 0; c < amb->n; ++c)
                    A.at(size_t(i - 1) * amb->n + c, size_t(j) * amb->n + b) = img[c];
            }
        }
    }
    FlatMat K = flat_kernel(A);
    FqSubspace U(amb, std::move(K));
    require(U.dim() == size_t(n) * (r - h), Err::RecipeFailed, "guruswami dimension");
    return U;
}

inline FqSubspace direct_sum(const FqSubspace& U1, const FqSubspace& U2) {
    const AmbPtr& a1 = U1.amb();
    const AmbPtr& a2 = U2.amb();
    require(a1->p == a2->p && a1->s == a2->s && a1->n == a2->n, Err::AmbientMismatch,
            "direct_sum needs matching q and n");
    AmbPtr amb = AmbientSpace::get(a1->p, a1->s, a1->n, a1->r + a2->r);
    size_t off = size_t(a1->r) * a1->n;
    FlatMat rows(amb->Fq, U1.dim() + U2.dim(), amb->flat_dim);
    for (size_t i = 0; i < U1.dim(); ++i)
        std::copy(U1.flat().row_ptr(i), U1.flat().row_ptr(i) + a1->flat_dim, rows.row_ptr(i));
    for (size_t i = 0; i < U2.dim(); ++i)
        std::copy(U2.flat().row_ptr(i), U2.flat().row_ptr(i) + a2->flat_dim,
                  rows.row_ptr(U1.dim() + i) + off);
    FqSubspace U = fq_span_flat(amb, std::move(rows));
    require(U.dim() == U1.dim() + U2.dim(), Err::RecipeFailed, "direct_sum dimension");
    return U;
}

// U plus s independent pseudo-random vectors outside the running span
inline FqSubspace extend_random(const FqSubspace& U, uint32_t s, uint64_t seed) {
    const AmbPtr& amb = U.amb();
    require(U.dim() + s <= amb->flat_dim, Err::ParamError, "extend_random: not enough room");
    if (s == 0) return U;
    Rng rng(seed);
    Eliminator elim;
    elim.set_base(U.flat());
    FlatMat rows(amb->Fq, 0, amb->flat_dim);
    for (size_t i = 0; i < U.dim(); ++i) rows.append_row(U.flat().row_ptr(i));
    std::vector<uint8_t> cand(amb->flat_dim), scratch(amb->flat_dim);
    uint32_t got = 0;
    while (got < s) {
        for (auto& c : cand) c = uint8_t(rng.below(amb->q));
        std::copy(cand.begin(), cand.end(), scratch.begin());
        if (!elim.add_row(scratch.data())) continue;
        rows.append_row(cand.data());
        ++got;
    }
    FqSubspace out = fq_span_flat(amb, std::move(rows));
    require(out.dim() == U.dim() + s, Err::RecipeFailed, "extend_random dimension");
    return out;
}

// W in V(r,q^n) lifted to V(r+1,q^n) plus an s-dimensional piece of the new
// coordinate axis; if the evasiveness defect k of W is supplied, the
// proposition's s >= dim W - k requirement is enforced
inline FqSubspace hyperplane_lift(const FqSubspace& W, uint32_t s,
                                  std::optional<uint32_t> k = std::nullopt) {
    const AmbPtr& old_amb = W.amb();
    require(s <= old_amb->n, Err::ParamError, "hyperplane_lift needs s <= n");
    if (k) require(W.dim() <= size_t(*k) + s, Err::ParamError,
                   "hyperplane_lift needs s >= dim W - k");
    AmbPtr amb = AmbientSpace::get(old_amb->p, old_amb->s, old_amb->n, old_amb->r + 1);
    std::vector<std::vector<Fe>> vecs;
    for (size_t i = 0; i < W.dim(); ++i) {
        std::vector<Fe> v = W.basis_vector(i);
        v.push_back(amb->Kn->zero());
        vecs.push_back(std::move(v));
    }
    Fe zeta = amb->Kn->gen();
    for (uint32_t j = 0; j < s; ++j) {
        std::vector<Fe> v(amb->r, amb->Kn->zero());
        v[amb->r - 1] = zeta.pow(j);
        vecs.push_back(std::move(v));
    }
    FqSubspace U = fq_span(amb, vecs);
    require(U.dim() == W.dim() + s, Err::RecipeFailed, "hyperplane_lift dimension");
    return U;
}

// gabidulin plus a (k-r+1)-dimensional piece of the last coordinate axis:
// maximum (r-1,k)-evasive of dimension n+k-r+1
inline FqSubspace b1(uint64_t q, uint32_t n, uint32_t r, uint32_t k) {
    require(r >= 2, Err::ParamError, "b1 needs r >= 2");
    require(k + 1 >= r, Err::ParamError, "b1 needs k >= r-1");
    require((uint64_t(k) - r + 2) * (r - 1) < n, Err::ParamError,
            "b1 needs (k-r+2)(r-1) < n");
    FqSubspace G = gabidulin(q, n, r);
    const AmbPtr& amb = G.amb();
    std::vector<std::vector<Fe>> vecs;
    for (size_t i = 0; i < G.dim(); ++i) vecs.push_back(G.basis_vector(i));
    Fe zeta = amb->Kn->gen();
    for (uint32_t j = 0; j + r <= k; ++j) {
        std::vector<Fe> v(r, amb->Kn->zero());
        v[r - 1] = zeta.pow(j);
        vecs.push_back(std::move(v));
    }
    FqSubspace U = fq_span(amb, vecs);
    require(U.dim() == size_t(n) + k - r + 1, Err::RecipeFailed, "b1 dimension");
    return U;
}

// iterated lift chain from a scattered Gabidulin, then a random extension:
// (r-1,k)-evasive of dimension n+k-1
inline FqSubspace ex00(uint64_t q, uint32_t n, uint32_t r, uint32_t k, uint64_t seed = 0) {
    require(r >= 2, Err::ParamError, "ex00 needs r >= 2");
    require(n >= 2, Err::ParamError, "ex00 needs n >= 2");
    require(uint64_t(k) >= uint64_t(r - 2) * (n - 1) + 1, Err::ParamError,
            "ex00 needs k >= (r-2)(n-1)+1");
    require(uint64_t(k) <= uint64_t(r - 1) * n, Err::ParamError, "ex00 needs k <= (r-1)n");
    if (r == 2) {
        if (k == n) return whole_space(ambient_for_q(q, n, 2));
        return b1(q, n, 2, k);
    }
    FqSubspace U = gabidulin(q, n, 2);
    uint32_t cur_k = 1;
    for (uint32_t j = 0; j < r - 2; ++j) {
        U = hyperplane_lift(U, n - 1, cur_k);
        cur_k += n - 1;
    }
    U = extend_random(U, k - cur_k, seed);
    require(U.dim() == size_t(n) + k - 1, Err::RecipeFailed, "ex00 dimension");
    return U;
}

}  // namespace evasive
