#pragma once

// Maximum scattered subspaces for the parameter ranges the toolkit knows how
// to realize, and their ordinary duals.  dim = rn/2 when rn is even; for
// V(3, q^5) the dimension-7 subspaces of the lambda table are used.

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "evasive/ambient.hpp"
#include "evasive/constructions.hpp"
#include "evasive/duality.hpp"
#include "evasive/error.hpp"
#include "evasive/evasive.hpp"
#include "evasive/rng.hpp"
#include "evasive/scattered35.hpp"
#include "evasive/smallfield.hpp"

namespace evasive {

namespace detail {

// Deterministic local search: adjoin random vectors while the span stays
// scattered; when progress stalls, drop a random row and keep going.  Pure
// greedy dead-ends on maximal-but-not-maximum subspaces, the kick escapes
// them.  Restarts with derived seeds until the target dimension is reached.
inline FqSubspace scattered_greedy(const AmbPtr& amb, size_t target,
                                   uint64_t seed, uint32_t restarts) {
    const SmallField& F = SmallField::get(amb->p, amb->s);
    for (uint32_t attempt = 0; attempt < restarts; ++attempt) {
        Rng rng(seed + 0x9E3779B97F4A7C15ULL * attempt);
        FqSubspace U = zero_subspace(amb);
        uint64_t stale = 0;
        for (uint64_t step = 0; step < 200000; ++step) {
            if (U.dim() == target) return U;
            FlatMat rows(&F, U.dim() + 1, amb->flat_dim);
            for (size_t i = 0; i < U.dim(); ++i)
                for (size_t c = 0; c < amb->flat_dim; ++c)
                    rows.at(i, c) = U.flat().at(i, c);
            for (size_t c = 0; c < amb->flat_dim; ++c)
                rows.at(U.dim(), c) = uint8_t(rng.below(amb->q));
            FqSubspace cand = fq_span_flat(amb, std::move(rows));
            if (cand.dim() == U.dim() + 1 && is_scattered(cand)) {
                U = cand;
                stale = 0;
                continue;
            }
            if (++stale >= 64 && U.dim() >= 1) {
                size_t drop = rng.below(U.dim());
                FlatMat keep(&F, U.dim() - 1, amb->flat_dim);
                size_t w = 0;
                for (size_t i = 0; i < U.dim(); ++i) {
                    if (i == drop) continue;
                    for (size_t c = 0; c < amb->flat_dim; ++c)
                        keep.at(w, c) = U.flat().at(i, c);
                    ++w;
                }
                U = fq_span_flat(amb, std::move(keep));
                stale = 0;
            }
        }
    }
    fail(Err::NoKnownScattered, "scattered local search exhausted restarts");
}

}  // namespace detail

// A maximum scattered F_q-subspace of V(r, q^n): dimension rn/2 for rn even,
// dimension 7 for V(3, q^5) with q in the lambda table.
inline FqSubspace scattered_max(uint64_t q, uint32_t n, uint32_t r) {
    require(r >= 2 && n >= 2, Err::ParamError, "scattered_max needs r, n >= 2");
    static std::mutex mtx;
    static std::map<std::tuple<uint64_t, uint32_t, uint32_t>, FqSubspace> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(q, n, r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    FqSubspace U = [&] {
        if (r % 2 == 0) {
            FqSubspace acc = gabidulin(q, n, 2);
            for (uint32_t b = 1; b < r / 2; ++b)
                acc = direct_sum(acc, gabidulin(q, n, 2));
            return acc;
        }
        if (n % 2 == 0) {
            AmbPtr amb = ambient_for_q(q, n, r);
            return detail::scattered_greedy(amb, size_t(r) * n / 2,
                                            0x5ca77e7edULL, 16);
        }
        if (n == 5 && r == 3) {
            auto [p, s] = prime_power(q);
            if (table1_lambda(p, s)) {
                ScatteredCert cert = reproduce_table1(p, s);
                return from_field_model(AmbientSpace::get(p, s, 5, 3), cert.basis);
            }
        }
        fail(Err::NoKnownScattered,
             "no known maximum scattered subspace for these parameters");
    }();
    cache.emplace(key, U);
    return U;
}

// Ordinary dual of a maximum scattered subspace: a (r-1, (r-1)n + 1 - t)-
// evasive subspace of dimension rn - t, where t = dim of the scattered one.
inline FqSubspace from_scattered_dual(uint64_t q, uint32_t n, uint32_t r) {
    return ordinary_dual(scattered_max(q, n, r));
}

}  // namespace evasive
