#pragma once

// Maximum scattered F_q-subspaces of dimension 7 in V(3, q^5): the direction
// fiber check, the determinant sweep over admissible d, reproduction of the
// known lambda table, exponent search, and random sampling of 7-dimensional
// subspaces.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "evasive/ambient.hpp"
#include "evasive/error.hpp"
#include "evasive/evasive.hpp"
#include "evasive/field.hpp"
#include "evasive/linalg.hpp"
#include "evasive/qpoly.hpp"
#include "evasive/rng.hpp"
#include "evasive/smallfield.hpp"
#include "evasive/subfield.hpp"
#include "evasive/util.hpp"

namespace evasive {

// Fibers of the direction map x -> x^(q^n - 1) restricted to U \ {0}.  Each
// fiber is (U intersect <y>_(q^n)) \ {0}, so its size is q^j - 1; U is
// scattered exactly when every j equals 1.
struct FiberReport {
    uint32_t max_fiber_dim = 0;
    std::vector<Fe> offending_d;  // d = y^(q^n - 1) for every fiber with j >= 2
    uint64_t points = 0;
    uint64_t fibers = 0;
};

inline FiberReport fiber_report(const FqSubspace& U, uint64_t budget = 0) {
    const AmbPtr& amb = U.amb();
    const uint32_t r = amb->r;
    const uint64_t q = amb->q;
    const size_t t = U.dim();
    require(t >= 1, Err::ParamError, "fiber_report needs a nonzero subspace");
    require(r <= 4, Err::ParamError, "fiber_report supports r <= 4");
    if (budget == 0) budget = default_budget();
    uint64_t total = ipow_capped(q, static_cast<uint32_t>(t), budget);
    require(total <= budget, Err::BudgetExceeded,
            "fiber_report: q^dim exceeds budget");
    --total;
    require(amb->Kn->has_tables(), Err::ParamError,
            "fiber_report needs log tables for GF(q^n)");

    std::vector<std::vector<Fe>> rep(t);
    for (size_t k = 0; k < t; ++k) rep[k] = U.basis_vector(k);
    // delta[k][c][i]: change of coordinate i when digit k steps c -> c+1 mod q
    std::vector<std::vector<std::vector<Fe>>> delta(t);
    for (size_t k = 0; k < t; ++k) {
        delta[k].resize(q);
        for (uint64_t c = 0; c < q; ++c) {
            Fe scale = amb->fq_embed(uint8_t((c + 1) % q)) - amb->fq_embed(uint8_t(c));
            delta[k][c].reserve(r);
            for (uint32_t i = 0; i < r; ++i) delta[k][c].push_back(scale * rep[k][i]);
        }
    }

    std::vector<Fe> cur(r, amb->Kn->zero());
    std::vector<uint8_t> digits(t, 0);
    std::unordered_map<uint64_t, uint32_t> counts;
    counts.reserve(size_t(total / std::max<uint64_t>(q - 1, 1)) + 8);
    for (uint64_t step = 0; step < total; ++step) {
        size_t k = 0;
        for (;;) {
            for (uint32_t i = 0; i < r; ++i) cur[i] = cur[i] + delta[k][digits[k]][i];
            if (++digits[k] < q) break;
            digits[k] = 0;
            ++k;
        }
        uint32_t i0 = 0;
        while (cur[i0].is_zero()) ++i0;
        Fe u = cur[i0].inv();
        uint64_t key = uint64_t(i0) << 48;
        for (uint32_t i = i0 + 1; i < r; ++i)
            key |= (cur[i] * u).code() << (16 * (r - 1 - i));
        ++counts[key];
    }

    FiberReport rep_out;
    rep_out.points = total;
    rep_out.fibers = counts.size();
    std::vector<uint64_t> offending_keys;
    for (const auto& [key, cnt] : counts) {
        uint64_t sz = uint64_t(cnt) + 1;
        uint32_t j = 0;
        while (sz % q == 0) sz /= q, ++j;
        require(sz == 1 && j >= 1, Err::NotSubspace,
                "fiber size is not a power of q");
        if (j > rep_out.max_fiber_dim) rep_out.max_fiber_dim = j;
        if (j >= 2) offending_keys.push_back(key);
    }
    if (!offending_keys.empty()) {
        const auto& tw = amb->tower();
        for (uint64_t key : offending_keys) {
            uint32_t i0 = uint32_t(key >> 48);
            std::vector<Fe> v(r, amb->Kn->zero());
            v[i0] = amb->Kn->one();
            for (uint32_t i = i0 + 1; i < r; ++i)
                v[i] = amb->Kn->from_code((key >> (16 * (r - 1 - i))) & 0xFFFF);
            rep_out.offending_d.push_back(tw.dir_key(tw.to_field(v)));
        }
        std::sort(rep_out.offending_d.begin(), rep_out.offending_d.end(),
                  [](const Fe& x, const Fe& y) { return x.code() < y.code(); });
    }
    return rep_out;
}

// Field-model entry point for V(3, q^5).  `elems` may be an F_q-basis or the
// full point set of the subspace (zero included); sets are spot-checked for
// closure before being spanned.
inline FiberReport fiber_check(const std::vector<Fe>& elems, uint32_t p,
                               uint32_t s, uint64_t budget = 0) {
    require(!elems.empty(), Err::ParamError, "fiber_check: empty input");
    AmbPtr amb = AmbientSpace::get(p, s, 5, 3);
    bool has_zero = false;
    for (const Fe& e : elems)
        if (e.is_zero()) has_zero = true;
    FqSubspace U = from_field_model(amb, elems);
    if (has_zero) {
        uint64_t q = amb->q, want = 1;
        for (size_t i = 0; i < U.dim(); ++i) want *= q;
        require(elems.size() == want, Err::NotSubspace,
                "fiber_check: set size is not q^dim");
        std::unordered_set<uint64_t> codes;
        codes.reserve(elems.size() * 2);
        for (const Fe& e : elems) codes.insert(e.code());
        require(codes.size() == elems.size(), Err::NotSubspace,
                "fiber_check: repeated elements");
        Rng rng(0x5ca77e7edULL);
        for (int i = 0; i < 64; ++i) {
            const Fe& x = elems[rng.below(elems.size())];
            const Fe& y = elems[rng.below(elems.size())];
            require(codes.count((x + y).code()), Err::NotSubspace,
                    "fiber_check: set not closed under addition");
        }
    }
    return fiber_report(U, budget);
}

// Sweep over all admissible d = g^(j(q^5 - 1)).  d is bad exactly when both
// subresultant determinants vanish; U = ker P is scattered iff no bad d
// exists.  det M2 is evaluated through its monomial expansion with the six
// powers d^(q^j) maintained incrementally; the 12x12 det M1 is only computed
// on the rare zeros of det M2.
struct SweepReport {
    bool scattered = true;
    std::vector<Fe> bad_d;
    uint64_t examined = 0;
    size_t formula_terms = 0;
};

inline SweepReport d_sweep(const QPoly& P, uint32_t jobs = 1,
                           uint64_t budget = 0) {
    require(P.alphas.size() == 8 && P.qdeg() == 7, Err::ParamError,
            "d_sweep expects a q-degree-7 polynomial");
    const FieldSpec* f = P.spec;
    const uint32_t s = P.s;
    if (budget == 0) budget = default_budget();
    if (jobs == 0) jobs = 1;
    uint64_t q5 = ipow_capped(P.q(), 5, uint64_t(1) << 62);
    require(q5 <= (uint64_t(1) << 62), Err::ParamError, "q^5 overflow");
    u128 N128 = u128(q5) * q5 + q5 + 1;
    require(N128 <= budget, Err::BudgetExceeded,
            "d_sweep: q^10 + q^5 + 1 exceeds budget");
    const uint64_t N = uint64_t(N128);

    Fe g = f->gen();
    if (!is_primitive(g)) {
        bool found = false;
        for (uint64_t cde = 2; cde < 4096 && !found; ++cde) {
            Fe cand = f->from_code(cde);
            if (!cand.is_zero() && !cand.is_one() && is_primitive(cand)) {
                g = cand;
                found = true;
            }
        }
        require(found, Err::NotPrimitive, "no primitive element found");
    }
    Fe step = g.pow(q5 - 1);
    std::vector<Fe> step_pows;
    step_pows.reserve(6);
    for (uint32_t j = 0; j < 6; ++j) step_pows.push_back(step.frob(s * j));
    auto terms = symbolic_det_m2(P.alphas, s);

    auto run = [&](uint64_t lo, uint64_t hi,
                   std::vector<std::pair<uint64_t, Fe>>& bad) {
        if (lo >= hi) return;
        Fe d = g.pow(uint64_t((u128(q5 - 1) * lo) % f->group_order));
        std::vector<Fe> D;
        D.reserve(6);
        for (uint32_t j = 0; j < 6; ++j) D.push_back(d.frob(s * j));
        for (uint64_t j = lo; j < hi; ++j) {
            Fe v2 = eval_det_m2(terms, D, f);
            if (v2.is_zero()) {
                Mat M1 = subres_matrices(P.alphas, D[0], s).first;
                if (det(M1).is_zero()) bad.emplace_back(j, D[0]);
            }
            for (uint32_t jj = 0; jj < 6; ++jj) D[jj] = D[jj] * step_pows[jj];
        }
    };

    std::vector<std::vector<std::pair<uint64_t, Fe>>> bad(jobs);
    if (jobs == 1 || N < 4 * jobs) {
        run(0, N, bad[0]);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(jobs);
        uint64_t chunk = (N + jobs - 1) / jobs;
        for (uint32_t w = 0; w < jobs; ++w) {
            uint64_t lo = w * chunk, hi = std::min<uint64_t>(N, lo + chunk);
            pool.emplace_back([&, w, lo, hi] {
                try {
                    run(lo, hi, bad[w]);
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    SweepReport out;
    out.examined = N;
    out.formula_terms = terms.size();
    for (auto& shard : bad)
        for (auto& [j, d] : shard) out.bad_d.push_back(d);
    out.scattered = out.bad_d.empty();
    return out;
}

// Known lambda exponents (lambda = xi^e over the fixed degree-15 modulus of
// F_(p^15)) yielding scattered kernels for q = p^s.
struct Table1Entry {
    uint32_t p, s;
    uint64_t lambda_exp;
};

inline const std::vector<Table1Entry>& table1() {
    static const std::vector<Table1Entry> t = {
        {2, 1, 31369},      {2, 2, 14336},      {2, 4, 184},
        {2, 7, 136},        {2, 8, 4102},       {2, 11, 16767},
        {2, 13, 28172},     {2, 14, 11248},     {3, 1, 11227515},
        {3, 2, 10565258},   {3, 4, 5832991},    {3, 7, 12725576},
        {3, 8, 11963627},   {3, 11, 11963627},  {3, 13, 13348604},
        {3, 14, 13348604},  {5, 1, 24079949306ULL},
    };
    return t;
}

inline std::optional<uint64_t> table1_lambda(uint32_t p, uint32_t s) {
    for (const auto& e : table1())
        if (e.p == p && e.s == s) return e.lambda_exp;
    return std::nullopt;
}

struct ScatteredCert {
    uint32_t p = 0, s = 1;
    uint64_t lambda_exp = 0;
    std::string recipe;
    uint32_t kernel_dim = 0;
    uint32_t max_fiber_dim = 0;
    bool scattered = false;
    uint64_t points = 0;
    uint64_t ms = 0;
    std::vector<Fe> basis;  // F_q-basis of ker P in F_(q^15)
};

namespace detail {

// Try to build a scattered kernel from lambda with one of the known pair
// recipes.  Returns the certificate of the first recipe whose kernel has
// F_q-dimension 7 and passes the fiber check.
inline std::optional<ScatteredCert> try_lambda(const AmbPtr& amb,
                                               const Fe& lambda,
                                               uint64_t lambda_exp,
                                               uint64_t budget = 0,
                                               const std::string& only_recipe = {}) {
    const uint32_t p = amb->p, s = amb->s;
    std::vector<std::pair<std::string, std::pair<Fe, Fe>>> recipes;
    recipes.push_back({"square", {lambda.pow(2), lambda.pow(4)}});
    recipes.push_back({"frobenius_q", {lambda.frob(s), lambda.frob(2 * s)}});
    if (s != 1)
        recipes.push_back({"frobenius_p", {lambda.frob(1), lambda.frob(2)}});
    std::optional<ScatteredCert> best;
    for (size_t i = 0; i < recipes.size(); ++i) {
        if (!only_recipe.empty() && recipes[i].first.rfind(only_recipe, 0) != 0) continue;
        bool dup = false;
        for (size_t k = 0; k < i; ++k)
            if (recipes[k].second == recipes[i].second) dup = true;
        if (dup) continue;
        const auto& [name, ab] = recipes[i];
        auto t0 = std::chrono::steady_clock::now();
        try {
            KernelPoly kp = build_P(ab.first, ab.second, lambda);
            std::vector<Fe> basis = qpoly_kernel_basis(kp.P);
            if (basis.size() != 7) continue;
            FqSubspace U = from_field_model(amb, basis);
            if (U.dim() != 7) continue;
            FiberReport fr = fiber_report(U, budget);
            ScatteredCert cert;
            cert.p = p;
            cert.s = s;
            cert.lambda_exp = lambda_exp;
            cert.recipe = name;
            cert.kernel_dim = uint32_t(basis.size());
            cert.max_fiber_dim = fr.max_fiber_dim;
            cert.scattered = fr.max_fiber_dim == 1;
            cert.points = fr.points;
            cert.basis = std::move(basis);
            cert.ms = uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count());
            if (cert.scattered) return cert;
            if (!best) best = std::move(cert);
        } catch (const Error& e) {
            if (e.code() != Err::DependentPair && e.code() != Err::XbarInKernel)
                throw;
        }
    }
    return best;
}

inline AmbPtr ambient35(uint32_t p, uint32_t s) {
    require(15 * s <= 64, Err::MissingTowerConfig,
            "F_(q^15) exceeds the supported field degree");
    return AmbientSpace::get(p, s, 5, 3);
}

inline Fe lambda_from_exp(const AmbPtr& amb, uint64_t e) {
    SpecPtr sub = FieldSpec::preset15(amb->p);
    Fe xi = subfield_map(sub, amb->tower().Krn).gen_image;
    return xi.pow(e);
}

}  // namespace detail

// Rebuild the scattered subspace recorded for (p, s) and re-verify it.
inline ScatteredCert reproduce_table1(uint32_t p, uint32_t s,
                                      uint64_t budget = 0) {
    auto e = table1_lambda(p, s);
    require(e.has_value(), Err::ParamError, "no recorded lambda for (p, s)");
    AmbPtr amb = detail::ambient35(p, s);
    Fe lambda = detail::lambda_from_exp(amb, *e);
    auto cert = detail::try_lambda(amb, lambda, *e, budget);
    require(cert.has_value() && cert->scattered, Err::RecipeFailed,
            "recorded lambda did not produce a scattered kernel");
    return *cert;
}

// Test one specific lambda = xi^e; recipe "auto" (or "") tries the known
// pair recipes in order, "square" or "frobenius" pins one family.  The
// returned certificate may have scattered = false.
inline ScatteredCert scattered35_at(uint32_t p, uint32_t s, uint64_t lambda_exp,
                                    const std::string& recipe = "auto",
                                    uint64_t budget = 0) {
    AmbPtr amb = detail::ambient35(p, s);
    Fe lambda = detail::lambda_from_exp(amb, lambda_exp);
    std::string only = recipe == "auto" ? std::string() : recipe;
    auto cert = detail::try_lambda(amb, lambda, lambda_exp, budget, only);
    require(cert.has_value(), Err::RecipeFailed,
            "no recipe produced a 7-dimensional kernel for this lambda");
    return *cert;
}

// Scan lambda = xi^e for e = start, start+1, ... until a scattered kernel is
// found; at most `budget` candidates are examined.
inline ScatteredCert search35(uint32_t p, uint32_t s, uint64_t start = 1,
                              uint64_t budget = 0, uint32_t jobs = 1,
                              const std::string& recipe = "auto") {
    if (budget == 0) budget = default_budget();
    if (jobs == 0) jobs = 1;
    AmbPtr amb = detail::ambient35(p, s);
    SpecPtr sub = FieldSpec::preset15(p);
    Fe xi = subfield_map(sub, amb->tower().Krn).gen_image;
    const uint64_t chunk = std::max<uint64_t>(jobs, 8);
    for (uint64_t base = 0; base < budget; base += chunk) {
        uint64_t lo = start + base;
        uint64_t n = std::min<uint64_t>(chunk, budget - base);
        std::vector<std::optional<ScatteredCert>> hit(n);
        std::string only = recipe == "auto" ? std::string() : recipe;
        auto eval = [&](uint64_t i) {
            Fe lambda = xi.pow(lo + i);
            auto c = detail::try_lambda(amb, lambda, lo + i, 0, only);
            if (c && c->scattered) hit[i] = std::move(c);
        };
        if (jobs == 1) {
            for (uint64_t i = 0; i < n; ++i) eval(i);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs(jobs);
            std::atomic<uint64_t> next{0};
            for (uint32_t w = 0; w < jobs; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (uint64_t i; (i = next.fetch_add(1)) < n;) eval(i);
                    } catch (...) {
                        errs[w] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errs)
                if (e) std::rethrow_exception(e);
        }
        for (uint64_t i = 0; i < n; ++i)
            if (hit[i]) return *hit[i];
    }
    fail(Err::BudgetExceeded, "search35: no scattered kernel within budget");
}

// Fraction of uniformly random 7-dimensional F_q-subspaces of V(3, q^5) that
// are scattered, with a 95% Wilson interval.
struct ScanReport {
    uint32_t q = 0;
    uint64_t samples = 0;
    uint64_t hits = 0;
    double fraction = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

inline ScanReport random_scan(uint32_t q, uint64_t samples, uint64_t seed,
                              uint32_t jobs = 1) {
    require(q == 2 || q == 3, Err::ParamError, "random_scan supports q in {2, 3}");
    require(samples >= 1, Err::ParamError, "random_scan needs samples >= 1");
    if (jobs == 0) jobs = 1;
    AmbPtr amb = AmbientSpace::get(q, 1, 5, 3);
    const SmallField& Fq = SmallField::get(q, 1);
    const size_t cols = amb->flat_dim;

    auto sample_hit = [&](uint64_t i) {
        Rng rng(seed + 0x9E3779B97F4A7C15ULL * (i + 1));
        for (;;) {
            FlatMat M(&Fq, 7, cols);
            for (size_t r = 0; r < 7; ++r)
                for (size_t c = 0; c < cols; ++c)
                    M.at(r, c) = uint8_t(rng.below(q));
            FqSubspace U = fq_span_flat(amb, std::move(M));
            if (U.dim() != 7) continue;
            return fiber_report(U).max_fiber_dim == 1;
        }
    };

    uint64_t hits = 0;
    if (jobs == 1) {
        for (uint64_t i = 0; i < samples; ++i)
            if (sample_hit(i)) ++hits;
    } else {
        std::vector<std::thread> pool;
        std::vector<uint64_t> part(jobs, 0);
        std::vector<std::exception_ptr> errs(jobs);
        std::atomic<uint64_t> next{0};
        for (uint32_t w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (uint64_t i; (i = next.fetch_add(1)) < samples;)
                        if (sample_hit(i)) ++part[w];
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
        for (uint64_t h : part) hits += h;
    }

    ScanReport rep;
    rep.q = q;
    rep.samples = samples;
    rep.hits = hits;
    double n = double(samples), ph = double(hits) / n, z = 1.959963984540054;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (ph + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    rep.fraction = ph;
    rep.wilson_lo = std::max(0.0, center - half);
    rep.wilson_hi = std::min(1.0, center + half);
    return rep;
}

}  // namespace evasive
