#pragma once

// Upper bounds on dim_q U for (h,k)_q-evasive subspaces of V(r,q^n): the
// Singleton-like bound, the two hyperplane bounds, the counting bound, the
// k<n bound and its common generalization, a best-bound dispatcher, and the
// case tables for r=3, n <= 5.

#include <optional>
#include <string>
#include <vector>

#include "evasive/error.hpp"
#include "evasive/util.hpp"

namespace evasive {

// |C| <= q^(min(m,n)(max(m,n)-delta+1)) for additive C of min rank delta
struct QPower {
    uint64_t q;
    uint64_t exponent;
};

inline QPower singleton_like(uint32_t m, uint32_t n, uint32_t delta, uint64_t q) {
    uint64_t lo = std::min(m, n), hi = std::max(m, n);
    require(delta >= 1 && delta <= hi, Err::ParamError, "singleton_like: 1 <= delta <= max(m,n)");
    return {q, lo * (hi - delta + 1)};
}

// dim bounds for (r-1,k)-evasive subspaces; each part has its own guard
struct HyperplaneBounds {
    std::optional<uint64_t> b1;  // k < (r-1)n:        dim <= n+k-1
    std::optional<uint64_t> b2;  // k < r-2+n/(r-1):   dim <= n+k-r+1
};

inline HyperplaneBounds bound_hyperplane(uint64_t q, uint32_t n, uint32_t r, uint32_t k) {
    (void)q;
    require(r >= 2, Err::ParamError, "bound_hyperplane: r >= 2");
    require(k + 1 >= r, Err::ParamError, "bound_hyperplane: k >= r-1");
    HyperplaneBounds out;
    if (uint64_t(k) < uint64_t(r - 1) * n) out.b1 = uint64_t(n) + k - 1;
    if (uint64_t(k - r + 2) * (r - 1) < n) out.b2 = uint64_t(n) + k - r + 1;
    return out;
}

// |U| <= (q^k-1)(q^rn-1)/(q^hn-1) + 1, exact
inline u128 bound_counting(uint64_t q, uint32_t n, uint32_t r, uint32_t h, uint32_t k) {
    require(h >= 1 && h <= r && k >= h, Err::ParamError, "bound_counting: 1 <= h <= r, k >= h");
    const u128 cap = ~u128(0) >> 1;
    u128 qk = ipow_capped(q, k, cap);
    u128 qrn = ipow_capped(q, n * r, cap);
    u128 qhn = ipow_capped(q, n * h, cap);
    require(qk <= cap && qrn <= cap && qhn <= cap, Err::ParamError, "bound_counting overflow");
    require(qk - 1 == 0 || qrn - 1 <= cap / (qk - 1), Err::ParamError, "bound_counting overflow");
    return (qk - 1) * (qrn - 1) / (qhn - 1) + 1;
}

// dimension form of the counting bound: |U| is a q-power
inline uint64_t bound_counting_dim(uint64_t q, uint32_t n, uint32_t r, uint32_t h, uint32_t k) {
    return floor_log(bound_counting(q, n, r, h, k), q);
}

// dim_q U <= rn - rnh/(k+1), valid only for k < n
inline uint64_t bound_csmpz(uint64_t q, uint32_t n, uint32_t r, uint32_t h, uint32_t k) {
    (void)q;
    require(h >= 1 && k >= h, Err::ParamError, "bound_csmpz: 1 <= h <= k");
    require(k < n, Err::GuardFailed, "bound_csmpz requires k < n");
    uint64_t rn = uint64_t(r) * n;
    return rn * (k + 1 - h) / (k + 1);  // floor(rn - rnh/(k+1))
}

// d1 <= rn - rn h1/d2 given a d2-dim (h1-1,k2)-evasive subspace of V(h1,q^n)
// (existence is the caller's responsibility) and d2+h1-k2-1 > k1
inline uint64_t bound_general(uint64_t q, uint32_t n, uint32_t r, uint32_t h1, uint32_t k1,
                              uint32_t d2, uint32_t k2) {
    (void)q;
    require(h1 >= 1 && d2 >= h1, Err::ParamError, "bound_general: 1 <= h1 <= d2");
    require(uint64_t(d2) + h1 > uint64_t(k2) + 1 + k1, Err::GuardFailed,
            "bound_general requires d2+h1-k2-1 > k1");
    uint64_t rn = uint64_t(r) * n;
    return rn * (d2 - h1) / d2;  // floor(rn - rn h1/d2)
}

struct BoundEntry {
    std::string name;
    bool guard;        // the bound applies to these parameters
    u128 value;        // dimension bound, or cardinality bound for counting
    bool cardinality;  // value bounds |U| rather than dim_q U
    uint64_t dim_value;  // dimension form (floor log_q for cardinality entries)
};

struct BoundReport {
    uint64_t q;
    uint32_t n, r, h, k;
    std::vector<BoundEntry> entries;
    uint64_t binding;
    std::string binding_name;
};

inline BoundReport bound_report(uint64_t q, uint32_t n, uint32_t r, uint32_t h, uint32_t k) {
    require(q >= 2 && n >= 1 && r >= 1, Err::ParamError, "bound_report parameters");
    require(h >= 1 && h <= r && k >= h && uint64_t(k) <= uint64_t(n) * h, Err::ParamError,
            "bound_report: 1 <= h <= r and h <= k <= nh");
    BoundReport rep{q, n, r, h, k, {}, 0, ""};
    uint64_t rn = uint64_t(r) * n;

    rep.entries.push_back({"ambient", true, rn, false, rn});
    rep.entries.push_back({"blokhuis_lavrauw", h == 1 && k == 1, rn / 2, false, rn / 2});
    {
        bool g = k < n;
        uint64_t v = g ? bound_csmpz(q, n, r, h, k) : 0;
        rep.entries.push_back({"csmpz", g, v, false, v});
    }
    {
        bool applies = r >= 2 && h == r - 1;
        bool g1 = applies && uint64_t(k) < uint64_t(r - 1) * n;
        bool g2 = applies && uint64_t(k - h + 1) * (r - 1) < n;  // k-r+2 = k-h+1 here
        uint64_t v1 = g1 ? uint64_t(n) + k - 1 : 0;
        uint64_t v2 = g2 ? uint64_t(n) + k - r + 1 : 0;
        rep.entries.push_back({"hyperplane_first", g1, v1, false, v1});
        rep.entries.push_back({"hyperplane_second", g2, v2, false, v2});
    }
    {
        bool g = true;
        u128 card = 0;
        uint64_t dim = 0;
        try {
            card = bound_counting(q, n, r, h, k);
            dim = floor_log(card, q);
        } catch (const Error&) {
            g = false;  // exact value would overflow
        }
        rep.entries.push_back({"counting", g, card, true, dim});
    }

    bool first = true;
    for (const auto& e : rep.entries) {
        if (!e.guard) continue;
        if (first || e.dim_value < rep.binding) {
            rep.binding = e.dim_value;
            rep.binding_name = e.name;
            first = false;
        }
    }
    return rep;
}

// one row of the r=3 case discussion: the binding bound, whether it is known
// to be sharp, and the construction attaining it
struct CaseRow {
    uint32_t h, k;
    BoundReport report;
    bool sharp;
    std::string attained_by;
};

inline std::vector<CaseRow> case_table(uint64_t q, uint32_t n) {
    require(n >= 3 && n <= 5, Err::ParamError, "case_table: n in {3,4,5}");
    const uint32_t r = 3;
    std::vector<CaseRow> rows;
    auto add = [&](uint32_t h, uint32_t k, bool sharp, const std::string& by) {
        rows.push_back({h, k, bound_report(q, n, r, h, k), sharp, by});
    };
    switch (n) {
        case 3:
            add(1, 1, true, "direct_sum(gabidulin, point)");
            add(1, 2, true, "dual(subgeometry m=1)");
            add(2, 2, true, "subgeometry m=1");
            break;
        case 4:
            add(1, 2, true, "dual(gabidulin)");
            add(1, 3, true, "extend(dual(gabidulin))");
            add(2, 2, true, "gabidulin");
            add(2, 3, true, "scattered_max");
            break;
        default:
            add(1, 1, true, "scattered35");
            add(1, 2, true, "dual(gabidulin)");
            add(1, 3, true, "extend(dual(gabidulin))");
            add(1, 4, true, "extend(extend(dual(gabidulin)))");
            add(2, 2, true, "gabidulin");
            add(2, 3, true, "b1");
            add(2, 4, true, "dual(scattered35)");
            break;
    }
    return rows;
}

// prior existence results consulted for sharpness, not re-proved here
struct KnownResult {
    std::string id;
    std::string statement;
    std::string citation;
};

inline const std::vector<KnownResult>& known_results() {
    static const std::vector<KnownResult> table{
        {"singleton",
         "additive C in Hom(U,V) with nonzero maps of rank >= delta has "
         "|C| <= q^(min(m,n)(max(m,n)-delta+1))",
         "Delsarte 1978"},
        {"blokhuis_lavrauw",
         "scattered subspaces of V(r,q^n) have dimension at most rn/2",
         "Blokhuis, Lavrauw 2000"},
        {"h_scattered_max",
         "if h+1 | r and n >= h+1, maximum (h,h)-evasive subspaces of V(r,q^n) "
         "have dimension rn/(h+1)",
         "Csajbok, Marino, Polverino, Zullo 2019, Thm 2.7"},
        {"scattered_max_even",
         "if rn is even, maximum (1,1)-evasive subspaces of V(r,q^n) have "
         "dimension rn/2",
         "Ball, Blokhuis, Lavrauw 2000; Bartoli, Giulietti, Marino, Polverino "
         "2018; Blokhuis, Lavrauw 2000; Csajbok, Marino, Polverino, Zullo 2017"},
        {"n_minus_3_scattered",
         "if rn is even, maximum (n-3,n-3)-evasive subspaces of V(r(n-2)/2,q^n) "
         "have dimension rn/2",
         "Csajbok, Marino, Polverino, Zullo 2019, Cor 3.5"},
        {"h_scattered_hyperplanes",
         "h-scattered subspaces of V(r,q^n) of dimension rn/(h+1) are "
         "(r-1, rn/(h+1)-n+h)-evasive",
         "Blokhuis, Lavrauw 2000 (h=1); Csajbok, Marino, Polverino, Zullo 2019 "
         "(h>1)"},
    };
    return table;
}

}  // namespace evasive
