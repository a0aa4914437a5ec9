#pragma once

// Evasiveness measurement: the exact intersection profile of an FqSubspace
// against all h-dimensional GF(q^n)-subspaces, by one of three strategies
// (full enumeration, span-driven enumeration, direction fibers), with
// deterministic witnesses and certificates.

#include <chrono>
#include <cstdlib>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "evasive/ambient.hpp"

namespace evasive {

enum class Strategy { auto_pick, full_enum, span_enum, fiber };

inline const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::full_enum: return "full_enum";
        case Strategy::span_enum: return "span_enum";
        case Strategy::fiber: return "fiber";
        default: return "auto";
    }
}

inline Strategy parse_strategy(const std::string& s) {
    if (s == "auto") return Strategy::auto_pick;
    if (s == "full_enum" || s == "full") return Strategy::full_enum;
    if (s == "span_enum" || s == "span") return Strategy::span_enum;
    if (s == "fiber") return Strategy::fiber;
    fail(Err::ParamError, "unknown strategy: " + s);
}

inline uint64_t default_budget() {
    if (const char* e = std::getenv("EVASIVE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end && *end == '\0' && v > 0) return uint64_t(v);
    }
    return 10'000'000;
}

struct EvasivenessCertificate {
    uint64_t q = 0;
    uint32_t n = 0, r = 0;
    uint32_t h = 0;
    size_t k_star = 0;
    FqnSubspace witness;
    std::string strategy;
    uint64_t examined = 0;
    uint64_t ms = 0;
};

inline size_t intersection_dim(const FqSubspace& U, const FqnSubspace& W) {
    require(U.amb().get() == W.amb().get(), Err::AmbientMismatch,
            "intersection_dim: mixed ambients");
    const AmbPtr& amb = U.amb();
    size_t en = W.dim() * amb->n;
    Eliminator elim;
    elim.set_base(U.flat());
    std::vector<uint8_t> scratch(en * amb->flat_dim);
    std::vector<Fe> tmp;
    expand_rows_into(amb, W.basis(), scratch.data(), tmp);
    size_t newp = 0;
    for (size_t i = 0; i < en; ++i)
        if (elim.add_row(scratch.data() + i * amb->flat_dim)) ++newp;
    return en - newp;
}

namespace detail {

struct SweepLocal {
    bool any = false;
    size_t k = 0;
    u128 index = 0;  // global enumeration index of the witness
    uint64_t examined = 0;
    Mat witness;
};

inline void merge_local(SweepLocal& best, const SweepLocal& cand) {
    best.examined += cand.examined;
    if (!cand.any) return;
    if (!best.any || cand.k > best.k || (cand.k == best.k && cand.index < best.index)) {
        uint64_t ex = best.examined;
        best = cand;
        best.examined = ex;
    }
}

inline SweepLocal full_sweep_range(const FqSubspace& U, uint32_t h, u128 start, u128 stop) {
    const AmbPtr& amb = U.amb();
    SweepLocal local;
    if (start >= stop) return local;
    HEnum en(amb, h);
    en.seek(start);
    Eliminator elim;
    elim.set_base(U.flat());
    const size_t hn = size_t(h) * amb->n;
    const size_t width = amb->flat_dim;
    std::vector<uint8_t> scratch(hn * width);
    std::vector<Fe> tmp;
    Mat basis;
    const size_t cap = std::min(hn, U.dim());
    for (u128 idx = start; idx < stop; ++idx) {
        bool ok = en.next(basis);
        require(ok, Err::ParamError, "enumeration ended early");
        ++local.examined;
        elim.reset();
        expand_rows_into(amb, basis, scratch.data(), tmp);
        size_t newp = 0;
        size_t row = 0;
        for (; row < hn; ++row) {
            if (elim.add_row(scratch.data() + row * width)) ++newp;
            if (local.any && hn - newp <= local.k) break;  // cannot improve
        }
        if (row < hn) continue;
        size_t inter = hn - newp;
        if (!local.any || inter > local.k) {
            local.any = true;
            local.k = inter;
            local.index = idx;
            local.witness = basis;
        }
        if (local.k == cap) {
            // nothing can exceed min(hn, dim U): skip the remaining work but
            // keep the examined count partition-independent
            local.examined += uint64_t(stop - idx - 1);
            break;
        }
    }
    return local;
}

// deterministic extension of a (possibly < h dimensional) span to exactly h
// dimensions using standard basis vectors
inline FqnSubspace extend_span_to_h(const AmbPtr& amb, std::vector<std::vector<Fe>> gens,
                                    uint32_t h) {
    FqnSubspace cur = fqn_span(amb, gens);
    for (uint32_t i = 0; i < amb->r && cur.dim() < h; ++i) {
        std::vector<Fe> e(amb->r, amb->Kn->zero());
        e[i] = amb->Kn->one();
        auto trial = gens;
        trial.push_back(e);
        FqnSubspace bigger = fqn_span(amb, trial);
        if (bigger.dim() > cur.dim()) {
            gens = std::move(trial);
            cur = std::move(bigger);
        }
    }
    require(cur.dim() == h, Err::ParamError, "span extension failed");
    return cur;
}

}  // namespace detail

inline EvasivenessCertificate profile(const FqSubspace& U, uint32_t h,
                                      Strategy strat = Strategy::auto_pick, uint64_t budget = 0,
                                      uint32_t jobs = 1) {
    const AmbPtr& amb = U.amb();
    require(h >= 1 && h <= amb->r, Err::ParamError, "profile: h out of range");
    require(fqn_span_dim(U) >= h, Err::NotSpanning,
            "profile: U spans fewer than h dimensions over GF(q^n)");
    if (budget == 0) budget = default_budget();
    if (jobs == 0) jobs = 1;

    auto t0 = std::chrono::steady_clock::now();

    // number of projective points of U, saturating well past any budget
    auto point_count = [&]() -> u128 {
        const u128 cap = u128(1) << 100;
        u128 pts = 0, pw = 1;
        for (size_t i = 0; i < U.dim(); ++i) {
            pts += pw;
            if (pw >= cap / amb->q) return cap;
            pw *= amb->q;
        }
        return pts;
    };
    bool tower_fits = [&] {  // p^(s n r) representable as a field order
        u128 ord = 1;
        for (uint32_t i = 0; i < amb->s * amb->n * amb->r; ++i) {
            ord *= amb->p;
            if (ord >= (u128(1) << 62)) return false;
        }
        return true;
    }();
    if (strat == Strategy::auto_pick) {
        if (h == 1 && U.dim() >= 1 && tower_fits && point_count() <= budget)
            strat = Strategy::fiber;
        else if (count_h_subspaces(amb, h) <= budget)
            strat = Strategy::full_enum;
        else
            strat = Strategy::span_enum;
    }

    EvasivenessCertificate cert;
    cert.q = amb->q;
    cert.n = amb->n;
    cert.r = amb->r;
    cert.h = h;
    cert.strategy = strategy_name(strat);

    if (strat == Strategy::full_enum) {
        u128 total = count_h_subspaces(amb, h);
        require(total <= u128(budget), Err::BudgetExceeded, "full_enum exceeds budget");
        uint32_t workers = uint32_t(std::min<u128>(jobs, total ? total : 1));
        detail::SweepLocal best;
        if (workers <= 1) {
            best = detail::full_sweep_range(U, h, 0, total);
        } else {
            std::vector<detail::SweepLocal> locals(workers);
            std::vector<std::thread> pool;
            u128 chunk = total / workers, extra = total % workers, start = 0;
            for (uint32_t w = 0; w < workers; ++w) {
                u128 stop = start + chunk + (w < extra ? 1 : 0);
                pool.emplace_back([&, w, start, stop] {
                    locals[w] = detail::full_sweep_range(U, h, start, stop);
                });
                start = stop;
            }
            for (auto& th : pool) th.join();
            for (const auto& l : locals) detail::merge_local(best, l);
        }
        require(best.any, Err::ParamError, "empty enumeration");
        cert.examined = best.examined;
        cert.k_star = best.k;
        cert.witness = FqnSubspace(amb, best.witness);
    } else if (strat == Strategy::span_enum) {
        // BFS over GF(q^n)-spans of tuples of U-vectors, by exact span rank
        const size_t t = U.dim();
        u128 nvec = 1;
        for (size_t i = 0; i < t; ++i) {
            nvec *= amb->q;
            require(nvec <= u128(budget) + 1, Err::BudgetExceeded,
                    "span_enum: too many subspace vectors");
        }
        // materialize U's nonzero vectors once, in code order
        std::vector<std::vector<Fe>> vecs;
        vecs.reserve(size_t(nvec) - 1);
        {
            std::vector<uint8_t> digits(t, 0), acc(amb->flat_dim);
            for (u128 code = 1; code < nvec; ++code) {
                size_t k = t;
                while (k-- > 0) {
                    if (++digits[k] < amb->q) break;
                    digits[k] = 0;
                }
                std::fill(acc.begin(), acc.end(), 0);
                for (size_t i = 0; i < t; ++i) {
                    uint8_t c = digits[i];
                    if (!c) continue;
                    const uint8_t* row = U.flat().row_ptr(i);
                    for (size_t j = 0; j < amb->flat_dim; ++j)
                        acc[j] = amb->Fq->add(acc[j], amb->Fq->mul(c, row[j]));
                }
                vecs.push_back(amb->unflatten_row(acc.data()));
            }
        }
        std::set<std::vector<uint64_t>> seen;
        auto key_of = [&](const Mat& m) {
            std::vector<uint64_t> key;
            key.reserve(m.rows() * m.cols() + 1);
            key.push_back(m.rows());
            for (size_t i = 0; i < m.rows(); ++i)
                for (size_t j = 0; j < m.cols(); ++j) key.push_back(m.at(i, j).code());
            return key;
        };
        detail::SweepLocal best;
        uint64_t examined = 0;
        Eliminator elim;
        elim.set_base(U.flat());
        std::vector<Fe> tmp;
        std::vector<uint8_t> scratch(size_t(h) * amb->n * amb->flat_dim);
        auto evaluate = [&](const Mat& basis, u128 order_index) {
            size_t en = basis.rows() * amb->n;
            elim.reset();
            expand_rows_into(amb, basis, scratch.data(), tmp);
            size_t newp = 0;
            for (size_t i = 0; i < en; ++i)
                if (elim.add_row(scratch.data() + i * amb->flat_dim)) ++newp;
            size_t inter = en - newp;
            if (!best.any || inter > best.k) {
                best.any = true;
                best.k = inter;
                best.index = order_index;
                best.witness = basis;
            }
        };
        std::vector<Mat> frontier;
        u128 order = 0;
        for (const auto& v : vecs) {
            FqnSubspace line = fqn_span(amb, {v});
            auto key = key_of(line.basis());
            if (!seen.insert(std::move(key)).second) continue;
            require(++examined <= budget, Err::BudgetExceeded, "span_enum exceeds budget");
            evaluate(line.basis(), order++);
            frontier.push_back(line.basis());
        }
        for (uint32_t level = 2; level <= h && !frontier.empty(); ++level) {
            std::vector<Mat> next;
            for (const auto& S : frontier) {
                for (const auto& v : vecs) {
                    Mat trial(amb->Kn.get(), 0, amb->r);
                    for (size_t i = 0; i < S.rows(); ++i) trial.append_row(S.row(i));
                    trial.append_row(v);
                    Mat canon = kn_rref_canonical(std::move(trial));
                    if (canon.rows() != level) continue;  // v was inside the span
                    auto key = key_of(canon);
                    if (!seen.insert(std::move(key)).second) continue;
                    require(++examined <= budget, Err::BudgetExceeded,
                            "span_enum exceeds budget");
                    evaluate(canon, order++);
                    next.push_back(std::move(canon));
                }
            }
            frontier = std::move(next);
        }
        require(best.any, Err::ParamError, "span_enum found no spans");
        cert.examined = examined;
        cert.k_star = best.k;
        std::vector<std::vector<Fe>> gens;
        for (size_t i = 0; i < best.witness.rows(); ++i) gens.push_back(best.witness.row(i));
        cert.witness = detail::extend_span_to_h(amb, std::move(gens), h);
    } else {
        require(strat == Strategy::fiber, Err::ParamError, "unresolved strategy");
        require(h == 1, Err::StrategyInapplicable, "fiber strategy requires h = 1");
        require(tower_fits, Err::StrategyInapplicable,
                "fiber strategy needs a field-model tower");
        u128 points = point_count();
        require(points <= u128(budget), Err::BudgetExceeded, "fiber sweep exceeds budget");
        const auto& tw = amb->tower();
        const size_t t = U.dim();
        std::vector<Fe> basis = to_field_model(U);
        require(basis.size() == t, Err::ParamError, "field model basis mismatch");
        // diff[k][c]: adding it steps coefficient k of the combination from
        // code c to code c+1 (mod q)
        std::vector<std::vector<Fe>> diff(t, std::vector<Fe>(amb->q, tw.Krn->zero()));
        for (size_t k = 0; k < t; ++k)
            for (uint64_t c = 0; c < amb->q; ++c) {
                Fe cur = tw.scalar_emb[c] * basis[k];
                Fe nxt = tw.scalar_emb[(c + 1) % amb->q] * basis[k];
                diff[k][c] = nxt - cur;
            }
        struct Bucket {
            Fe key;
            uint64_t count;
        };
        std::unordered_map<uint64_t, std::vector<Bucket>> fibers;
        fibers.reserve(size_t(points) * 2);
        auto bump = [&](const Fe& key) -> uint64_t {
            auto& vec = fibers[fe_hash(key)];
            for (auto& b : vec)
                if (b.key == key) return ++b.count;
            vec.push_back({key, 1});
            return 1;
        };
        auto for_each_point = [&](auto&& fn) {
            std::vector<uint8_t> d(t, 0);
            for (size_t lead = 0; lead < t; ++lead) {
                std::fill(d.begin() + long(lead), d.end(), 0);
                Fe cur = basis[lead];
                for (;;) {
                    if (!fn(cur)) return;
                    size_t k = t;
                    bool done = true;
                    while (k-- > lead + 1) {
                        cur = cur + diff[k][d[k]];
                        if (++d[k] < amb->q) {
                            done = false;
                            break;
                        }
                        d[k] = 0;
                    }
                    if (done) break;
                }
            }
        };
        uint64_t max_count = 0;
        for_each_point([&](const Fe& x) {
            require(!x.is_zero(), Err::ParamError, "dependent basis in fiber sweep");
            uint64_t c = bump(tw.dir_key(x));
            if (c > max_count) max_count = c;
            return true;
        });
        // fiber of size (q^j - 1)/(q - 1) means the line meets U in dim j
        uint32_t j = 0;
        u128 acc = 0, pw = 1;
        while (acc < max_count) {
            acc += pw;
            pw *= amb->q;
            ++j;
        }
        require(acc == max_count, Err::ParamError, "fiber size is not a subspace count");
        // all fibers must be punctured subspaces
        for (const auto& kv : fibers)
            for (const auto& b : kv.second) {
                u128 a2 = 0, p2 = 1;
                while (a2 < b.count) {
                    a2 += p2;
                    p2 *= amb->q;
                }
                require(a2 == b.count, Err::ParamError, "fiber size is not a subspace count");
            }
        cert.examined = uint64_t(points);
        cert.k_star = j;
        // witness: the line through the first point whose fiber is largest
        Fe win = tw.Krn->zero();
        for_each_point([&](const Fe& x) {
            Fe key = tw.dir_key(x);
            const auto& vec = fibers[fe_hash(key)];
            for (const auto& b : vec)
                if (b.key == key && b.count == max_count) {
                    win = x;
                    return false;
                }
            return true;
        });
        require(!win.is_zero(), Err::ParamError, "fiber witness not found");
        cert.witness = fqn_span(amb, {tw.from_field(win)});
    }

    size_t check = intersection_dim(U, cert.witness);
    require(check == cert.k_star, Err::ParamError, "certificate witness failed re-verification");
    auto t1 = std::chrono::steady_clock::now();
    cert.ms = uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    return cert;
}

inline std::pair<bool, EvasivenessCertificate> is_evasive(const FqSubspace& U, uint32_t h,
                                                          uint32_t k,
                                                          Strategy strat = Strategy::auto_pick,
                                                          uint64_t budget = 0,
                                                          uint32_t jobs = 1) {
    EvasivenessCertificate cert = profile(U, h, strat, budget, jobs);
    return {cert.k_star <= k, std::move(cert)};
}

// scattered = (1,1)-evasive; h-scattered additionally requires spanning
inline bool is_scattered(const FqSubspace& U, Strategy strat = Strategy::auto_pick,
                         uint64_t budget = 0) {
    return is_evasive(U, 1, 1, strat, budget).first;
}

inline bool is_h_scattered(const FqSubspace& U, uint32_t h, Strategy strat = Strategy::auto_pick,
                           uint64_t budget = 0) {
    if (fqn_span_dim(U) != U.amb()->r) return false;
    return is_evasive(U, h, h, strat, budget).first;
}

struct QSystemParams {
    size_t m = 0;  // dim_q U
    uint32_t r = 0;
    size_t d = 0;  // minimum distance of the associated system
};

inline QSystemParams q_system_params(const FqSubspace& U, Strategy strat = Strategy::auto_pick,
                                     uint64_t budget = 0, uint32_t jobs = 1) {
    const AmbPtr& amb = U.amb();
    require(fqn_span_dim(U) == amb->r, Err::NotSpanning,
            "q_system_params: U must span V over GF(q^n)");
    QSystemParams out;
    out.m = U.dim();
    out.r = amb->r;
    if (amb->r == 1) {
        out.d = out.m;
        return out;
    }
    EvasivenessCertificate cert = profile(U, amb->r - 1, strat, budget, jobs);
    out.d = out.m - cert.k_star;
    return out;
}

}  // namespace evasive
