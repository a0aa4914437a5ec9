#pragma once

// Subfield embeddings GF(p^a) -> GF(p^b), a | b. The image of the source
// generator is the first root (canonical element order) of the source modulus
// in the target field, so maps are reproducible across runs.

#include <map>
#include <memory>
#include <mutex>

#include "evasive/field.hpp"
#include "evasive/poly.hpp"

namespace evasive {

struct SubfieldMap {
    SpecPtr src;
    SpecPtr dst;
    Fe gen_image;

    Fe embed(const Fe& x) const {
        require(x.spec() == src.get(), Err::SpecMismatch, "embed: element not in source field");
        Fe acc = dst->zero();
        for (uint32_t i = src->m; i-- > 0;) acc = acc * gen_image + dst->from_int(x.coeff(i));
        return acc;
    }
};

inline SubfieldMap make_subfield_map(const SpecPtr& src, const SpecPtr& dst) {
    require(src->p == dst->p, Err::SpecMismatch, "subfield map needs equal characteristic");
    require(dst->m % src->m == 0, Err::SpecMismatch, "source degree must divide target degree");
    if (src.get() == dst.get()) return SubfieldMap{src, dst, dst->gen()};
    FPoly f{dst.get(), {}};
    f.c.reserve(src->modulus.size());
    for (auto coeff : src->modulus) f.c.push_back(dst->from_int(coeff));
    f.normalize();
    auto roots = find_roots(f);
    require(roots.size() == src->m, Err::SpecMismatch, "source modulus does not split in target");
    return SubfieldMap{src, dst, roots.front()};
}

// process-wide cache; maps are pure functions of the (src, dst) pair
inline const SubfieldMap& subfield_map(const SpecPtr& src, const SpecPtr& dst) {
    static std::map<std::pair<const FieldSpec*, const FieldSpec*>, SubfieldMap> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(src.get(), dst.get());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_subfield_map(src, dst)).first;
    return it->second;
}

}  // namespace evasive
