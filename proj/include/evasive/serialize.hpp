#pragma once

// JSON (de)serialization: field specs, elements, subspaces, certificates,
// bound reports, and digest helpers for run manifests.  JSON is the sole
// machine format; loaders canonicalize subspaces and validate every field.

#include <string>
#include <vector>

#include <json.hpp>

#include "evasive/ambient.hpp"
#include "evasive/bounds.hpp"
#include "evasive/constructions.hpp"
#include "evasive/error.hpp"
#include "evasive/evasive.hpp"
#include "evasive/field.hpp"
#include "evasive/scattered35.hpp"
#include "evasive/util.hpp"

namespace evasive {

using json = nlohmann::json;

inline json field_to_json(const FieldSpec* f) {
    json j;
    j["p"] = f->p;
    j["m"] = f->m;
    j["modulus"] = std::vector<uint32_t>(f->modulus.begin(), f->modulus.end());
    return j;
}

inline SpecPtr field_from_json(const json& j) {
    require(j.is_object() && j.contains("p") && j.contains("m") && j.contains("modulus"),
            Err::Serialization, "field: expected {p, m, modulus}");
    uint32_t p = j.at("p").get<uint32_t>();
    uint32_t m = j.at("m").get<uint32_t>();
    auto mod32 = j.at("modulus").get<std::vector<uint32_t>>();
    require(mod32.size() == size_t(m) + 1, Err::Serialization,
            "field: modulus must have m+1 coefficients");
    std::vector<uint8_t> mod(mod32.begin(), mod32.end());
    return FieldSpec::get(p, mod);
}

inline json element_to_json(const Fe& x) {
    std::vector<uint32_t> c(x.spec()->m);
    for (uint32_t i = 0; i < x.spec()->m; ++i) c[i] = x.coeff(i);
    return json(c);
}

inline Fe element_from_json(const SpecPtr& f, const json& j) {
    if (j.is_object() && j.contains("generator_pow")) {
        require(is_primitive(f->gen()), Err::NotPrimitive,
                "element: generator_pow needs a primitive canonical generator");
        return f->gen().pow(j.at("generator_pow").get<uint64_t>());
    }
    require(j.is_array() && j.size() <= f->m, Err::Serialization,
            "element: expected a coefficient list");
    std::vector<uint8_t> c(f->m, 0);
    for (size_t i = 0; i < j.size(); ++i) {
        uint32_t v = j[i].get<uint32_t>();
        require(v < f->p, Err::Serialization, "element: coefficient out of range");
        c[i] = uint8_t(v);
    }
    return f->from_coeffs(c);
}

namespace detail {

inline json basis_rows_to_json(const auto& subspace) {
    json rows = json::array();
    for (size_t i = 0; i < subspace.dim(); ++i) {
        json row = json::array();
        for (const Fe& x : subspace.basis_vector(i)) row.push_back(element_to_json(x));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json subspace_header(const AmbPtr& amb) {
    json j;
    j["field"] = field_to_json(amb->Kn.get());
    j["q"] = amb->q;
    j["n"] = amb->n;
    j["r"] = amb->r;
    return j;
}

inline AmbPtr ambient_from_json(const json& j) {
    require(j.is_object() && j.contains("field") && j.contains("q") &&
                j.contains("n") && j.contains("r") && j.contains("basis"),
            Err::Serialization, "subspace: expected {field, q, n, r, basis}");
    SpecPtr kn = field_from_json(j.at("field"));
    uint64_t q = j.at("q").get<uint64_t>();
    uint32_t n = j.at("n").get<uint32_t>();
    uint32_t r = j.at("r").get<uint32_t>();
    auto [p, s] = prime_power(q);
    require(p == kn->p && s * n == kn->m, Err::Serialization,
            "subspace: field degree does not match q^n");
    AmbPtr amb = AmbientSpace::get(p, s, n, r);
    require(amb->Kn->modulus == kn->modulus, Err::Serialization,
            "subspace: non-canonical modulus for GF(q^n)");
    return amb;
}

inline std::vector<std::vector<Fe>> rows_from_json(const AmbPtr& amb, const json& rows) {
    require(rows.is_array(), Err::Serialization, "basis: expected an array");
    std::vector<std::vector<Fe>> out;
    for (const json& row : rows) {
        require(row.is_array() && row.size() == amb->r, Err::Serialization,
                "basis: each row needs r entries");
        std::vector<Fe> v;
        v.reserve(amb->r);
        for (const json& e : row) v.push_back(element_from_json(amb->Kn, e));
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace detail

inline json subspace_to_json(const FqSubspace& U) {
    json j = detail::subspace_header(U.amb());
    j["basis"] = detail::basis_rows_to_json(U);
    return j;
}

inline FqSubspace subspace_from_json(const json& j) {
    AmbPtr amb = detail::ambient_from_json(j);
    return fq_span(amb, detail::rows_from_json(amb, j.at("basis")));
}

inline json fqn_subspace_to_json(const FqnSubspace& W) {
    json j = detail::subspace_header(W.amb());
    j["basis"] = detail::basis_rows_to_json(W);
    return j;
}

inline FqnSubspace fqn_subspace_from_json(const json& j) {
    AmbPtr amb = detail::ambient_from_json(j);
    return fqn_span(amb, detail::rows_from_json(amb, j.at("basis")));
}

inline json certificate_to_json(const EvasivenessCertificate& c) {
    json j;
    j["h"] = c.h;
    j["k_star"] = c.k_star;
    j["witness"] = c.witness.dim() ? fqn_subspace_to_json(c.witness) : json();
    j["strategy"] = c.strategy;
    j["examined"] = c.examined;
    j["ms"] = c.ms;
    return j;
}

inline EvasivenessCertificate certificate_from_json(const json& j) {
    require(j.is_object() && j.contains("h") && j.contains("k_star") &&
                j.contains("strategy") && j.contains("examined"),
            Err::Serialization, "certificate: missing fields");
    EvasivenessCertificate c;
    c.h = j.at("h").get<uint32_t>();
    c.k_star = j.at("k_star").get<size_t>();
    c.strategy = j.at("strategy").get<std::string>();
    c.examined = j.at("examined").get<uint64_t>();
    c.ms = j.value("ms", uint64_t(0));
    if (j.contains("witness") && !j.at("witness").is_null()) {
        c.witness = fqn_subspace_from_json(j.at("witness"));
        const AmbPtr& amb = c.witness.amb();
        c.q = amb->q;
        c.n = amb->n;
        c.r = amb->r;
    }
    return c;
}

inline json bound_report_to_json(const BoundReport& rep) {
    json j;
    j["q"] = rep.q;
    j["n"] = rep.n;
    j["r"] = rep.r;
    j["h"] = rep.h;
    j["k"] = rep.k;
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json je;
        je["name"] = e.name;
        je["guard"] = e.guard;
        je["value"] = u128_to_string(e.value);
        je["cardinality"] = e.cardinality;
        je["dim_value"] = e.dim_value;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["binding"] = rep.binding;
    j["binding_name"] = rep.binding_name;
    return j;
}

inline json scattered_cert_to_json(const ScatteredCert& c) {
    json j;
    j["p"] = c.p;
    j["s"] = c.s;
    j["lambda_exp"] = c.lambda_exp;
    j["recipe"] = c.recipe;
    j["kernel_dim"] = c.kernel_dim;
    j["max_fiber_dim"] = c.max_fiber_dim;
    j["scattered"] = c.scattered;
    j["points"] = c.points;
    j["ms"] = c.ms;
    if (!c.basis.empty()) {
        j["field"] = field_to_json(c.basis[0].spec());
        json rows = json::array();
        for (const Fe& x : c.basis) rows.push_back(element_to_json(x));
        j["basis"] = std::move(rows);
    }
    return j;
}

// Digest of the canonical dump with timing fields removed; two runs of the
// same computation agree on this value regardless of wall-clock.
inline std::string json_digest(json j) {
    if (j.is_object()) j.erase("ms");
    std::string dump = j.dump();
    return hex64(fnv1a64(dump.data(), dump.size()));
}

}  // namespace evasive
