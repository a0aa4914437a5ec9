#include <catch2/catch_amalgamated.hpp>

#include "evasive/constructions.hpp"
#include "evasive/evasive.hpp"
#include "evasive/serialize.hpp"

using namespace evasive;

TEST_CASE("field and element round trips", "[serialize]") {
    SpecPtr f = FieldSpec::preset15(2);
    json jf = field_to_json(f.get());
    REQUIRE(field_from_json(jf).get() == f.get());

    Fe x = f->gen().pow(31369);
    REQUIRE(element_from_json(f, element_to_json(x)) == x);
    REQUIRE(element_from_json(f, json{{"generator_pow", 31369}}) == x);

    json bad = json::array({0, 3});
    try {
        element_from_json(f, bad);
        FAIL("expected Serialization");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::Serialization);
    }
}

TEST_CASE("subspace round trip is canonical", "[serialize]") {
    FqSubspace U = gabidulin(2, 5, 3);
    json j = subspace_to_json(U);
    REQUIRE(j.at("q") == 2);
    REQUIRE(j.at("n") == 5);
    REQUIRE(j.at("r") == 3);
    FqSubspace back = subspace_from_json(j);
    REQUIRE(back == U);

    // permuted rows load to the same canonical subspace
    json perm = j;
    std::swap(perm.at("basis")[0], perm.at("basis")[2]);
    REQUIRE(subspace_from_json(perm) == U);

    json wrong = j;
    wrong["n"] = 4;
    try {
        subspace_from_json(wrong);
        FAIL("expected Serialization");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::Serialization);
    }
}

TEST_CASE("certificates are self-validating through JSON", "[serialize]") {
    FqSubspace U = gabidulin(2, 3, 2);
    EvasivenessCertificate cert = profile(U, 1);
    json j = certificate_to_json(cert);
    EvasivenessCertificate back = certificate_from_json(j);
    REQUIRE(back.h == cert.h);
    REQUIRE(back.k_star == cert.k_star);
    REQUIRE(back.strategy == cert.strategy);
    REQUIRE(back.examined == cert.examined);
    REQUIRE(back.witness.dim() == cert.witness.dim());
    // the witness reproduces the recorded intersection dimension
    REQUIRE(intersection_dim(U, back.witness) == cert.k_star);
}

TEST_CASE("digest ignores timing but not content", "[serialize]") {
    FqSubspace U = gabidulin(2, 3, 2);
    EvasivenessCertificate cert = profile(U, 1);
    json a = certificate_to_json(cert);
    json b = a;
    b["ms"] = a.value("ms", uint64_t(0)) + 12345;
    REQUIRE(json_digest(a) == json_digest(b));
    json c = a;
    c["k_star"] = cert.k_star + 1;
    REQUIRE(json_digest(a) != json_digest(c));
}

TEST_CASE("bound reports and scattered certificates serialize", "[serialize]") {
    json jb = bound_report_to_json(bound_report(2, 5, 3, 2, 4));
    REQUIRE(jb.at("binding") == 8);
    REQUIRE(jb.at("entries").is_array());
    REQUIRE(!jb.at("binding_name").get<std::string>().empty());
}
