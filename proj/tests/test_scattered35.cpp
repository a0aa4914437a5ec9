#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "evasive/field.hpp"
#include "evasive/qpoly.hpp"
#include "evasive/scattered35.hpp"
#include "evasive/subfield.hpp"

using namespace evasive;

namespace {

std::vector<uint64_t> codes_of(const std::vector<Fe>& v) {
    std::vector<uint64_t> out;
    for (const Fe& x : v) out.push_back(x.code());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("reference subspace over F_2 is scattered end to end", "[scattered35]") {
    ScatteredCert cert = reproduce_table1(2, 1);
    REQUIRE(cert.scattered);
    REQUIRE(cert.kernel_dim == 7);
    REQUIRE(cert.max_fiber_dim == 1);
    REQUIRE(cert.points == 127);
    REQUIRE(cert.recipe == "square");
    REQUIRE(cert.lambda_exp == 31369);

    SpecPtr f = FieldSpec::preset15(2);
    Fe lambda = f->gen().pow(31369);
    KernelPoly kp = build_P(lambda.pow(2), lambda.pow(4), lambda);
    SweepReport sw = d_sweep(kp.P);
    REQUIRE(sw.scattered);
    REQUIRE(sw.bad_d.empty());
    REQUIRE(sw.examined == 1057);
    REQUIRE(sw.formula_terms == 8);

    SweepReport sw3 = d_sweep(kp.P, 3);
    REQUIRE(sw3.scattered);
    REQUIRE(sw3.examined == 1057);
}

TEST_CASE("fiber_check accepts basis and full point set", "[scattered35]") {
    ScatteredCert cert = reproduce_table1(2, 1);
    FiberReport fr = fiber_check(cert.basis, 2, 1);
    REQUIRE(fr.max_fiber_dim == 1);
    REQUIRE(fr.points == 127);
    REQUIRE(fr.fibers == 127);
    REQUIRE(fr.offending_d.empty());

    SpecPtr f = FieldSpec::preset15(2);
    std::vector<Fe> pts;
    for (uint64_t m = 0; m < 128; ++m) {
        Fe v = f->zero();
        for (int k = 0; k < 7; ++k)
            if ((m >> k) & 1) v = v + cert.basis[k];
        pts.push_back(v);
    }
    FiberReport fr2 = fiber_check(pts, 2, 1);
    REQUIRE(fr2.max_fiber_dim == 1);
    REQUIRE(fr2.fibers == 127);

    // a 129-element set cannot be an F_2-subspace
    std::vector<Fe> bad = pts;
    bad.push_back(f->gen().pow(999));
    try {
        fiber_check(bad, 2, 1);
        FAIL("expected NotSubspace");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::NotSubspace);
    }
}

TEST_CASE("fiber_check reports directions of field lines", "[scattered35]") {
    SpecPtr f = FieldSpec::preset15(2);
    Fe xi = f->gen();
    SpecPtr f32 = FieldSpec::get(2, 5);
    const SubfieldMap& m32 = subfield_map(f32, f);

    // the F_32-line through xi
    std::vector<Fe> line;
    for (uint32_t i = 0; i < 5; ++i)
        line.push_back(xi * m32.embed(f32->gen().pow(i)));
    FiberReport fr = fiber_check(line, 2, 1);
    REQUIRE(fr.max_fiber_dim == 5);
    REQUIRE(fr.fibers == 1);
    REQUIRE(fr.offending_d.size() == 1);
    REQUIRE(fr.offending_d[0] == xi.pow(31));

    // scaling the subspace preserves the fiber profile
    ScatteredCert cert = reproduce_table1(2, 1);
    std::vector<Fe> scaled;
    for (const Fe& b : cert.basis) scaled.push_back(b * xi.pow(123));
    FiberReport fs = fiber_check(scaled, 2, 1);
    REQUIRE(fs.max_fiber_dim == 1);
    REQUIRE(fs.fibers == 127);
}

TEST_CASE("determinant sweep agrees with the fiber oracle", "[scattered35]") {
    SpecPtr f = FieldSpec::preset15(2);
    Fe xi = f->gen();
    SpecPtr f32 = FieldSpec::get(2, 5);
    const SubfieldMap& m32 = subfield_map(f32, f);

    // dimension-7 subspace forced to contain the F_32-line through xi
    std::vector<Fe> basis;
    for (uint32_t i = 0; i < 5; ++i)
        basis.push_back(xi * m32.embed(f32->gen().pow(i)));
    basis.push_back(xi.pow(3));
    basis.push_back(xi.pow(7));

    QPoly P = qpoly_of_subspace(f.get(), 1, basis);
    REQUIRE(P.qdeg() == 7);
    SweepReport sw = d_sweep(P);
    REQUIRE_FALSE(sw.scattered);
    REQUIRE(!sw.bad_d.empty());

    FiberReport fr = fiber_check(basis, 2, 1);
    REQUIRE(fr.max_fiber_dim >= 5);
    REQUIRE(codes_of(sw.bad_d) == codes_of(fr.offending_d));

    bool line_dir = false;
    for (const Fe& d : sw.bad_d)
        if (d == xi.pow(31)) line_dir = true;
    REQUIRE(line_dir);
}

TEST_CASE("recorded lambdas reproduce scattered subspaces", "[scattered35]") {
    for (auto [p, s] : {std::pair<uint32_t, uint32_t>{2, 2}, {3, 1}, {5, 1}}) {
        ScatteredCert cert = reproduce_table1(p, s);
        INFO("p=" << p << " s=" << s << " recipe=" << cert.recipe);
        REQUIRE(cert.scattered);
        REQUIRE(cert.kernel_dim == 7);
        uint64_t q = 1;
        for (uint32_t i = 0; i < s; ++i) q *= p;
        uint64_t want = 1;
        for (int i = 0; i < 7; ++i) want *= q;
        REQUIRE(cert.points == want - 1);
    }
}

TEST_CASE("sweep confirms the F_3 instance", "[scattered35]") {
    ScatteredCert cert = reproduce_table1(3, 1);
    SpecPtr f = AmbientSpace::get(3, 1, 5, 3)->tower().Krn;
    QPoly P = qpoly_of_subspace(f.get(), 1, cert.basis);
    REQUIRE(P.qdeg() == 7);
    SweepReport sw = d_sweep(P);
    REQUIRE(sw.scattered);
    REQUIRE(sw.examined == 59293);
}

TEST_CASE("table data covers the published rows, computation is capped", "[scattered35]") {
    REQUIRE(table1().size() == 17);
    REQUIRE(table1_lambda(2, 7).has_value());
    REQUIRE(table1_lambda(5, 1) == 24079949306ULL);
    REQUIRE(!table1_lambda(7, 1).has_value());

    try {
        reproduce_table1(2, 7);
        FAIL("expected MissingTowerConfig");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::MissingTowerConfig);
    }
    try {
        reproduce_table1(7, 1);
        FAIL("expected ParamError");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::ParamError);
    }
}

TEST_CASE("exponent search recovers a scattered kernel", "[scattered35]") {
    ScatteredCert c1 = search35(2, 1, 1, 2000);
    REQUIRE(c1.scattered);
    REQUIRE(c1.kernel_dim == 7);
    ScatteredCert c3 = search35(2, 1, 1, 2000, 3);
    REQUIRE(c3.lambda_exp == c1.lambda_exp);
    REQUIRE(c3.recipe == c1.recipe);

    SpecPtr f = FieldSpec::preset15(2);
    try {
        search35(2, 1, f->group_order, 1);  // lambda = 1 cannot work
        FAIL("expected BudgetExceeded");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::BudgetExceeded);
    }
}

TEST_CASE("random scan is deterministic and job-invariant", "[scattered35]") {
    ScanReport r1 = random_scan(2, 300, 42);
    ScanReport r3 = random_scan(2, 300, 42, 3);
    REQUIRE(r1.hits == r3.hits);
    REQUIRE(r1.samples == 300);
    REQUIRE(r1.hits >= 1);
    REQUIRE(r1.fraction >= 0.0);
    REQUIRE(r1.fraction <= 1.0);
    REQUIRE(r1.wilson_lo <= r1.fraction);
    REQUIRE(r1.fraction <= r1.wilson_hi);

    ScanReport q3 = random_scan(3, 100, 7);
    REQUIRE(q3.hits >= 1);
    REQUIRE(q3.wilson_hi <= 1.0);

    REQUIRE_THROWS_AS(random_scan(4, 10, 1), Error);
}
