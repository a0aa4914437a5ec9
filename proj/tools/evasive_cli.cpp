// Command-line front end: constructions, evasiveness checks, dualities,
// bounds, and the V(3, q^5) search.  Every run emits JSON artifacts plus a
// run manifest with FNV-1a digests of each input and output document.
//
// Exit codes: 0 claim verified / object produced, 2 usage error,
// 3 claim violated, 4 budget exceeded.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evasive/bounds.hpp"
#include "evasive/constructions.hpp"
#include "evasive/duality.hpp"
#include "evasive/error.hpp"
#include "evasive/evasive.hpp"
#include "evasive/scattered35.hpp"
#include "evasive/scattered_sources.hpp"
#include "evasive/serialize.hpp"

namespace {

using namespace evasive;

constexpr const char* kVersion = "0.3.0";

// Collects artifact digests and parameters while a subcommand runs, then
// prints the manifest (stderr by default, file with --manifest).
struct Run {
    std::string subcommand;
    json params = json::object();
    json digests = json::object();
    std::string manifest_path;
    uint32_t workers = 1;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    json read_input(const std::string& path, const std::string& key) {
        std::stringstream buf;
        if (path == "-") {
            buf << std::cin.rdbuf();
        } else {
            std::ifstream in(path);
            require(in.good(), Err::Serialization, "cannot open input: " + path);
            buf << in.rdbuf();
        }
        json j = json::parse(buf.str());
        digests[key] = json_digest(j);
        return j;
    }

    void emit(const json& j, const std::string& path, const std::string& key) {
        digests[key] = json_digest(j);
        if (path.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream out(path);
            require(out.good(), Err::Serialization, "cannot open output: " + path);
            out << j.dump(2) << "\n";
        }
    }

    ~Run() {
        uint64_t ms = uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count());
        json man{{"subcommand", subcommand}, {"params", params},   {"version", kVersion},
                 {"digests", digests},       {"elapsed_ms", ms},   {"workers", workers}};
        if (manifest_path.empty()) {
            std::cerr << man.dump() << "\n";
        } else {
            std::ofstream out(manifest_path);
            out << man.dump(2) << "\n";
        }
    }
};

struct CommonFlags {
    std::string out, cert, manifest;
    uint64_t budget = 0;
    uint32_t jobs = 1;
    std::string strategy = "auto";
};

void add_io_flags(CLI::App* sub, CommonFlags& c, bool with_cert = false) {
    sub->add_option("--out", c.out, "write the subspace JSON here (default: stdout)");
    if (with_cert)
        sub->add_option("--cert", c.cert, "write the certificate JSON here (default: stdout)");
    sub->add_option("--manifest", c.manifest, "write the run manifest here (default: stderr)");
}

void add_sweep_flags(CLI::App* sub, CommonFlags& c) {
    sub->add_option("--budget", c.budget,
                    "max subspaces/candidates to examine (default: EVASIVE_BUDGET or 10^7)");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for (h,k)-evasive and scattered subspaces of V(r, q^n)"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    int rc = 0;

    // ---- construct ----
    struct {
        std::string name;
        uint64_t q = 2;
        uint32_t n = 0, r = 0, m = 0, h = 1, k = 0, s = 1, copies = 2;
        uint64_t seed = 0;
        std::vector<std::string> inputs;
        CommonFlags c;
    } con;
    auto* sc = app.add_subcommand("construct", "build a named subspace construction");
    sc->add_option("name", con.name, "one of: gabidulin subgeometry guruswami guruswami-sum "
                                     "direct-sum extend lift b1 ex00 dual-of-scattered")
        ->required();
    sc->add_option("--q", con.q, "field size q (prime power)");
    sc->add_option("--n", con.n, "extension degree n");
    sc->add_option("--r", con.r, "ambient rank r");
    sc->add_option("--m", con.m, "subgeometry: subfield degree divisor m | n");
    sc->add_option("--h", con.h, "guruswami: evasiveness level h");
    sc->add_option("--copies", con.copies, "guruswami-sum: number of direct summands");
    sc->add_option("--k", con.k, "b1/ex00: target k; lift: known defect of the input");
    sc->add_option("--s", con.s, "extend/lift: number of added dimensions");
    sc->add_option("--seed", con.seed, "seed for randomized constructions");
    sc->add_option("--in", con.inputs, "input subspace JSON file(s); '-' reads stdin");
    add_io_flags(sc, con.c);
    sc->callback([&] {
        Run run;
        run.subcommand = "construct";
        run.manifest_path = con.c.manifest;
        run.params = {{"name", con.name}, {"q", con.q},       {"n", con.n},
                      {"r", con.r},       {"m", con.m},       {"h", con.h},
                      {"k", con.k},       {"s", con.s},       {"copies", con.copies},
                      {"seed", con.seed}, {"in", con.inputs}};
        auto load = [&](size_t i) {
            return subspace_from_json(run.read_input(con.inputs.at(i), "in" + std::to_string(i)));
        };
        FqSubspace U;
        if (con.name == "gabidulin") {
            U = gabidulin(con.q, con.n, con.r);
        } else if (con.name == "subgeometry") {
            U = subgeometry(con.q, con.n, con.r, con.m);
        } else if (con.name == "guruswami") {
            U = guruswami(con.q, con.n, con.r, con.h);
        } else if (con.name == "guruswami-sum") {
            require(con.copies >= 1, Err::ParamError, "guruswami-sum needs --copies >= 1");
            U = guruswami(con.q, con.n, con.r, con.h);
            for (uint32_t i = 1; i < con.copies; ++i)
                U = direct_sum(U, guruswami(con.q, con.n, con.r, con.h));
        } else if (con.name == "direct-sum") {
            require(con.inputs.size() == 2, Err::ParamError, "direct-sum needs exactly two --in");
            U = direct_sum(load(0), load(1));
        } else if (con.name == "extend") {
            require(con.inputs.size() == 1, Err::ParamError, "extend needs one --in");
            U = extend_random(load(0), con.s, con.seed);
        } else if (con.name == "lift") {
            require(con.inputs.size() == 1, Err::ParamError, "lift needs one --in");
            std::optional<uint32_t> k;
            if (sc->count("--k")) k = con.k;
            U = hyperplane_lift(load(0), con.s, k);
        } else if (con.name == "b1") {
            U = b1(con.q, con.n, con.r, con.k);
        } else if (con.name == "ex00") {
            U = ex00(con.q, con.n, con.r, con.k, con.seed);
        } else if (con.name == "dual-of-scattered") {
            U = from_scattered_dual(con.q, con.n, con.r);
        } else {
            fail(Err::ParamError, "unknown construction: " + con.name);
        }
        run.emit(subspace_to_json(U), con.c.out, "out");
        std::cerr << con.name << ": dim " << U.dim() << " in V(" << U.amb()->r << ", "
                  << U.amb()->q << "^" << U.amb()->n << ")\n";
    });

    // ---- check ----
    struct {
        std::string in;
        uint32_t h = 1, k = 1;
        CommonFlags c;
    } chk;
    auto* scheck = app.add_subcommand("check", "measure evasiveness and test an (h,k) claim");
    scheck->add_option("--in", chk.in, "subspace JSON file; '-' reads stdin")->required();
    scheck->add_option("--h", chk.h, "dimension of the enemy subspaces")->required();
    scheck->add_option("--k", chk.k, "claimed intersection bound")->required();
    scheck->add_option("--strategy", chk.c.strategy, "auto|full|span|fiber");
    add_sweep_flags(scheck, chk.c);
    add_io_flags(scheck, chk.c, true);
    scheck->callback([&] {
        Run run;
        run.subcommand = "check";
        run.manifest_path = chk.c.manifest;
        run.workers = chk.c.jobs;
        run.params = {{"in", chk.in},           {"h", chk.h},
                      {"k", chk.k},             {"strategy", chk.c.strategy},
                      {"budget", chk.c.budget}, {"jobs", chk.c.jobs}};
        FqSubspace U = subspace_from_json(run.read_input(chk.in, "in"));
        auto [ok, cert] =
            is_evasive(U, chk.h, chk.k, parse_strategy(chk.c.strategy), chk.c.budget, chk.c.jobs);
        run.emit(certificate_to_json(cert), chk.c.cert, "cert");
        if (ok) {
            std::cerr << "claim holds: (" << chk.h << "," << chk.k << ")-evasive, k_star = "
                      << cert.k_star << " over " << cert.examined << " subspaces\n";
        } else {
            std::cerr << "claim violated: k_star = " << cert.k_star << " > " << chk.k
                      << ", witness: " << fqn_subspace_to_json(cert.witness).dump() << "\n";
            rc = 3;
        }
    });

    // ---- dual / delsarte-dual ----
    struct {
        std::string in;
        CommonFlags c;
    } du, dd;
    auto* sdual = app.add_subcommand("dual", "ordinary dual via the trace form");
    sdual->add_option("--in", du.in, "subspace JSON file; '-' reads stdin")->required();
    add_io_flags(sdual, du.c);
    sdual->callback([&] {
        Run run;
        run.subcommand = "dual";
        run.manifest_path = du.c.manifest;
        run.params = {{"in", du.in}};
        FqSubspace U = subspace_from_json(run.read_input(du.in, "in"));
        FqSubspace D = ordinary_dual(U);
        run.emit(subspace_to_json(D), du.c.out, "out");
        std::cerr << "ordinary dual: dim " << U.dim() << " -> dim " << D.dim() << "\n";
    });
    auto* sdd = app.add_subcommand("delsarte-dual", "Delsarte dual via the q-system matrix");
    sdd->add_option("--in", dd.in, "subspace JSON file; '-' reads stdin")->required();
    add_io_flags(sdd, dd.c);
    sdd->callback([&] {
        Run run;
        run.subcommand = "delsarte-dual";
        run.manifest_path = dd.c.manifest;
        run.params = {{"in", dd.in}};
        FqSubspace U = subspace_from_json(run.read_input(dd.in, "in"));
        FqSubspace D = delsarte_dual(U);
        run.emit(subspace_to_json(D), dd.c.out, "out");
        std::cerr << "Delsarte dual: dim " << U.dim() << " in V(" << U.amb()->r << ", q^"
                  << U.amb()->n << ") -> dim " << D.dim() << " in V(" << D.amb()->r << ", q^"
                  << D.amb()->n << ")\n";
    });

    // ---- bounds ----
    struct {
        uint64_t q = 2;
        uint32_t n = 0, r = 0, h = 1, k = 1;
        CommonFlags c;
    } bo;
    auto* sb = app.add_subcommand("bounds", "dimension bounds for (h,k)-evasive subspaces");
    sb->add_option("--q", bo.q)->required();
    sb->add_option("--n", bo.n)->required();
    sb->add_option("--r", bo.r)->required();
    sb->add_option("--h", bo.h)->required();
    sb->add_option("--k", bo.k)->required();
    add_io_flags(sb, bo.c);
    sb->callback([&] {
        Run run;
        run.subcommand = "bounds";
        run.manifest_path = bo.c.manifest;
        run.params = {{"q", bo.q}, {"n", bo.n}, {"r", bo.r}, {"h", bo.h}, {"k", bo.k}};
        BoundReport rep = bound_report(bo.q, bo.n, bo.r, bo.h, bo.k);
        run.emit(bound_report_to_json(rep), bo.c.out, "out");
        std::cerr << "(h,k) = (" << bo.h << "," << bo.k << ") in V(" << bo.r << ", " << bo.q
                  << "^" << bo.n << ")\n";
        for (const auto& e : rep.entries) {
            std::cerr << "  " << e.name << ": ";
            if (!e.guard) {
                std::cerr << "not applicable\n";
            } else if (e.cardinality) {
                std::cerr << "|U| <= " << u128_to_string(e.value) << " (dim <= " << e.dim_value
                          << ")\n";
            } else {
                std::cerr << "dim <= " << e.dim_value << "\n";
            }
        }
        std::cerr << "binding: dim <= " << rep.binding << " (" << rep.binding_name << ")\n";
    });

    // ---- case-table ----
    struct {
        uint64_t q = 2;
        uint32_t n = 0;
        CommonFlags c;
    } ct;
    auto* sct = app.add_subcommand("case-table", "r = 3 case tables for n in {3,4,5}");
    sct->add_option("--q", ct.q)->required();
    sct->add_option("--n", ct.n, "restrict to one n (default: all of 3, 4, 5)");
    add_io_flags(sct, ct.c);
    sct->callback([&] {
        Run run;
        run.subcommand = "case-table";
        run.manifest_path = ct.c.manifest;
        run.params = {{"q", ct.q}, {"n", ct.n}};
        std::vector<uint32_t> ns = ct.n ? std::vector<uint32_t>{ct.n}
                                        : std::vector<uint32_t>{3, 4, 5};
        json out = json::array();
        for (uint32_t n : ns) {
            json rows = json::array();
            std::cerr << "V(3, " << ct.q << "^" << n << "):\n";
            for (const CaseRow& row : case_table(ct.q, n)) {
                rows.push_back({{"h", row.h},
                                {"k", row.k},
                                {"bound", row.report.binding},
                                {"binding_name", row.report.binding_name},
                                {"sharp", row.sharp},
                                {"attained_by", row.attained_by}});
                std::cerr << "  (" << row.h << "," << row.k << "): dim <= "
                          << row.report.binding << (row.sharp ? "  sharp, " : "  ")
                          << row.attained_by << "\n";
            }
            out.push_back({{"q", ct.q}, {"n", n}, {"r", 3}, {"rows", rows}});
        }
        run.emit(out, ct.c.out, "out");
    });

    // ---- search35 ----
    struct {
        uint32_t p = 2, s = 1;
        uint64_t lambda = 0, start = 1;
        std::string recipe = "auto";
        CommonFlags c;
        bool has_lambda = false;
    } se;
    auto* ss = app.add_subcommand(
        "search35", "search for scattered subspaces of dimension 7 in V(3, q^5), q = p^s");
    ss->add_option("--p", se.p, "characteristic")->required();
    ss->add_option("--s", se.s, "q = p^s")->required();
    auto* lam = ss->add_option("--lambda", se.lambda, "test this single exponent: lambda = xi^POW");
    ss->add_option("--recipe", se.recipe, "auto|square|frobenius")
        ->check(CLI::IsMember({"auto", "square", "frobenius"}));
    ss->add_option("--start", se.start, "first exponent of the scan (default 1)");
    add_sweep_flags(ss, se.c);
    add_io_flags(ss, se.c, true);
    ss->callback([&] {
        Run run;
        run.subcommand = "search35";
        run.manifest_path = se.c.manifest;
        run.workers = se.c.jobs;
        se.has_lambda = lam->count() > 0;
        run.params = {{"p", se.p},           {"s", se.s},       {"recipe", se.recipe},
                      {"start", se.start},   {"budget", se.c.budget}, {"jobs", se.c.jobs}};
        if (se.has_lambda) run.params["lambda"] = se.lambda;
        ScatteredCert cert = se.has_lambda
                                 ? scattered35_at(se.p, se.s, se.lambda, se.recipe, se.c.budget)
                                 : search35(se.p, se.s, se.start, se.c.budget, se.c.jobs,
                                            se.recipe);
        FqSubspace U = from_field_model(AmbientSpace::get(se.p, se.s, 5, 3), cert.basis);
        run.emit(scattered_cert_to_json(cert), se.c.cert, "cert");
        run.emit(subspace_to_json(U), se.c.out, "out");
        std::cerr << "lambda = xi^" << cert.lambda_exp << " (" << cert.recipe
                  << "): kernel dim " << cert.kernel_dim << ", max fiber dim "
                  << cert.max_fiber_dim << ", " << (cert.scattered ? "scattered" : "NOT scattered")
                  << "\n";
        if (!cert.scattered) rc = 3;
    });

    // ---- verify-table1 ----
    struct {
        uint32_t p = 2, s = 1;
        CommonFlags c;
    } vt;
    auto* sv = app.add_subcommand("verify-table1",
                                  "rebuild and re-verify the recorded lambda for (p, s)");
    sv->add_option("--p", vt.p)->required();
    sv->add_option("--s", vt.s)->required();
    sv->add_option("--budget", vt.c.budget, "max fiber points (default: EVASIVE_BUDGET or 10^7)");
    add_io_flags(sv, vt.c, true);
    sv->callback([&] {
        Run run;
        run.subcommand = "verify-table1";
        run.manifest_path = vt.c.manifest;
        run.params = {{"p", vt.p}, {"s", vt.s}, {"budget", vt.c.budget}};
        ScatteredCert sc35 = reproduce_table1(vt.p, vt.s, vt.c.budget);
        FqSubspace U = from_field_model(AmbientSpace::get(vt.p, vt.s, 5, 3), sc35.basis);
        EvasivenessCertificate ec = profile(U, 1, Strategy::fiber, vt.c.budget);
        run.emit(certificate_to_json(ec), vt.c.cert, "cert");
        run.emit(subspace_to_json(U), vt.c.out, "out");
        bool ok = ec.k_star == 1 && U.dim() == 7;
        std::cerr << "lambda = xi^" << sc35.lambda_exp << " (" << sc35.recipe << "): dim "
                  << U.dim() << ", k_star = " << ec.k_star
                  << (ok ? " -- scattered" : " -- NOT scattered") << "\n";
        if (!ok) rc = 3;
    });

    // ---- random-scan ----
    struct {
        uint32_t q = 2;
        uint64_t samples = 1000, seed = 0;
        CommonFlags c;
    } rs;
    auto* srs = app.add_subcommand("random-scan",
                                   "scattered fraction of random 7-dim subspaces of V(3, q^5)");
    srs->add_option("--q", rs.q, "2 or 3")->required();
    srs->add_option("--samples", rs.samples)->required();
    srs->add_option("--seed", rs.seed, "64-bit seed (default 0)");
    srs->add_option("--jobs", rs.c.jobs, "worker threads")->check(CLI::PositiveNumber);
    add_io_flags(srs, rs.c);
    srs->callback([&] {
        Run run;
        run.subcommand = "random-scan";
        run.manifest_path = rs.c.manifest;
        run.workers = rs.c.jobs;
        run.params = {{"q", rs.q}, {"samples", rs.samples}, {"seed", rs.seed}, {"jobs", rs.c.jobs}};
        ScanReport rep = random_scan(rs.q, rs.samples, rs.seed, rs.c.jobs);
        json out{{"q", rep.q},       {"samples", rep.samples},     {"hits", rep.hits},
                 {"fraction", rep.fraction}, {"wilson_lo", rep.wilson_lo},
                 {"wilson_hi", rep.wilson_hi}, {"seed", rs.seed}};
        run.emit(out, rs.c.out, "out");
        std::cerr << "scattered fraction at q = " << rep.q << ": " << 100.0 * rep.fraction
                  << "% (" << rep.hits << "/" << rep.samples << "), 95% CI ["
                  << 100.0 * rep.wilson_lo << "%, " << 100.0 * rep.wilson_hi << "%]\n";
    });

    // ---- qsystem ----
    struct {
        std::string in;
        CommonFlags c;
    } qs;
    auto* sq = app.add_subcommand("qsystem", "rank-metric q-system parameters of a subspace");
    sq->add_option("--in", qs.in, "subspace JSON file; '-' reads stdin")->required();
    sq->add_option("--strategy", qs.c.strategy, "auto|full|span|fiber");
    add_sweep_flags(sq, qs.c);
    add_io_flags(sq, qs.c);
    sq->callback([&] {
        Run run;
        run.subcommand = "qsystem";
        run.manifest_path = qs.c.manifest;
        run.workers = qs.c.jobs;
        run.params = {{"in", qs.in},           {"strategy", qs.c.strategy},
                      {"budget", qs.c.budget}, {"jobs", qs.c.jobs}};
        FqSubspace U = subspace_from_json(run.read_input(qs.in, "in"));
        QSystemParams sys =
            q_system_params(U, parse_strategy(qs.c.strategy), qs.c.budget, qs.c.jobs);
        run.emit(json{{"m", sys.m}, {"r", sys.r}, {"d", sys.d}}, qs.c.out, "out");
        std::cerr << "[" << sys.m << ", " << sys.r << ", " << sys.d << "] q-system\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Err::BudgetExceeded ? 4 : 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
