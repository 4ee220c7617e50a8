#include "fixtures.hpp"

#include "tfnorm/constraints.hpp"
#include "tfnorm/error.hpp"
#include "tfnorm/lm.hpp"
#include "tfnorm/random.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <set>
#include <sstream>

using namespace tfnorm;
using doctest::Approx;
using fixtures::doc;

TEST_CASE("make_k_verbose") {
    const auto p = fixtures::unstemmed();
    const Document d1 = build_document("D1", fixtures::kD1, p);
    const Document d2 = build_document("D2", fixtures::kD2, p);
    const Document v = make_k_verbose(d1, 2);
    CHECK(v.tf() == d2.tf());
    CHECK(v.length() == d2.length());
    CHECK(v.info_quantity() == d2.info_quantity());

    CHECK(make_k_verbose(d1, 1) == d1);
    const Document s = make_k_verbose(doc("x", {{"a", 2}, {"b", 1}}), 3);
    CHECK(s.tf() == TermCounts{{"a", 6}, {"b", 3}});
    CHECK(s.length() == 9);
    CHECK_THROWS_AS(make_k_verbose(d1, 0), Error);
}

TEST_CASE("make_k_verbose preserves topic measures") {
    Rng rng(4);
    for (int i = 0; i < 300; ++i) {
        TermCounts tf;
        const auto n = rng.between(1, 25);
        for (std::uint64_t j = 0; j < n; ++j) tf["w" + std::to_string(j)] = rng.between(1, 7);
        const Document d = doc("d", tf);
        const Document v = make_k_verbose(d, rng.between(1, 9));
        CHECK(v.vocab_size() == d.vocab_size());
        CHECK(v.info_quantity() == Approx(d.info_quantity()).epsilon(1e-12));
    }
}

TEST_CASE("make_n_topical") {
    const auto p = fixtures::unstemmed();
    const Document d1 = build_document("D1", fixtures::kD1, p);
    const Document d3 = build_document("D3", fixtures::kD3, p);
    const Document t = make_n_topical(d1, 2, {"information", "retrieval", "model"});
    CHECK(t.tf() == d3.tf());
    CHECK(t.length() == d3.length());
    CHECK(t.info_quantity() == d3.info_quantity());

    CHECK(make_n_topical(d1, 1, {}) == d1);

    const Document u = make_n_topical(doc("u", {{"a", 2}, {"b", 2}}), 3, {"c", "d", "e", "f"});
    CHECK(u.length() == 12);
    CHECK(u.info_quantity() == Approx(6.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_n_topical(doc("x", {{"a", 2}, {"b", 1}}), 2, {"c", "d"}), Error);
    CHECK_THROWS_AS(make_n_topical(d1, 2, {"information", "retrieval"}), Error);
    CHECK_THROWS_AS(make_n_topical(d1, 2, {"information", "retrieval", "language"}), Error);
    CHECK_THROWS_AS(make_n_topical(d1, 2, {"information", "retrieval", "retrieval"}), Error);
    CHECK_THROWS_AS(make_n_topical(d1, 0, {}), Error);
}

TEST_CASE("make_n_topical scales the information quantity by N") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        TermCounts tf;
        const auto n = rng.between(1, 12);
        const Count c = rng.between(1, 5);
        for (std::uint64_t j = 0; j < n; ++j) tf["w" + std::to_string(j)] = c;
        const Document d = doc("d", tf);
        const Count big_n = rng.between(1, 5);
        std::vector<std::string> fillers;
        for (std::uint64_t j = 0; j < (big_n - 1) * n; ++j) fillers.push_back("f" + std::to_string(j));
        const Document t = make_n_topical(d, big_n, fillers);
        CHECK(t.info_quantity() == Approx(static_cast<double>(big_n) * d.info_quantity()).epsilon(1e-12));
        CHECK(t.vocab_size() == big_n * d.vocab_size());
        CHECK(t.length() == big_n * d.length());
    }
}

TEST_CASE("generated instances") {
    SuiteOptions opts;
    opts.corpora = 3;
    opts.instances_per_corpus = 20;
    for (Constraint c : {Constraint::VNC, Constraint::TNC}) {
        const auto inst = generate_instances(c, opts);
        CHECK(inst.size() == 1 + 3 * 20);
        // The first instance is the three-document example.
        CHECK(inst.front().doc.id() == "D1");
        CHECK(inst.front().stats->doc_count == 3);
        for (const auto& i : inst) {
            CHECK(i.factor >= 2);
            CHECK(i.stats->doc_count <= 50);
            CHECK(i.stats->ctf.size() <= 200 + 3);
            CHECK_FALSE(i.query.terms.empty());
            if (c == Constraint::TNC) {
                std::set<Count> counts;
                for (const auto& [t, n] : i.doc.tf()) counts.insert(n);
                CHECK(counts.size() == 1);
                CHECK(i.fillers.size() == (i.factor - 1) * i.doc.vocab_size());
                CHECK_NOTHROW(i.transformed(c));
            } else {
                CHECK(i.transformed(c).length() == i.factor * i.doc.length());
            }
        }
        // Seeded: the same options give the same instances.
        const auto again = generate_instances(c, opts);
        REQUIRE(again.size() == inst.size());
        for (std::size_t k = 0; k < inst.size(); ++k) {
            CHECK(again[k].doc == inst[k].doc);
            CHECK(again[k].query.terms == inst[k].query.terms);
            CHECK(again[k].fillers == inst[k].fillers);
            CHECK(*again[k].stats == *inst[k].stats);
        }
    }
}

TEST_CASE("check_constraint verdicts on the default suite") {
    const auto vnc = generate_instances(Constraint::VNC);
    const auto tnc = generate_instances(Constraint::TNC);
    CHECK(vnc.size() >= 1000);
    CHECK(tnc.size() >= 1000);

    const auto jm_vnc = check_constraint(axiom_settings(Method::JM), Constraint::VNC, vnc);
    CHECK(jm_vnc.verdict == Verdict::Satisfied);
    CHECK(jm_vnc.max_residual <= kConstraintTolerance);
    CHECK_FALSE(jm_vnc.witness);

    const auto dir_vnc = check_constraint(axiom_settings(Method::Dir), Constraint::VNC, vnc);
    CHECK(dir_vnc.verdict == Verdict::Violated);
    REQUIRE(dir_vnc.witness);
    CHECK(dir_vnc.witness->residual > kViolationThreshold);
    CHECK(dir_vnc.witness->residual == dir_vnc.max_residual);
    CHECK(std::abs(dir_vnc.witness->original - dir_vnc.witness->transformed) == Approx(dir_vnc.witness->residual));

    const auto jmv_tnc = check_constraint(axiom_settings(Method::JMV), Constraint::TNC, tnc);
    CHECK(jmv_tnc.verdict == Verdict::Satisfied);
    CHECK(jmv_tnc.instances == tnc.size() * axiom_settings(Method::JMV).size());
}

TEST_CASE("JM loses score under the N-topical transform") {
    const auto tnc = generate_instances(Constraint::TNC);
    for (const auto& i : tnc) {
        const Document t = i.transformed(Constraint::TNC);
        for (double lambda : {0.1, 0.5, 0.9}) {
            const double before = score_jm(i.query, i.doc, *i.stats, lambda);
            const double after = score_jm(i.query, t, *i.stats, lambda);
            bool matched = false;
            for (const auto& [w, n] : i.query.terms) matched = matched || (i.doc.tf(w) > 0 && i.stats->cf(w) > 0);
            if (matched) CHECK(after < before);
            else CHECK(after == before);
        }
    }
}

TEST_CASE("expected verdict matrix") {
    CHECK(expected_verdict(Method::JM, Constraint::VNC) == Expectation::Satisfied);
    CHECK(expected_verdict(Method::JM, Constraint::TNC) == Expectation::Violated);
    CHECK(expected_verdict(Method::Dir, Constraint::VNC) == Expectation::Violated);
    CHECK(expected_verdict(Method::Dir, Constraint::TNC) == Expectation::Violated);
    CHECK(expected_verdict(Method::JMV, Constraint::VNC) == Expectation::Satisfied);
    CHECK(expected_verdict(Method::JMV, Constraint::TNC) == Expectation::Satisfied);
    CHECK(expected_verdict(Method::JMV2, Constraint::VNC) == Expectation::Satisfied);
    CHECK(expected_verdict(Method::JMV2, Constraint::TNC) == Expectation::ReportOnly);
    CHECK(expected_verdict(Method::DirV, Constraint::VNC) == Expectation::Satisfied);
    CHECK(expected_verdict(Method::DirV, Constraint::TNC) == Expectation::Violated);
}

TEST_CASE("axiom suite holds and is deterministic across worker counts") {
    const AxiomReport serial = run_axiom_suite({}, 1);
    const AxiomReport parallel = run_axiom_suite({}, 4);
    CHECK(serial.matrix_holds());
    REQUIRE(serial.checks.size() == 10);
    for (const auto& c : serial.checks) CHECK(c.holds);

    std::ostringstream a, b, ja, jb;
    write_table(a, serial);
    write_table(b, parallel);
    write_json(ja, serial);
    write_json(jb, parallel);
    CHECK(a.str() == b.str());
    CHECK(ja.str() == jb.str());

    const auto j = nlohmann::json::parse(ja.str());
    CHECK(j["matrix_holds"] == true);
    REQUIRE(j["records"].size() == 10);
    for (const auto& rec : j["records"]) {
        CHECK(rec.contains("scorer"));
        CHECK(rec.contains("constraint"));
        CHECK(rec.contains("max_residual"));
        if (rec["verdict"] == "violated") CHECK(rec["witness"].is_object());
        else CHECK(rec["witness"].is_null());
    }
}

TEST_CASE("a different seed gives different instances and the same matrix") {
    SuiteOptions opts;
    opts.seed = 17;
    const auto a = generate_instances(Constraint::VNC);
    const auto b = generate_instances(Constraint::VNC, opts);
    bool differ = false;
    for (std::size_t i = 1; i < std::min(a.size(), b.size()); ++i) differ = differ || !(a[i].doc == b[i].doc);
    CHECK(differ);
    CHECK(run_axiom_suite(opts, 4).matrix_holds());
}
