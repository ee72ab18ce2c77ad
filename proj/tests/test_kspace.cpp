#include <doctest.h>

#include <random>

#include "epc/kspace.hpp"
#include "testutil.hpp"

using namespace epc;
using namespace epc::kspace;
using core::System;
using core::SubjectFn;
using core::Trace;
using core::TraceSet;
using core::ValueSet;
using core::parse_trace;
using core::render_trace;
using testutil::kspace_lit;

static TraceSet traces(std::initializer_list<const char*> texts) {
    TraceSet out;
    for (const char* t : texts) out.insert(parse_trace(t));
    return out;
}

static Attacker all_t() {
    return Attacker("blind", [](const Trace&) { return std::string(); });
}
static Attacker full_obs() {
    return Attacker("full", [](const Trace& t) { return render_trace(t); });
}

TEST_CASE("attacker induced relation is the observation kernel") {
    TraceSet u = traces({"?c=0.!o=a", "?c=1.!o=a", "?c=2.!o=b"});
    Attacker last("last", [](const Trace& t) { return render_trace(Trace{{t.events.back()}}); });
    auto rel = last.induced_relation(u);
    CHECK(rel.block_count() == 2);
    CHECK(rel.same_block("?c=0.!o=a", "?c=1.!o=a"));
    CHECK(!rel.same_block("?c=0.!o=a", "?c=2.!o=b"));
    CHECK(rel.carrier().size() == u.size());
}

TEST_CASE("KSpace invariants") {
    CHECK_THROWS_AS(KSpace({"0", "1"}, {{}}), Error);          // empty member
    CHECK_THROWS_AS(KSpace({"0", "1"}, {{"0"}}), Error);       // no cover
    CHECK_THROWS_AS(KSpace({"0"}, {{"0", "1"}}), Error);       // outside domain
    CHECK(kspace_lit(2, "0;01").sets().size() == 2);
}

TEST_CASE("build_kspace") {
    TraceSet u = traces({"?c=0.!o=x", "?c=1.!o=x"});
    System s(u, u, SubjectFn::first_input());

    CHECK(build_kspace(s, all_t()) == kspace_lit(2, "01"));
    CHECK(build_kspace(s, full_obs()) == kspace_lit(2, "0;1"));

    System empty(u, {}, SubjectFn::first_input());
    CHECK_THROWS_AS(build_kspace(empty, all_t()), Error);
}

TEST_CASE("one-time pad: erasure attacker learns nothing") {
    // data,key over bits; attacker sees only the post-signal output
    TraceSet u;
    for (int d = 0; d < 2; ++d)
        for (int k = 0; k < 2; ++k) {
            std::string t = "?data=" + std::to_string(d) + ".?key=" + std::to_string(k) +
                            ".#erased.!out=" + std::to_string(d ^ k);
            u.insert(parse_trace(t));
        }
    System s(u, u, SubjectFn::first_input());
    Attacker as("AS", [](const Trace& t) {
        for (size_t i = 0; i < t.events.size(); ++i)
            if (t.events[i].kind == core::EventKind::Signal)
                return render_trace(Trace{{t.events.begin() + i + 1, t.events.end()}});
        return std::string("#absent#");
    });
    KSpace k = build_kspace(s, as);
    CHECK(k == kspace_lit(2, "01")); // { V }
}

TEST_CASE("pointwise deduction predicates") {
    ValueSet v4{"1", "2", "3", "4"};
    CHECK(confirms({"1", "2"}, {"1", "2", "3"}));
    CHECK(!confirms({"1", "2"}, {"1"}));
    CHECK(has_uncertainty({"1", "2", "3"}, {"1", "2"}));
    CHECK(!answers({"1", "2"}, {"1"}, v4));
    CHECK(answers({"1", "2"}, {"1", "2"}, v4));
    CHECK(answers({"3"}, {"1"}, v4)); // via the complement

    ValueSet v = v4;
    CHECK(confirms(v, v));
    CHECK(has_uncertainty(v, v));
    CHECK(answers(v, v, v));
}

TEST_CASE("lifted deduction predicates") {
    KSpace top = kspace_lit(3, "012");
    CHECK(can_confirm(top, {"0", "1", "2"}));
    CHECK(!can_confirm(top, {"0", "1"}));

    KSpace singles = kspace_lit(3, "0;1;2");
    for (const Fact& q : std::vector<Fact>{{}, {"0"}, {"1", "2"}, {"0", "1", "2"}})
        CHECK(will_answer(singles, q));

    KSpace k = kspace_lit(4, "0;123"); // {{1},{2,3,4}} with 0-based digits
    CHECK(can_answer(k, {"1", "2", "3"}));
    CHECK(will_answer(k, {"1", "2", "3"}));
    CHECK(can_answer(k, {"1"}));
    CHECK(!will_answer(k, {"1"}));

    CHECK_THROWS_AS(can_confirm(top, {"9"}), Error);
    CHECK_THROWS_AS(will_answer(top, {"9"}), Error);
}

TEST_CASE("secrecy") {
    TraceSet u = traces({"?c=0.!o=0", "?c=1.!o=1", "?c=2.!o=2"});
    System s(u, u, SubjectFn::first_input());
    CHECK(keeps_fact_secret(s, all_t(), {"0", "1"}));
    CHECK(!keeps_fact_secret(s, full_obs(), {"0"}));
    CHECK(keeps_query_secret(s, all_t(), {"0"}));
    CHECK(!keeps_query_secret(s, all_t(), {"0", "1", "2"}));
    CHECK(!keeps_query_secret(s, all_t(), {}));
}

TEST_CASE("build_kspace covers the domain; functional systems partition it") {
    std::mt19937 rng(90125);
    for (int trial = 0; trial < 300; ++trial) {
        int nv = 2 + trial % 4;
        int width = 1 + trial % 3;
        TraceSet u;
        std::uniform_int_distribution<int> val(0, nv - 1);
        std::uniform_int_distribution<int> obs(0, 2);
        for (int i = 0; i < nv * width; ++i) {
            std::string t = "?c=" + std::to_string(i % nv) + ".!o=" + std::to_string(val(rng)) +
                            ".!p=" + std::to_string(i);
            u.insert(parse_trace(t));
        }
        System s(u, u, SubjectFn::first_input());
        Attacker a("rnd", [&, salt = trial](const Trace& t) {
            return std::to_string(std::hash<std::string>{}(render_trace(t) + "#" +
                                                           std::to_string(salt)) %
                                  3);
        });
        KSpace k = build_kspace(s, a);
        ValueSet covered;
        for (const auto& x : k.sets()) {
            CHECK(!x.empty());
            covered.insert(x.begin(), x.end());
        }
        CHECK(covered == subject_domain(s));

        // keep only one trace per subject: functional, so the K-space is a
        // partition of its domain
        TraceSet fn;
        ValueSet seen;
        for (const Trace& t : u)
            if (seen.insert(s.subject.eval(t)).second) fn.insert(t);
        System sf(u, fn, SubjectFn::first_input());
        REQUIRE(core::is_functional(sf));
        CHECK(build_kspace(sf, a).is_partition());
    }
}

TEST_CASE("printing") {
    CHECK(kspace_lit(3, "02;1").to_string() == "{0 2}\n{1}\n");
}
