#include <doctest.h>

#include <fstream>
#include <sstream>

#include "epc/runner.hpp"
#include "epc/speclang.hpp"

using namespace epc;
using namespace epc::speclang;
using core::parse_trace;
using core::render_trace;
using core::Trace;
using core::TraceSet;

static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

static std::string corpus_file(const std::string& name) {
    return slurp(std::string(EPC_CORPUS_DIR) + "/" + name);
}

static const char* kXorSpec = R"(domain Bit = { 0 1 }

system otp {
  input data : Bit
  input key : Bit
  let c = xor(data,key)
  signal erased
  output out = c
}
subject otp = first_input

attacker AS = after_signal(erased)

policy TOTAL = type0 Bit const
)";

TEST_CASE("parsing a small spec") {
    SpecModel m = parse_spec(kXorSpec);
    CHECK(m.domains.size() == 1);
    CHECK(m.systems.size() == 1);
    CHECK(m.attackers.size() == 1);
    CHECK(m.policies.size() == 1);
    CHECK(m.domain("Bit") == std::vector<Value>{"0", "1"});
    CHECK_THROWS_AS(m.domain("Nope"), Error);
    CHECK_THROWS_AS(m.system("nope"), Error);
}

TEST_CASE("parse diagnostics") {
    CHECK_THROWS_AS(parse_spec("system s {\n  input x : CCX\n}\n"), Error);   // unknown domain
    CHECK_THROWS_AS(parse_spec("domain D = { a }\ndomain D = { b }\n"), Error); // duplicate
    CHECK_THROWS_AS(parse_spec("domain D =\n"), Error);                        // syntax
    CHECK_THROWS_AS(parse_spec("policy P = type0 D const\n"), Error);          // unknown domain
}

TEST_CASE("range domains are zero padded and ordered") {
    SpecModel m = parse_spec("domain CC = 00..99\n");
    const auto& cc = m.domain("CC");
    REQUIRE(cc.size() == 100);
    CHECK(cc.front() == "00");
    CHECK(cc.back() == "99");
    CHECK(cc[7] == "07");
}

TEST_CASE("expand_process") {
    SpecModel m = parse_spec(kXorSpec);
    TraceSet ts = expand_process(m.system("otp").process, m);
    CHECK(ts.size() == 4);
    CHECK(ts.count(parse_trace("?data=1.?key=1.#erased.!out=0")) == 1);
    CHECK(ts.count(parse_trace("?data=0.?key=1.#erased.!out=1")) == 1);
}

TEST_CASE("listing fixtures expand as analysed") {
    SpecModel m2 = parse_spec(corpus_file("listing2.eps"));
    System vend = build_system(m2, "vend");
    CHECK(vend.traces.size() == 100);
    for (const Trace& t : vend.traces) {
        std::string r = render_trace(t);
        std::string cc = r.substr(4, 2);
        CHECK(r.find("!log=" + cc.substr(1)) != std::string::npos);
        CHECK(r.find("#erased") != std::string::npos);
    }

    SpecModel m4 = parse_spec(corpus_file("listing4.eps"));
    System vend4 = build_system(m4, "vend");
    // stealth cards have no choice input; the rest branch over two choices
    size_t stealth = 0, open = 0;
    for (const Trace& t : vend4.traces) {
        std::string r = render_trace(t);
        bool has_choice = r.find("?choice=") != std::string::npos;
        std::string cc = r.substr(4, 2);
        if (cc[0] == '0') {
            CHECK(!has_choice);
            ++stealth;
        } else {
            CHECK(has_choice);
            ++open;
        }
    }
    CHECK(stealth == 10);
    CHECK(open == 180);
}

TEST_CASE("explicit trace lists and universe widening") {
    const char* text = R"(domain B = { 0 1 }
system s traces {
  ?c=0.!o=0
  ?c=1.!o=0
}
universe s {
  ?c=0.!o=1
}
subject s = first_input
)";
    SpecModel m = parse_spec(text);
    System s = build_system(m, "s");
    CHECK(s.traces.size() == 2);
    CHECK(s.universe.size() == 3);
}

TEST_CASE("attacker semantics") {
    SpecModel m = parse_spec(kXorSpec);
    System s = build_system(m, "otp");
    kspace::Attacker as = build_attacker(m, "AS", s.universe);
    CHECK(as.observe(parse_trace("?data=0.?key=1.#erased.!out=1")) == "!out=1");

    SpecModel m2 = parse_spec(corpus_file("listing2.eps"));
    System vend = build_system(m2, "vend");
    kspace::Attacker full = build_attacker(m2, "Full", vend.universe);
    auto t = *vend.traces.begin();
    CHECK(full.observe(t) == render_trace(t));

    // observing the log channel groups traces by logged digit
    SpecModel mlog = parse_spec(std::string(corpus_file("listing2.eps")) +
                                "attacker Log = channels(log)\n");
    kspace::Attacker log = build_attacker(mlog, "Log", vend.universe);
    CHECK(log.observe(parse_trace("?cc=17.!charge=17.!log=7.#erased.!dump=7")) ==
          log.observe(parse_trace("?cc=27.!charge=27.!log=7.#erased.!dump=7")));
    auto rel = log.induced_relation(vend.universe);
    CHECK(rel.block_count() == 10);
}

TEST_CASE("after_signal on a marker-free trace is its own class") {
    const char* text = R"(domain B = { 0 1 }
system s traces {
  ?c=0.#go.!o=0
  ?c=1.!o=1
}
subject s = first_input
attacker A = after_signal(go)
)";
    SpecModel m = parse_spec(text);
    System s = build_system(m, "s");
    kspace::Attacker a = build_attacker(m, "A", s.universe);
    CHECK(a.observe(parse_trace("?c=0.#go.!o=0")) == "!o=0");
    CHECK(a.observe(parse_trace("?c=1.!o=1")) != a.observe(parse_trace("?c=0.#go.!o=0")));
}

TEST_CASE("unknown signal names are rejected") {
    SpecModel m = parse_spec(std::string(kXorSpec) + "attacker Bad = after_signal(nope)\n");
    System s = build_system(m, "otp");
    CHECK_THROWS_AS(build_attacker(m, "Bad", s.universe), Error);
}

TEST_CASE("classifier evaluation") {
    SpecModel m2 = parse_spec(corpus_file("listing2.eps"));
    const auto& l4 = std::get<Type0Def>(m2.policy("L4").node);
    CHECK(eval_classifier(l4.classifier, "07", m2) == "7");
    CHECK(eval_classifier(l4.classifier, "17", m2) == "7");

    SpecModel m4 = parse_spec(corpus_file("listing4.eps"));
    const auto& p2 = std::get<Type2Def>(m4.policy("P2").node);
    CHECK(eval_classifier(p2.cases, "07", m4) == "true");
    CHECK(eval_classifier(p2.cases, "17", m4) == "false");

    SpecModel m3 = parse_spec(corpus_file("listing3.eps"));
    const auto& p1 = std::get<Type1Def>(m3.policy("P1").node);
    CHECK(eval_classifier(p1.condition,
                          "?cc=07.!charge=07.?choice=allow.!log=7.#erased.!dump=7", m3) ==
          "true");
    CHECK(eval_classifier(p1.condition,
                          "?cc=07.!charge=07.?choice=deny.!log=null.#erased.!dump=null", m3) ==
          "false");
}

TEST_CASE("policy instantiation on the fixtures") {
    SpecModel m4 = parse_spec(corpus_file("listing4.eps"));
    System vend = build_system(m4, "vend");
    const auto& def = std::get<Type2Def>(m4.policy("P2").node);
    policy::Type2Policy p2 = instantiate_type2(m4, def, vend);
    CHECK(p2.cases.block_count() == 2);
    REQUIRE(p2.sub_policies.size() == 2);
    // canonical case order: stealth block {00..09} first
    CHECK(p2.cases.blocks()[0].front() == "00");
    CHECK(p2.sub_policies[0].condition.block_count() == 1);
    CHECK(p2.sub_policies[1].condition.block_count() == 2);
}

TEST_CASE("bound_of_policy") {
    SpecModel m3 = parse_spec(corpus_file("listing3.eps"));
    // meet(last-digit, All) = last-digit
    partitions::Partition b = bound_of_policy(m3, "P1");
    CHECK(b.block_count() == 10);
    CHECK(b.same_block("07", "17"));
    CHECK(!b.same_block("07", "16"));

    SpecModel m4 = parse_spec(corpus_file("listing4.eps"));
    partitions::Partition b2 = bound_of_policy(m4, "P2");
    CHECK(b2.block_count() == 11);
    CHECK(b2.same_block("00", "09")); // stealth cards form one class
    CHECK(b2.same_block("17", "97"));
    CHECK(!b2.same_block("00", "17"));
    CHECK(!b2.same_block("17", "16"));
}

TEST_CASE("round trip through the printer") {
    std::vector<std::string> texts{kXorSpec};
    for (const char* f : {"listing1.eps", "listing2.eps", "listing3.eps", "listing4.eps",
                          "listing5.eps"})
        texts.push_back(corpus_file(f));
    for (const std::string& text : texts) {
        std::string once = print_spec(parse_spec(text));
        std::string twice = print_spec(parse_spec(once));
        CHECK(once == twice);
    }
}

TEST_CASE("expansion is deterministic") {
    SpecModel m = parse_spec(corpus_file("listing4.eps"));
    System a = build_system(m, "vend");
    System b = build_system(m, "vend");
    CHECK(a.traces == b.traces);
    CHECK(a.universe == b.universe);
}

TEST_CASE("every corpus fixture checks cleanly through the runner") {
    runner::Outcome out = runner::run_corpus(EPC_CORPUS_DIR, kspace::kDefaultCap);
    CHECK(out.exit_code == 0);
    CHECK(out.report.find("0 mismatches") != std::string::npos);
}
