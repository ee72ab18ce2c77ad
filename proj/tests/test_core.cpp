#include <doctest.h>

#include "epc/core.hpp"
#include "testutil.hpp"

using namespace epc;
using namespace epc::core;

TEST_CASE("event and trace rendering") {
    CHECK(render_event(input_event("cc", "07")) == "?cc=07");
    CHECK(render_event(output_event("log", "7")) == "!log=7");
    CHECK(render_event(signal_event("erased")) == "#erased");

    Trace t{{input_event("cc", "07"), output_event("log", "7"), signal_event("erased"),
             output_event("dump", "null")}};
    CHECK(render_trace(t) == "?cc=07.!log=7.#erased.!dump=null");
    CHECK(render_trace(Trace{}) == "");
}

TEST_CASE("parse_trace inverts render_trace") {
    for (const char* text : {"?cc=07.!log=7.#erased.!dump=null", "?c=0.#e", "!out=1", "#go"}) {
        Trace t = parse_trace(text);
        CHECK(render_trace(t) == text);
    }
    Trace t = parse_trace("?cc=07.#erased");
    REQUIRE(t.events.size() == 2);
    CHECK(t.events[0].kind == EventKind::Input);
    CHECK(t.events[0].channel == "cc");
    CHECK(t.events[0].value == "07");
    CHECK(t.events[1].kind == EventKind::Signal);
    CHECK(t.events[1].channel == "erased");
}

TEST_CASE("canonical trace order is lexicographic on the rendering") {
    TraceSet s;
    s.insert(parse_trace("?c=1.#e"));
    s.insert(parse_trace("?c=0.#e"));
    std::vector<std::string> rendered;
    for (const Trace& t : s) rendered.push_back(render_trace(t));
    CHECK(rendered == std::vector<std::string>{"?c=0.#e", "?c=1.#e"});
}

static TraceSet traces(std::initializer_list<const char*> texts) {
    TraceSet out;
    for (const char* t : texts) out.insert(parse_trace(t));
    return out;
}

TEST_CASE("subject selectors") {
    Trace t = parse_trace("?cc=07.?choice=allow.!log=7");
    CHECK(SubjectFn::first_input().eval(t) == "07");
    CHECK(SubjectFn::first_input_on_channel("choice").eval(t) == "allow");
    CHECK(SubjectFn::kth_input(2).eval(t) == "allow");
    CHECK(SubjectFn::constant("x").eval(t) == "x");

    Trace no_input = parse_trace("!log=7.#erased");
    CHECK_THROWS_AS(SubjectFn::first_input().eval(no_input), Error);
    CHECK_THROWS_AS(SubjectFn::kth_input(3).eval(t), Error);
    CHECK_THROWS_AS(SubjectFn::first_input_on_channel("nope").eval(t), Error);
}

TEST_CASE("subject_domain is the exact image") {
    TraceSet u = traces({"?c=0.#e", "?c=1.#e"});
    System s(u, u, SubjectFn::first_input());
    CHECK(subject_domain(s) == ValueSet{"0", "1"});

    System empty(u, {}, SubjectFn::first_input());
    CHECK(subject_domain(empty).empty());
}

TEST_CASE("restrict_universe filters by subject") {
    TraceSet u = traces({"?c=0.#e", "?c=1.#e"});
    auto phi = SubjectFn::first_input();
    CHECK(restrict_universe(u, phi, {"0"}) == traces({"?c=0.#e"}));
    CHECK(restrict_universe(u, phi, {}).empty());
    CHECK(restrict_universe(u, phi, {"0", "1"}) == u);
}

TEST_CASE("is_functional") {
    TraceSet inj = traces({"?c=0.!o=0", "?c=1.!o=1"});
    CHECK(is_functional(System(inj, inj, SubjectFn::first_input())));

    TraceSet shared = traces({"?c=0.!o=0", "?c=0.!o=1"});
    CHECK(!is_functional(System(shared, shared, SubjectFn::first_input())));
}

TEST_CASE("system traces must lie in the universe") {
    TraceSet u = traces({"?c=0.#e"});
    CHECK_THROWS_AS(System(u, traces({"?c=1.#e"}), SubjectFn::first_input()), Error);
}

TEST_CASE("restriction to the subject domain contains the system") {
    TraceSet u = traces({"?c=0.!o=a", "?c=0.!o=b", "?c=1.!o=a", "?c=2.!o=c"});
    System s(u, traces({"?c=0.!o=a", "?c=1.!o=a"}), SubjectFn::first_input());
    TraceSet tv = restrict_universe(u, s.subject, subject_domain(s));
    for (const Trace& t : s.traces) CHECK(tv.count(t) == 1);
}

TEST_CASE("restriction distributes over a partition of the domain") {
    TraceSet u = traces({"?c=0.!o=a", "?c=0.!o=b", "?c=1.!o=a", "?c=2.!o=c", "?c=3.#e"});
    auto phi = SubjectFn::first_input();
    ValueSet v{"0", "1", "2", "3"};
    std::vector<ValueSet> blocks{{"0", "2"}, {"1"}, {"3"}};
    TraceSet unioned;
    size_t total = 0;
    for (const ValueSet& w : blocks) {
        TraceSet tw = restrict_universe(u, phi, w);
        total += tw.size();
        unioned.insert(tw.begin(), tw.end());
    }
    CHECK(unioned == restrict_universe(u, phi, v));
    CHECK(total == unioned.size()); // blocks of T_V are disjoint

    // monotone in W
    CHECK(restrict_universe(u, phi, {"0"}).size() <= restrict_universe(u, phi, {"0", "1"}).size());
}

TEST_CASE("functional systems have one trace per subject value") {
    TraceSet u = traces({"?c=0.!o=0", "?c=1.!o=1", "?c=2.!o=0"});
    System s(u, u, SubjectFn::first_input());
    REQUIRE(is_functional(s));
    CHECK(s.traces.size() == subject_domain(s).size());
}
