#include "epc/core.hpp"

#include <sstream>

namespace epc::core {

Event input_event(std::string channel, Value value) {
    return Event{EventKind::Input, std::move(channel), std::move(value)};
}

Event output_event(std::string channel, Value value) {
    return Event{EventKind::Output, std::move(channel), std::move(value)};
}

Event signal_event(std::string name) {
    return Event{EventKind::Signal, std::move(name), {}};
}

std::string render_event(const Event& e) {
    switch (e.kind) {
    case EventKind::Input: return "?" + e.channel + "=" + e.value;
    case EventKind::Output: return "!" + e.channel + "=" + e.value;
    case EventKind::Signal: return "#" + e.channel;
    }
    return {};
}

std::string render_trace(const Trace& t) {
    std::string out;
    for (size_t i = 0; i < t.events.size(); ++i) {
        if (i) out += '.';
        out += render_event(t.events[i]);
    }
    return out;
}

Trace parse_trace(const std::string& text) {
    Trace t;
    if (text.empty()) return t;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t dot = text.find('.', pos);
        std::string tok = text.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (tok.empty())
            fail(ErrorKind::SyntaxError, "empty event in trace literal '" + text + "'");
        char head = tok[0];
        std::string body = tok.substr(1);
        if (head == '#') {
            if (body.empty())
                fail(ErrorKind::SyntaxError, "signal event with empty name in '" + text + "'");
            t.events.push_back(signal_event(body));
        } else if (head == '?' || head == '!') {
            size_t eq = body.find('=');
            if (eq == std::string::npos || eq == 0)
                fail(ErrorKind::SyntaxError, "expected '<channel>=<value>' in event '" + tok + "'");
            std::string channel = body.substr(0, eq);
            std::string value = body.substr(eq + 1);
            t.events.push_back(head == '?' ? input_event(channel, value)
                                           : output_event(channel, value));
        } else {
            fail(ErrorKind::SyntaxError, "event must start with '?', '!' or '#': '" + tok + "'");
        }
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return t;
}

SubjectFn SubjectFn::first_input() {
    return SubjectFn{};
}

SubjectFn SubjectFn::first_input_on_channel(std::string channel) {
    SubjectFn f;
    f.kind_ = Kind::FirstOnChannel;
    f.channel_ = std::move(channel);
    return f;
}

SubjectFn SubjectFn::kth_input(int k) {
    if (k < 1) fail(ErrorKind::ExprError, "input index must be >= 1");
    SubjectFn f;
    f.kind_ = Kind::KthInput;
    f.k_ = k;
    return f;
}

SubjectFn SubjectFn::constant(Value v) {
    SubjectFn f;
    f.kind_ = Kind::Constant;
    f.constant_ = std::move(v);
    return f;
}

Value SubjectFn::eval(const Trace& t) const {
    switch (kind_) {
    case Kind::Constant:
        return constant_;
    case Kind::FirstInput:
        for (const Event& e : t.events)
            if (e.kind == EventKind::Input) return e.value;
        break;
    case Kind::FirstOnChannel:
        for (const Event& e : t.events)
            if (e.kind == EventKind::Input && e.channel == channel_) return e.value;
        break;
    case Kind::KthInput: {
        int seen = 0;
        for (const Event& e : t.events)
            if (e.kind == EventKind::Input && ++seen == k_) return e.value;
        break;
    }
    }
    fail(ErrorKind::SubjectUndefined,
         "subject selector " + describe() + " undefined on trace '" + render_trace(t) + "'");
}

std::string SubjectFn::describe() const {
    switch (kind_) {
    case Kind::FirstInput: return "first_input";
    case Kind::FirstOnChannel: return "input on " + channel_;
    case Kind::KthInput: return "input " + std::to_string(k_);
    case Kind::Constant: return "const " + constant_;
    }
    return {};
}

System::System(TraceSet universe_, TraceSet traces_, SubjectFn subject_)
    : universe(std::move(universe_)), traces(std::move(traces_)), subject(std::move(subject_)) {
    for (const Trace& t : traces)
        if (!universe.count(t))
            fail(ErrorKind::DomainMismatch,
                 "system trace '" + render_trace(t) + "' is not in the universe");
}

ValueSet subject_domain(const System& s) {
    ValueSet out;
    for (const Trace& t : s.traces) out.insert(s.subject.eval(t));
    return out;
}

TraceSet restrict_universe(const TraceSet& universe, const SubjectFn& subject,
                           const ValueSet& allowed) {
    TraceSet out;
    for (const Trace& t : universe)
        if (allowed.count(subject.eval(t))) out.insert(t);
    return out;
}

bool is_functional(const System& s) {
    ValueSet seen;
    for (const Trace& t : s.traces)
        if (!seen.insert(s.subject.eval(t)).second) return false;
    return true;
}

} // namespace epc::core
