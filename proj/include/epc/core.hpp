#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epc/error.hpp"

namespace epc::core {

/// Values are carried in rendered form: symbols as-is, bounded integers
/// zero-padded to their declared width. Canonical order is lexicographic
/// on the rendered string, which agrees with numeric order at fixed width.
using Value = std::string;

enum class EventKind { Input, Output, Signal };

struct Event {
    EventKind kind;
    std::string channel; // signal name for Signal events
    Value value;         // empty for Signal events

    auto operator<=>(const Event&) const = default;
};

Event input_event(std::string channel, Value value);
Event output_event(std::string channel, Value value);
Event signal_event(std::string name);

/// `?c=v` / `!c=v` / `#name`
std::string render_event(const Event& e);

struct Trace {
    std::vector<Event> events;

    auto operator<=>(const Trace&) const = default;
};

/// Events joined by `.`; the empty trace renders as the empty string.
std::string render_trace(const Trace& t);

/// Inverse of render_trace for the concrete syntax above.
Trace parse_trace(const std::string& text);

/// Total ordering used everywhere traces are printed or canonicalized.
struct TraceLess {
    bool operator()(const Trace& a, const Trace& b) const {
        return render_trace(a) < render_trace(b);
    }
};

using TraceSet = std::set<Trace, TraceLess>;
using ValueSet = std::set<Value>;

/// Maps a trace to its policy subject. Total on the universe it is applied
/// to; eval throws SubjectUndefined otherwise.
class SubjectFn {
public:
    static SubjectFn first_input();
    static SubjectFn first_input_on_channel(std::string channel);
    static SubjectFn kth_input(int k); // 1-based
    static SubjectFn constant(Value v);

    Value eval(const Trace& t) const;
    std::string describe() const;

private:
    enum class Kind { FirstInput, FirstOnChannel, KthInput, Constant };
    Kind kind_ = Kind::FirstInput;
    std::string channel_;
    int k_ = 1;
    Value constant_;
};

/// A finite system: the ambient trace universe T, the maximal traces S ⊆ T,
/// and the subject function.
struct System {
    TraceSet universe;
    TraceSet traces;
    SubjectFn subject;

    System(TraceSet universe, TraceSet traces, SubjectFn subject);
};

/// The image of the subject function over the system's traces.
ValueSet subject_domain(const System& s);

/// { t ∈ T | Φ(t) ∈ W }
TraceSet restrict_universe(const TraceSet& universe, const SubjectFn& subject,
                           const ValueSet& allowed);

/// True iff distinct traces always carry distinct subjects.
bool is_functional(const System& s);

} // namespace epc::core
