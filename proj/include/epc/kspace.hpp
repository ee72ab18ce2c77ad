#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epc/core.hpp"
#include "epc/partition.hpp"

namespace epc::kspace {

using core::System;
using core::Trace;
using core::TraceSet;
using core::Value;
using core::ValueSet;

/// A passive attacker, given by an observation function on traces. The
/// induced equivalence on any universe is the kernel of the observation.
class Attacker {
public:
    using ObservationFn = std::function<std::string(const Trace&)>;

    Attacker(std::string name, ObservationFn observe)
        : name_(std::move(name)), observe_(std::move(observe)) {}

    const std::string& name() const { return name_; }
    std::string observe(const Trace& t) const { return observe_(t); }

    /// Kernel of the observation function over `universe`.
    partitions::Partition induced_relation(const TraceSet& universe) const;

private:
    std::string name_;
    ObservationFn observe_;
};

using KnowledgeSet = ValueSet; // non-empty by construction
using Fact = ValueSet;
using Query = ValueSet;

/// A set of non-empty knowledge sets covering a common domain V.
class KSpace {
public:
    /// Validates non-emptiness of members and the cover invariant.
    KSpace(ValueSet domain, std::set<KnowledgeSet> sets);

    /// The K-space of a partition of V (one knowledge set per block).
    static KSpace from_partition(const partitions::Partition& p);

    const ValueSet& domain() const { return domain_; }
    const std::set<KnowledgeSet>& sets() const { return sets_; }

    /// True when the knowledge sets are pairwise disjoint (so the K-space
    /// is a partition of V).
    bool is_partition() const;

    /// One knowledge set per line, canonical order, e.g. `{07 17 27}`.
    std::string to_string() const;

    bool operator==(const KSpace&) const = default;

private:
    ValueSet domain_;
    std::set<KnowledgeSet> sets_;
};

/// K(S,A): one knowledge set per observation class of A meeting S.
KSpace build_kspace(const System& s, const Attacker& a);

// Pointwise deduction predicates.
bool confirms(const KnowledgeSet& x, const Fact& f);
bool has_uncertainty(const KnowledgeSet& x, const Fact& f);
bool answers(const KnowledgeSet& x, const Query& q, const ValueSet& domain);

// Existential / universal lifts.
bool can_confirm(const KSpace& k, const Fact& f);
bool can_have_uncertainty(const KSpace& k, const Fact& f);
bool will_answer(const KSpace& k, const Query& q);
bool can_answer(const KSpace& k, const Query& q);

bool keeps_fact_secret(const System& s, const Attacker& a, const Fact& f);
bool keeps_query_secret(const System& s, const Attacker& a, const Query& q);

enum class Order { U, L, EM, CA, WA };

constexpr const char* order_name(Order o) {
    switch (o) {
    case Order::U: return "u";
    case Order::L: return "l";
    case Order::EM: return "em";
    case Order::CA: return "ca";
    case Order::WA: return "wa";
    }
    return "?";
}

std::optional<Order> parse_order(const std::string& name);

inline constexpr size_t kDefaultCap = 22;

/// Decides K1 ⪯o K2. U and L go through the powerdomain containment
/// characterizations; EM is their conjunction; CA and WA enumerate queries
/// over V (2^|V| halved by the Q ↔ V∖Q symmetry), so |V| must not exceed
/// `cap`.
bool kleq(Order o, const KSpace& k1, const KSpace& k2, size_t cap = kDefaultCap);

/// Ground-truth decision straight from the quantified definitions, by full
/// fact/query enumeration. Independent of the containment route in kleq.
bool kleq_query_oracle(Order o, const KSpace& k1, const KSpace& k2, size_t cap = kDefaultCap);

} // namespace epc::kspace
