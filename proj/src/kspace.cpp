#include "epc/kspace.hpp"

#include <algorithm>
#include <map>

namespace epc::kspace {

using partitions::Partition;

partitions::Partition Attacker::induced_relation(const TraceSet& universe) const {
    partitions::ElementSet carrier;
    std::map<std::string, std::string> obs_by_trace;
    for (const Trace& t : universe) {
        std::string r = core::render_trace(t);
        obs_by_trace[r] = observe_(t);
        carrier.insert(r);
    }
    return Partition::from_classifier(
        carrier, [&](const std::string& r) { return obs_by_trace.at(r); });
}

KSpace::KSpace(ValueSet domain, std::set<KnowledgeSet> sets)
    : domain_(std::move(domain)), sets_(std::move(sets)) {
    ValueSet covered;
    for (const KnowledgeSet& x : sets_) {
        if (x.empty())
            fail(ErrorKind::DomainMismatch, "knowledge sets may not be empty");
        for (const Value& v : x) {
            if (!domain_.count(v))
                fail(ErrorKind::DomainMismatch, "knowledge set value '" + v + "' outside domain");
            covered.insert(v);
        }
    }
    if (covered != domain_)
        fail(ErrorKind::DomainMismatch, "knowledge sets do not cover the domain");
}

KSpace KSpace::from_partition(const Partition& p) {
    std::set<KnowledgeSet> sets;
    for (const auto& block : p.blocks()) sets.insert(KnowledgeSet(block.begin(), block.end()));
    return KSpace(p.carrier(), std::move(sets));
}

bool KSpace::is_partition() const {
    size_t total = 0;
    for (const KnowledgeSet& x : sets_) total += x.size();
    return total == domain_.size();
}

std::string KSpace::to_string() const {
    std::string out;
    for (const KnowledgeSet& x : sets_) {
        out += '{';
        for (auto it = x.begin(); it != x.end(); ++it) {
            if (it != x.begin()) out += ' ';
            out += *it;
        }
        out += "}\n";
    }
    return out;
}

KSpace build_kspace(const System& s, const Attacker& a) {
    if (s.traces.empty())
        fail(ErrorKind::EmptySystem, "K-space of an empty system is undefined");
    // Group the system's traces by observation; each class of the induced
    // relation that meets S contributes one knowledge set.
    std::map<std::string, KnowledgeSet> by_observation;
    for (const Trace& t : s.traces)
        by_observation[a.observe(t)].insert(s.subject.eval(t));
    std::set<KnowledgeSet> sets;
    for (auto& [_, x] : by_observation) sets.insert(std::move(x));
    return KSpace(subject_domain(s), std::move(sets));
}

static bool subset(const ValueSet& a, const ValueSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

static void require_within(const ValueSet& x, const ValueSet& domain, const char* what) {
    if (!subset(x, domain))
        fail(ErrorKind::DomainMismatch, std::string(what) + " not a subset of the domain");
}

bool confirms(const KnowledgeSet& x, const Fact& f) {
    return subset(x, f);
}

bool has_uncertainty(const KnowledgeSet& x, const Fact& f) {
    return subset(f, x);
}

bool answers(const KnowledgeSet& x, const Query& q, const ValueSet& domain) {
    if (subset(x, q)) return true;
    ValueSet complement;
    std::set_difference(domain.begin(), domain.end(), q.begin(), q.end(),
                        std::inserter(complement, complement.end()));
    return subset(x, complement);
}

bool can_confirm(const KSpace& k, const Fact& f) {
    require_within(f, k.domain(), "fact");
    return std::any_of(k.sets().begin(), k.sets().end(),
                       [&](const KnowledgeSet& x) { return confirms(x, f); });
}

bool can_have_uncertainty(const KSpace& k, const Fact& f) {
    require_within(f, k.domain(), "fact");
    return std::any_of(k.sets().begin(), k.sets().end(),
                       [&](const KnowledgeSet& x) { return has_uncertainty(x, f); });
}

bool will_answer(const KSpace& k, const Query& q) {
    require_within(q, k.domain(), "query");
    return std::all_of(k.sets().begin(), k.sets().end(),
                       [&](const KnowledgeSet& x) { return answers(x, q, k.domain()); });
}

bool can_answer(const KSpace& k, const Query& q) {
    require_within(q, k.domain(), "query");
    return std::any_of(k.sets().begin(), k.sets().end(),
                       [&](const KnowledgeSet& x) { return answers(x, q, k.domain()); });
}

bool keeps_fact_secret(const System& s, const Attacker& a, const Fact& f) {
    return !can_confirm(build_kspace(s, a), f);
}

bool keeps_query_secret(const System& s, const Attacker& a, const Query& q) {
    return !can_answer(build_kspace(s, a), q);
}

std::optional<Order> parse_order(const std::string& name) {
    if (name == "u") return Order::U;
    if (name == "l") return Order::L;
    if (name == "em") return Order::EM;
    if (name == "ca") return Order::CA;
    if (name == "wa") return Order::WA;
    return std::nullopt;
}

namespace {

void require_same_domain(const KSpace& k1, const KSpace& k2) {
    if (k1.domain() != k2.domain())
        fail(ErrorKind::DomainMismatch, "K-spaces over different domains");
}

// K1 ⪯U K2 iff ∀X2∈K2 ∃X1∈K1. X1 ⊆ X2.
bool upper_leq(const KSpace& k1, const KSpace& k2) {
    for (const KnowledgeSet& x2 : k2.sets()) {
        bool found = std::any_of(k1.sets().begin(), k1.sets().end(),
                                 [&](const KnowledgeSet& x1) { return subset(x1, x2); });
        if (!found) return false;
    }
    return true;
}

// K1 ⪯L K2 iff ∀X1∈K1 ∃X2∈K2. X1 ⊆ X2.
bool lower_leq(const KSpace& k1, const KSpace& k2) {
    for (const KnowledgeSet& x1 : k1.sets()) {
        bool found = std::any_of(k2.sets().begin(), k2.sets().end(),
                                 [&](const KnowledgeSet& x2) { return subset(x1, x2); });
        if (!found) return false;
    }
    return true;
}

struct MaskedSpace {
    std::vector<uint32_t> sets;
    uint32_t full = 0;
    size_t bits = 0;
};

MaskedSpace to_masks(const KSpace& k, size_t cap, const char* op) {
    size_t n = k.domain().size();
    if (n > cap || n > 31)
        fail(ErrorKind::CapExceeded, std::string(op) + ": |V| = " + std::to_string(n) +
                                         " exceeds enumeration cap " + std::to_string(cap));
    std::map<Value, size_t> index;
    size_t i = 0;
    for (const Value& v : k.domain()) index[v] = i++;
    MaskedSpace m;
    m.bits = n;
    m.full = n == 32 ? ~0u : ((1u << n) - 1);
    for (const KnowledgeSet& x : k.sets()) {
        uint32_t mask = 0;
        for (const Value& v : x) mask |= 1u << index.at(v);
        m.sets.push_back(mask);
    }
    return m;
}

bool mask_can_answer(const MaskedSpace& m, uint32_t q) {
    for (uint32_t x : m.sets)
        if ((x & ~q) == 0 || (x & q) == 0) return true;
    return false;
}

bool mask_will_answer(const MaskedSpace& m, uint32_t q) {
    for (uint32_t x : m.sets)
        if ((x & ~q) != 0 && (x & q) != 0) return false;
    return true;
}

// Queries Q and V∖Q are answered by exactly the same knowledge sets, so it
// suffices to enumerate the queries not containing the first domain element.
template <typename Pred>
bool for_all_queries_implies(const MaskedSpace& m1, const MaskedSpace& m2, Pred pred) {
    if (m1.bits == 0) return true;
    uint32_t count = 1u << (m1.bits - 1);
    for (uint32_t high = 0; high < count; ++high) {
        uint32_t q = high << 1; // bit 0 clear: canonical representative
        if (!pred(m1, m2, q)) return false;
    }
    return true;
}

bool ca_leq(const KSpace& k1, const KSpace& k2, size_t cap) {
    if (k1.sets() == k2.sets()) return true; // reflexive, no enumeration needed
    MaskedSpace m1 = to_masks(k1, cap, "ca");
    MaskedSpace m2 = to_masks(k2, cap, "ca");
    return for_all_queries_implies(m1, m2, [](const auto& a, const auto& b, uint32_t q) {
        return !mask_can_answer(b, q) || mask_can_answer(a, q);
    });
}

bool wa_leq(const KSpace& k1, const KSpace& k2, size_t cap) {
    if (k1.sets() == k2.sets()) return true; // reflexive, no enumeration needed
    MaskedSpace m1 = to_masks(k1, cap, "wa");
    MaskedSpace m2 = to_masks(k2, cap, "wa");
    return for_all_queries_implies(m1, m2, [](const auto& a, const auto& b, uint32_t q) {
        return !mask_will_answer(b, q) || mask_will_answer(a, q);
    });
}

} // namespace

bool kleq(Order o, const KSpace& k1, const KSpace& k2, size_t cap) {
    require_same_domain(k1, k2);
    switch (o) {
    case Order::U: return upper_leq(k1, k2);
    case Order::L: return lower_leq(k1, k2);
    case Order::EM: return upper_leq(k1, k2) && lower_leq(k1, k2);
    case Order::CA: return ca_leq(k1, k2, cap);
    case Order::WA: return wa_leq(k1, k2, cap);
    }
    return false;
}

bool kleq_query_oracle(Order o, const KSpace& k1, const KSpace& k2, size_t cap) {
    require_same_domain(k1, k2);
    MaskedSpace m1 = to_masks(k1, cap, "oracle");
    MaskedSpace m2 = to_masks(k2, cap, "oracle");
    auto subset_mask = [](uint32_t a, uint32_t b) { return (a & ~b) == 0; };
    auto can_confirm_mask = [&](const MaskedSpace& m, uint32_t f) {
        for (uint32_t x : m.sets)
            if (subset_mask(x, f)) return true;
        return false;
    };
    auto can_uncert_mask = [&](const MaskedSpace& m, uint32_t f) {
        for (uint32_t x : m.sets)
            if (subset_mask(f, x)) return true;
        return false;
    };
    uint64_t count = 1ull << m1.bits;
    switch (o) {
    case Order::U:
        for (uint64_t f = 0; f < count; ++f)
            if (can_confirm_mask(m2, uint32_t(f)) && !can_confirm_mask(m1, uint32_t(f)))
                return false;
        return true;
    case Order::L:
        for (uint64_t f = 0; f < count; ++f)
            if (can_uncert_mask(m1, uint32_t(f)) && !can_uncert_mask(m2, uint32_t(f)))
                return false;
        return true;
    case Order::EM:
        return kleq_query_oracle(Order::U, k1, k2, cap) &&
               kleq_query_oracle(Order::L, k1, k2, cap);
    case Order::CA:
        for (uint64_t q = 0; q < count; ++q)
            if (mask_can_answer(m2, uint32_t(q)) && !mask_can_answer(m1, uint32_t(q)))
                return false;
        return true;
    case Order::WA:
        for (uint64_t q = 0; q < count; ++q)
            if (mask_will_answer(m2, uint32_t(q)) && !mask_will_answer(m1, uint32_t(q)))
                return false;
        return true;
    }
    return false;
}

} // namespace epc::kspace
