#include "epc/policy.hpp"

#include <algorithm>

namespace epc::policy {

using kspace::KSpace;
using kspace::KnowledgeSet;

namespace {

std::string render_set(const ValueSet& x) {
    std::string out = "{";
    for (auto it = x.begin(); it != x.end(); ++it) {
        if (it != x.begin()) out += ' ';
        out += *it;
    }
    return out + "}";
}

bool subset(const ValueSet& a, const ValueSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Witness for a failed kleq decision, mirroring its decision routes.
std::string order_violation_witness(Order o, const KSpace& pol, const KSpace& ks) {
    if (o == Order::U || o == Order::EM) {
        for (const KnowledgeSet& x2 : ks.sets()) {
            bool ok = std::any_of(pol.sets().begin(), pol.sets().end(),
                                  [&](const KnowledgeSet& x1) { return subset(x1, x2); });
            if (!ok) return "no policy class inside knowledge set " + render_set(x2);
        }
    }
    if (o == Order::L || o == Order::EM) {
        for (const KnowledgeSet& x1 : pol.sets()) {
            bool ok = std::any_of(ks.sets().begin(), ks.sets().end(),
                                  [&](const KnowledgeSet& x2) { return subset(x1, x2); });
            if (!ok) return "policy class " + render_set(x1) + " inside no knowledge set";
        }
    }
    if (o == Order::CA || o == Order::WA) {
        // First failing query in enumeration order over the canonical domain.
        std::vector<core::Value> values(pol.domain().begin(), pol.domain().end());
        uint64_t count = values.size() > 63 ? 0 : (1ull << values.size());
        for (uint64_t q = 0; q < count; ++q) {
            ValueSet query;
            for (size_t i = 0; i < values.size(); ++i)
                if (q & (1ull << i)) query.insert(values[i]);
            bool sys_side = o == Order::CA ? kspace::can_answer(ks, query)
                                           : kspace::will_answer(ks, query);
            bool pol_side = o == Order::CA ? kspace::can_answer(pol, query)
                                           : kspace::will_answer(pol, query);
            if (sys_side && !pol_side) return "query " + render_set(query) + " not covered";
        }
    }
    return "order violated";
}

Verdict check_against_kspace(const KSpace& policy_space, const KSpace& ks, Order o, size_t cap,
                             const std::string& label, Verdict verdict) {
    if (!kspace::kleq(o, policy_space, ks, cap)) {
        verdict.satisfied = false;
        verdict.failures.push_back(
            {label, "OrderViolation(" + order_violation_witness(o, policy_space, ks) + ")"});
    }
    return verdict;
}

partitions::ElementSet rendered(const TraceSet& traces) {
    partitions::ElementSet out;
    for (const core::Trace& t : traces) out.insert(core::render_trace(t));
    return out;
}

} // namespace

void validate(const Type1Policy& p, const ValueSet& domain) {
    if (p.relations.size() != p.condition.block_count() ||
        p.labels.size() != p.relations.size())
        fail(ErrorKind::CarrierMismatch, "type1 policy map does not match its condition blocks");
    for (const Partition& r : p.relations)
        if (r.carrier() != domain)
            fail(ErrorKind::CarrierMismatch, "type1 relation carrier differs from the domain");
}

void validate(const Type2Policy& p, const ValueSet& domain) {
    if (p.cases.carrier() != domain)
        fail(ErrorKind::CarrierMismatch, "type2 case partition carrier differs from the domain");
    if (p.sub_policies.size() != p.cases.block_count() ||
        p.labels.size() != p.sub_policies.size())
        fail(ErrorKind::CarrierMismatch, "type2 policy map does not match its cases");
    for (size_t i = 0; i < p.sub_policies.size(); ++i) {
        const auto& block = p.cases.blocks()[i];
        ValueSet w(block.begin(), block.end());
        for (const Partition& r : p.sub_policies[i].relations)
            if (r.carrier() != w)
                fail(ErrorKind::CarrierMismatch,
                     "type2 sub-policy relation carrier differs from its case");
    }
}

std::string Verdict::to_string() const {
    if (satisfied) return "SATISFIED\n";
    std::string out;
    for (const Failure& f : failures)
        out += "VIOLATED (" + f.label + ": " + f.reason + ")\n";
    return out;
}

Verdict check_type0(const System& s, const Attacker& a, const Type0Policy& p, Order o,
                    size_t cap) {
    ValueSet domain = core::subject_domain(s);
    if (p.relation.carrier() != domain)
        fail(ErrorKind::DomainMismatch, "policy carrier differs from the subject domain");
    Verdict v;
    v.order = o;
    return check_against_kspace(KSpace::from_partition(p.relation), kspace::build_kspace(s, a), o,
                                cap, "-", std::move(v));
}

Verdict check_type1(const System& s, const Attacker& a, const Type1Policy& p, Order o,
                    size_t cap) {
    ValueSet domain = core::subject_domain(s);
    validate(p, domain);
    TraceSet universe_v = core::restrict_universe(s.universe, s.subject, domain);
    if (p.condition.carrier() != rendered(universe_v))
        fail(ErrorKind::CarrierMismatch, "condition partition does not partition T_V");
    // Totality for V: every condition block projects onto the whole domain.
    for (size_t i = 0; i < p.condition.block_count(); ++i) {
        ValueSet image;
        for (const auto& r : p.condition.blocks()[i])
            image.insert(s.subject.eval(core::parse_trace(r)));
        if (image != domain)
            fail(ErrorKind::TotalityViolation,
                 "condition block '" + p.labels[i] + "' does not project onto the full domain");
    }
    Verdict verdict;
    verdict.order = o;
    for (size_t i = 0; i < p.condition.block_count(); ++i) {
        TraceSet sub_traces;
        for (const core::Trace& t : s.traces)
            if (p.condition.contains(core::render_trace(t)) &&
                p.condition.same_block(core::render_trace(t),
                                       p.condition.blocks()[i].front()))
                sub_traces.insert(t);
        System sub(s.universe, sub_traces, s.subject);
        if (core::subject_domain(sub) != domain) {
            verdict.satisfied = false;
            verdict.failures.push_back({p.labels[i], "NotFullDomain"});
            continue;
        }
        verdict = check_against_kspace(KSpace::from_partition(p.relations[i]),
                                       kspace::build_kspace(sub, a), o, cap, p.labels[i],
                                       std::move(verdict));
    }
    return verdict;
}

Verdict check_type2(const System& s, const Attacker& a, const Type2Policy& p, Order o,
                    size_t cap) {
    ValueSet domain = core::subject_domain(s);
    validate(p, domain);
    Verdict verdict;
    verdict.order = o;
    for (size_t i = 0; i < p.cases.block_count(); ++i) {
        const auto& block = p.cases.blocks()[i];
        ValueSet w(block.begin(), block.end());
        TraceSet universe_w = core::restrict_universe(s.universe, s.subject, w);
        TraceSet sub_traces;
        for (const core::Trace& t : s.traces)
            if (w.count(s.subject.eval(t))) sub_traces.insert(t);
        System sub(universe_w, sub_traces, s.subject);
        if (core::subject_domain(sub) != w)
            fail(ErrorKind::SubDomainGap,
                 "case '" + p.labels[i] + "' is not fully inhabited by the system");
        Verdict sub_verdict = check_type1(sub, a, p.sub_policies[i], o, cap);
        if (!sub_verdict.satisfied) {
            verdict.satisfied = false;
            for (Failure& f : sub_verdict.failures) {
                f.label = p.labels[i] + "/" + f.label;
                verdict.failures.push_back(std::move(f));
            }
        }
    }
    return verdict;
}

Partition bound_type1(const Type1Policy& p) {
    if (p.relations.empty())
        fail(ErrorKind::CarrierMismatch, "type1 policy with no condition blocks");
    return Partition::meet(std::span<const Partition>(p.relations));
}

Partition bound_type2(const Type2Policy& p) {
    std::vector<Partition> parts;
    parts.push_back(p.cases); // ≡Q
    for (const Type1Policy& sub : p.sub_policies)
        parts.push_back(bound_type1(sub).dagger(p.cases.carrier()));
    return Partition::meet(std::span<const Partition>(parts));
}

bool explicitness_holds(const System& s, const Attacker& a, const Partition& bound, Order o,
                        size_t cap) {
    return kspace::kleq(o, KSpace::from_partition(bound), kspace::build_kspace(s, a), cap);
}

bool weakly_compatible_type0(const Partition& relation, const Attacker& a,
                             const TraceSet& universe, const SubjectFn& subject) {
    // Subject image of every observation class of A over the universe.
    std::vector<ValueSet> class_images;
    {
        Partition induced = a.induced_relation(universe);
        for (const auto& block : induced.blocks()) {
            ValueSet image;
            for (const auto& r : block) image.insert(subject.eval(core::parse_trace(r)));
            class_images.push_back(std::move(image));
        }
    }
    // A class can appear in a compliant system iff its image contains a whole
    // block; every subject value must be reachable through such a class.
    ValueSet reachable;
    for (const ValueSet& image : class_images) {
        bool holds_block = std::any_of(
            relation.blocks().begin(), relation.blocks().end(), [&](const auto& block) {
                return subset(ValueSet(block.begin(), block.end()), image);
            });
        if (holds_block) reachable.insert(image.begin(), image.end());
    }
    for (const auto& v : relation.carrier())
        if (!reachable.count(v)) return false;
    return true;
}

} // namespace epc::policy
