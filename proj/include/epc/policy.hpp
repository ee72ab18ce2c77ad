#pragma once

#include <string>
#include <vector>

#include "epc/kspace.hpp"

namespace epc::policy {

using kspace::Attacker;
using kspace::Order;
using core::System;
using core::SubjectFn;
using core::TraceSet;
using core::ValueSet;
using partitions::Partition;

/// An unconditional visibility policy: an equivalence relation on the
/// subject domain.
struct Type0Policy {
    Partition relation;
};

/// Low-dependent erasure: a condition partition of T_V (carrier: rendered
/// traces) with one Type-0 relation per condition block. `labels` name the
/// blocks for diagnostics and run parallel to `condition.blocks()`.
struct Type1Policy {
    Partition condition;
    std::vector<Partition> relations;
    std::vector<std::string> labels;
};

/// High-dependent erasure: a case partition of V with one Type-1 sub-policy
/// per case, each over its own sub-domain W.
struct Type2Policy {
    Partition cases;
    std::vector<Type1Policy> sub_policies;
    std::vector<std::string> labels;
};

/// Structural well-formedness (sizes line up, carriers match); throws on
/// violation. Totality-for-V is semantic and checked against a system.
void validate(const Type1Policy& p, const ValueSet& domain);
void validate(const Type2Policy& p, const ValueSet& domain);

struct Failure {
    std::string label;  // offending block / case, or "-"
    std::string reason; // NotFullDomain or OrderViolation(witness)
};

struct Verdict {
    bool satisfied = true;
    Order order = Order::EM;
    std::vector<Failure> failures;

    /// `SATISFIED` or one `VIOLATED (<block>: <reason>)` line per failure.
    std::string to_string() const;
};

Verdict check_type0(const System& s, const Attacker& a, const Type0Policy& p, Order o,
                    size_t cap = kspace::kDefaultCap);
Verdict check_type1(const System& s, const Attacker& a, const Type1Policy& p, Order o,
                    size_t cap = kspace::kDefaultCap);
Verdict check_type2(const System& s, const Attacker& a, const Type2Policy& p, Order o,
                    size_t cap = kspace::kDefaultCap);

/// Meet of all mapped relations.
Partition bound_type1(const Type1Policy& p);

/// Meet of the case relation with the daggered per-case Type-1 bounds.
Partition bound_type2(const Type2Policy& p);

/// [bound] ⪯o K(S,A): the explicitness guarantee the theorems promise for
/// every satisfied instance.
bool explicitness_holds(const System& s, const Attacker& a, const Partition& bound, Order o,
                        size_t cap = kspace::kDefaultCap);

/// Decides weak U-compatibility by the characterization
/// ∀v∈V ∃O∈[A]. [v]_R ⊆ Φ(O).
bool weakly_compatible_type0(const Partition& relation, const Attacker& a,
                             const TraceSet& universe, const SubjectFn& subject);

} // namespace epc::policy
