#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "epc/core.hpp"
#include "epc/kspace.hpp"
#include "epc/policy.hpp"

namespace epc::speclang {

using core::System;
using core::SubjectFn;
using core::Trace;
using core::TraceSet;
using core::Value;
using core::ValueSet;

// ---------------------------------------------------------------------------
// Expressions inside process definitions

struct Expr;

struct TokenExpr {
    std::string text; // variable when bound, literal value otherwise
};
struct CallExpr {
    std::string fn; // lastk | xor
    std::vector<Expr> args;
    int int_arg = 0; // second argument of lastk
};

struct Expr {
    std::variant<TokenExpr, CallExpr> node;
    int line = 0;
};

struct Cond {
    enum class Kind { Eq, In } kind;
    Expr lhs;
    Expr rhs;           // Eq only
    std::string domain; // In only
    int line = 0;
};

// ---------------------------------------------------------------------------
// Process statements

struct Stmt;
using Block = std::vector<Stmt>;

struct InputStmt {
    std::string var;
    std::string domain;
};
struct OutputStmt {
    std::string channel;
    Expr expr;
};
struct SignalStmt {
    std::string name;
};
struct LetStmt {
    std::string var;
    Expr expr;
};
struct IfStmt {
    Cond cond;
    Block then_block;
    Block else_block;
};

struct Stmt {
    std::variant<InputStmt, OutputStmt, SignalStmt, LetStmt, IfStmt> node;
    int line = 0;
};

struct ProcessDef {
    Block body;
};

// ---------------------------------------------------------------------------
// Classifier expressions (over values or traces)

struct ClassifierExpr {
    enum class Kind {
        LastK,         // value: last n characters
        InSet,         // value: membership in a named domain -> true/false
        EqLit,         // value: equality to a literal -> true/false
        KthInput,      // trace: value of the k-th input event
        ContainsInput, // trace: has ?channel=literal -> true/false
        Constant,      // -> "_"
        Identity,      // the element itself
        Pair,          // (left,right)
    };
    Kind kind = Kind::Constant;
    int k = 0;
    std::string name;    // domain / channel
    std::string literal;
    std::vector<ClassifierExpr> parts; // Pair
    int line = 0;
};

// ---------------------------------------------------------------------------
// Attacker observation specs

struct ObsSpec {
    enum class Kind { All, None, AfterSignal, Channels, Compose };
    Kind kind = Kind::All;
    std::string signal;
    std::vector<std::string> channels;
    std::vector<ObsSpec> parts;
};

// ---------------------------------------------------------------------------
// Policy definitions (instantiated against a system at check time)

struct Type0Def {
    std::string domain;
    ClassifierExpr classifier;
};
struct Type1Def {
    std::string domain; // empty for sub-policies of a type2 (inherited case)
    ClassifierExpr condition; // trace classifier
    std::vector<std::pair<std::string, ClassifierExpr>> cases; // label -> value classifier
};
struct Type2Def {
    std::string domain;
    ClassifierExpr cases; // value classifier
    std::vector<std::pair<std::string, Type1Def>> sub; // label -> sub-policy
};

struct PolicyDef {
    std::variant<Type0Def, Type1Def, Type2Def> node;
};

// ---------------------------------------------------------------------------
// The parsed model

struct SystemDef {
    bool explicit_traces = false;
    ProcessDef process;       // when !explicit_traces
    std::vector<std::string> trace_literals; // when explicit_traces
    std::vector<std::string> universe_literals; // optional widening
    SubjectFn subject = SubjectFn::first_input();
    bool subject_declared = false;
    std::string subject_source; // concrete syntax of the selector, for printing
};

struct SpecModel {
    // insertion-ordered for stable printing
    std::vector<std::pair<std::string, std::vector<Value>>> domains;
    std::vector<std::pair<std::string, SystemDef>> systems;
    std::vector<std::pair<std::string, ObsSpec>> attackers;
    std::vector<std::pair<std::string, PolicyDef>> policies;

    const std::vector<Value>& domain(const std::string& name) const;
    const SystemDef& system(const std::string& name) const;
    const ObsSpec& attacker(const std::string& name) const;
    const PolicyDef& policy(const std::string& name) const;
    bool has_domain(const std::string& name) const;
};

/// Parses the `.eps` concrete syntax. Diagnostics carry line/column.
SpecModel parse_spec(const std::string& text);

/// Canonical concrete syntax; parse_spec(print_spec(m)) reproduces m.
std::string print_spec(const SpecModel& m);

/// All maximal traces of a process, branching over every input in declared
/// order.
TraceSet expand_process(const ProcessDef& p, const SpecModel& model);

/// Materializes a named system: universe (process expansion or explicit
/// traces, widened by any universe block), traces, subject.
System build_system(const SpecModel& model, const std::string& name);

/// Observation-function semantics for an ObsSpec. Signal names are checked
/// against the universe's event alphabet.
kspace::Attacker build_attacker(const SpecModel& model, const std::string& name,
                                const TraceSet& universe);

/// Evaluates a classifier over a rendered value or trace element.
std::string eval_classifier(const ClassifierExpr& c, const std::string& element,
                            const SpecModel& model);

/// Relation on `carrier` given by the fibers of a value classifier.
partitions::Partition relation_from_classifier(const ClassifierExpr& c,
                                               const ValueSet& carrier,
                                               const SpecModel& model);

// Policy instantiation against a concrete system.
policy::Type0Policy instantiate_type0(const SpecModel& model, const Type0Def& def,
                                      const ValueSet& domain);
policy::Type1Policy instantiate_type1(const SpecModel& model, const Type1Def& def,
                                      const System& s);
policy::Type2Policy instantiate_type2(const SpecModel& model, const Type2Def& def,
                                      const System& s);

/// The explicitness bound of a named policy, computed from the definition
/// alone (meet of all mapped relations; cases daggered for type2).
partitions::Partition bound_of_policy(const SpecModel& model, const std::string& name);

} // namespace epc::speclang
