#pragma once

#include <string>
#include <vector>

#include "epc/speclang.hpp"

namespace epc::runner {

/// Exit-code contract shared by every subcommand.
inline constexpr int kExitSatisfied = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapExceeded = 3;

enum class Format { Text, Lines };

struct Outcome {
    std::string report;
    int exit_code = kExitSatisfied;
};

/// The orders selected by an `--order` value (`all` expands to all five).
std::vector<kspace::Order> orders_from_flag(const std::string& flag);

/// `check`: verdict per requested ordering, plus a `result=... order=...
/// policy=...` trailer line each.
Outcome run_check(const speclang::SpecModel& model, const std::string& system,
                  const std::string& policy, const std::string& attacker,
                  const std::string& order_flag, size_t cap, Format format);

/// `kspace`: canonical K-space listing.
Outcome run_kspace(const speclang::SpecModel& model, const std::string& system,
                   const std::string& attacker);

/// `bound`: the explicitness-bound partition of a policy definition.
Outcome run_bound(const speclang::SpecModel& model, const std::string& policy);

/// `compat`: weak U-compatibility of a Type-0 policy with an attacker over a
/// system's universe.
Outcome run_compat(const speclang::SpecModel& model, const std::string& system,
                   const std::string& policy, const std::string& attacker);

/// `oracle`: agreement between the kleq decision procedure and the
/// brute-force query oracle on [policy] vs K(S,A).
Outcome run_oracle(const speclang::SpecModel& model, const std::string& system,
                   const std::string& policy, const std::string& attacker,
                   const std::string& order_flag, size_t cap);

/// `corpus`: run every `.eps` fixture in a directory against its `.expect`
/// sidecar.
Outcome run_corpus(const std::string& dir, size_t cap);

} // namespace epc::runner
