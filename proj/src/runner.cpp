#include "epc/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace epc::runner {

namespace fs = std::filesystem;
using kspace::Order;
using speclang::SpecModel;

std::vector<Order> orders_from_flag(const std::string& flag) {
    if (flag == "all")
        return {Order::U, Order::L, Order::EM, Order::CA, Order::WA};
    auto o = kspace::parse_order(flag);
    if (!o) fail(ErrorKind::UnknownName, "unknown ordering '" + flag + "'");
    return {*o};
}

namespace {

struct OrderResult {
    std::string result; // sat | viol | error
    std::string detail; // verdict text or error message
};

OrderResult check_one(const SpecModel& model, const core::System& system,
                      const kspace::Attacker& attacker, const speclang::PolicyDef& def,
                      Order o, size_t cap) {
    policy::Verdict verdict;
    try {
        if (const auto* t0 = std::get_if<speclang::Type0Def>(&def.node)) {
            auto p = speclang::instantiate_type0(model, *t0, core::subject_domain(system));
            verdict = policy::check_type0(system, attacker, p, o, cap);
        } else if (const auto* t1 = std::get_if<speclang::Type1Def>(&def.node)) {
            auto p = speclang::instantiate_type1(model, *t1, system);
            verdict = policy::check_type1(system, attacker, p, o, cap);
        } else {
            const auto& t2 = std::get<speclang::Type2Def>(def.node);
            auto p = speclang::instantiate_type2(model, t2, system);
            verdict = policy::check_type2(system, attacker, p, o, cap);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CapExceeded || e.kind() == ErrorKind::TotalityViolation ||
            e.kind() == ErrorKind::SubDomainGap)
            return {"error", std::string("ERROR (") + e.what() + ")\n"};
        throw;
    }
    return {verdict.satisfied ? "sat" : "viol", verdict.to_string()};
}

int exit_for(const std::vector<OrderResult>& results) {
    bool cap = std::any_of(results.begin(), results.end(), [](const OrderResult& r) {
        return r.detail.find("CapExceeded") != std::string::npos;
    });
    if (cap) return kExitCapExceeded;
    bool clean = std::all_of(results.begin(), results.end(),
                             [](const OrderResult& r) { return r.result == "sat"; });
    return clean ? kExitSatisfied : kExitViolated;
}

} // namespace

Outcome run_check(const SpecModel& model, const std::string& system_name,
                  const std::string& policy_name, const std::string& attacker_name,
                  const std::string& order_flag, size_t cap, Format format) {
    core::System system = speclang::build_system(model, system_name);
    kspace::Attacker attacker = speclang::build_attacker(model, attacker_name, system.universe);
    const speclang::PolicyDef& def = model.policy(policy_name);

    Outcome out;
    std::vector<OrderResult> results;
    for (Order o : orders_from_flag(order_flag)) {
        OrderResult r = check_one(model, system, attacker, def, o, cap);
        if (format == Format::Text) out.report += r.detail;
        out.report += "result=" + r.result + " order=" + kspace::order_name(o) +
                      " policy=" + policy_name + "\n";
        results.push_back(std::move(r));
    }
    out.exit_code = exit_for(results);
    return out;
}

Outcome run_kspace(const SpecModel& model, const std::string& system_name,
                   const std::string& attacker_name) {
    core::System system = speclang::build_system(model, system_name);
    kspace::Attacker attacker = speclang::build_attacker(model, attacker_name, system.universe);
    Outcome out;
    out.report = kspace::build_kspace(system, attacker).to_string();
    return out;
}

Outcome run_bound(const SpecModel& model, const std::string& policy_name) {
    Outcome out;
    out.report = speclang::bound_of_policy(model, policy_name).to_string() + "\n";
    return out;
}

Outcome run_compat(const SpecModel& model, const std::string& system_name,
                   const std::string& policy_name, const std::string& attacker_name) {
    const speclang::PolicyDef& def = model.policy(policy_name);
    const auto* t0 = std::get_if<speclang::Type0Def>(&def.node);
    if (!t0)
        fail(ErrorKind::UnknownName,
             "compat requires a type0 policy; '" + policy_name + "' is not one");
    core::System system = speclang::build_system(model, system_name);
    kspace::Attacker attacker = speclang::build_attacker(model, attacker_name, system.universe);
    const auto& values = model.domain(t0->domain);
    auto relation = speclang::relation_from_classifier(
        t0->classifier, core::ValueSet(values.begin(), values.end()), model);
    bool ok = policy::weakly_compatible_type0(relation, attacker, system.universe,
                                              system.subject);
    Outcome out;
    out.report = std::string(ok ? "COMPATIBLE" : "INCOMPATIBLE") + "\n" +
                 "result=" + (ok ? "sat" : "viol") + " order=u policy=" + policy_name + "\n";
    out.exit_code = ok ? kExitSatisfied : kExitViolated;
    return out;
}

Outcome run_oracle(const SpecModel& model, const std::string& system_name,
                   const std::string& policy_name, const std::string& attacker_name,
                   const std::string& order_flag, size_t cap) {
    const speclang::PolicyDef& def = model.policy(policy_name);
    const auto* t0 = std::get_if<speclang::Type0Def>(&def.node);
    if (!t0)
        fail(ErrorKind::UnknownName,
             "oracle requires a type0 policy; '" + policy_name + "' is not one");
    core::System system = speclang::build_system(model, system_name);
    kspace::Attacker attacker = speclang::build_attacker(model, attacker_name, system.universe);
    auto p = speclang::instantiate_type0(model, *t0, core::subject_domain(system));
    kspace::KSpace k1 = kspace::KSpace::from_partition(p.relation);
    kspace::KSpace k2 = kspace::build_kspace(system, attacker);

    Outcome out;
    bool all_agree = true;
    for (Order o : orders_from_flag(order_flag)) {
        bool fast = kspace::kleq(o, k1, k2, cap);
        bool slow = kspace::kleq_query_oracle(o, k1, k2, cap);
        bool agree = fast == slow;
        all_agree = all_agree && agree;
        out.report += std::string("order=") + kspace::order_name(o) +
                      " kleq=" + (fast ? "true" : "false") +
                      " oracle=" + (slow ? "true" : "false") +
                      " agree=" + (agree ? "yes" : "no") + "\n";
    }
    out.report += std::string("result=") + (all_agree ? "sat" : "viol") +
                  " order=" + order_flag + " policy=" + policy_name + "\n";
    out.exit_code = all_agree ? kExitSatisfied : kExitViolated;
    return out;
}

namespace {

std::map<std::string, std::string> parse_kv_line(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::SyntaxError, "expected key=value in sidecar line '" + line + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

std::string aggregate_result(const std::string& report) {
    // The per-order trailer lines carry result=sat|viol|error.
    bool any_error = report.find("result=error") != std::string::npos;
    bool any_viol = report.find("result=viol") != std::string::npos;
    return any_error ? "error" : any_viol ? "viol" : "sat";
}

} // namespace

Outcome run_corpus(const std::string& dir, size_t cap) {
    Outcome out;
    std::vector<fs::path> fixtures;
    if (fs::is_directory(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".eps") fixtures.push_back(entry.path());
    std::sort(fixtures.begin(), fixtures.end());
    if (fixtures.empty()) {
        out.report = "no .eps fixtures in '" + dir + "'\n";
        out.exit_code = kExitUsage;
        return out;
    }

    size_t checks = 0, mismatches = 0;
    for (const fs::path& fixture : fixtures) {
        fs::path expect = fixture;
        expect.replace_extension(".expect");
        if (!fs::exists(expect)) {
            out.report += "MissingExpectation: " + expect.filename().string() + "\n";
            out.exit_code = kExitUsage;
            return out;
        }
        std::ifstream spec_in(fixture);
        std::stringstream spec_text;
        spec_text << spec_in.rdbuf();

        std::ifstream expect_in(expect);
        std::string line;
        int lineno = 0;
        while (std::getline(expect_in, line)) {
            ++lineno;
            std::string stripped = line.substr(0, line.find('#'));
            if (stripped.find_first_not_of(" \t\r") == std::string::npos) continue;
            auto kv = parse_kv_line(stripped);
            std::string expected = kv.at("result");
            std::string got;
            try {
                SpecModel model = speclang::parse_spec(spec_text.str());
                Outcome check = run_check(model, kv.at("system"), kv.at("policy"),
                                          kv.at("attacker"), kv.at("order"), cap,
                                          Format::Lines);
                got = aggregate_result(check.report);
            } catch (const Error&) {
                got = "error";
            }
            ++checks;
            bool ok = got == expected;
            if (!ok) ++mismatches;
            out.report += fixture.filename().string() + ":" + std::to_string(lineno) +
                          " order=" + kv.at("order") + " policy=" + kv.at("policy") +
                          " expect=" + expected + " got=" + got + (ok ? " OK" : " MISMATCH") +
                          "\n";
        }
    }
    out.report += "corpus: " + std::to_string(checks) + " checks, " +
                  std::to_string(mismatches) + " mismatches\n";
    out.exit_code = mismatches == 0 ? kExitSatisfied : kExitViolated;
    return out;
}

} // namespace epc::runner
