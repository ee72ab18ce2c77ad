#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "epc/runner.hpp"

namespace {

using epc::runner::Format;
using epc::runner::Outcome;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) epc::fail(epc::ErrorKind::UnknownName, "cannot read spec file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

size_t default_cap() {
    if (const char* env = std::getenv("EPC_CAP")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<size_t>(v);
    }
    return epc::kspace::kDefaultCap;
}

int exit_code_for(const epc::Error& e) {
    switch (e.kind()) {
    case epc::ErrorKind::CapExceeded:
        return epc::runner::kExitCapExceeded;
    default:
        return epc::runner::kExitUsage;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"epc - knowledge-based erasure policy checker"};
    app.require_subcommand(1);

    std::string spec_path, system, policy, attacker;
    std::string order = "all";
    std::string format = "text";
    size_t cap = default_cap();

    auto add_common = [&](CLI::App* cmd, bool needs_system, bool needs_policy,
                          bool needs_attacker, bool has_order) {
        cmd->add_option("spec", spec_path, "path to a .eps spec file")->required();
        if (needs_system) cmd->add_option("--system", system, "system name")->required();
        if (needs_policy) cmd->add_option("--policy", policy, "policy name")->required();
        if (needs_attacker) cmd->add_option("--attacker", attacker, "attacker name")->required();
        if (has_order)
            cmd->add_option("--order", order, "u|l|em|ca|wa|all")
                ->check(CLI::IsMember({"u", "l", "em", "ca", "wa", "all"}));
        cmd->add_option("--cap", cap, "CA/WA query enumeration cap")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--format", format, "text|lines")
            ->check(CLI::IsMember({"text", "lines"}));
    };

    auto* check = app.add_subcommand("check", "check policy satisfaction");
    add_common(check, true, true, true, true);
    auto* kspace_cmd = app.add_subcommand("kspace", "print the attacker K-space");
    add_common(kspace_cmd, true, false, true, false);
    auto* bound = app.add_subcommand("bound", "print the explicitness-bound partition");
    add_common(bound, false, true, false, false);
    auto* compat = app.add_subcommand("compat", "weak U-compatibility check");
    add_common(compat, true, true, true, false);
    auto* oracle = app.add_subcommand("oracle", "cross-validate kleq against the query oracle");
    add_common(oracle, true, true, true, true);

    std::string corpus_dir;
    auto* corpus = app.add_subcommand("corpus", "run a fixture directory against expectations");
    corpus->add_option("dir", corpus_dir, "directory of .eps fixtures")->required();
    corpus->add_option("--cap", cap, "CA/WA query enumeration cap")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : epc::runner::kExitUsage;
    }

    try {
        Outcome out;
        if (corpus->parsed()) {
            out = epc::runner::run_corpus(corpus_dir, cap);
        } else {
            auto model = epc::speclang::parse_spec(read_file(spec_path));
            Format fmt = format == "lines" ? Format::Lines : Format::Text;
            if (check->parsed())
                out = epc::runner::run_check(model, system, policy, attacker, order, cap, fmt);
            else if (kspace_cmd->parsed())
                out = epc::runner::run_kspace(model, system, attacker);
            else if (bound->parsed())
                out = epc::runner::run_bound(model, policy);
            else if (compat->parsed())
                out = epc::runner::run_compat(model, system, policy, attacker);
            else
                out = epc::runner::run_oracle(model, system, policy, attacker, order, cap);
        }
        std::cout << out.report;
        return out.exit_code;
    } catch (const epc::Error& e) {
        std::cout << "error: " << e.what() << "\n";
        std::cout << "result=error order=" << order << " policy=" << policy << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cout << "error: " << e.what() << "\n";
        return epc::runner::kExitUsage;
    }
}
