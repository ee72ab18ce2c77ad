#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epc/runner.hpp"

namespace py = pybind11;
using namespace epc;
using kspace::KSpace;
using kspace::Order;

namespace {

Order order_arg(const std::string& name) {
    auto o = kspace::parse_order(name);
    if (!o) throw py::value_error("unknown ordering: " + name);
    return *o;
}

py::tuple outcome(const runner::Outcome& out) {
    return py::make_tuple(out.report, out.exit_code);
}

std::vector<std::vector<std::string>> blocks_of(const partitions::Partition& p) {
    return p.blocks();
}

} // namespace

PYBIND11_MODULE(_epc, m) {
    m.doc() = "Knowledge-based erasure policy checking";
    m.attr("default_cap") = kspace::kDefaultCap;

    py::class_<KSpace>(m, "KSpace")
        .def(py::init([](core::ValueSet domain, std::vector<kspace::KnowledgeSet> sets) {
                 return KSpace(std::move(domain),
                               std::set<kspace::KnowledgeSet>(sets.begin(), sets.end()));
             }),
             py::arg("domain"), py::arg("sets"))
        .def_property_readonly("domain", &KSpace::domain)
        .def_property_readonly("sets",
                               [](const KSpace& k) {
                                   return std::vector<kspace::KnowledgeSet>(k.sets().begin(),
                                                                            k.sets().end());
                               })
        .def("is_partition", &KSpace::is_partition)
        .def("__eq__", [](const KSpace& a, const KSpace& b) { return a == b; })
        .def("__str__", &KSpace::to_string);

    m.def(
        "kleq",
        [](const std::string& o, const KSpace& k1, const KSpace& k2, size_t cap) {
            return kspace::kleq(order_arg(o), k1, k2, cap);
        },
        py::arg("order"), py::arg("k1"), py::arg("k2"), py::arg("cap") = kspace::kDefaultCap);
    m.def(
        "kleq_query_oracle",
        [](const std::string& o, const KSpace& k1, const KSpace& k2, size_t cap) {
            return kspace::kleq_query_oracle(order_arg(o), k1, k2, cap);
        },
        py::arg("order"), py::arg("k1"), py::arg("k2"), py::arg("cap") = kspace::kDefaultCap);

    // Spec-level entry points; each takes the text of an .eps spec.
    m.def(
        "kspace_of",
        [](const std::string& text, const std::string& system, const std::string& attacker) {
            speclang::SpecModel model = speclang::parse_spec(text);
            core::System s = speclang::build_system(model, system);
            return kspace::build_kspace(s, speclang::build_attacker(model, attacker, s.universe));
        },
        py::arg("spec"), py::arg("system"), py::arg("attacker"));
    m.def(
        "bound_of",
        [](const std::string& text, const std::string& policy) {
            speclang::SpecModel model = speclang::parse_spec(text);
            return blocks_of(speclang::bound_of_policy(model, policy));
        },
        py::arg("spec"), py::arg("policy"));
    m.def(
        "check",
        [](const std::string& text, const std::string& system, const std::string& policy,
           const std::string& attacker, const std::string& order, size_t cap) {
            return outcome(runner::run_check(speclang::parse_spec(text), system, policy,
                                             attacker, order, cap, runner::Format::Text));
        },
        py::arg("spec"), py::arg("system"), py::arg("policy"), py::arg("attacker"),
        py::arg("order") = "all", py::arg("cap") = kspace::kDefaultCap);
    m.def(
        "compat",
        [](const std::string& text, const std::string& system, const std::string& policy,
           const std::string& attacker) {
            return outcome(
                runner::run_compat(speclang::parse_spec(text), system, policy, attacker));
        },
        py::arg("spec"), py::arg("system"), py::arg("policy"), py::arg("attacker"));
    m.def(
        "oracle",
        [](const std::string& text, const std::string& system, const std::string& policy,
           const std::string& attacker, const std::string& order, size_t cap) {
            return outcome(runner::run_oracle(speclang::parse_spec(text), system, policy,
                                              attacker, order, cap));
        },
        py::arg("spec"), py::arg("system"), py::arg("policy"), py::arg("attacker"),
        py::arg("order") = "all", py::arg("cap") = kspace::kDefaultCap);
    m.def(
        "run_corpus",
        [](const std::string& dir, size_t cap) { return outcome(runner::run_corpus(dir, cap)); },
        py::arg("dir"), py::arg("cap") = kspace::kDefaultCap);
}
