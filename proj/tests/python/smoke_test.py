import sys

import _epc

corpus = sys.argv[1]


def eq(got, want, what):
    if got != want:
        raise SystemExit(f"{what}: got {got!r}, want {want!r}")


spec = open(f"{corpus}/listing2.eps").read()

ks = _epc.kspace_of(spec, "vend", "AS")
eq(len(ks.sets), 10, "listing2 K-space size")
eq(ks.is_partition(), True, "listing2 K-space is a partition")
eq(len(ks.domain), 100, "listing2 subject domain size")

report, code = _epc.check(spec, "vend", "L4", "AS")
eq(code, 0, "listing2 check exit code")
if "SATISFIED" not in report:
    raise SystemExit(f"listing2 check report: {report!r}")

bound = _epc.bound_of(spec, "L4")
eq(len(bound), 10, "listing2 bound block count")

p = _epc.KSpace(domain={"0", "1", "2"}, sets=[{"0", "1"}, {"2"}])
ident = _epc.KSpace(domain={"0", "1", "2"}, sets=[{"0"}, {"1"}, {"2"}])
eq(_epc.kleq("u", ident, p), True, "kleq u")
eq(_epc.kleq("ca", p, ident), True, "kleq ca")
eq(_epc.kleq("em", p, ident), False, "kleq em")
eq(_epc.kleq_query_oracle("wa", p, ident), False, "oracle wa")

_, code = _epc.compat(spec, "vend", "L4", "AS")
eq(code, 0, "listing2 compat exit code")

report, code = _epc.run_corpus(corpus)
eq(code, 0, "corpus exit code")
if "0 mismatches" not in report:
    raise SystemExit(f"corpus report: {report!r}")

print("ok")
