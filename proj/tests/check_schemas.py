#!/usr/bin/env python3
# usage: check_schemas.py <affdbg> <srcdir>
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

cli = sys.argv[1]
src = pathlib.Path(sys.argv[2]).resolve()
data = src / "data"
schemas = {p.name: json.loads(p.read_text()) for p in (src / "schemas").glob("*.json")}
registry = Registry().with_resources((n, Resource.from_contents(s)) for n, s in schemas.items())

failures = []


def run(args, code=0):
    r = subprocess.run([cli, *args], capture_output=True, text=True, timeout=600)
    if r.returncode != code:
        failures.append(f"{' '.join(args)}: exit {r.returncode}, wanted {code}\n{r.stderr}")
    return r


def validate(name, doc, what):
    v = jsonschema.Draft202012Validator(schemas[name], registry=registry)
    errs = sorted(v.iter_errors(doc), key=lambda e: list(e.path))
    for e in errs[:3]:
        failures.append(f"{what}: {name}: {list(e.path)}: {e.message[:300]}")
    return not errs


def check(schema, args):
    r1 = run(args)
    r2 = run(args)
    if r1.stdout != r2.stdout:
        failures.append(f"{' '.join(args)}: output differs between runs")
    if r1.returncode == 0:
        validate(schema, json.loads(r1.stdout), " ".join(args))
    return r1


def d(name):
    return str(data / name)


check("datum_validate.schema.json", ["datum", "validate", d("g2.json")])
check("datum_validate.schema.json", ["datum", "validate", d("a4tw.json")])
check("wts.schema.json", ["wts", "--datum", d("a2.json"), "--u", "s1", "--v", "1", "--lo", "0", "--hi", "6"])
check("wts.schema.json", ["wts", "--datum", d("b2.json"), "--u", "s1 s2", "--v", "s2", "--vprime", "1",
                          "--omega", "[1,1]"])
check("hecke_mul.schema.json", ["hecke", "mul", "--datum", d("a2.json"), "--x", "s0 s1 s2 s1", "--z", "s1 s0 s1"])
check("hecke_class_poly.schema.json", ["hecke", "class-poly", "--datum", d("gl3.json"), "--x", "s1 s2 t[2,0,-1]"])
check("hecke_predict.schema.json", ["hecke", "predict", "--datum", d("a2.json"), "--x", "s1 s2 t[5,-4]",
                                    "--bound", "2", "--compare"])
check("hecke_predict.schema.json", ["hecke", "predict", "--datum", d("a1.json"), "--x", "t[3]", "--z", "t[9]",
                                    "--y", "t[3]", "--c1", "1", "--allow-outside", "--compare"])
check("adlv_report.schema.json", ["adlv", "report", "--datum", d("a2.json"), "--x", "s1 s2 t[2,-1]", "--b", "all"])
check("adlv_report.schema.json", ["adlv", "report", "--datum", d("g2.json"), "--x", "s1 s2 s1 t[3,2]"])
check("adlv_predict.schema.json", ["adlv", "predict", "--datum", d("g2.json"), "--x", "s1 s2 s1 t[3,2]",
                                   "--variant", "integral"])
check("adlv_predict.schema.json", ["adlv", "predict", "--datum", d("a2.json"), "--x", "s1 t[4,-5]",
                                   "--variant", "E2", "--e2-cap", "20"])
check("adlv_predict.schema.json", ["adlv", "predict", "--datum", d("a2.json"), "--x", "t[4,-5]",
                                   "--variant", "E1"])
check("selftest.schema.json", ["selftest", "--suite", "recursion", "associativity"])

# scan: jsonl on stdout, summary json on stderr after the progress line
with tempfile.TemporaryDirectory() as tmp:
    cfg = pathlib.Path(tmp) / "scan.json"
    cfg.write_text(json.dumps({"datum": d("a2.json"), "max_length": 5,
                               "predictions": ["shrunken", "integral", "regular"], "workers": 2}))
    r = run(["adlv", "scan", "--config", str(cfg), "--fail-on-violation"])
    again = run(["adlv", "scan", "--config", str(cfg), "--workers", "4"])
    if r.stdout != again.stdout:
        failures.append("scan: records depend on the worker count")
    lines = r.stdout.splitlines()
    if not lines:
        failures.append("scan: no records")
    for i, line in enumerate(lines):
        if not validate("scan_record.schema.json", json.loads(line), f"scan record {i}"):
            break
    if "{" in r.stderr:
        validate("scan_summary.schema.json", json.loads(r.stderr[r.stderr.index("{"):]), "scan summary")
    else:
        failures.append("scan: no summary on stderr")
    validate("scan_config.schema.json", json.loads(cfg.read_text()), "scan config")
    for f in sorted((src / "data" / "scans").glob("*.json")):
        validate("scan_config.schema.json", json.loads(f.read_text()), f.name)

    bad = pathlib.Path(tmp) / "bad.json"
    bad.write_text(json.dumps({"datum": d("a2.json"), "max_length": 3, "colour": "red"}))
    run(["adlv", "scan", "--config", str(bad)], code=1)

# csv and error handling
r = run(["wts", "--datum", d("a1.json"), "--u", "1", "--v", "1", "--lo", "0", "--hi", "4", "--format", "csv"])
if not r.stdout.startswith("u,v,vprime,omega,e,multiplicity\n"):
    failures.append("wts csv: bad header")
run(["hecke", "mul", "--datum", d("a2.json"), "--x", "s1", "--z", "s2", "--format", "pretty"], code=1)
run(["datum", "validate", d("nope.json")], code=1)
run(["adlv", "report", "--datum", d("a2.json"), "--x", "s7"], code=1)
run(["selftest", "--suite", "nope"], code=1)
run(["wts", "--datum", d("a2.json"), "--u", "1", "--v", "1", "--lo", "0", "--hi", "100000", "--max-window", "50"],
    code=1)

for f in failures:
    print("FAIL", f)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
