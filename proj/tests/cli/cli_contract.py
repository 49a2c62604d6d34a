"""Exit-code and JSON contract of the jetcons command line."""
import json
import subprocess
import sys

import jsonschema

exe, schema_path, runs = sys.argv[1:4]
with open(schema_path) as f:
    schema = json.load(f)

failures = []


def case(args, code, check=None):
    p = subprocess.run([exe] + args, capture_output=True, text=True)
    label = " ".join(args)
    if p.returncode != code:
        failures.append(f"{label}: exit {p.returncode}, want {code}\n{p.stderr}")
        return
    if p.returncode in (0, 2, 3, 4) and p.stdout.strip():
        doc = json.loads(p.stdout)
        try:
            jsonschema.validate(doc, schema)
        except jsonschema.ValidationError as e:
            failures.append(f"{label}: schema: {e.message}")
            return
        if doc["exit_code"] != code:
            failures.append(f"{label}: exit_code field {doc['exit_code']}")
        if check and not check(doc):
            failures.append(f"{label}: content check failed")


def has_witness(doc):
    return any("witness" in c for r in doc["results"] for c in r.get("checks", []))


case(["check-cl", "--model", "sw_free", "--row", "momentum"], 0)
case(["check-cl", "--model", "sw_free", "--row", "momentum", "--override", "flux=h*u^2 + h^2/2 + u"], 3, has_witness)
case(["check-cl", "--model", "sw_table1_row2", "--row", "momentum_as_printed"], 3, has_witness)
case(["check-multiplier", "--model", "sw_table1_row1"], 3)
case(["derive-determining", "--model", "sw_free", "--seed", "7"], 0)
case(["derive-inverse", "--model", "sw_cons_emm", "--fixture", "bessel", "--strict"], 0)
case(["derive-inverse", "--model", "sw_cons_dissipation", "--fixture", "quasilinear_family"], 0)
case(["check-selfadjoint", "--model", "pkdv_closed", "--fixture", "admissible_closure"], 0)
case(["derive-selfadjoint-conditions", "--model", "pkdv_closed"], 0)
case(["check-variational-symmetry", "--model", "pkdv_free", "--fixture", "noether_symmetries"], 0)
case(["check-invariance", "--model", "sw_free"], 0)
case(["check-invariant", "--model", "sw_cons_dissipation", "--samples", "30"], 0)
case(["catalog-verify", "--all", "--jobs", "3", "--strict"], 0,
     lambda d: d["summary"]["total"] >= 40 and [r["id"] for r in d["results"]] == sorted(r["id"] for r in d["results"]))
case(["catalog-verify", "--model", "pkdv_free"], 0)
case(["simulate", "--config", f"{runs}/ln_closure.ini", "--cells", "64"], 0,
     lambda d: all(x["relative_drift"] <= 1e-13 for x in d["densities"] if x["name"] == "h"))
case(["converge", "--config", f"{runs}/ln_closure.ini", "--require", "h,uh,energy"], 0)
case(["converge", "--config", f"{runs}/viscous.ini", "--require", "energy"], 3)
case(["simulate", "--config", sys.argv[4]], 4, lambda d: d["kind"] == "runtime")
# parse errors
case(["check-cl", "--model", "no_such_model"], 2)
case(["check-cl", "--model", "sw_free", "--row", "no_such_row"], 2)
case(["check-cl", "--model", "sw_free", "--override", "flux=u +"], 2)
case(["converge", "--config", f"{runs}/ln_closure.ini", "--levels", "8,16,32"], 2)
case(["simulate", "--config", sys.argv[4].replace("blowup.ini", "missing_param.ini")], 2)
case(["bogus"], 2)
case(["check-cl"], 2)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli contract ok")
