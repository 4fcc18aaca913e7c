"""End-to-end checks of the command-line tool.

usage: cli_checks.py <heatchain executable> <source dir>
"""

import csv
import json
import math
import os
import subprocess
import sys
import tempfile

TOOL, SRC = sys.argv[1], sys.argv[2]

try:
    import jsonschema
except ImportError:  # schema check degrades to a key check
    jsonschema = None

with open(os.path.join(SRC, "schemas", "run_report.schema.json")) as f:
    SCHEMA = json.load(f)

CHAIN = """[chain]
n_sites = {n}
mass = 1
omega0 = {w0}
xi = 1
lattice_const = 1
lambda = 0.1
gamma = {gamma}
bath_temp = {temp}
"""

failures = []


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def run(sub, config_text, out, env=None, extra=()):
    cfg = out + ".ini"
    with open(cfg, "w") as f:
        f.write(config_text)
    full_env = dict(os.environ)
    full_env.pop("HEATCHAIN_OUT_DIR", None)
    full_env.update(env or {})
    return subprocess.run([TOOL, sub, "--config", cfg, "--out", out, *extra],
                          capture_output=True, text=True, env=full_env)


def rows(path):
    with open(path) as f:
        return list(csv.reader(f))


def valid_report(path):
    with open(path) as f:
        doc = json.load(f)
    if jsonschema is not None:
        try:
            jsonschema.validate(doc, SCHEMA)
        except jsonschema.ValidationError as e:
            print(e)
            return False
        return True
    return all(k in doc for k in SCHEMA["required"])


with tempfile.TemporaryDirectory() as tmp:
    d = lambda name: os.path.join(tmp, name)

    # dispersion: omega(pi) = 2 for the acoustic chain
    r = run("dispersion", CHAIN.format(n=64, w0=0, gamma=0, temp=1), d("disp"))
    check(r.returncode == 0, "dispersion exits 0")
    table = rows(os.path.join(d("disp"), "dispersion.csv"))
    check(table[0] == ["q", "omega", "group_velocity"], "dispersion header")
    edge = [float(w) for q, w, _ in table[1:] if abs(float(q) - math.pi) < 1e-12]
    check(len(edge) == 1 and abs(edge[0] - 2.0) < 1e-12, "omega(pi) = 2")
    check(len(table) == 65, "one row per mode")
    check(valid_report(os.path.join(d("disp"), "report.json")), "dispersion report matches schema")

    # coefficients: single high-temperature row
    hot = CHAIN.format(n=64, w0=1, gamma=0, temp=2) + "[run]\nt_min = 1000\nt_steps = 1\n"
    r = run("coefficients", hot, d("coef"))
    check(r.returncode == 0, "coefficients exits 0")
    table = rows(os.path.join(d("coef"), "coefficients.csv"))
    check(table[0] == ["T", "D_xx", "D_pp", "D_ex", "s", "u_eq", "C"], "coefficients header")
    check(len(table) == 2, "single row for t_steps = 1")
    t, s = float(table[1][0]), float(table[1][4])
    check(abs(s / (2 * 0.1 * t) - 1) <= 0.005, "s a / (2 lambda k T) = 1 +- 0.005")
    check(valid_report(os.path.join(d("coef"), "report.json")), "coefficients report matches schema")

    # determinism
    sweep = CHAIN.format(n=32, w0=0.5, gamma=0.02, temp=2) + \
        "[run]\nt_min = 0.1\nt_max = 100\nt_steps = 12\nscale = log\n"
    run("coefficients", sweep, d("det1"))
    run("coefficients", sweep, d("det2"))
    with open(os.path.join(d("det1"), "coefficients.csv"), "rb") as a, \
            open(os.path.join(d("det2"), "coefficients.csv"), "rb") as b:
        check(a.read() == b.read(), "identical config gives byte-identical CSV")

    # environment override of the output directory
    r = run("dispersion", CHAIN.format(n=8, w0=1, gamma=0, temp=1), d("flag"),
            env={"HEATCHAIN_OUT_DIR": d("env")})
    check(os.path.exists(os.path.join(d("env"), "dispersion.csv")), "HEATCHAIN_OUT_DIR overrides --out")
    check(not os.path.exists(os.path.join(d("flag"), "dispersion.csv")), "--out unused under override")

    # config errors: every key listed, machine-readable record, nonzero exit
    bad = CHAIN.format(n=2, w0="abc", gamma=0, temp=1) + "[run]\nbogus = 1\n"
    r = run("relax", bad, d("bad"))
    check(r.returncode != 0, "invalid config exits nonzero")
    try:
        rec = json.loads(r.stderr.strip().splitlines()[-1])
        issues = " ".join(rec["error"]["issues"])
        check(rec["error"]["kind"] == "config", "error kind is config")
        check("chain.n_sites" in issues and "chain.omega0" in issues, "all bad chain keys listed")
    except (ValueError, KeyError, IndexError):
        check(False, "stderr carries a JSON error record")
    r = run("relax", CHAIN.format(n=16, w0=1, gamma=0, temp=1) + "[run]\nbogus = 1\n", d("bad2"))
    check(r.returncode != 0 and "run.bogus" in r.stderr, "unknown run key rejected")

    # relax
    relax = CHAIN.format(n=16, w0=1, gamma=0, temp=1) + \
        "[run]\nscenario = hotspot\nhot_sites = 3,4\nt_hot = 5\nt_final = 20\nsample_stride = 20\n"
    r = run("relax", relax, d("relax"))
    check(r.returncode == 0, "relax exits 0")
    table = rows(os.path.join(d("relax"), "relax.csv"))
    check(table[0] == ["t", "k", "E_k", "J_k", "u_k"], "relax header")
    with open(os.path.join(d("relax"), "report.json")) as f:
        rep = json.load(f)
    rate = rep["summary"]["fitted_decay_rate"]["value"]
    check(abs(rate / 0.2 - 1) < 1e-3, "relax decay rate = 2 lambda")
    check(valid_report(os.path.join(d("relax"), "report.json")), "relax report matches schema")

    # compare on a small ring
    comp = CHAIN.format(n=32, w0=0.2, gamma=0, temp=10) + \
        "[run]\nhotspot_width = 6\nt_hot = 20\nt_cold = 10\nt_final = 5\n"
    r = run("compare", comp, d("comp"))
    check(r.returncode == 0, "compare exits 0")
    for name in ("chain_trajectory.csv", "pde_trajectory.csv", "deviation.csv"):
        check(os.path.exists(os.path.join(d("comp"), name)), "compare writes " + name)
    check(valid_report(os.path.join(d("comp"), "report.json")), "compare report matches schema")

    # conductivity
    cond = CHAIN.format(n=128, w0=0, gamma=0, temp=1) + "[run]\nt_min = 0.1\nt_max = 10\nt_steps = 3\n"
    r = run("conductivity", cond, d("cond"))
    check(r.returncode == 0, "conductivity exits 0")
    table = rows(os.path.join(d("cond"), "conductivity.csv"))
    check(table[0] == ["T", "C", "kappa_continuum", "kappa_klemens", "sigma"], "conductivity header")
    check(valid_report(os.path.join(d("cond"), "report.json")), "conductivity report matches schema")

    # verify, fast subset
    r = run("verify", "[run]\ncriteria = 1,4,5\n", d("ver"))
    lines = [l for l in r.stdout.splitlines() if l.startswith(("PASS", "FAIL"))]
    check(r.returncode == 0 and len(lines) == 3 and all(l.startswith("PASS") for l in lines),
          "verify prints one PASS line per requested criterion")
    check(valid_report(os.path.join(d("ver"), "report.json")), "verify report matches schema")

print("schema validation:", "jsonschema" if jsonschema else "key check only")
sys.exit(1 if failures else 0)
