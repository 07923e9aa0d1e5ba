#!/usr/bin/env python3
"""Solve an exported LP file with HiGHS (through scipy) and compare the
optimum with `pcycle solve`.

    python3 scripts/lp_crosscheck.py crates/core/data/k4.topo --method db

Only the LP subset written by `pcycle solve --export-lp` is understood.
"""

import argparse
import re
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

TERM = re.compile(r"([+-]?)\s*([0-9.eE+-]+)\s+([A-Za-z_][A-Za-z0-9_]*)")


def parse_expr(text):
    return [(name, float(coef) * (-1 if sign == "-" else 1)) for sign, coef, name in TERM.findall(text)]


def parse_lp(text):
    section = None
    objective, rows, bounds, names = [], [], {}, {}

    def index(name):
        return names.setdefault(name, len(names))

    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in ("minimize", "subject to", "bounds", "general", "end"):
            section = key
            continue
        if section == "minimize":
            objective += parse_expr(line.split(":", 1)[1])
        elif section == "subject to":
            body = line.split(":", 1)[1]
            lhs, sense, rhs = re.split(r"(>=|<=|=)", body)
            rows.append((parse_expr(lhs), sense, float(rhs)))
        elif section == "bounds":
            m = re.fullmatch(r"(\S+)\s*<=\s*(\S+)\s*<=\s*(\S+)", line)
            if m:
                bounds[m.group(2)] = (float(m.group(1)), float(m.group(3)))
            else:
                m = re.fullmatch(r"(\S+)\s*>=\s*(\S+)", line)
                bounds[m.group(1)] = (float(m.group(2)), np.inf)
        elif section == "general":
            for name in line.split():
                index(name)

    for terms in [objective] + [r[0] for r in rows]:
        for name, _ in terms:
            index(name)
    n = len(names)
    c = np.zeros(n)
    for name, coef in objective:
        c[names[name]] += coef
    a = np.zeros((len(rows), n))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for k, (terms, sense, rhs) in enumerate(rows):
        for name, coef in terms:
            a[k, names[name]] += coef
        if sense in (">=", "="):
            lo[k] = rhs
        if sense in ("<=", "="):
            hi[k] = rhs
    lb = np.zeros(n)
    ub = np.full(n, np.inf)
    for name, (l, u) in bounds.items():
        lb[names[name]], ub[names[name]] = l, u
    return c, a, lo, hi, lb, ub


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("topology")
    ap.add_argument("--method", choices=["sg", "db"], required=True)
    ap.add_argument("--pcycle", default="target/release/pcycle")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        lp = Path(tmp) / "model.lp"
        run = subprocess.run(
            [args.pcycle, "solve", args.topology, "--method", args.method, "--export-lp", str(lp),
             "--plan-out", str(Path(tmp) / "plan")],
            capture_output=True, text=True)
        ours = re.search(r"^objective (\S+)$", run.stdout, re.M)
        status = re.search(r"^status (\S+)$", run.stdout, re.M)
        c, a, lo, hi, lb, ub = parse_lp(lp.read_text())

    res = milp(c, constraints=LinearConstraint(a, lo, hi), bounds=Bounds(lb, ub), integrality=np.ones(len(c)))
    print(f"variables {len(c)} constraints {a.shape[0]}")
    print(f"pcycle  {status.group(1) if status else '?'} {ours.group(1) if ours else '-'}")
    print(f"highs   {res.status} {res.fun}")
    if not (ours and status.group(1) == "optimal" and res.success):
        return 2
    same = abs(float(ours.group(1)) - res.fun) < 1e-6
    print("match" if same else "MISMATCH")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
