#!/usr/bin/env python3
# Copyright 2026 The gridctl Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent DC dispatch oracle used to produce test fixtures.

Solves the flow and electrical models with scipy's HiGHS backend using an
epigraph formulation (one cost variable per generating unit and per branch,
bounded below by every chord of the sampled cost). Units sharing a bus stay
separate here, so the merge done by the C++ code is checked as well.

Usage: dc_opf_oracle.py CASE.m [--points N] [--ignore-ratings] > fixture.json
"""

import argparse
import json
import re
import sys

import numpy as np
from scipy.optimize import linprog


def parse_matrix(text, name):
    m = re.search(r"mpc\." + name + r"\s*=\s*\[(.*?)\];", text, re.S)
    rows = []
    for line in m.group(1).split("\n"):
        line = line.split("%")[0]
        for chunk in line.split(";"):
            cells = chunk.split()
            if cells:
                rows.append([float(c) for c in cells])
    return rows


def parse_case(path):
    text = open(path).read()
    base = float(re.search(r"mpc\.baseMVA\s*=\s*([0-9.eE+-]+)", text).group(1))
    return (base, parse_matrix(text, "bus"), parse_matrix(text, "gen"),
            parse_matrix(text, "branch"), parse_matrix(text, "gencost"))


def chords(fn, hi, points):
    xs = np.linspace(0.0, hi, points)
    ys = [fn(x) for x in xs]
    out = []
    for i in range(points - 1):
        slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        out.append((slope, ys[i] - slope * xs[i]))
    return out


def solve(case, lam, electrical, points, ignore_ratings):
    base, bus, gen, branch, gencost = case
    ids = [int(b[0]) for b in bus]
    index = {b: i for i, b in enumerate(ids)}
    demand = [b[2] for b in bus]
    total = sum(demand)
    units = [(index[int(g[0])], g[8], gencost[k]) for k, g in enumerate(gen) if g[7] > 0]
    lines = []
    for br in branch:
        if br[10] <= 0:
            continue
        cap = np.inf if (ignore_ratings or br[5] == 0) else br[5]
        lines.append((index[int(br[0])], index[int(br[1])], br[2], br[3], cap))

    n, m, g = len(ids), len(lines), len(units)
    # Variables: f[m], t[m], p[g], z[g], psi[n].
    nv = 2 * m + 2 * g + n
    f0, t0, p0, z0, a0 = 0, m, 2 * m, 2 * m + g, 2 * m + 2 * g
    c = np.zeros(nv)
    c[t0:t0 + m] = 1.0 - lam
    c[z0:z0 + g] = lam
    bounds = [(None, None)] * nv
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for e, (u, v, r, x, cap) in enumerate(lines):
        dom = min(cap, 2.0 * total)
        if lam < 1.0:
            bounds[f0 + e] = (-dom, dom)
        else:
            bounds[f0 + e] = (None if cap == np.inf else -cap, None if cap == np.inf else cap)
        bounds[t0 + e] = (0.0, None)
        if r > 0 and lam < 1.0:
            for slope, icpt in chords(lambda y: r * y * y / base, dom, points):
                for sgn in (1.0, -1.0):
                    row = np.zeros(nv)
                    row[f0 + e] = sgn * slope
                    row[t0 + e] = -1.0
                    a_ub.append(row)
                    b_ub.append(-icpt)
    for k, (b, pmax, cost) in enumerate(units):
        bounds[p0 + k] = (0.0, pmax)
        model, ncoef = int(cost[0]), int(cost[3])
        coef = cost[4:4 + ncoef]
        fn = lambda y, coef=coef: sum(a * y ** (len(coef) - 1 - i) for i, a in enumerate(coef))
        assert model == 2
        if pmax <= 0:
            pieces = [(0.0, fn(0.0))]
        else:
            pieces = chords(fn, pmax, points) if ncoef > 2 else [(coef[0] if ncoef == 2 else 0.0, fn(0.0))]
        for slope, icpt in pieces:
            row = np.zeros(nv)
            row[p0 + k] = slope
            row[z0 + k] = -1.0
            a_ub.append(row)
            b_ub.append(-icpt)
    for i in range(n):
        row = np.zeros(nv)
        for e, (u, v, *_rest) in enumerate(lines):
            if u == i:
                row[f0 + e] += 1.0
            if v == i:
                row[f0 + e] -= 1.0
        for k, unit in enumerate(units):
            if unit[0] == i:
                row[p0 + k] -= 1.0
        a_eq.append(row)
        b_eq.append(-demand[i])
    # Pin psi of bus 0; the grids are connected.
    bounds[a0] = (0.0, 0.0)
    if electrical:
        for e, (u, v, r, x, cap) in enumerate(lines):
            row = np.zeros(nv)
            row[f0 + e] = 1.0
            row[a0 + u] -= 1.0 / x
            row[a0 + v] += 1.0 / x
            a_eq.append(row)
            b_eq.append(0.0)
    else:
        for i in range(n):
            bounds[a0 + i] = (0.0, 0.0)
    res = linprog(c, A_ub=np.array(a_ub) if a_ub else None, b_ub=b_ub or None,
                  A_eq=np.array(a_eq), b_eq=b_eq, bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if res.status == 2:
        return None
    assert res.status == 0, res.message
    return res.fun


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("case")
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--ignore-ratings", action="store_true")
    args = ap.parse_args()
    case = parse_case(args.case)
    out = {"case": args.case.split("/")[-1], "points": args.points,
           "ignore_ratings": args.ignore_ratings, "rows": []}
    for lam in (0.0, 0.5, 1.0):
        for electrical in (False, True):
            out["rows"].append({"lambda": lam, "model": "electrical" if electrical else "flow",
                                "objective": solve(case, lam, electrical, args.points, args.ignore_ratings)})
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
