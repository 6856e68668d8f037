#!/usr/bin/env python3
"""Row and column counts per family from the closed forms in
docs/formulation_map.md, computed from an instance file alone.

    count_formulation.py INSTANCE --case {1,2,3} [--mps FILE]

With --mps, also counts the rows and columns of an exported model and exits
non-zero if the totals disagree.
"""

import argparse
import json
import sys


def counts(inst, case):
    T = inst["system"].get("n_periods", 24)
    N = len(inst["buses"])
    L = len(inst["lines"])
    conv = inst["conventional_units"]
    ren = inst["renewable_units"]
    Gc, Gr, D = len(conv), len(ren), len(inst["consumers"])
    conv_ids = {u["id"] for u in conv}
    ren_ids = {u["id"] for u in ren}

    # One charge point per (group, bus) with a positive count; W sums the
    # plug-in window lengths over charge points.
    W = 0
    for v in inst["pev_groups"]:
        span = v["window_end"] - v["window_start"] + 1
        W += span * sum(1 for c in v["counts"].values() if c > 0)

    rows, cols = {}, {}

    def add(d, key, n):
        if n > 0:
            d[key] = d.get(key, 0) + n

    add(rows, "Eq2", N * T)
    add(rows, "Eq4", L * T)
    add(rows, "Eq5", 2 * Gc * T)
    add(rows, "Eq6", Gr * T)
    for eq in ("Eq7", "Eq8", "Eq9", "Eq10"):
        add(rows, eq, Gc * T)
    for u in conv:
        up, down = u.get("min_up", 1), u.get("min_down", 1)
        lu, ld = min(u.get("init_must_run", 0), T), min(u.get("init_must_stop", 0), T)
        add(rows, "Eq12", 1 if lu >= 1 else 0)
        add(rows, "Eq15", 1 if ld >= 1 else 0)
        if up > 1:
            add(rows, "Eq13", max(0, T - up + 1 - lu))
        if down > 1:
            add(rows, "Eq16", max(0, T - down + 1 - ld))
        add(rows, "Eq14", max(0, T - max(lu, T - up + 1)))
        add(rows, "Eq17", max(0, T - max(ld, T - down + 1)))
    add(rows, "Eq25", W)

    add(cols, "p", (Gc + Gr) * T)
    add(cols, "s", Gr * T)
    for fam in ("u", "csu", "csd"):
        add(cols, fam, Gc * T)
    add(cols, "pl", L * T)
    add(cols, "theta", N * T)
    add(cols, "pud", D * T)
    for fam in ("ec", "ed", "ev"):
        add(cols, fam, W)

    if case != 1:
        add(cols, "cvpr", W)
        for k in inst["contingencies"]:
            out = set(k["outaged_units"])
            out_conv = len(out & conv_ids)
            out_ren = len(out & ren_ids)
            add(rows, "Eq18", (Gc - out_conv) * T)
            add(rows, "Eq19", (Gc - out_conv) * T)
            add(rows, "Eq21", (out_conv + out_ren) * T)
            add(rows, "Eq22", T)
            add(rows, "UDCAP", D * T)
            add(rows, "Eq25", W)
            for eq in ("Eq28", "Eq29", "Eq30", "Eq31", "Eq34", "Eq35", "Eq37"):
                add(rows, eq, W)
            add(cols, "df", T)
            add(cols, "ppr", (Gc + out_ren) * T)
            add(cols, "pudpr", D * T)
            for fam in ("ev", "ecpr", "edpr", "pprc", "pprd", "pvpr"):
                add(cols, fam, W)
    return rows, cols


def mps_shape(path):
    rows, columns, section = 0, set(), None
    with open(path) as f:
        for line in f:
            if not line.strip():
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            tok = line.split()
            if section == "ROWS" and tok[0] != "N":
                rows += 1
            elif section == "COLUMNS" and "'MARKER'" not in tok:
                columns.add(tok[0])
    return rows, len(columns)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("instance")
    ap.add_argument("--case", type=int, choices=(1, 2, 3), default=3)
    ap.add_argument("--mps")
    args = ap.parse_args()
    with open(args.instance) as f:
        inst = json.load(f)
    rows, cols = counts(inst, args.case)
    for k, v in rows.items():
        print(f"row {k} {v}")
    for k, v in cols.items():
        print(f"column {k} {v}")
    total_r, total_c = sum(rows.values()), sum(cols.values())
    print(f"total rows {total_r} columns {total_c}")
    if args.mps:
        r, c = mps_shape(args.mps)
        print(f"mps rows {r} columns {c}")
        if (r, c) != (total_r, total_c):
            print("mismatch", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
