#!/usr/bin/env python3
"""Writes data/unifap_synthetic.json: a 64-bus campus microgrid with three
diesel units, two PV plants, three PEV fleets and single-unit outages.

Unit and fleet parameters follow the published tables; the feeder layout,
demand and availability profiles are synthetic (smooth daily shapes scaled to
a 1.0 MW off-peak / 1.4 MW peak contracted demand). Deterministic: no RNG.
"""

import json
import math
import sys
from pathlib import Path

T = 24
N_BUSES = 64
N_CONSUMERS = 32

# Campus load, MW, t=1 is midnight.
DEMAND = [0.56, 0.55, 0.54, 0.53, 0.53, 0.55, 0.62, 0.78, 0.95, 1.15, 1.28, 1.36,
          1.32, 1.36, 1.40, 1.36, 1.26, 1.05, 0.92, 0.88, 0.84, 0.75, 0.66, 0.58]

# PV availability; 1.0 only at t=14.
AVAIL = [0, 0, 0, 0, 0, 0, 0.05, 0.15, 0.30, 0.50, 0.68, 0.82, 0.93, 1.0,
         0.94, 0.80, 0.60, 0.36, 0.12, 0, 0, 0, 0, 0]

CHARGE_BUSES = ["b5", "b15", "b25", "b35", "b45", "b60"]


def r4(x):
    return round(x, 4)


def feeder():
    """Radial tree: a trunk b1..b16 with laterals hanging off it."""
    buses = [{"id": f"b{i}", "is_slack": i == 1} for i in range(1, N_BUSES + 1)]
    parent = {}
    for i in range(2, 17):
        parent[i] = i - 1
    nxt = 17
    for hub in range(2, 17):
        length = 4 if hub % 2 == 0 else 3
        prev = hub
        for _ in range(length):
            if nxt > N_BUSES:
                break
            parent[nxt] = prev
            prev = nxt
            nxt += 1
    assert nxt == N_BUSES + 1, nxt
    lines = []
    for child in range(2, N_BUSES + 1):
        p = parent[child]
        trunk = child <= 16
        x = 0.02 + 0.001 * (child % 7) if trunk else 0.05 + 0.002 * (child % 5)
        lines.append({
            "id": f"l{child - 1}",
            "from_bus": f"b{p}",
            "to_bus": f"b{child}",
            "reactance": r4(x),
            "capacity": [3.0 if trunk else 1.5] * T,
        })
    return buses, lines


def consumers():
    # 32 buildings; daytime share shifts toward classroom blocks.
    out = []
    weights = [1.0 + 0.6 * math.sin(0.7 * i) ** 2 for i in range(N_CONSUMERS)]
    total = sum(weights)
    for i in range(N_CONSUMERS):
        bus = 2 + (i * 61) // N_CONSUMERS  # spread over b2..b62
        share = weights[i] / total
        out.append({"id": f"d{i + 1}", "bus": f"b{bus}", "demand": [r4(share * D) for D in DEMAND]})
    return out


def main():
    buses, lines = feeder()
    # G3 starts cold so that holding reserve has a commitment cost.
    diesel = lambda gid, bus, on: {
        "id": gid, "bus": bus, "cost": 505.0, "p_max": 0.60, "p_min": 0.12, "p0": 0.30 if on else 0.0, "u0": on,
        "su_cost": 909.0, "sd_cost": 9.09, "ramp_up": 0.15, "ramp_down": 0.15,
        "min_up": 1, "min_down": 1, "init_must_run": 0, "init_must_stop": 0, "droop": 2.5,
    }
    fleet = lambda vid, e_max, p_max, count, start, end, e0, ef: {
        "id": vid,
        "counts": {b: count for b in CHARGE_BUSES},
        "e_max": e_max, "e_min": r4(0.1 * e_max),
        "e_initial": r4(e0 * e_max), "e_final": r4(ef * e_max),
        "p_max": p_max, "efficiency": 0.92,
        "window_start": start, "window_end": end,
        "droop": 10.0, "capacity_offer": 50.0, "deployment_offer": 300.0,
    }
    inst = {
        "system": {
            "format_version": "1.0", "currency": "BRL", "n_periods": T, "period_length": 1.0,
            "c_unserved": 10000.0, "c_spill": 0.0, "c_freq": 1.0, "delta_f_max": 1.0, "d_pr": 0.25,
        },
        "buses": buses,
        "lines": lines,
        "conventional_units": [diesel("G1", "b1", True), diesel("G2", "b20", True), diesel("G3", "b40", False)],
        "renewable_units": [
            {"id": "G4", "bus": "b12", "cost": 0.0, "p_max": 0.554, "availability": AVAIL},
            {"id": "G5", "bus": "b50", "cost": 0.0, "p_max": 0.720, "availability": AVAIL},
        ],
        "consumers": consumers(),
        "pev_groups": [
            # Staff and student cars, plugged in during the working day.
            fleet("V1", 0.052, 0.0074, 8, 8, 18, 0.5, 0.8),
            fleet("V2", 0.066, 0.011, 5, 7, 22, 0.5, 0.8),
            # Campus buses, back at the depot for the evening.
            fleet("V3", 0.324, 0.04, 1, 18, 24, 0.4, 0.7),
        ],
        "contingencies": [{"id": f"k{i}", "outaged_units": [f"G{i}"]} for i in range(1, 6)],
    }
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "unifap_synthetic.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(inst, indent=2) + "\n")


if __name__ == "__main__":
    main()
