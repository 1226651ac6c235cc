#!/usr/bin/env python3
"""Regenerates the synthetic fixtures in this directory.

Everything here is synthetic. Node positions are plausible coordinates for a
rural-to-regional transfer corridor; durations and coverage are invented so
the two routes land near 35 and 47 minutes.
"""

import csv
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
PERIOD_S = 4

NODES = [
    ("A", 40.4670, -87.6684),  # rural hospital
    ("B", 40.3798, -87.6686),
    ("C", 40.1245, -87.6300),
    ("D", 40.3040, -87.9540),
    ("F", 40.1164, -88.2145),  # regional center
]

COV = lambda f: {"fraction": f, "covered": True}
UNC = lambda f: {"fraction": f, "covered": False}

# Forward roads; each is also emitted in reverse with mirrored segments.
ROADS = [
    ("A", "B", 600, [COV(1.0)]),
    ("B", "C", 1020, [COV(1.0)]),
    ("C", "F", 1200, [COV(1.0)]),
    ("B", "D", 700, [COV(0.6), UNC(0.4)]),
    ("D", "F", 800, [COV(0.25), UNC(0.25), COV(0.5)]),
]

ROUTES = {"long": ["A", "B", "C", "F"], "short": ["A", "B", "D", "F"]}


def node_docs():
    return [{"id": n, "lat": lat, "lon": lon} for n, lat, lon in NODES]


def two_route(labelled=True):
    edges = []
    for a, b, d, segs in ROADS:
        fwd = {"from": a, "to": b, "duration_s": d}
        rev = {"from": b, "to": a, "duration_s": d}
        if labelled:
            fwd["segments"] = segs
            rev["segments"] = list(reversed(segs))
        edges += [fwd, rev]
    return {"description": "synthetic two-route fixture", "nodes": node_docs(), "edges": edges}


def small_planar():
    """Seven-node example with multi-labelled edges, durations in seconds."""
    nodes = [{"id": n} for n in "ABCDEFG"]
    e = lambda a, b, d, segs: {"from": a, "to": b, "duration_s": d, "segments": segs}
    edges = [
        e("A", "B", 240, [COV(1.0)]),
        e("A", "C", 300, [COV(0.6), UNC(0.4)]),
        e("B", "D", 180, [COV(1.0)]),
        e("B", "E", 300, [COV(1.0)]),
        e("D", "C", 180, [COV(1.0)]),
        e("C", "F", 240, [COV(0.5), UNC(0.5)]),
        e("D", "F", 600, [COV(0.5), UNC(0.5)]),
        e("D", "G", 360, [COV(1.0)]),
        e("E", "G", 240, [UNC(0.3), COV(0.7)]),
        e("G", "F", 360, [COV(1.0)]),
    ]
    return {"description": "synthetic seven-node example", "nodes": nodes, "edges": edges}


def trace_rows(rng):
    by_edge = {(a, b): (d, segs) for a, b, d, segs in ROADS}
    rows = []
    for route_id, nodes in ROUTES.items():
        t = 0
        for a, b in zip(nodes, nodes[1:]):
            duration, segs = by_edge[(a, b)]
            bounds, acc = [], 0.0
            for s in segs:
                acc += s["fraction"] * duration
                bounds.append((acc, s["covered"]))
            for i in range(duration // PERIOD_S):
                local = i * PERIOD_S
                covered = next(c for end, c in bounds if local < end - 1e-9)
                kbps = rng.uniform(900, 4000) if covered else rng.uniform(0, 120)
                rows.append([t + local, route_id, a, b, f"{local / duration:.6f}", f"{kbps:.1f}"])
            t += duration
    return rows


def main():
    rng = random.Random(20181)
    (HERE / "two_route.json").write_text(json.dumps(two_route(), indent=2) + "\n")
    (HERE / "two_route_unlabelled.json").write_text(json.dumps(two_route(False), indent=2) + "\n")
    (HERE / "small_planar.json").write_text(json.dumps(small_planar(), indent=2) + "\n")
    with open(HERE / "two_route_trace.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["timestamp_s", "route_id", "from", "to", "offset", "bandwidth_kbps"])
        w.writerows(trace_rows(rng))
    events = [
        {"at_time_s": 300, "kind": "set_alpha", "value": 4.0},
        {"at_time_s": 900, "kind": "relabel_graph",
         "labels": [{"from": "C", "to": "F", "segments": [COV(0.5), UNC(0.5)]}]},
    ]
    (HERE / "events.json").write_text(json.dumps(events, indent=2) + "\n")


if __name__ == "__main__":
    main()
