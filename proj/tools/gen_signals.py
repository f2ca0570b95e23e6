#!/usr/bin/env python3
"""Generate synthetic CoRIx response tables from the item-level fixtures.

Each present item gets three sessions whose normalized scores are v - d, v
and v + d, so the item mean and median both land on the fixture value.
Annotation items use a 0-10 higher-is-risk scale; perception items use a
1-5 lower-is-risk scale. Absent items get no rows.

Writes <name>.csv and <name>.golden.json (expected value of every node down
to item level, computed here independently of the C++ library).

usage: gen_signals.py FIXTURES_DIR OUT_DIR
"""

import csv
import json
import random
import statistics
import sys
from pathlib import Path

MODELS = ["a", "b", "c"]
SESSIONS = ["s01", "s02", "s03"]


def normalize(raw, lo, hi, direction):
    mapped = 10.0 * (raw - lo) / (hi - lo)
    return 10.0 - mapped if direction == "lower_is_risk" else mapped


def summarize(fn, values):
    present = [v for v in values if v is not None]
    if not present:
        return None
    if fn == "mean":
        total = 0.0
        for v in present:
            total += v
        return total / len(present)
    if fn == "median":
        return statistics.median(present)
    if fn == "max":
        return max(present)
    raise ValueError(f"unsupported function {fn}")


def rows_for(level, source, item, value):
    spread = min(0.5, value / 2, (10.0 - value) / 2)
    spread = int(spread * 100) / 100
    scores = [value - spread, value, value + spread]
    out = []
    for session, score in zip(SESSIONS, scores):
        if source == "annotation":
            raw, lo, hi, direction = round(score, 4), 0.0, 10.0, "higher_is_risk"
        else:
            raw, lo, hi, direction = round(5.0 - 0.4 * score, 4), 1.0, 5.0, "lower_is_risk"
        out.append(
            {
                "session_id": session,
                "item_id": item,
                "testing_level": level,
                "source": source,
                "raw_value": repr(raw),
                "raw_min": repr(lo),
                "raw_max": repr(hi),
                "direction": direction,
            }
        )
    return out


def generate(fixture, csv_path, golden_path, rng):
    doc = json.loads(fixture.read_text())
    root = doc["tree"]
    rows = []
    golden = {}

    def walk(node, path, parent_fn):
        here = path + [node["label"]]
        key = "/" + "/".join(here[1:])
        if "children" not in node:
            # item node: sessions are summarized with the source's function
            value = node.get("value")
            if value is None:
                golden[key] = None
                return None
            level, source, item = here[1], here[2], here[3]
            item_rows = rows_for(level, source, item, value)
            rows.extend(item_rows)
            scores = sorted(
                (r["session_id"], normalize(float(r["raw_value"]), float(r["raw_min"]), float(r["raw_max"]), r["direction"]))
                for r in item_rows
            )
            result = summarize(parent_fn, [s for _, s in scores])
            golden[key] = result
            return result
        fn = node["function"]["name"]
        result = summarize(fn, [walk(c, here, fn) for c in node["children"]])
        golden[key] = result
        return result

    walk(root, [], None)
    rng.shuffle(rows)
    with csv_path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    golden_path.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    fixtures, out = Path(sys.argv[1]), Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240917)
    for m in MODELS:
        name = f"corix_model_{m}_signals"
        generate(fixtures / f"corix_model_{m}.json", out / f"{name}.csv", out / f"{name}.golden.json", rng)


if __name__ == "__main__":
    main()
