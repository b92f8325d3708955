#!/usr/bin/env python3
"""Writes the bundled gaze cohort, response log and their golden outputs.

The gaze cohort is built from a planned fixation sequence per participant.
Samples are emitted at 40 ms around AOI centres, and the golden metrics and
aggregates are computed from the plan, not from the C++ pipeline.

Usage: make_fixtures.py <repo-root>
"""

import json
import statistics
import sys
from pathlib import Path

import numpy as np

PAGE_W, ROW_H, PRODUCTS = 800, 160, 15
TRIAL_MS = 90000
STEP = 40
KINDS = ["image", "description", "price"]
STIMULUS = "phones_p3"
OUTLIER = 3
NEAR = {2, 3, 4}
DISTANT = {1, 5}
TARGET = {"near": 25760, "distant": 31240}

# (variant, feature): out.1 avg, out.1 med, out.2 avg, out.2 med (s), accuracy
TABLE = {
    ("typeI", "tag"): (4.22, 3.62, 8.90, 8.00, 0.98),
    ("typeI", "star"): (4.81, 3.41, 9.67, 8.14, 0.97),
    ("typeI", "price"): (8.38, 5.50, 12.44, 11.77, 1.00),
    ("typeII", "tag"): (19.84, 17.88, 25.57, 26.88, 0.99),
    ("typeII", "star"): (10.96, 8.11, 17.36, 12.42, 0.99),
    ("typeII", "price"): (10.62, 6.03, 14.21, 11.90, 0.98),
}
TRIALS = 50


def layout():
    aois = []
    for i in range(1, PRODUCTS + 1):
        y = (i - 1) * ROW_H + 10
        aois.append({"product": i, "kind": "image", "x": 16, "y": y, "w": 140, "h": 140})
        aois.append({"product": i, "kind": "description", "x": 172, "y": y, "w": 412, "h": 140})
        aois.append({"product": i, "kind": "price", "x": 600, "y": y, "w": 184, "h": 140})
    return {"page": {"w": PAGE_W, "h": ROW_H * PRODUCTS}, "aois": aois}


def fmt(v):
    if v is None:
        return ""
    return np.format_float_positional(float(v), unique=True, trim="-")


# gaze cohort ----------------------------------------------------------------


def first_visits(rng, aois):
    """Random first-visit time per fixated AOI index, on the 40 ms grid."""
    visits = {}
    for idx, a in enumerate(aois):
        p = a["product"]
        if p in NEAR:
            mean, keep = TARGET["near"], 0.8
        elif p in DISTANT:
            mean, keep = TARGET["distant"], 0.7
        else:
            mean, keep = 20000 + 3500 * p, 0.45
        if rng.random() > keep:
            continue
        t = int(np.clip(rng.normal(mean, 9000), 400, 80000)) // STEP * STEP
        visits[idx] = t
    return visits


def spaced(times, gap=400):
    s = sorted(times)
    return all(b - a >= gap for a, b in zip(s, s[1:]))


def participant_visits(rng, aois):
    while True:
        v = first_visits(rng, aois)
        if len(v) >= 6 and spaced(v.values()):
            return v


def group_of(aois, idx):
    p = aois[idx]["product"]
    return "near" if p in NEAR else "distant" if p in DISTANT else None


def hit_targets(rng, cohort, aois):
    """Nudges first-visit times by 40 ms until each group mean is exact."""
    for group, target in TARGET.items():
        units = [(pid, idx) for pid, v in cohort.items() for idx in v if group_of(aois, idx) == group]
        delta = target * len(units) - sum(cohort[pid][idx] for pid, idx in units)
        while delta != 0:
            pid, idx = units[rng.integers(len(units))]
            step = STEP if delta > 0 else -STEP
            v = cohort[pid]
            new = v[idx] + step
            others = [t for k, t in v.items() if k != idx]
            if not 400 <= new <= 80000 or any(abs(new - t) < 400 for t in others):
                continue
            v[idx] = new
            delta -= step


def fixation_plan(rng, visits):
    """List of (aoi index or None, start, duration) in time order."""
    events = sorted(visits.items(), key=lambda kv: kv[1])
    plan = []
    seen = []
    for n, (idx, start) in enumerate(events):
        nxt = events[n + 1][1] if n + 1 < len(events) else TRIAL_MS
        room = nxt - start - STEP
        dur = min(int(rng.integers(4, 18)) * STEP, room - 160 if room > 400 else room)
        dur = max(dur, 160)
        plan.append((idx, start, dur))
        seen.append(idx)
        t = start + dur + STEP
        next_idx = events[n + 1][0] if n + 1 < len(events) else None
        # Fill the gap with revisits and the odd off-AOI fixation.
        while True:
            d = int(rng.integers(4, 12)) * STEP
            if t + d + STEP > nxt or rng.random() < 0.35:
                break
            prev = plan[-1][0]
            if rng.random() < 0.15:
                target = None
            else:
                choices = [s for s in seen if s != prev and s != next_idx]
                if not choices:
                    break
                target = choices[int(rng.integers(len(choices)))]
            if target is None and prev is None:
                break
            plan.append((target, t, d))
            t += d + STEP * int(rng.integers(1, 4))
    for (_, s0, d0), (_, s1, _) in zip(plan, plan[1:]):
        assert s0 + d0 < s1
    assert plan[-1][1] + plan[-1][2] <= TRIAL_MS
    return plan


def samples_for(rng, plan, aois):
    rows = []
    for idx, start, dur in plan:
        if idx is None:
            cx, cy, jit = 8, 1120, 5
        else:
            a = aois[idx]
            cx, cy, jit = a["x"] + a["w"] // 2, a["y"] + a["h"] // 2, 12
        for t in range(start, start + dur + 1, STEP):
            rows.append((t, cx + int(rng.integers(-jit, jit + 1)), cy + int(rng.integers(-jit, jit + 1))))
    return rows


def metrics_for(plan, aois):
    out = []
    for idx in range(len(aois)):
        mine = [(s, d) for a, s, d in plan if a == idx]
        runs = 0
        prev = object()
        for a, _, _ in plan:
            if a == idx and prev != idx:
                runs += 1
            prev = a
        out.append({
            "ttff": mine[0][0] if mine else None,
            "count": len(mine),
            "spent": sum(d for _, d in mine),
            "revisits": max(runs - 1, 0),
        })
    return out


def summary(values):
    if not values:
        return None, None, 0
    return sum(values) / len(values), statistics.median(values), len(values)


def aggregate(trials, aois, cell_of, names):
    cells = {n: {"units": 0, "fixated": 0, "ttff": [], "count": [], "spent": [], "rev": []} for n in names}
    for metrics in trials.values():
        for idx, m in enumerate(metrics):
            c = cell_of(aois[idx])
            if c is None:
                continue
            cell = cells[c]
            cell["units"] += 1
            if m["ttff"] is not None:
                cell["fixated"] += 1
                cell["ttff"].append(m["ttff"])
            cell["count"].append(m["count"])
            cell["spent"].append(m["spent"])
            cell["rev"].append(m["revisits"])
    lines = ["group,units,fixated,ttff_mean_ms,ttff_median_ms,ttff_n,fixation_count_mean,fixation_count_median,"
             "time_spent_mean_ms,time_spent_median_ms,revisit_count_mean,revisit_count_median"]
    for n in names:
        c = cells[n]
        tm, tmed, tn = summary(c["ttff"])
        cm, cmed, _ = summary(c["count"])
        sm, smed, _ = summary(c["spent"])
        rm, rmed, _ = summary(c["rev"])
        lines.append(",".join([n, str(c["units"]), str(c["fixated"]), fmt(tm), fmt(tmed), str(tn), fmt(cm), fmt(cmed),
                               fmt(sm), fmt(smed), fmt(rm), fmt(rmed)]))
    return "\n".join(lines) + "\n"


def make_cohort(root, rng):
    lay = layout()
    aois = lay["aois"]
    pids = [f"P{n:02d}" for n in range(1, 13)]
    cohort = {pid: participant_visits(rng, aois) for pid in pids}
    hit_targets(rng, cohort, aois)
    plans = {pid: fixation_plan(rng, cohort[pid]) for pid in pids}
    trials = {pid: metrics_for(plans[pid], aois) for pid in pids}

    fixtures = root / "data" / "fixtures"
    golden = root / "tests" / "golden" / "gaze"
    fixtures.mkdir(parents=True, exist_ok=True)
    golden.mkdir(parents=True, exist_ok=True)
    (fixtures / "cohort_aoi.json").write_text(json.dumps(lay, indent=2) + "\n")

    rows = ["participant_id,stimulus_id,timestamp_ms,x,y"]
    for pid in pids:
        for t, x, y in samples_for(rng, plans[pid], aois):
            rows.append(f"{pid},{STIMULUS},{t},{x},{y}")
    (fixtures / "cohort_gaze.csv").write_text("\n".join(rows) + "\n")

    lines = ["participant_id,stimulus_id,product,kind,ttff_ms,fixation_count,time_spent_ms,revisit_count"]
    for pid in pids:
        for a, m in zip(aois, trials[pid]):
            lines.append(",".join([pid, STIMULUS, str(a["product"]), a["kind"], "" if m["ttff"] is None else str(m["ttff"]),
                                   str(m["count"]), str(m["spent"]), str(m["revisits"])]))
    (golden / "metrics.csv").write_text("\n".join(lines) + "\n")

    (golden / "aggregate_kind.csv").write_text(aggregate(trials, aois, lambda a: a["kind"], KINDS))
    positions = [str(p) for p in range(1, PRODUCTS + 1)]
    (golden / "aggregate_position.csv").write_text(aggregate(trials, aois, lambda a: str(a["product"]), positions))

    def neighborhood(a):
        return "near" if a["product"] in NEAR else "distant" if a["product"] in DISTANT else None

    (golden / "aggregate_neighborhood.csv").write_text(aggregate(trials, aois, neighborhood, ["near", "distant"]))


# response log -----------------------------------------------------------------


def rt_column(rng, mean_s, median_s, low=900):
    """50 integer RTs (ms) with exactly the given mean and median."""
    mean, med = round(mean_s * 1000), round(median_s * 1000)
    while True:
        below = sorted(int(v) for v in rng.uniform(low, med - 1, 24))
        spread = max(2 * (mean - med), 1500)
        above = sorted(int(v) for v in med + 1 + rng.exponential(spread, 24))
        vals = below + [med, med] + above
        delta = mean * TRIALS - sum(vals)
        # Spread the correction over the upper half so the median stays put.
        for k in range(24):
            share = delta // (24 - k)
            above[k] += share
            delta -= share
        if min(above) <= med:
            continue
        vals = below + [med, med] + sorted(above)
        assert sum(vals) == mean * TRIALS and statistics.median(vals) == med
        return vals


def make_responses(root, rng):
    rows = ["participant_id,task,variant,feature,outlier_positions,selected_position,rt_ms,correct"]
    for (variant, feature), (a1, m1, a2, m2, acc) in TABLE.items():
        while True:
            out1 = rt_column(rng, a1, m1)
            out2 = rt_column(rng, a2, m2)
            if all(x < y for x, y in zip(out1, out2)):
                break
        wrong = round((1 - acc) * 2 * TRIALS)
        wrong_slots = set(int(i) for i in rng.choice(2 * TRIALS, size=wrong, replace=False))
        order = rng.permutation(TRIALS)
        for n in range(TRIALS):
            k = int(order[n])
            pos = sorted(int(p) for p in rng.choice(np.arange(1, PRODUCTS + 1), size=2, replace=False))
            picks = list(pos) if rng.random() < 0.5 else list(reversed(pos))
            for s in range(2):
                if 2 * n + s in wrong_slots:
                    picks[s] = next(p for p in range(1, PRODUCTS + 1) if p not in pos)
            pid = f"W{n + 1:03d}"
            for s, rt in enumerate((out1[k], out2[k])):
                correct = 1 if picks[s] in pos else 0
                rows.append(f"{pid},I,{variant},{feature},{pos[0]};{pos[1]},{picks[s]},{rt},{correct}")
    fixtures = root / "data" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    (fixtures / "responses.csv").write_text("\n".join(rows) + "\n")


# test cards -------------------------------------------------------------------


def make_cards(root, rng):
    from PIL import Image

    cards = root / "data" / "cards"
    cards.mkdir(parents=True, exist_ok=True)

    def save(name, arr):
        Image.fromarray(arr.astype(np.uint8), "RGB").save(cards / name, optimize=False)

    save("uniform_64.png", np.full((64, 64, 3), 128))

    # 8x8 blocks of random colours with per-pixel noise, including dark blocks
    # so the opponency cut-off is exercised.
    blocks = rng.integers(0, 256, size=(8, 8, 3))
    blocks[0, 0] = blocks[5, 3] = (4, 6, 2)
    card = np.repeat(np.repeat(blocks, 8, axis=0), 8, axis=1)
    card = np.clip(card + rng.integers(-12, 13, size=card.shape), 0, 255)
    save("test_card_64.png", card)

    yy, xx = np.mgrid[0:256, 0:256]
    disc = ((xx - 128) ** 2 + (yy - 128) ** 2 <= 100)
    img = np.zeros((256, 256, 3))
    img[disc] = 255
    save("bright_disc_256.png", img)

    img = np.full((128, 128, 3), 128)
    img[40:64, 72:96] = (220, 20, 20)
    save("red_square_128.png", img)


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    make_cards(root, np.random.default_rng(64))
    make_cohort(root, np.random.default_rng(20240611))
    make_responses(root, np.random.default_rng(4220))


if __name__ == "__main__":
    main()
