"""Independent oracles the tests check the implementation against.

Everything here is written from the model's definitions alone, without
importing engine internals, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import math


def ln_iterates(start: float, count: int) -> list[float]:
    """The sequence x, f(x), f(f(x)), ... (count entries) for f(v) = ln(v + 1)."""
    values = []
    value = start
    for _ in range(count):
        value = math.log(value + 1.0)
        values.append(value)
    return values


def first_below(start: float, threshold: float, limit: int = 100) -> int:
    """1-based index of the first iterate of ln(v + 1) below the threshold."""
    value = start
    for step in range(1, limit + 1):
        value = math.log(value + 1.0)
        if value < threshold:
            return step
    raise AssertionError(f"no iterate from {start} fell below {threshold} in {limit} steps")


def ln_iterates_precise(start: str, count: int, dps: int = 50) -> list[str]:
    """High-precision reference sequence via mpmath, as decimal strings."""
    import mpmath as mp

    with mp.workdps(dps):
        values = []
        value = mp.mpf(start)
        for _ in range(count):
            value = mp.log(value + 1)
            values.append(mp.nstr(value, 25))
    return values


def rank_events(
    events: list[dict], cues: list[str], k: int, stem
) -> list[tuple[int, tuple[str, ...], int]]:
    """Brute-force retrieval ranking over plain dict events.

    Each event dict needs: id, seq, tokens (list of grammatical token
    strings), weights (list of all resource weights). Cues are assumed
    normalized and deduplicated. Returns (event id, matched cues, score)
    tuples ranked by score desc, mean weight desc, seq desc, id asc.
    """
    rows = []
    for event in sorted(events, key=lambda e: e["id"]):
        stems = {stem(token) for token in event["tokens"]}
        matched = tuple(cue for cue in cues if stem(cue) in stems)
        if not matched:
            continue
        mean_weight = sum(event["weights"]) / len(event["weights"])
        rows.append((event, matched, len(matched), mean_weight))
    rows.sort(key=lambda row: (-row[2], -row[3], -row[0]["seq"], row[0]["id"]))
    return [(event["id"], matched, score) for event, matched, score, _ in rows[:k]]
