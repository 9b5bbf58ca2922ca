"""Verification suites behind ``kregular verify``.

Each suite takes keyword parameters and returns a list of report items
(see :func:`kregular.docs.report_item`).  :func:`run_suite` wraps one into a
full report with timing.
"""

from __future__ import annotations

import time

from . import hankel as hk
from .docs import make_report, report_item
from .errors import KRegularError
from .kernel_lab import detect_automatic, detect_periodic, guess_linear_representation

PRINTED_D2_PREFIX = (1, 1, 1, -1, -1, -1, 1, -1, -1, -1, -1, 1)


def _first_mismatch(pairs):
    """First ``(index, expected, got)`` with ``expected != got``, else None."""
    for idx, want, got in pairs:
        if want != got:
            return {"index": idx, "expected": str(want), "got": str(got)}
    return None


def oracle_grid(max_m: int = 64, max_n: int = 128) -> list:
    table = hk.d_table(max_m, max_n)
    items = []
    for m in range(max_m + 1):
        bad = _first_mismatch(((n, hk.d_oracle(m, n).value, table[m][n]) for n in range(max_n + 1)))
        items.append(report_item(f"oracle-vs-recurrence m={m}", bad is None, bad))
    return items


def prop42(max_m: int = 2**10, max_n: int = 2**10, horizon: int = 2**16) -> list:
    d = hk.d_value
    bad = _first_mismatch(((n, hk.d1_closed(n), d(1, n)) for n in range(horizon + 1)))
    items = [report_item(f"d(1,n) closed form n<={horizon}", bad is None, bad)]
    table = hk.d_table(max_m, max_n)
    for m in range(1, max_m + 1):
        row = table[m]
        n = next((n for n, v in enumerate(row) if v not in (-1, 0, 1)), None)
        ce = None if n is None else {"index": n, "value": str(row[n])}
        items.append(report_item(f"unit values m={m}", n is None, ce))
    return items


def prop43(horizon: int = 2**14) -> list:
    level = max(0, (horizon - 1).bit_length() - 1)
    word = hk.d2_morphism_prefix(level)
    table = hk.d_table(2, horizon - 1)[2]
    bad = _first_mismatch(((n, word[n], table[n]) for n in range(horizon)))
    return [report_item(f"A-word prefix = d(2,n) n<{horizon}", bad is None, bad)]


def morphism(level: int = 13) -> list:
    words = hk.morphism_words(level)
    got = tuple(words.a[: len(PRINTED_D2_PREFIX)])
    items = [
        report_item(
            "printed prefix of d(2,n)",
            got == PRINTED_D2_PREFIX,
            {"expected": list(PRINTED_D2_PREFIX), "got": list(got)},
        )
    ]
    prev = hk.morphism_words(level - 1)
    ok = words.a == prev.a + prev.b and words.b == tuple(-x for x in prev.a) + prev.b
    items.append(report_item(f"A/B substitution at level {level}", ok, {"level": level}))
    return items


def prop44(max_m: int = 128, max_n: int = 2**12) -> list:
    table = hk.d_table(max_m, max_n)
    items = []
    for m in range(3, max_m + 1):
        row = table[m]
        bad = None
        for n, v in enumerate(row):
            want = hk.support_predicate(m, n)
            got = "zero" if v == 0 else ("nonzero_unit" if v in (1, -1) else "nonzero_nonunit")
            if want != got:
                bad = {"index": n, "expected": want, "got": got}
                break
        items.append(report_item(f"support m={m}", bad is None, bad))
    return items


def cigler(max_k: int = 5, horizon: int = 2**12, eps_first: int = 1) -> list:
    max_m = 2 ** (max_k + 1)
    table = hk.d_table(max_m, horizon)
    items = []
    for m in range(3, max_m + 1):
        mod = 2 ** (hk.support_exponent(m) + 1)
        first = []
        second = []
        for n in range(1, horizon // mod + 1):
            v0, v1 = hk.cigler_values(m, n, eps_first)
            i0, i1 = hk.cigler_indices(m, n)
            first.append((n, v0, table[m][i0]))
            second.append((n, v1, table[m][i1]))
        for label, pairs in (("2^(k+1)n", first), ("2^(k+1)n-m+1", second)):
            bad = _first_mismatch(pairs)
            items.append(report_item(f"cigler m={m} index {label}", bad is None, bad))
    return items


def regularity(
    max_k: int = 4,
    horizon: int = 2**12,
    extended_horizon: int = 2**14,
    rank_cap: int = 64,
    state_cap: int = 256,
) -> list:
    items = []
    try:
        rep = guess_linear_representation(hk.d_sequence(0), 2, horizon, rank_cap, extended_horizon)
        items.append(report_item("d(0,n) is 2-regular", True, detail={"rank": rep.rank}))
    except KRegularError as exc:
        items.append(report_item("d(0,n) is 2-regular", False, {"error": str(exc)}))
    for k in range(1, max_k + 1):
        check = f"d({2 * k},n) is 2-automatic"
        try:
            dfao = detect_automatic(hk.d_sequence(2 * k), 2, horizon, state_cap)
            items.append(report_item(check, True, detail={"states": dfao.num_states}))
        except KRegularError as exc:
            items.append(report_item(check, False, {"error": str(exc)}))
    return items


def periodicity(max_m: int = 64, horizon: int = 2**12) -> list:
    items = []
    for m in range(3, max_m + 1, 2):
        mod = 2 ** (hk.support_exponent(m) + 1)
        check = f"d({m},n) periodic, period | {mod}"
        try:
            per = detect_periodic(hk.d_sequence(m), mod, mod, horizon)
        except KRegularError as exc:
            items.append(report_item(check, False, {"error": str(exc)}))
            continue
        ok = mod % per.period == 0
        detail = {"period": per.period, "preperiod": per.preperiod}
        items.append(report_item(check, ok, detail, detail=detail))
    return items


SUITES = {
    "oracle-grid": oracle_grid,
    "prop42": prop42,
    "prop43": prop43,
    "prop44": prop44,
    "morphism": morphism,
    "cigler": cigler,
    "regularity": regularity,
    "periodicity": periodicity,
}


def run_suite(name: str, **params) -> dict:
    start = time.perf_counter()
    items = SUITES[name](**params)
    return make_report(name, dict(params), items, time.perf_counter() - start)
