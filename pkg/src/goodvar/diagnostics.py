"""Decay diagnostics for partial-sum traces.

Traces oscillate and change sign, so nothing here regresses pointwise
values; every estimate goes through dyadic envelopes E_j = max |A(n)| over
n in [2^j, 2^(j+1)).  The lower half of the windows is always discarded
(transients at small n dominate the fit otherwise).  All thresholds live in this
module's constants and are echoed into every report so scan outputs are
reproducible bit for bit; none of the diagnostics uses randomness.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .kernels import MKernel
from .sequences import Sequence
from .solver import Target, solve

#: regression slope of log-envelope vs window index beyond which a scaled
#: trace counts as growing (type 2) or, negated, as vanishing (type 3)
TYPE_SLOPE_THRESHOLD = 0.05
#: difference between first-half and second-half index fits beyond which
#: the envelope is flagged as carrying a slowly varying factor
SLOW_VARIATION_DRIFT = 0.015
#: relative floor under which a scaled envelope counts as vanished
LIMSUP_FLOOR = 1e-9
#: minimum trace length for envelope fits
MIN_TRACE = 2 ** 10

_CONSTANTS = {
    "type_slope_threshold": TYPE_SLOPE_THRESHOLD,
    "slow_variation_drift": SLOW_VARIATION_DRIFT,
    "limsup_floor": LIMSUP_FLOOR,
    "min_trace": MIN_TRACE,
}


def _as_trace(A) -> np.ndarray:
    """A(1..N) as arr[1..N] with arr[0] = 0."""
    if isinstance(A, Sequence):
        return A.prefixed()
    arr = np.asarray(A, dtype=float)
    out = np.zeros(arr.size + 1)
    out[1:] = arr
    return out


def _dyadic_envelopes(absA: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(j, E_j) with E_j = max over [2^j, 2^(j+1)); a trailing partial
    window is dropped (its truncated max would bias every fit)."""
    n_max = absA.size - 1
    js = []
    es = []
    j = 0
    while 2 ** (j + 1) - 1 <= n_max:
        lo = 2 ** j
        hi = 2 ** (j + 1)
        js.append(j)
        es.append(absA[lo:hi].max())
        j += 1
    return np.array(js), np.array(es)


@dataclass
class IndexEstimate:
    alpha_hat: float
    window_slopes: list[tuple[int, float]]
    slowly_varying_flag: bool
    confidence_note: str
    constants: dict = field(default_factory=lambda: dict(_CONSTANTS))


def estimate_index(A) -> IndexEstimate:
    """Estimate alpha with |A(n)| ~ n^-alpha (up to slow variation).

    Least-squares slope of log E_j against j log 2 over the upper half of
    the dyadic windows; alpha_hat is its negation.  The slowly-varying flag
    fires when the first-half and second-half fits of that range disagree
    by more than SLOW_VARIATION_DRIFT: a drifting local exponent is the
    envelope signature of a log-like factor.
    """
    arr = _as_trace(A)
    if arr.size - 1 < MIN_TRACE:
        raise ValueError(f"trace length >= {MIN_TRACE} required")
    absA = np.abs(arr)
    js, es = _dyadic_envelopes(absA)
    if es.max() == 0.0:
        return IndexEstimate(alpha_hat=0.0, window_slopes=[(0, 0.0)],
                             slowly_varying_flag=False, confidence_note="degenerate")
    keep = es > 0
    js, es = js[keep], es[keep]
    half = len(js) // 2
    jf, ef = js[half:], np.log(es[half:])
    if len(jf) < 3:
        return IndexEstimate(alpha_hat=0.0, window_slopes=[(0, 0.0)],
                             slowly_varying_flag=False, confidence_note="short trace")
    slope = np.polyfit(jf * np.log(2.0), ef, 1)[0]
    mid = len(jf) // 2
    s1 = np.polyfit(jf[:mid + 1] * np.log(2.0), ef[:mid + 1], 1)[0]
    s2 = np.polyfit(jf[mid:] * np.log(2.0), ef[mid:], 1)[0]
    pair_slopes = [(int(js[i]), float((np.log(es[i + 1]) - np.log(es[i])) / np.log(2.0)))
                   for i in range(len(js) - 1)]
    return IndexEstimate(
        alpha_hat=float(-slope),
        window_slopes=pair_slopes,
        slowly_varying_flag=bool(abs(s2 - s1) > SLOW_VARIATION_DRIFT),
        confidence_note="ok",
    )


def classify_type(A, alpha: float) -> str:
    """Bucket a trace by the behaviour of S_j = max |A(n)| n^alpha per window.

    type1: S_j level with nonvanishing limsup; type2: S_j grows (log-slope
    above TYPE_SLOPE_THRESHOLD per window); type3: S_j decays below the
    negated threshold.  Fits use the upper half of the windows.
    """
    arr = _as_trace(A)
    if arr.size - 1 < MIN_TRACE:
        raise ValueError(f"trace length >= {MIN_TRACE} required")
    ns = np.arange(arr.size, dtype=float)
    ns[0] = 1.0
    scaled = np.abs(arr) * ns ** alpha
    scaled[0] = 0.0
    js, sj = _dyadic_envelopes(scaled)
    if sj.max() == 0.0:
        return "inconclusive"
    half = len(js) // 2
    jf, sf = js[half:], sj[half:]
    if len(jf) < 3 or np.any(sf == 0.0):
        return "inconclusive"
    slope = np.polyfit(jf.astype(float), np.log(sf), 1)[0]
    if slope > TYPE_SLOPE_THRESHOLD:
        return "type2"
    if slope < -TYPE_SLOPE_THRESHOLD:
        return "type3"
    if sf[-3:].mean() > LIMSUP_FLOOR * sj.max():
        return "type1"
    return "inconclusive"


@dataclass
class SlowVariationReport:
    verdict: str                          # "pass" | "fail" | "inconclusive"
    ratios: dict[int, np.ndarray]         # x -> array of (n, L(xn)/L(n))
    first_octave_dev: dict[int, float]    # per x
    last_octave_dev: dict[int, float]     # per x
    note: str
    constants: dict = field(default_factory=lambda: dict(_CONSTANTS))


def slow_variation_check(samples: np.ndarray) -> SlowVariationReport:
    """Test L(xn)/L(n) -> 1 for x in {2, 4} on a sampled table (n, L(n)).

    For each x separately: pass when the mean |ratio - 1| over the last
    octave of available n is clearly smaller than over the first octave
    (drift toward 1) or already below 0.01; fail when it does not shrink.
    The overall verdict passes only if both x do.  Nonpositive L values are
    compared through |L| and noted.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise ValueError("samples must be a table of (n, L(n)) rows")
    n_vals = samples[:, 0].astype(np.int64)
    if n_vals.max() < 8 * max(n_vals.min(), 1):
        raise ValueError("samples must span at least 3 octaves")
    note = ""
    L = dict(zip(n_vals.tolist(), samples[:, 1].tolist()))
    if any(v <= 0.0 for v in L.values()):
        note = "nonpositive L values; ratios computed on |L|"
        L = {k: abs(v) for k, v in L.items()}
    ratios: dict[int, np.ndarray] = {}
    fdev: dict[int, float] = {}
    ldev: dict[int, float] = {}
    verdicts = []
    for x in (2, 4):
        rows = np.array([(n, L[x * n] / L[n]) for n in sorted(L)
                         if x * n in L and L[n] != 0.0])
        ratios[x] = rows if rows.size else np.empty((0, 2))
        if rows.size == 0:
            continue
        lo_n, hi_n = rows[:, 0].min(), rows[:, 0].max()
        first = rows[rows[:, 0] < 2 * lo_n]
        last = rows[rows[:, 0] > hi_n / 2]
        f = float(np.mean(np.abs(first[:, 1] - 1.0)))
        l = float(np.mean(np.abs(last[:, 1] - 1.0)))
        fdev[x], ldev[x] = f, l
        if l < 0.75 * f or l < 0.01:
            verdicts.append("pass")
        elif l > 0.95 * f and l > 0.01:
            verdicts.append("fail")
        else:
            verdicts.append("inconclusive")
    if not verdicts:
        return SlowVariationReport("inconclusive", ratios, fdev, ldev,
                                   note or "no aligned sample pairs")
    if all(v == "pass" for v in verdicts):
        verdict = "pass"
    elif "fail" in verdicts:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    return SlowVariationReport(verdict, ratios, fdev, ldev, note)


# ---------------------------------------------------------------------------
# truncated-floor family scan

@dataclass
class ABCEntry:
    m: int
    theta_spec: str
    dominated: bool | None            # |A_2m| <= A_2 on the window (None for m=1)
    first_violation: int | None
    violation_count: int


@dataclass
class ABCReport:
    n: int
    n0: int
    entries: list[ABCEntry]
    baseline_slope: float             # regression of A_2(n) sqrt(n) against log n
    overlay: np.ndarray               # columns: n, then A_2m(n) sqrt(n) per m
    ms: list[int]
    constants: dict = field(default_factory=lambda: dict(_CONSTANTS))


def _abc_solve(args: tuple[int, int]) -> tuple[int, np.ndarray]:
    m, n = args
    run = solve(MKernel(2 * m), Target("recip"), n, mode="float")
    return m, run.A.prefixed()


def conjecture_ABC_scan(ms: list[int], n: int, n0: int = 2 ** 10,
                        workers: int = 1, overlay_rows: int = 512) -> ABCReport:
    """Solve the truncated-floor family at 2m for each m and compare traces.

    Reports, per m >= 2, whether |A_2m| <= A_2 holds throughout [n0, n]
    (with the first violating index otherwise), plus the regression slope
    of A_2(n) sqrt(n) against log n — the growth proxy for the baseline
    trace — and the overlay table of all scaled traces.
    """
    if n < 2 ** 14:
        raise ValueError("scan needs n >= 2^14 for meaningful windows")
    ms = sorted(set(ms))
    if not ms:
        return ABCReport(n=n, n0=n0, entries=[], baseline_slope=float("nan"),
                         overlay=np.empty((0, 1)), ms=[])
    if any(m < 1 for m in ms):
        raise ValueError("every m must be >= 1")
    todo = sorted(set(ms) | {1})
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = dict(pool.map(_abc_solve, [(m, n) for m in todo]))
    else:
        traces = dict(_abc_solve((m, n)) for m in todo)
    A2 = traces[1]
    ns = np.arange(n0, n + 1)
    entries = []
    for m in ms:
        if m == 1:
            entries.append(ABCEntry(m=1, theta_spec="m:2", dominated=None,
                                    first_violation=None, violation_count=0))
            continue
        Am = traces[m]
        bad = ns[np.abs(Am[n0: n + 1]) > A2[n0: n + 1]]
        entries.append(ABCEntry(
            m=m, theta_spec=f"m:{2 * m}",
            dominated=bad.size == 0,
            first_violation=int(bad[0]) if bad.size else None,
            violation_count=int(bad.size),
        ))
    scaled2 = A2[n0: n + 1] * np.sqrt(ns)
    baseline_slope = float(np.polyfit(np.log(ns), scaled2, 1)[0])
    grid = np.unique(np.geomspace(n0, n, overlay_rows).astype(np.int64))
    cols = [grid.astype(float)]
    for m in todo:
        cols.append(traces[m][grid] * np.sqrt(grid))
    return ABCReport(n=n, n0=n0, entries=entries, baseline_slope=baseline_slope,
                     overlay=np.column_stack(cols), ms=todo)
