"""Breakpoint/slope profiles and the condition checkers built on them.

A piecewise-linear-through-the-origin diamond view is described by two
sequences: breakpoints I (decreasing, I_1 = 1) and slopes J, with
theta_diamond(t) = J_n t on (I_{n+1}, I_n].  For the floor kernel and
coefficient kernels, I_n = 1/x_n at the plateau edges x_n of
g(x) = x theta(x), and J_n is the plateau value of g.

The compensation checker evaluates seven conditions on such a profile;
the genuinely finite conditions exactly, the three limit conditions as
finite-prefix trend proxies reported "consistent"/"violated"/"inconclusive",
never as proofs.  Every report carries the prefix depth it used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import digamma, polygamma

from .kernels import (
    CoeffKernel,
    DiracKernel,
    FloorKernel,
    FracKernel,
    LinearKernel,
    MKernel,
    Pow2Kernel,
    PW32Kernel,
    SmoothKernel,
    SqrtFloorKernel,
    ThetaFunction,
    V23Kernel,
)

#: guard band for float profile comparisons (the Davenport-Heilbronn
#: pattern only exists in floats)
FLOAT_GUARD = 1e-9
#: regression slope of the condition-7 partial sums against log k above
#: which the sum counts as divergence-consistent, below 0.02 as plateaued
DIVERGENCE_SLOPE_MIN = 0.1
DIVERGENCE_SLOPE_FLAT = 0.02

ZETA2 = math.pi * math.pi / 6.0


# ---------------------------------------------------------------------------
# profiles

@dataclass
class IJProfile:
    """Breakpoints and slopes; entry 0 of each list is I_1 / J_1."""

    I: list
    J: list
    source: str
    exact: bool

    @property
    def depth(self) -> int:
        return len(self.I)

    def I_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.I])

    def J_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.J])

    def verify(self, theta: ThetaFunction, tol: float = 1e-12) -> float:
        """Max deviation of theta_diamond(t) - J_n t at interval midpoints."""
        worst = 0.0
        for i in range(self.depth - 1):
            mid = (float(self.I[i]) + float(self.I[i + 1])) / 2.0
            worst = max(worst, abs(theta.diamond(mid) - float(self.J[i]) * mid))
        if worst > tol:
            raise AssertionError(f"profile does not match kernel: deviation {worst}")
        return worst


def extract_IJ(theta: ThetaFunction, depth: int) -> IJProfile:
    """First `depth` plateaus of g(x) = x theta(x) as an IJProfile.

    Defined for the floor kernel (I_n = 1/n, J_n = n) and for coefficient
    kernels (plateau edges of the divisor-weighted floor sum).  Kernels
    whose diamond view is not piecewise linear through the origin are
    rejected.
    """
    if depth < 1:
        raise ValueError("depth >= 1 required")
    if isinstance(theta, FloorKernel):
        I = [Fraction(1, n) for n in range(1, depth + 1)]
        J = list(range(1, depth + 1))
        return IJProfile(I=I, J=J, source=theta.spec(), exact=True)
    if isinstance(theta, CoeffKernel):
        edges: list[int] = []
        x_max = max(4 * depth, 16)
        while len(edges) < depth:
            edges = theta.plateau_edges(x_max)
            if x_max > 10 ** 8:
                raise RuntimeError(f"could not find {depth} plateau edges below {x_max}")
            x_max *= 2
        edges = edges[:depth]
        if edges[0] != 1:
            raise AssertionError("first plateau edge must be x = 1 (nonzero pivot)")
        exact = theta.exact_capable
        J = []
        acc = 0 if exact else 0.0
        for x in edges:
            acc = acc + theta.jump(x)
            J.append(acc)
        if exact:
            I = [Fraction(1, x) for x in edges]
        else:
            I = [1.0 / x for x in edges]
        return IJProfile(I=I, J=J, source=theta.spec(), exact=exact)
    raise ValueError(f"{theta.family} kernel has no piecewise-linear profile")


# ---------------------------------------------------------------------------
# compensation conditions

@dataclass
class ConditionVerdict:
    name: str
    status: str              # satisfied | violated | consistent | inconclusive
    witness: int | None = None
    detail: str = ""


@dataclass
class ConditionReport:
    source: str
    depth: int
    conditions: list[ConditionVerdict]
    predicted_index: float | None
    guard: float = FLOAT_GUARD

    @property
    def all_pass(self) -> bool:
        return all(c.status in ("satisfied", "consistent") for c in self.conditions)

    def condition(self, key: str) -> ConditionVerdict:
        for c in self.conditions:
            if key in c.name:
                return c
        raise KeyError(key)


def check_compensation(profile: IJProfile) -> ConditionReport:
    """Evaluate the seven breakpoint/slope conditions on a profile prefix.

    Finite conditions are checked exactly (float profiles get a FLOAT_GUARD
    band); the three limit conditions are trend proxies: decay halving for
    I_n -> 0, range stabilization for I_n J_n, and log-regression of the
    increment sums for divergence.
    """
    if profile.depth < 16:
        raise ValueError("profile depth >= 16 required")
    I = profile.I
    J = profile.J
    d = profile.depth
    guard = 0.0 if profile.exact else FLOAT_GUARD
    out: list[ConditionVerdict] = []

    # 1. I1 = 1 and 0 < I2 <= 1/2
    ok = abs(float(I[0]) - 1.0) <= guard and 0.0 < float(I[1]) <= 0.5 + guard
    out.append(ConditionVerdict(
        name="I1 = 1 and 0 < I2 <= 1/2",
        status="satisfied" if ok else "violated",
        witness=None if ok else 1,
        detail=f"I1={float(I[0]):.6g}, I2={float(I[1]):.6g}"))

    # 2. I(n+1) < I(n) <= I(n+1)/I2
    w2 = None
    for n in range(d - 1):
        lo = float(I[n + 1])
        hi = float(I[n + 1]) / float(I[1])
        if not (lo < float(I[n]) <= hi + guard):
            w2 = n + 1
            break
    out.append(ConditionVerdict(
        name="I(n+1) < I(n) <= I(n+1)/I2",
        status="satisfied" if w2 is None else "violated",
        witness=w2,
        detail="" if w2 is None else
        f"at n={w2}: I(n)={float(I[w2 - 1]):.6g}, I(n+1)={float(I[w2]):.6g}"))

    # 3. I(n) -> 0 (proxy: halving over the prefix)
    ratio = float(I[d - 1]) / float(I[d // 2 - 1])
    if ratio <= 0.75:
        st3 = "consistent"
    elif ratio > 0.99:
        st3 = "inconclusive"
    else:
        st3 = "consistent"
    out.append(ConditionVerdict(
        name="I(n) -> 0",
        status=st3,
        detail=f"I(depth)/I(depth/2) = {ratio:.4g}"))

    # 4. J1 >= 1 and J2 I2 <= J1 I1
    j1i1 = float(J[0]) * float(I[0])
    j2i2 = float(J[1]) * float(I[1])
    ok4 = float(J[0]) >= 1.0 - guard and j2i2 <= j1i1 + guard
    out.append(ConditionVerdict(
        name="J1 >= 1 and J2*I2 <= J1*I1",
        status="satisfied" if ok4 else "violated",
        witness=None if ok4 else 2,
        detail=f"J1*I1={j1i1:.6f}, J2*I2={j2i2:.6f}"
               + ("" if ok4 else f"; left limit of diamond at I2 is {j2i2:.6f} > diamond(1)={j1i1:.6f}")))

    # 5. J nondecreasing
    w5 = None
    for n in range(d - 1):
        if float(J[n + 1]) < float(J[n]) - guard:
            w5 = n + 1
            break
    out.append(ConditionVerdict(
        name="J(n+1) >= J(n)",
        status="satisfied" if w5 is None else "violated",
        witness=w5,
        detail="" if w5 is None else
        f"at n={w5}: J(n)={float(J[w5 - 1]):.6g} > J(n+1)={float(J[w5]):.6g}"))

    # 6. I(n) J(n) converges (proxy: range stabilization on the upper half)
    ij = profile.I_float() * profile.J_float()
    q1 = ij[d // 2: 3 * d // 4]
    q2 = ij[3 * d // 4:]
    r1 = float(q1.max() - q1.min()) if q1.size else 0.0
    r2 = float(q2.max() - q2.min()) if q2.size else 0.0
    scale = max(abs(float(np.median(ij))), 1e-12)
    if r2 <= 0.8 * r1 + 1e-12 or r2 <= 0.05 * scale:
        st6 = "consistent"
    else:
        st6 = "inconclusive"
    out.append(ConditionVerdict(
        name="I(n)*J(n) converges",
        status=st6,
        detail=f"range {r1:.4g} -> {r2:.4g} around {float(np.median(ij)):.4g}"))

    # 7. sum_k (J(k) - J(k-1)) I(k) -> +infinity (proxy: log-regression slope)
    inc = (profile.J_float()[1:] - profile.J_float()[:-1]) * profile.I_float()[1:]
    partial = np.cumsum(inc)
    ks = np.arange(2, d + 1, dtype=float)
    half = len(ks) // 2
    slope = float(np.polyfit(np.log(ks[half:]), partial[half:], 1)[0])
    if slope >= DIVERGENCE_SLOPE_MIN:
        st7 = "consistent"
    elif slope <= DIVERGENCE_SLOPE_FLAT:
        st7 = "violated"
    else:
        st7 = "inconclusive"
    out.append(ConditionVerdict(
        name="sum (J(k)-J(k-1))*I(k) diverges",
        status=st7,
        witness=None,
        detail=f"partial-sum slope vs log k: {slope:.4f} "
               f"(final partial sum {float(partial[-1]):.4f})"))

    all_ok = all(c.status in ("satisfied", "consistent") for c in out)
    return ConditionReport(
        source=profile.source,
        depth=d,
        conditions=out,
        predicted_index=float(I[1]) if all_ok else None,
        guard=guard,
    )


# ---------------------------------------------------------------------------
# smooth comparison hypotheses

@dataclass
class ComparisonReport:
    ordered: bool
    first_order_violation: float | None
    variations_match: bool
    first_variation_mismatch: float | None
    identical: bool
    grid: int

    @property
    def passed(self) -> bool:
        return self.ordered and self.variations_match


def check_comparison_smooth(theta1: ThetaFunction, theta2: ThetaFunction,
                            grid: int = 2048) -> ComparisonReport:
    """Hypotheses for comparing two C^1 kernels on a diamond-view grid:
    theta1 <= theta2 pointwise, and the three monotonicity patterns (of
    theta1, theta2, and their difference) coincide.

    Identically equal kernels pass trivially.  Only the continuous families
    (smooth, linear) are accepted.
    """
    for th in (theta1, theta2):
        if not isinstance(th, (SmoothKernel, LinearKernel)):
            raise ValueError(f"{th.family} is not one of the C^1 families (smooth, linear)")
    ts = np.linspace(1.0 / grid, 1.0, grid)
    d1 = theta1.diamond_many(ts)
    d2 = theta2.diamond_many(ts)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(d2))))
    order_bad = np.nonzero(d1 > d2 + tol)[0]
    ordered = order_bad.size == 0
    first_order = float(ts[order_bad[0]]) if not ordered else None
    if np.allclose(d1, d2, rtol=0.0, atol=tol):
        return ComparisonReport(ordered=True, first_order_violation=None,
                                variations_match=True, first_variation_mismatch=None,
                                identical=True, grid=grid)

    def pattern(vals: np.ndarray) -> np.ndarray:
        dv = np.diff(vals)
        sg = np.zeros(dv.size, dtype=np.int8)
        sg[dv > tol] = 1
        sg[dv < -tol] = -1
        return sg

    p1 = pattern(d1)
    p2 = pattern(d2)
    pd = pattern(d1 - d2)
    mism = np.nonzero((p1 != p2) | (p1 != pd))[0]
    variations_match = mism.size == 0
    first_mismatch = float(ts[mism[0]]) if not variations_match else None
    return ComparisonReport(ordered=ordered, first_order_violation=first_order,
                            variations_match=variations_match,
                            first_variation_mismatch=first_mismatch,
                            identical=False, grid=grid)


# ---------------------------------------------------------------------------
# areas under the diamond view

def area_vd(theta: ThetaFunction, lower: float = 0.0) -> float:
    """integral of theta_diamond over (lower, 1].

    Piecewise-linear families integrate exactly plateau by plateau; the
    infinite plateau tails are summed analytically (trigamma for the
    floor-type kernels, geometric for the dyadic kernel, digamma mean value
    for periodic coefficient kernels).  Smooth families use their closed
    forms.  Everything is accurate to ~1e-9 except periodic coefficient
    kernels at lower = 0, whose mean-value tail is O(1e-6).
    """
    if not 0.0 <= lower < 1.0:
        raise ValueError("lower must lie in [0, 1)")
    if isinstance(theta, LinearKernel):
        r = float(theta.r)
        s = float(theta.s)
        return (s - r) * (1.0 - lower * lower) / 2.0 + r * (1.0 - lower)
    if isinstance(theta, SmoothKernel):
        lam = float(theta.lam)
        F = lambda t: t - lam * (t * t / 2.0 - t ** 3 / 3.0)
        return F(1.0) - F(lower)
    if isinstance(theta, DiracKernel):
        return 1.0 - lower  # differs from the unit kernel on a null set
    if isinstance(theta, V23Kernel):
        lo = lower
        area = 0.375  # t on (1/2, 1]
        if lo < 0.5:
            area += (0.5 - lo) - (0.25 - lo * lo) / 2.0
        else:
            area = (1.0 - lo * lo) / 2.0
        return area
    if isinstance(theta, PW32Kernel):
        return _area_pieces_floorlike(lambda n: float(n), lower, cut=3) \
            + _area_linear_tail(lower, 1.0 / 3.0, slope=1.0, intercept=0.5)
    if isinstance(theta, MKernel):
        m = theta.m
        return _area_pieces_floorlike(lambda n: float(n), lower, cut=m) \
            + _area_linear_tail(lower, 1.0 / m, slope=1.0, intercept=1.0 - 1.0 / m)
    if isinstance(theta, FloorKernel):
        return _area_floor(lower, r=1.0)
    if isinstance(theta, FracKernel):
        # diamond = (1 - r) + r * floor-diamond on every plateau
        r = float(theta.r)
        return (1.0 - r) * (1.0 - lower) + _area_floor(lower, r=r)
    if isinstance(theta, SqrtFloorKernel):
        return _area_sqrtfloor(lower)
    if isinstance(theta, Pow2Kernel):
        return _area_pow2(lower)
    if isinstance(theta, CoeffKernel):
        return _area_coeffs(theta, lower)
    raise ValueError(f"no area rule for {theta.family}")


def _area_pieces_floorlike(J, lower: float, cut: int) -> float:
    """sum of integrals of n*t over ((max(lower, 1/(n+1)), 1/n] for n < cut."""
    total = 0.0
    for n in range(1, cut):
        hi = 1.0 / n
        lo = max(lower, 1.0 / (n + 1))
        if hi > lo:
            total += J(n) * (hi * hi - lo * lo) / 2.0
    return total


def _area_linear_tail(lower: float, top: float, slope: float, intercept: float) -> float:
    """integral of slope*t + intercept over (lower, top], empty if lower >= top."""
    if lower >= top:
        return 0.0
    return slope * (top * top - lower * lower) / 2.0 + intercept * (top - lower)


def _area_floor(lower: float, r: float) -> float:
    """integral over (lower, 1] of r * (floor plateaus n*t); the tail beyond
    the enumerated plateaus is (1/2)(1/(K+1) + trigamma(K+2)), exact to
    the trigamma's precision."""
    if lower > 0.0:
        K = int(math.floor(1.0 / lower))
        total = _area_pieces_floorlike(lambda n: float(n), lower, cut=K + 1)
        return r * total
    K = 10_000
    total = _area_pieces_floorlike(lambda n: float(n), 0.0, cut=K + 1)
    tail = 0.5 * (1.0 / (K + 1) + float(polygamma(1, K + 2)))
    return r * (total + tail)


def _area_sqrtfloor(lower: float) -> float:
    # piece n: diamond = 1 - (1 - n t)/sqrt(n) on (1/(n+1), 1/n],
    # integral = w_n (1 - 1/(2 sqrt(n) (n+1))) with w_n the piece width
    def piece(n: int, lo: float, hi: float) -> float:
        w = hi - lo
        return w - (w - n * (hi * hi - lo * lo) / 2.0) / math.sqrt(n)

    if lower > 0.0:
        K = int(math.floor(1.0 / lower))
        total = 0.0
        for n in range(1, K + 1):
            hi = 1.0 / n
            lo = max(lower, 1.0 / (n + 1))
            if hi > lo:
                total += piece(n, lo, hi)
        return total
    K = 20_000
    total = sum(piece(n, 1.0 / (n + 1), 1.0 / n) for n in range(1, K + 1))
    # remaining pieces: width/(2 sqrt n (n+1)) corrections are O(n^-3.5)
    return total + 1.0 / (K + 1) - 1.0 / (5.0 * (K + 1) ** 2.5)


def _area_pow2(lower: float) -> float:
    # plateau j: diamond = 2^j t on (2^-(j+1), 2^-j], contributing (3/8) 2^-j;
    # the full integral is the geometric sum 3/4 exactly
    if lower == 0.0:
        return 0.75
    total = 0.0
    j = 0
    while 0.5 ** j > lower:
        hi = 0.5 ** j
        lo = max(lower, 0.5 ** (j + 1))
        total += (2.0 ** j) * (hi * hi - lo * lo) / 2.0
        j += 1
    return total


def _area_coeffs(theta: CoeffKernel, lower: float) -> float:
    eps = max(lower, 1e-4)
    x_max = int(math.floor(1.0 / eps))
    edges = theta.plateau_edges(x_max)
    total = 0.0
    acc = 0.0
    for i, x in enumerate(edges):
        acc += float(theta.jump(x))
        hi = 1.0 / x
        lo = 1.0 / edges[i + 1] if i + 1 < len(edges) else eps
        lo = max(lo, eps)
        if hi > lo:
            total += acc * (hi * hi - lo * lo) / 2.0
    if lower < eps:
        # mean-value tail: diamond(t) -> sum z_k / k as t -> 0
        total += _coefficient_mean(theta) * (eps - lower)
    return total


def _coefficient_mean(theta: CoeffKernel) -> float:
    """sum_k z_k / k: digamma closed form for periodic patterns with zero
    pattern sum, direct sum for finite support."""
    if theta.period is None:
        return float(sum(float(theta.z[k]) / k for k in range(1, len(theta.z) + 1)))
    p = theta.period
    pattern = [float(theta.z[k]) for k in range(1, p + 1)]
    if abs(sum(pattern)) > 1e-12:
        raise ValueError("periodic coefficient kernel with nonzero mean has no "
                         "finite diamond limit at 0")
    return float(-sum(pattern[a - 1] * digamma(a / p) for a in range(1, p + 1)) / p)


# ---------------------------------------------------------------------------
# the floor-kernel substitution check

@dataclass
class SectionSevenReport:
    max1: float
    max2: float
    min1: float
    min2: float
    area1: float
    area2: float
    area2_expected: float
    negative_jumps_ok: bool
    first_positive_jump: float | None

    @property
    def passed(self) -> bool:
        return (self.max1 == self.max2 == 1.0 and self.min1 == self.min2 == 0.5
                and abs(self.area2 - self.area2_expected) <= 1e-6
                and abs(self.area1 - 0.75) <= 1e-9
                and self.negative_jumps_ok)


def check_section7(grid: int = 4096) -> SectionSevenReport:
    """theta2 = floor kernel; theta1_diamond(t) = theta2_diamond(t/2 + 1/2).

    The substitution maps (0, 1] into (1/2, 1], where the floor diamond is
    the single line t, so theta1_diamond(t) = t/2 + 1/2 exactly.  Checks:
    sup and inf agree (1 and 1/2, from the plateau structure), the areas
    are zeta(2)/2 and 3/4, and every floor-diamond jump below t = 1/2 is
    downward.
    """
    floor = FloorKernel()
    # sup: attained at t = 1; inf: right-limits at breakpoints are n/(n+1)
    max2 = floor.diamond(1.0)
    min2 = min(n / (n + 1.0) for n in range(1, grid))
    theta1_d = lambda t: floor.diamond(t / 2.0 + 0.5)
    max1 = theta1_d(1.0)
    min1 = 0.5  # t -> 0 limit of t/2 + 1/2, not attained
    # area of theta1: substitution doubles the (1/2, 1] integral of floor
    area1 = 2.0 * area_vd(floor, lower=0.5)
    area2 = area_vd(floor)
    # sampled cross-check that theta1 really is the shifted floor diamond
    ts = np.linspace(1.0 / grid, 1.0, 257)
    assert np.max(np.abs(np.array([theta1_d(t) for t in ts]) - (ts / 2.0 + 0.5))) < 1e-15
    # negative-jump condition for t < 1/2: jump at 1/n is -1/n
    first_pos = None
    for n in range(3, grid):
        t = 1.0 / n
        left = n * t        # plateau J_n t approaching from below
        right = (n - 1) * t
        if right - left > 0.0:
            first_pos = t
            break
    return SectionSevenReport(
        max1=max1, max2=max2, min1=min1, min2=min2,
        area1=area1, area2=area2, area2_expected=ZETA2 / 2.0,
        negative_jumps_ok=first_pos is None,
        first_positive_jump=first_pos,
    )
