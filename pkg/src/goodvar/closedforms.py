"""Closed-form solutions used as independent ground truth for the solver.

Each closed form ships with the residual check of its own defining
equation (finite differences for the ODEs, adaptive quadrature for the
integral equation, exhaustive unrolling for the dyadic recursion), so the
solver and the formulas validate each other without sharing code paths.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .sequences import Sequence
from .solver import Target

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# parabolic-kernel ODE:  y^2 F'' + (4 - lam) y F' + 2 F = y^(-beta)

def smooth_ode_solution(lam: float, beta: float, c1: float, c2: float, y: float) -> float:
    """General solution in the oscillatory regime lam^2 - 6 lam + 1 < 0, lam < 3.

    F(y) = y^Re (c1 cos(Im log y) + c2 sin(Im log y)) + c3 y^(-beta) with
    Re = (lam - 3)/2 and Im = sqrt(-(lam^2 - 6 lam + 1))/2.  The particular
    coefficient is c3 = 1/(beta^2 + (lam - 3) beta + 2): the indicial
    polynomial evaluated at -beta, which at lam = 2 is 1/(beta^2 - beta + 2).
    """
    disc = lam * lam - 6.0 * lam + 1.0
    if not (disc < 0.0 and lam < 3.0):
        raise ValueError(f"oscillatory regime needs 3 - 2*sqrt(2) < lam < 3, got {lam}")
    if y < 1.0:
        raise ValueError("y >= 1 required")
    re = (lam - 3.0) / 2.0
    im = math.sqrt(-disc) / 2.0
    c3 = 1.0 / (beta * beta + (lam - 3.0) * beta + 2.0)
    ly = math.log(y)
    return y ** re * (c1 * math.cos(im * ly) + c2 * math.sin(im * ly)) + c3 * y ** -beta


def smooth_ode_exponents(lam: float) -> tuple[float, float]:
    """(Re, Im) of the homogeneous exponents in the oscillatory regime."""
    disc = lam * lam - 6.0 * lam + 1.0
    if not (disc < 0.0 and lam < 3.0):
        raise ValueError(f"oscillatory regime needs 3 - 2*sqrt(2) < lam < 3, got {lam}")
    return (lam - 3.0) / 2.0, math.sqrt(-disc) / 2.0


def smooth_ode_operator(f, lam: float, y: float, h_rel: float = 1e-4) -> float:
    """y^2 F'' + (4 - lam) y F' + 2 F by central differences, h = h_rel * y."""
    h = h_rel * y
    f0 = f(y)
    fp = (f(y + h) - f(y - h)) / (2.0 * h)
    fpp = (f(y + h) - 2.0 * f0 + f(y - h)) / (h * h)
    return y * y * fpp + (4.0 - lam) * y * fp + 2.0 * f0


# ---------------------------------------------------------------------------
# linear kernel ODE:  s y F' + r F = a y^(-beta)

def linear_theta_solution(r: float, s: float, beta: float, a: float, c: float,
                          y: float) -> float:
    """F(y) = a y^(-beta)/(r - beta s) + c y^(-r/s), or the log branch at
    beta = r/s: F(y) = y^(-r/s) (c + log(y)/s)."""
    if s == 0:
        raise ValueError("s must be nonzero")
    if y < 1.0:
        raise ValueError("y >= 1 required")
    if beta == r / s:
        return y ** (-r / s) * (c + math.log(y) / s)
    return a * y ** -beta / (r - beta * s) + c * y ** (-r / s)


def linear_theta_derivative(r: float, s: float, beta: float, a: float, c: float,
                            y: float) -> float:
    """Analytic F'(y) for the residual check of s y F' + r F = a y^(-beta)."""
    if beta == r / s:
        rs = r / s
        return -rs * y ** (-rs - 1.0) * (c + math.log(y) / s) + y ** (-rs - 1.0) / s
    return (-beta * a * y ** (-beta - 1.0) / (r - beta * s)
            - (r / s) * c * y ** (-r / s - 1.0))


def linear_theta_asymptotic(r: float, n: float) -> float:
    """Leading term of the partial sums for the linear kernel with s = 1:

        A(n) ~ n^(-r) / ((1 - r) Gamma(1 - r)),   0 < r < 1,

    which at r = 1/2 reads 2 / sqrt(pi n).
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r in (0, 1) required")
    return n ** -r / ((1.0 - r) * math.gamma(1.0 - r))


# ---------------------------------------------------------------------------
# tent kernel (v23): series solution of the integral equation
#   integral_[1,y] theta(y/t) dF(t) = 1/y

def v23_series(y: float) -> float:
    """The dyadic-threshold series for the tent kernel:

        F(y) = 1 - sum_{0 <= n <= log2 y} (-1)^n/(n+1)! (log(y/2^n))^(n+1).

    Note: the distribution function whose measure actually solves the
    integral equation is v23_series_corrected; this variant keeps the
    thresholds one dyadic step earlier (F(2) = 1 - log 2 here).
    """
    if y < 1.0:
        raise ValueError("y >= 1 required")
    ly = math.log(y)
    total = 0.0
    for n in range(int(ly / LOG2) + 1):
        u = ly - n * LOG2
        total += (-1.0) ** n * u ** (n + 1) / math.factorial(n + 1)
    return 1.0 - total


def v23_series_corrected(y: float) -> float:
    """Same series with every threshold moved one dyadic step up:

        F(y) = 1 - sum_{0 <= n <= log2(y) - 1} (-1)^n/(n+1)! (log(y/2^(n+1)))^(n+1).

    This is the distribution function of delta_1 - v23_density, the measure
    that satisfies the defining integral equation to machine precision (the
    n-th inverse-transform term is supported on (2^(n+1), oo), one factor
    of 2 later than in v23_series).
    """
    if y < 1.0:
        raise ValueError("y >= 1 required")
    ly = math.log(y)
    total = 0.0
    for n in range(int(ly / LOG2)):
        u = ly - (n + 1) * LOG2
        total += (-1.0) ** n * u ** (n + 1) / math.factorial(n + 1)
    return 1.0 - total


def v23_density(t: float) -> float:
    """Density rho with dF(t) = delta_1(dt) - rho(t) dt/t (corrected thresholds)."""
    if t <= 2.0:
        return 0.0
    lt = math.log(t)
    total = 0.0
    for n in range(int(lt / LOG2)):
        u = lt - (n + 1) * LOG2
        total += (-1.0) ** n * u ** n / math.factorial(n)
    return total


def v23_equation_residual(y: float) -> float:
    """Residual of integral_[1,y] theta(y/t) dF(t) - 1/y for the tent kernel.

    The quadrature subdivides at the kernel kink t = y/2 and at the dyadic
    onsets of the density.
    """
    if y < 1.0:
        raise ValueError("y >= 1 required")

    def theta(x: float) -> float:
        return 1.0 - 1.0 / x if x >= 2.0 else 1.0 / x

    if y == 1.0:
        return theta(1.0) - 1.0
    kinks = {y / 2.0}
    k = 1
    while 2.0 ** k < y:
        kinks.add(2.0 ** k)
        k += 1
    pts = sorted(p for p in kinks if 1.0 < p < y)
    val, _ = quad(lambda t: theta(y / t) * v23_density(t) / t, 1.0, y,
                  points=pts, limit=200, epsabs=1e-12, epsrel=1e-12)
    return theta(y) - val - 1.0 / y


def v23_root_s1(tol: float = 1e-12) -> float:
    """The convergence abscissa s1 = 0.641185... solving s e^(s log 2) = 1."""
    return float(brentq(lambda s: s * 2.0 ** s - 1.0, 0.3, 0.9, xtol=tol, rtol=8.9e-16))


# ---------------------------------------------------------------------------
# almost-Dirac kernel: dyadic recursion

def dirac_U(r, n: int, f: Target | None = None):
    """U(1) = U(2) = 1 and U(n) = f(n) + (1-r)(U(ceil n/2) - U(floor n/2)).

    f = None means the zero target.  Exact when r is a Fraction and the
    target is exact.  Memoization is per call; depth is O(log n).
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    exact = isinstance(r, (int, Fraction))
    q = (1 if exact else 1.0) - r
    memo: dict[int, object] = {1: 1 if exact else 1.0, 2: 1 if exact else 1.0}

    def fval(m: int):
        if f is None or f.kind == "zero":
            return 0 if exact else 0.0
        return f.times_n_exact(m) / Fraction(m) if exact else f.value(m)

    def rec(m: int):
        if m in memo:
            return memo[m]
        v = fval(m) + q * (rec((m + 1) // 2) - rec(m // 2))
        memo[m] = v
        return v

    return rec(n)


def dirac_U_table(r, n_max: int, f: Target | None = None) -> list:
    """U(1..n_max) bottom-up, for exhaustive window enumeration."""
    if n_max < 1:
        raise ValueError("n_max >= 1 required")
    exact = isinstance(r, (int, Fraction))
    one = 1 if exact else 1.0
    q = one - r
    U: list = [0] * (n_max + 1)
    U[1] = one
    if n_max >= 2:
        U[2] = one
    for m in range(3, n_max + 1):
        fm = 0 if f is None or f.kind == "zero" else (
            f.times_n_exact(m) / Fraction(m) if exact else f.value(m))
        U[m] = fm + q * (U[(m + 1) // 2] - U[m // 2])
    return U


def dirac_window_maxima(r, n_top: int) -> list[dict]:
    """For n = 1..n_top (zero target): max |U(k)| over k <= 2^n + 1 vs the
    endpoint |U(2^n + 1)|.  The endpoint never dominates: |U(1)| = 1 beats
    every later value, and inner points like U(11) = (1-r)^2 beat
    |U(17)| = (1-r)^3, so the rows exist to make that failure inspectable.
    """
    U = dirac_U_table(r, 2 ** n_top + 1)
    rows = []
    for n in range(1, n_top + 1):
        top = 2 ** n + 1
        vals = [abs(U[k]) for k in range(1, top + 1)]
        mx = max(vals)
        rows.append({
            "n": n,
            "max_abs": mx,
            "argmax": vals.index(mx) + 1,
            "endpoint_abs": abs(U[top]),
            "endpoint_dominates": mx == abs(U[top]),
        })
    return rows


# ---------------------------------------------------------------------------
# dyadic kernel: explicit coefficients for the floor-sqrt target

#: leading constant of the raw partial sums A'(n) ~ const * sqrt(n):
#: 1/2 - 2*lam*sqrt(2) with lam = (1 + 1/sqrt 8)/2, which collapses to -sqrt 2.
POW2_APRIME_CONST = 0.5 - 2.0 * (0.5 * (1.0 + 1.0 / math.sqrt(8.0))) * math.sqrt(2.0)


def pow2_aprime(n: int) -> Sequence:
    """Raw coefficients a' with sum_k a'_k 2^floor(log2(n/k)) = floor(sqrt n):

      a'_m = 1   iff m = (2k+1)^2,
      a'_m = -j  iff m = 2^(2j-1) b_k, b = sorted merge of {(2k+1)^2} and
                 {8 (2k+1)^2},
      a'_m = 0   otherwise.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    a = [0] * (n + 1)
    k = 0
    while (2 * k + 1) ** 2 <= n:
        a[(2 * k + 1) ** 2] = 1
        k += 1
    bvals = _merged_b(n)
    j = 1
    while 2 ** (2 * j - 1) <= n:
        p = 2 ** (2 * j - 1)
        for b in bvals:
            if p * b > n:
                break
            a[p * b] = -j
        j += 1
    return Sequence(a[1:], label="pow2_aprime", exact=True)


def _merged_b(limit: int) -> list[int]:
    out = set()
    k = 0
    while (2 * k + 1) ** 2 <= limit:
        out.add((2 * k + 1) ** 2)
        k += 1
    k = 0
    while 8 * (2 * k + 1) ** 2 <= limit:
        out.add(8 * (2 * k + 1) ** 2)
        k += 1
    return sorted(out)
