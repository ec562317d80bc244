import math
from fractions import Fraction

import numpy as np
import pytest

from goodvar.kernels import (
    CoeffKernel,
    DiracKernel,
    ExactnessError,
    FloorKernel,
    FracKernel,
    LinearKernel,
    MKernel,
    Pow2Kernel,
    PW32Kernel,
    SmoothKernel,
    SqrtFloorKernel,
    make_theta,
    named_coeff_kernel,
    parse_theta,
    vd_sample,
)
from goodvar.sequences import Sequence, unit

ALL_SPECS = ["floor", "frac:r=0.8", "sqrtfloor", "pw32", "smooth:lambda=2",
             "linear:r=0.5,s=1", "v23", "dirac:r=0.75", "pow2", "m:4",
             "coeffs:chi4", "coeffs:alt", "coeffs:dh"]


def test_eval_examples():
    assert FloorKernel()(1.0) == 1.0
    assert FloorKernel()(2.5) == pytest.approx(0.8)
    assert SqrtFloorKernel()(2.5) == pytest.approx(1.0 - 0.5 / (2.5 * math.sqrt(2)))
    assert make_theta("v23")(4.0) == pytest.approx(0.75)
    assert make_theta("m", m=2).diamond(0.4) == pytest.approx(0.9)
    assert parse_theta("frac:r=0.8")(2.5) == pytest.approx((2.5 - 0.8 * 0.5) / 2.5)


def test_domain_errors():
    with pytest.raises(ValueError):
        FloorKernel()(0.5)
    with pytest.raises(ValueError):
        FloorKernel().diamond(0.0)
    with pytest.raises(ValueError):
        FloorKernel().diamond(1.5)


def test_floor_diamond_at_half_is_one_sided():
    # theta_diamond(1/2) = theta(2) = 1 exactly (the deconvolution identities
    # force theta = 1 at integers); the value 1/2 is the limit from above.
    fl = FloorKernel()
    assert fl.diamond(0.5) == 1.0
    assert fl.diamond(0.5 + 1e-9) == pytest.approx(0.5, abs=1e-8)
    assert fl.diamond(0.5 - 1e-9) == pytest.approx(1.0, abs=1e-8)


def test_pivots():
    for spec in ALL_SPECS:
        th = parse_theta(spec)
        assert th.pivot != 0.0
    assert parse_theta("linear:r=0.5,s=2").pivot == 2.0


def test_parameter_validation():
    with pytest.raises(ValueError):
        LinearKernel(1, 0)          # zero pivot
    with pytest.raises(ValueError):
        FracKernel(0)
    with pytest.raises(ValueError):
        FracKernel(Fraction(3, 2))
    with pytest.raises(ValueError):
        DiracKernel(1)
    with pytest.raises(ValueError):
        MKernel(1)
    with pytest.raises(ValueError):
        CoeffKernel(z=Sequence([0, 1], label="bad"))  # zero pivot


def test_exact_matches_float_on_rationals():
    for spec in ["floor", "frac:r=0.8", "pw32", "smooth:lambda=2",
                 "linear:r=0.5,s=1", "v23", "dirac:r=0.75", "pow2", "m:4",
                 "coeffs:chi4", "coeffs:alt"]:
        th = parse_theta(spec)
        for num in range(1, 40):
            for den in range(1, 12):
                if num >= den:
                    x = Fraction(num, den)
                    assert float(th.eval_exact(x)) == pytest.approx(th(float(x)), abs=1e-12), spec


def test_exactness_refusals():
    with pytest.raises(ExactnessError):
        SqrtFloorKernel().eval_exact(Fraction(5, 2))
    with pytest.raises(ExactnessError):
        parse_theta("coeffs:dh").eval_exact(Fraction(5, 2))


def test_boundedness_sampling():
    xs = np.geomspace(1.0, 1e6, 4000)
    bounds = {"floor": 1.0, "frac:r=0.8": 1.0, "sqrtfloor": 1.0, "pw32": 1.0,
              "smooth:lambda=2": 1.0, "linear:r=0.5,s=1": 1.0, "v23": 1.0,
              "dirac:r=0.75": 1.0, "pow2": 1.0, "m:4": 1.0}
    for spec, bound in bounds.items():
        th = parse_theta(spec)
        vals = th.eval_many(xs)
        assert np.all(np.abs(vals) <= bound + 1e-12), spec
    # coefficient kernels are bounded but not by 1
    for spec in ("coeffs:chi4", "coeffs:alt", "coeffs:dh"):
        th = parse_theta(spec)
        vals = th.eval_many(np.geomspace(1.0, 1e5, 500))
        assert np.max(np.abs(vals)) < 3.0, spec


def test_floor_grid_invariants():
    fl = FloorKernel()
    for n in range(1, 200):
        assert fl(float(n)) == 1.0
    xs = np.linspace(1.0, 500.0, 20001)
    assert np.all(fl.eval_many(xs) >= 0.5)


def test_m_kernel_agrees_with_floor_below_m():
    fl = FloorKernel()
    for m in (2, 3, 5, 8):
        th = MKernel(m)
        xs = np.linspace(1.0, m - 1e-9, 997)
        assert np.allclose(th.eval_many(xs), fl.eval_many(xs))
        xs = np.linspace(m, 5.0 * m, 997)
        assert np.allclose(th.eval_many(xs), 1.0 / xs + 1.0 - 1.0 / m)


def test_coeff_unit_reproduces_floor():
    e1 = CoeffKernel(z=unit(64), name="e1")
    fl = FloorKernel()
    xs = np.linspace(1.0, 60.0, 1484)
    assert np.allclose(e1.eval_many(xs), fl.eval_many(xs))
    assert e1.eval_exact(Fraction(7, 2)) == fl.eval_exact(Fraction(7, 2))


def test_coeff_diamond_linear_between_breakpoints():
    for name in ("chi4", "alt"):
        th = named_coeff_kernel(name)
        bps = th.breakpoints(0.05)
        edges = [0.05] + list(bps) + [1.0]
        for lo, hi in zip(edges[:-1], edges[1:]):
            ts = np.linspace(lo + (hi - lo) * 1e-3, hi, 25)
            ratios = th.diamond_many(ts) / ts
            assert np.max(np.abs(ratios - ratios[0])) < 1e-12, (name, lo, hi)


def test_breakpoints_examples():
    fl = FloorKernel()
    assert fl.breakpoints(0.2) == pytest.approx([0.25, 1 / 3, 0.5])
    assert Pow2Kernel().breakpoints(0.1) == pytest.approx([0.125, 0.25, 0.5])
    assert MKernel(4).breakpoints(0.01) == pytest.approx([0.25, 1 / 3, 0.5])
    assert parse_theta("v23").breakpoints(0.1) == [0.5]
    assert parse_theta("pw32").breakpoints(0.1) == pytest.approx([1 / 3, 0.5])
    # chi4: the floor jump at x = 3 cancels against -floor(x/3), so the only
    # edge above t = 0.3 besides x = 1 is x = 2
    assert named_coeff_kernel("chi4").breakpoints(0.3) == pytest.approx([0.5])
    assert named_coeff_kernel("chi4").breakpoints(0.19) == pytest.approx([0.2, 0.25, 0.5])
    assert SmoothKernel(2).breakpoints(0.1) == []
    assert LinearKernel(1, 1).breakpoints(0.1) == []
    with pytest.raises(ValueError):
        fl.breakpoints(0.0)


def test_alt_kernel_edges_skip_cancelled_jumps():
    alt = named_coeff_kernel("alt")
    edges = alt.plateau_edges(12)
    # x = 2, 6, 10 have divisor sums 0 under the alternating weights
    assert edges == [1, 3, 4, 5, 7, 8, 9, 11, 12]


def test_vd_sample_straddles_breakpoints():
    fl = FloorKernel()
    table = vd_sample(fl, points=50, t_min=0.2)
    ts = table[:, 0]
    assert np.all(np.diff(ts) > 0)
    # a pair of samples hugs t = 1/2 and shows the jump
    below = table[(ts > 0.4999) & (ts < 0.5), 1]
    above = table[(ts > 0.5) & (ts < 0.5001), 1]
    assert below.size and above.size
    assert below[-1] == pytest.approx(1.0, abs=1e-5)
    assert above[0] == pytest.approx(0.5, abs=1e-5)


def test_vd_sample_smooth_and_constant():
    table = vd_sample(SmoothKernel(2), points=301, t_min=0.01)
    vals = table[:, 1]
    tmin = table[np.argmin(vals), 0]
    assert vals.min() == pytest.approx(0.5, abs=1e-3)
    assert tmin == pytest.approx(0.5, abs=5e-3)
    table = vd_sample(LinearKernel(1, 1), points=100, t_min=0.1)
    assert np.allclose(table[:, 1], 1.0)


def test_vd_sample_validation():
    with pytest.raises(ValueError):
        vd_sample(FloorKernel(), points=1, t_min=0.1)
    with pytest.raises(ValueError):
        vd_sample(FloorKernel(), points=10, t_min=0.0)


def test_dirac_window():
    th = DiracKernel(Fraction(3, 4))
    assert th(2.0) == 0.75
    assert th(2.0 + 5e-13) == 0.75
    assert th(2.0 + 5e-12) == 1.0
    assert th.eval_exact(Fraction(2)) == Fraction(3, 4)
    assert th.eval_exact(Fraction(199, 100)) == 1


def test_parse_theta_round_trip():
    for spec in ALL_SPECS:
        th = parse_theta(spec)
        assert parse_theta(th.spec()).spec() == th.spec()
    assert parse_theta("frac:r=0.8").r == Fraction(4, 5)
    with pytest.raises(ValueError):
        parse_theta("nonsense")
    with pytest.raises(ValueError):
        parse_theta("floor:r=1")
    with pytest.raises(ValueError):
        parse_theta("frac:oops")
    with pytest.raises(ValueError):
        parse_theta("coeffs:unknown")


def test_coeffs_from_file(tmp_path):
    p = tmp_path / "z.csv"
    p.write_text("n,value\n1,1\n3,-1/2\n")
    th = parse_theta(f"coeffs:file={p}")
    assert th.exact_capable
    assert th.g_int(3) == Fraction(3, 1) - Fraction(1, 2)
    p2 = tmp_path / "zf.csv"
    p2.write_text("n,value\n1,1.5e0\n2,2.25e-1\n")
    th2 = parse_theta(f"coeffs:file={p2}")
    assert not th2.exact_capable
    assert th2.g_int(2) == pytest.approx(1.5 * 2 + 0.225)
