import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial.distance import pdist

from unimeasure.curves import (
    DegenerateCurvatures,
    DegenerateWindow,
    Ellipse,
    HelixParams,
    Lissajous,
    curvatures_to_helix,
    curve_from_dict,
    eval_helix,
    estimate_curvatures,
    fit_chord_coefficients,
    frenet_matrix,
    integrate_frenet,
    is_toric_knot,
    sample_by_arclength,
)

RNG = np.random.default_rng(20240611)


def random_helix(d, rng=RNG):
    m = d // 2
    alphas = np.sort(rng.uniform(0.5, 3.0, m)) * np.arange(1, m + 1)
    radii = rng.uniform(0.3, 1.0, m)
    b = rng.uniform(0.2, 1.0) if d % 2 else 0.0
    return HelixParams.normalized(radii, alphas, b, d)


# ---- HelixParams / eval ----------------------------------------------------


def test_eval_examples():
    R = 2.5
    circle = HelixParams(((R, 1 / R),))
    assert np.allclose(eval_helix(circle, 0.0), [R, 0])
    p = HelixParams(((0.6, 1.0),), 0.8)
    t = 1.3
    assert np.allclose(eval_helix(p, t), [0.6 * math.cos(t), 0.6 * math.sin(t), 0.8 * t])


def test_circle_chord_series():
    R = 1.7
    circle = HelixParams(((R, 1 / R),))
    for s in (1e-3, 1e-2, 5e-2):
        chord2 = float(np.sum((eval_helix(circle, s) - eval_helix(circle, 0.0)) ** 2))
        assert chord2 == pytest.approx(s**2 - s**4 / (12 * R**2) + s**6 / (360 * R**4), rel=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
def test_unit_speed(d):
    p = random_helix(d)
    t = RNG.uniform(-50, 50, 100)
    assert np.max(np.abs(np.linalg.norm(p.derivative(t, 1), axis=1) - 1)) < 1e-10


def test_invalid_helix_parameters():
    with pytest.raises(ValueError, match="unit speed"):
        HelixParams(((1.0, 2.0),))
    with pytest.raises(ValueError, match="distinct"):
        HelixParams.normalized([1, 1], [1, -1])
    with pytest.raises(ValueError):
        HelixParams(((-0.6, 1.0),), 0.8)
    with pytest.raises(ValueError):
        HelixParams(((0.6, 1.0),), 0.8, dim=2)


def test_json_round_trip():
    p = random_helix(5)
    q = curve_from_dict(p.to_dict())
    assert q == p
    with pytest.raises(ValueError):
        HelixParams.from_dict({**p.to_dict(), "extra": 1})


# ---- Frenet matrix and curvature <-> helix ---------------------------------


def test_frenet_matrix():
    assert np.array_equal(frenet_matrix([2.0]), [[0, 2.0], [-2.0, 0]])
    M = frenet_matrix([1.0, 0.5])
    assert np.array_equal(M, [[0, 1.0, 0], [-1.0, 0, 0.5], [0, -0.5, 0]])
    M = frenet_matrix(RNG.uniform(0.1, 2, 6))
    assert np.array_equal(M + M.T, np.zeros((7, 7)))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_eigenstructure(d):
    ks = RNG.uniform(0.3, 2.0, d - 1)
    ev = np.linalg.eigvals(frenet_matrix(ks))
    assert np.max(np.abs(ev.real)) < 1e-10
    zeros = np.sum(np.abs(ev) < 1e-9)
    assert zeros == (1 if d % 2 else 0)
    pos = np.sort(ev.imag[ev.imag > 1e-9])
    p = curvatures_to_helix(ks)
    assert np.allclose(np.sort(np.abs(p.alphas)), pos, rtol=1e-10)
    assert (p.b > 0) == (d % 2 == 1)


def test_curvatures_to_helix_examples():
    R = 3.0
    p = curvatures_to_helix([1 / R])
    assert p.blocks[0] == pytest.approx((R, 1 / R)) and p.b == 0
    k1, k2 = 0.6, 0.8
    p = curvatures_to_helix([k1, k2])
    n2 = k1 * k1 + k2 * k2
    (r, a), = p.blocks
    assert a == pytest.approx(math.sqrt(n2))
    assert r == pytest.approx(k1 / n2)
    assert p.b == pytest.approx(k2 / math.sqrt(n2))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_curvature_round_trip(d):
    ks = RNG.uniform(0.3, 2.0, d - 1)
    assert np.allclose(curvatures_to_helix(ks).curvatures(), ks, rtol=1e-9)


def test_trailing_zero_curvatures_and_degenerate_interior():
    p = curvatures_to_helix([1.0, 0.0, 0.0], dim=4)
    assert p.dim == 4 and p.blocks[0] == pytest.approx((1.0, 1.0)) and p.b == 0
    line = curvatures_to_helix([0.0, 0.0])
    assert line.blocks == () and line.b == 1
    with pytest.raises(DegenerateCurvatures):
        curvatures_to_helix([1.0, 0.0, 0.5])


# ---- Frenet integration ----------------------------------------------------


def test_integrate_straight_line():
    states = integrate_frenet([0.0, 0.0], 5.0, 50)
    assert np.allclose(states[-1].position, [5, 0, 0])
    assert np.allclose(states[-1].frame, np.eye(3))


def test_integrate_circle_closes():
    for R in (0.5, 1.0, 4.0):
        states = integrate_frenet([1 / R], 2 * math.pi * R, 2000)
        assert np.linalg.norm(states[-1].position) < 1e-8 * R


def test_integrate_matches_helix_shape():
    ks = [1.1, 0.7]
    p = curvatures_to_helix(ks)
    T = 2 * math.pi / p.max_angular_speed
    states = integrate_frenet(ks, T, 4000)
    s = np.array([st.s for st in states])[::40]
    xs = np.array([st.position for st in states])[::40]
    # congruent curves have equal pairwise distances
    assert np.max(np.abs(pdist(xs) - pdist(eval_helix(p, s)))) < 1e-8


def test_frame_stays_orthonormal():
    states = integrate_frenet([1.3, 0.4, 2.1, 0.9], 200.0, 10_000)
    worst = max(np.max(np.abs(st.frame @ st.frame.T - np.eye(5))) for st in states[::500])
    assert worst < 1e-8


def test_integrate_variable_curvature():
    # curvature s gives the clothoid; the tangent angle is s^2/2
    states = integrate_frenet(lambda s: [s], 2.0, 2000)
    theta = 2.0**2 / 2
    assert np.allclose(states[-1].frame[0], [math.cos(theta), math.sin(theta)], atol=1e-9)


def test_integrate_rejects_zero_steps():
    with pytest.raises(ValueError):
        integrate_frenet([1.0], 1.0, 0)


# ---- curvature estimation --------------------------------------------------


def samples_of(p, h, count, t0=0.0):
    return eval_helix(p, t0 + h * np.arange(count))


def test_estimate_line():
    pts = np.outer(np.arange(40) * 0.1, [0.6, 0.8])
    est = estimate_curvatures(pts, 0.1)
    assert np.max(np.abs(est.kappas)) < 1e-9


def test_estimate_circle_second_order():
    R = 2.0
    p = HelixParams(((R, 1 / R),))
    errs = []
    for h in (0.08, 0.04):
        est = estimate_curvatures(samples_of(p, h, 60), h)
        errs.append(np.max(np.abs(est.kappas[:, 0] - 1 / R)))
    assert errs[0] / errs[1] == pytest.approx(4.0, abs=0.5)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_estimate_round_trip_order(d):
    ks = RNG.uniform(0.5, 1.5, d - 1)
    p = curvatures_to_helix(ks)
    errs = []
    for h in (0.04, 0.02):
        est = estimate_curvatures(samples_of(p, h, 4 * d + 6, t0=0.37), h)
        errs.append(np.max(np.abs(est.kappas - ks)))
    assert errs[1] < 1e-3
    assert errs[0] / errs[1] == pytest.approx(4.0, abs=0.5)


def test_estimate_degenerate_window():
    # a planar circle sampled in R^3: the second pivot vanishes
    p = HelixParams(((1.0, 1.0),), 0.0, dim=3)
    pts = samples_of(p, 0.05, 30)
    est = estimate_curvatures(pts, 0.05)
    assert est.degenerate.all()
    assert np.allclose(est.kappas[:, 0], 1.0, atol=1e-3)
    assert np.all(est.kappas[:, 1] == 0)
    with pytest.raises(DegenerateWindow) as info:
        estimate_curvatures(pts, 0.05, strict=True)
    assert info.value.index >= 0


def test_estimate_ellipse_not_constant():
    e = Ellipse(1.0, 2.0)
    h = 0.02
    est = estimate_curvatures(sample_by_arclength(e, h, 200), h)
    spread = np.ptp(est.kappas[:, 0])
    assert spread > 0.1


# ---- toric knots -----------------------------------------------------------


def test_is_toric_knot_examples():
    circle = HelixParams(((2.0, 0.5),))
    assert is_toric_knot(circle) == (True, pytest.approx(4 * math.pi))
    assert is_toric_knot(HelixParams(((0.6, 1.0),), 0.8)) == (False, None)


def brute_force_period(p, t_max, n=200_000):
    # first return to the starting point after leaving its neighbourhood
    t = np.linspace(1.0, t_max, n)
    gaps = np.linalg.norm(eval_helix(p, t) - eval_helix(p, 0.0), axis=1)
    close = np.nonzero(gaps < 1e-3)[0]
    return t[close[0]] if len(close) else None


def test_is_toric_knot_two_thirds():
    a1 = 1.2
    p = HelixParams.normalized([0.7, 0.4], [a1, a1 * 2 / 3])
    ok, T = is_toric_knot(p)
    assert ok
    alpha1 = p.blocks[0][1]
    assert T == pytest.approx(2 * math.pi * 3 / alpha1)
    assert brute_force_period(p, 1.5 * T) == pytest.approx(T, abs=1e-3)


def test_is_toric_knot_exact_fractions_and_irrational():
    F = Fraction
    p = HelixParams(((F(3, 5), F(1)), (F(2, 5), F(2))), 0, 4)
    assert is_toric_knot(p) == (True, pytest.approx(2 * math.pi))
    q = HelixParams.normalized([0.5, 0.5], [1.0, math.sqrt(2)])
    assert is_toric_knot(q) == (False, None)
    assert q.period is None and not q.is_embedded()


def test_chord_fit_matches_circle_series():
    R = 1.5
    c = fit_chord_coefficients(HelixParams(((R, 1 / R),)))
    assert c[2] == pytest.approx(1.0, abs=1e-12)
    assert c[4] == pytest.approx(-1 / (12 * R**2), rel=1e-10)
    assert c[6] == pytest.approx(1 / (360 * R**4), rel=1e-8)


def test_lissajous_figure_eight_is_not_embedded():
    fig8 = Lissajous(1.0, 1.0, 1, 2)
    assert not fig8.is_embedded()
    assert Lissajous(1.0, 1.0, 1, 1, phase=math.pi / 2).is_embedded()
