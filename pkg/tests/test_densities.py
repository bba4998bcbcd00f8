"""Limit densities: hand-expanded closed forms, GUE identity, quadrature."""

import math
import random

import numpy as np
import pytest

from tensorlimits.densities import (
    DensityModel,
    gue_identity_check,
    make_density_model,
    normalization_quadrature,
    p_eta,
    p_eta_extended,
    p_xi,
    quadrature_box,
)
from tensorlimits.errors import OutsideDomain, RankTooLarge, TraceNotZero, UnsupportedType
from tensorlimits.rootsys import build_root_system

A1 = build_root_system("A1")
A2 = build_root_system("A2")
B2 = build_root_system("B2")
G2 = build_root_system("G2")

SQ = math.sqrt


def closed_form_a1_xi(x):
    return SQ(1 / 2) / SQ(2 * math.pi) * math.exp(-x * x / 4)


def closed_form_a1_eta(x):
    return SQ(1 / 2) / SQ(2 * math.pi) * x * x * math.exp(-x * x / 4)


def closed_form_a2_xi(x, y):
    return SQ(1 / 3) / (2 * math.pi) * math.exp(-(x * x + x * y + y * y) / 3)


def closed_form_a2_eta(x, y):
    poly = x * x * y * y * (x + y) ** 2 / 2
    return poly * closed_form_a2_xi(x, y)


def closed_form_b2_xi(x, y):
    return SQ(1 / 4) / (2 * math.pi) * math.exp(-(x * x + x * y + y * y / 2) / 2)


def closed_form_b2_eta(x, y):
    poly = x * x * (y / 2) ** 2 * (x + y) ** 2 * (x + y / 2) ** 2 / (3 / 2)
    return poly * closed_form_b2_xi(x, y)


def rel_close(a, b, tol):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


def test_closed_form_density_reproduction():
    rng = random.Random(51)
    for _ in range(40):
        x = rng.uniform(-4, 4)
        assert rel_close(p_xi(A1, (x,)), closed_form_a1_xi(x), 1e-12)
        assert rel_close(p_eta(A1, (abs(x),)), closed_form_a1_eta(abs(x)), 1e-12)
        y = rng.uniform(-4, 4)
        assert rel_close(p_xi(A2, (x, y)), closed_form_a2_xi(x, y), 1e-12)
        assert rel_close(p_eta(A2, (abs(x), abs(y))), closed_form_a2_eta(abs(x), abs(y)), 1e-12)
        assert rel_close(p_xi(B2, (x, y)), closed_form_b2_xi(x, y), 1e-12)
        assert rel_close(p_eta(B2, (abs(x), abs(y))), closed_form_b2_eta(abs(x), abs(y)), 1e-12)


def test_eta_domain_and_walls():
    assert p_eta(A2, (0.0, 1.3)) == 0.0
    assert p_eta(A2, (2.0, 0.0)) == 0.0
    with pytest.raises(OutsideDomain):
        p_eta(A2, (-0.5, 1.0))


def test_eta_extended_formulas():
    rng = random.Random(53)
    for _ in range(30):
        x = rng.uniform(-5, 5)
        assert rel_close(p_eta_extended(A1, (x,)), 0.5 * closed_form_a1_eta(abs(x)), 1e-12)
    # strictly dominant points: p_eta = |W| * p_eta_extended
    for rs in (A2, B2, G2):
        for _ in range(20):
            x = (rng.uniform(0.1, 3), rng.uniform(0.1, 3))
            assert rel_close(p_eta(rs, x), len(rs.weyl) * p_eta_extended(rs, x), 1e-12)


def test_eta_extended_w_invariance():
    rng = random.Random(57)
    for rs in (A2, B2):
        for _ in range(300):
            x = np.array([rng.uniform(-4, 4), rng.uniform(-4, 4)])
            base = p_eta_extended(rs, x)
            for w in rs.weyl:
                wm = np.array(w.matrix, dtype=float)
                val = p_eta_extended(rs, wm @ x)
                assert rel_close(val, base, 1e-12)


def test_gue_identity_examples():
    lhs, rhs = gue_identity_check((1.0, -1.0))
    assert rel_close(lhs, 4 * math.exp(-1), 1e-14) and rel_close(rhs, lhs, 1e-14)
    lhs, rhs = gue_identity_check((0.0, 0.0))
    assert lhs == rhs == 0.0
    with pytest.raises(TraceNotZero):
        gue_identity_check((1.0, -0.5))
    with pytest.raises(ValueError):
        gue_identity_check((0.0,))


def test_gue_identity_random():
    rng = random.Random(61)
    for n in (3, 4, 5):
        for _ in range(25):
            ints = rng.sample(range(-20, 21), n)
            mean = sum(ints) / n
            a = [v - mean for v in ints]
            lhs, rhs = gue_identity_check(a)
            assert rel_close(lhs, rhs, 1e-10)


def test_model_kinds_and_constants():
    m = make_density_model(A2, "xi")
    assert rel_close(m.norm_const, SQ(1 / 3) / (2 * math.pi), 1e-14)
    eta = make_density_model(B2, "eta")
    assert rel_close(eta.norm_const, SQ(1 / 4) / (2 * math.pi) / 1.5, 1e-14)
    ext = make_density_model(B2, "eta_extended")
    assert rel_close(ext.norm_const, eta.norm_const / 8, 1e-14)
    with pytest.raises(ValueError):
        make_density_model(A2, "normal")
    with pytest.raises(UnsupportedType):
        make_density_model(B2, "gue")
    # gue on type A is the eta density
    gue = make_density_model(A2, "gue")
    pts = np.array([[0.5, 1.5], [2.0, 0.25]])
    assert np.allclose(gue.evaluate(pts), eta_vals := make_density_model(A2, "eta").evaluate(pts), rtol=1e-15)
    assert eta_vals.shape == (2,)


def test_evaluate_masks_cone_kinds():
    eta = make_density_model(A2, "eta")
    vals = eta.evaluate(np.array([[1.0, 1.0], [-1.0, 1.0]]))
    assert vals[0] > 0 and vals[1] == 0.0


def test_normalization_quadrature():
    assert abs(normalization_quadrature(make_density_model(A1, "eta")) - 1) < 1e-6
    assert abs(normalization_quadrature(make_density_model(A1, "xi")) - 1) < 1e-6
    assert abs(normalization_quadrature(make_density_model(A2, "xi")) - 1) < 1e-6
    assert abs(normalization_quadrature(make_density_model(B2, "eta")) - 1) < 1e-4
    ext = normalization_quadrature(make_density_model(A2, "eta_extended"))
    assert abs(ext - 1) < 1e-4


def test_quadrature_rank_cap():
    f4 = build_root_system("F4")
    model = make_density_model(f4, "xi")
    with pytest.raises(RankTooLarge):
        normalization_quadrature(model)
    # an explicit resolution overrides the cap
    val = normalization_quadrature(model, resolution=40)
    assert 0.5 < val < 1.5


def test_xi_covariance_matches_gram_inverse():
    for rs in (A1, A2):
        model = make_density_model(rs, "xi")
        lo, hi = quadrature_box(model)
        res = 400
        axes = [np.linspace(a + (b - a) / (2 * res), b - (b - a) / (2 * res), res) for a, b in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(mesh, axis=-1)
        vals = model.evaluate(pts)
        cell = 1.0
        for a, b in zip(lo, hi):
            cell *= (b - a) / res
        for i in range(rs.rank):
            for j in range(rs.rank):
                moment = float(np.sum(vals * pts[..., i] * pts[..., j])) * cell
                assert abs(moment - float(rs.gram_omega_inv[i][j])) < 1e-5


def test_density_model_shape_handling():
    model = make_density_model(A1, "xi")
    single = model.evaluate(np.array([0.0]))
    assert rel_close(float(single), closed_form_a1_xi(0.0), 1e-14)
    grid = model.evaluate(np.zeros((5, 3, 1)))
    assert grid.shape == (5, 3)
