"""Root-system construction, Weyl enumeration, forms, and actions."""

import json
import math
import random
from fractions import Fraction

import pytest

from tensorlimits.errors import (
    BasisMismatch,
    NotDominant,
    UnsupportedType,
    WeylCapExceeded,
)
from tensorlimits.linalg import mat, mat_mul, transpose
from tensorlimits.rootsys import (
    ON_WALL,
    CartanType,
    build_root_system,
    b_g_constant,
    casimir_eigenvalue,
    inner_product,
    is_dominant,
    rootsys_from_json,
    rootsys_to_json,
    shifted_action,
    to_dominant_shifted,
    weyl_group_order,
)

SMALL_TYPES = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D2", "D3", "G2"]
ALL_RANK4 = SMALL_TYPES + ["A4", "B4", "C4", "D4", "F4"]


# ---------------------------------------------------------------- cartan types


def test_parse_and_str():
    t = CartanType.parse("b2")
    assert (t.family, t.rank) == ("B", 2)
    assert str(t) == "B2"


@pytest.mark.parametrize("bad", ["E6", "E7", "E8", "G3", "G1", "F3", "F5", "D1", "H3", "A0"])
def test_rejected_types(bad):
    with pytest.raises(UnsupportedType):
        CartanType.parse(bad)


def test_weyl_cap_checked_before_enumeration():
    with pytest.raises(WeylCapExceeded):
        build_root_system("B7")  # 2^7 * 7! = 645120 > 10000
    # and a custom cap can cut off small groups too
    with pytest.raises(WeylCapExceeded):
        build_root_system("A2", weyl_cap=5)


# ---------------------------------------------------------------- construction


def test_a1_smallest_case():
    rs = build_root_system("A1")
    assert rs.C == ((2,),)
    assert rs.positive_roots == ((1,),)
    assert rs.rho == (1,)
    assert len(rs.weyl) == 2
    assert rs.dim_g == 3


def test_b2_literal_tables():
    rs = build_root_system("B2")
    assert rs.C == ((2, -1), (-2, 2))
    assert rs.d == (Fraction(1), Fraction(1, 2))
    assert set(rs.positive_roots) == {(1, 0), (0, 1), (1, 1), (1, 2)}
    assert len(rs.weyl) == 8
    assert rs.dim_g == 10


def test_g2_and_f4_tables():
    g2 = build_root_system("G2")
    assert g2.C == ((2, -1), (-3, 2))
    assert g2.d == (Fraction(1), Fraction(1, 3))
    assert len(g2.positive_roots) == 6 and len(g2.weyl) == 12
    f4 = build_root_system("F4")
    assert f4.d == (Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 2))
    assert len(f4.positive_roots) == 24 and len(f4.weyl) == 1152
    assert f4.dim_g == 52


def test_type_a_inverse_cartan_closed_form():
    # (C^-1)_ij = min(i,j) * (n - max(i,j)) / n for A_{n-1}, 1-based
    for rank in (2, 3, 4):
        rs = build_root_system(f"A{rank}")
        n = rank + 1
        for i in range(1, rank + 1):
            for j in range(1, rank + 1):
                expected = Fraction(min(i, j) * (n - max(i, j)), n)
                assert rs.C_inv[i - 1][j - 1] == expected


@pytest.mark.parametrize("label", ALL_RANK4)
def test_structural_invariants(label):
    rs = build_root_system(label)
    r = rs.rank
    # Cartan matrix shape and symmetrizability
    for i in range(r):
        assert rs.C[i][i] == 2
        for j in range(r):
            if i != j:
                assert rs.C[i][j] <= 0
            assert rs.Cbar[i][j] == rs.d[i] * rs.C[i][j]
            assert rs.Cbar[i][j] == rs.Cbar[j][i]
    assert max(rs.d) == 1 and all(x > 0 for x in rs.d)
    # counts
    assert 2 * len(rs.positive_roots) + r == rs.dim_g
    assert len(rs.weyl) == weyl_group_order(rs.cartan_type)
    # rho is half the sum of positive roots (alpha-coords)
    total = [sum(root[i] for root in rs.positive_roots) for i in range(r)]
    # rho in alpha-coords is C_inv @ rho
    for i in range(r):
        coord = sum(rs.C_inv[i][j] * rs.rho[j] for j in range(r))
        assert coord * 2 == total[i]
    # gram relations
    ident = mat_mul(rs.gram_omega, rs.gram_omega_inv)
    for i in range(r):
        for j in range(r):
            assert ident[i][j] == (1 if i == j else 0)
    # positive definiteness via leading principal minors
    from tensorlimits.linalg import determinant

    for k in range(1, r + 1):
        minor = tuple(row[:k] for row in rs.gram_omega[:k])
        assert determinant(minor) > 0


@pytest.mark.parametrize("label", ALL_RANK4)
def test_weyl_group_axioms(label):
    rs = build_root_system(label)
    matrices = set(rs.weyl_by_matrix)
    assert len(matrices) == len(rs.weyl)
    # identity is the unique length-0 element and comes first
    assert rs.weyl[0].length == 0
    assert all(rs.weyl[0].matrix[i][i] == 1 for i in range(rs.rank))
    # each simple reflection permutes the element set
    for s in rs.simple_reflections:
        sm = mat(s)
        images = {tuple(tuple(int(x) for x in row) for row in mat_mul(mat(w.matrix), sm)) for w in rs.weyl}
        assert images == matrices
    # signs
    for w in rs.weyl:
        assert w.sign == (-1) ** w.length
    # the form is W-invariant: w^t G w = G
    for w in random.Random(7).sample(rs.weyl, min(12, len(rs.weyl))):
        wm = mat(w.matrix)
        g = mat_mul(mat_mul(transpose(wm), rs.gram_omega), wm)
        assert g == rs.gram_omega


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "D3", "G2"])
def test_length_counts_inverted_roots(label):
    rs = build_root_system(label)
    pos = set(rs.positive_roots)
    for w in rs.weyl:
        inverted = 0
        for root, root_omega in zip(rs.positive_roots, rs.positive_roots_omega):
            image = w.apply(root_omega)
            # back to alpha-coords to read off the sign
            alpha = [sum(rs.C_inv[i][j] * image[j] for j in range(rs.rank)) for i in range(rs.rank)]
            assert all(x.denominator == 1 for x in alpha)
            if all(x <= 0 for x in alpha):
                inverted += 1
            else:
                assert tuple(int(x) for x in alpha) in pos
        assert inverted == w.length


# ---------------------------------------------------------------- bilinear form


def test_inner_product_values():
    a1 = build_root_system("A1")
    assert inner_product(a1, (1,), (1,)) == Fraction(1, 2)
    b2 = build_root_system("B2")
    assert inner_product(b2, b2.rho, (1, 2), "omega", "alpha") == 2
    for rs in (a1, b2, build_root_system("G2")):
        r = rs.rank
        for i in range(r):
            e = tuple(int(k == i) for k in range(r))
            assert inner_product(rs, e, e, "alpha") == 2 * rs.d[i]
            # (omega_i, alpha_j) = d_i delta_ij
            for j in range(r):
                f = tuple(int(k == j) for k in range(r))
                assert inner_product(rs, e, f, "omega", "alpha") == (rs.d[i] if i == j else 0)


def test_inner_product_symmetry_and_mixed_consistency():
    rs = build_root_system("B3")
    rng = random.Random(3)
    for _ in range(20):
        u = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        v = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        assert inner_product(rs, u, v) == inner_product(rs, v, u)
        # convert v from alpha to omega-coords and compare mixed vs pure
        v_omega = tuple(sum(Fraction(rs.C[i][j]) * v[j] for j in range(3)) for i in range(3))
        assert inner_product(rs, u, v, "omega", "alpha") == inner_product(rs, u, v_omega, "omega")


def test_inner_product_basis_errors():
    rs = build_root_system("A2")
    with pytest.raises(BasisMismatch):
        inner_product(rs, (1, 0), (0, 1), "weight")
    with pytest.raises(BasisMismatch):
        inner_product(rs, (1,), (0, 1))


def test_rho_duality():
    for label in ALL_RANK4:
        rs = build_root_system(label)
        for i in range(rs.rank):
            e = tuple(int(k == i) for k in range(rs.rank))
            assert inner_product(rs, rs.rho, e, "omega", "alpha") == rs.d[i]


def test_denominator_identity_numeric():
    # sum over W of sign * exp((t, w rho)) equals the product over positive
    # roots of (exp((t,alpha)/2) - exp(-(t,alpha)/2))
    rng = random.Random(11)
    for label in ["A1", "A2", "B2", "C3", "G2"]:
        rs = build_root_system(label)
        for _ in range(25):
            t = [rng.uniform(0.5, 2.0) / float(di) for di in rs.d]
            lhs = 0.0
            for w in rs.weyl:
                wrho = w.apply(rs.rho)
                pairing = sum(ti * float(di) * mi for ti, di, mi in zip(t, rs.d, wrho))
                lhs += w.sign * math.exp(pairing)
            rhs = 1.0
            for root_omega in rs.positive_roots_omega:
                pairing = sum(ti * float(di) * mi for ti, di, mi in zip(t, rs.d, root_omega))
                rhs *= math.exp(pairing / 2) - math.exp(-pairing / 2)
            assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))


# ---------------------------------------------------------------- Weyl actions


def test_shifted_action_examples():
    a1 = build_root_system("A1")
    s = a1.weyl[1]
    for m in range(-4, 5):
        assert shifted_action(a1, s, (m,)) == (-m - 2,)
    a2 = build_root_system("A2")
    e = a2.weyl[0]
    assert shifted_action(a2, e, (3, 5)) == (3, 5)
    s1 = a2.weyl_by_matrix[a2.simple_reflections[0]]
    assert shifted_action(a2, s1, (0, 0)) == (-2, 1)


def test_to_dominant_shifted():
    a1 = build_root_system("A1")
    assert to_dominant_shifted(a1, (-1,)) is ON_WALL
    w, lam = to_dominant_shifted(a1, (-3,))
    assert lam == (1,) and w.length == 1
    assert shifted_action(a1, w, lam) == (-3,)
    w, lam = to_dominant_shifted(a1, (5,))
    assert lam == (5,) and w.length == 0


@pytest.mark.parametrize("label", ["A2", "B2", "B3", "G2", "F4"])
def test_to_dominant_shifted_roundtrip(label):
    rs = build_root_system(label)
    rng = random.Random(5)
    walls = 0
    for _ in range(200):
        mu = tuple(rng.randint(-6, 6) for _ in range(rs.rank))
        res = to_dominant_shifted(rs, mu)
        if res is ON_WALL:
            walls += 1
            # mu + rho should be fixed by some reflection: its W-orbit
            # meets the closed dominant cone on a wall
            continue
        w, lam = res
        assert is_dominant(lam)
        assert shifted_action(rs, w, lam) == mu
        # uniqueness: strictly dominant mu+rho has trivial stabilizer
        assert all(x + 1 > 0 for x in lam)
    assert walls > 0  # the sample should hit some walls


def test_shifted_orbit_partition_a2():
    # each weight is either on a wall or in exactly one shifted orbit of P_+
    rs = build_root_system("A2")
    for m1 in range(-5, 4):
        for m2 in range(-5, 4):
            res = to_dominant_shifted(rs, (m1, m2))
            if res is ON_WALL:
                continue
            w, lam = res
            orbit = {shifted_action(rs, u, lam) for u in rs.weyl}
            assert (m1, m2) in orbit
            assert len(orbit) == len(rs.weyl)


# ---------------------------------------------------------------- scalars


def test_casimir_values():
    a1 = build_root_system("A1")
    assert casimir_eigenvalue(a1, (1,)) == Fraction(3, 2)
    assert casimir_eigenvalue(a1, (0,)) == 0
    with pytest.raises(NotDominant):
        casimir_eigenvalue(a1, (-1,))
    # adjoint of A2: Casimir in Killing normalization is 1, standard form is b_g
    a2 = build_root_system("A2")
    assert casimir_eigenvalue(a2, (1, 1)) == a2.b_g


def test_b_g_table():
    assert b_g_constant(CartanType.parse("A1")) == 4
    assert b_g_constant(CartanType.parse("A3")) == 8
    assert b_g_constant(CartanType.parse("B2")) == 6
    assert b_g_constant(CartanType.parse("B4")) == 14
    assert b_g_constant(CartanType.parse("C3")) == 8
    assert b_g_constant(CartanType.parse("D4")) == 12
    assert b_g_constant(CartanType.parse("G2")) == 8
    assert b_g_constant(CartanType.parse("F4")) == 18


def test_b_g_a1_ad_trace_oracle():
    # sl2 basis (e, h, f): ad(h) = diag(2, 0, -2), so the Killing form gives
    # (h, h)_K-unnormalized = tr(ad h ad h) = 8, while the standard form has
    # (h, h) = (alpha, alpha) = 2; the ratio is b_g = 4
    ad_h = ((2, 0, 0), (0, 0, 0), (0, 0, -2))
    trace = sum(ad_h[i][i] * ad_h[i][i] for i in range(3))
    rs = build_root_system("A1")
    alpha_sq = inner_product(rs, (1,), (1,), "alpha")
    assert Fraction(trace) == b_g_constant(rs.cartan_type) * alpha_sq


def test_d_family_low_rank():
    d2 = build_root_system("D2")
    assert d2.C == ((2, 0), (0, 2))
    assert len(d2.weyl) == 4 and d2.dim_g == 6
    d3 = build_root_system("D3")
    a3 = build_root_system("A3")
    assert len(d3.weyl) == len(a3.weyl)
    assert d3.dim_g == a3.dim_g == 15


# ---------------------------------------------------------------- serialization


def test_json_roundtrip():
    for label in ["A1", "B2", "G2"]:
        rs = build_root_system(label)
        doc = rootsys_to_json(rs)
        text = json.dumps(doc, sort_keys=True)
        back = rootsys_from_json(json.loads(text))
        assert back.C == rs.C
        assert back.d == rs.d
        assert back.positive_roots == rs.positive_roots
        assert back.gram_omega == rs.gram_omega
        assert [w.matrix for w in back.weyl] == [w.matrix for w in rs.weyl]
        assert back.b_g == rs.b_g
        # rebuilt caches agree
        assert back.positive_roots_omega == rs.positive_roots_omega
        assert json.dumps(rootsys_to_json(back), sort_keys=True) == text
