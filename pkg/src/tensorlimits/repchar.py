"""Exact weight multiplicities of irreducibles, tensor powers, and decompositions.

A character is stored as a MultiplicityMap: a sparse dict from weights
(omega-coords) to arbitrary-precision multiplicities.  Tensor products are
convolutions of these maps; large convolutions are evaluated by packing each
map into a single big integer (Kronecker substitution) and multiplying with
gmpy2, which is orders of magnitude faster than a dict-of-tuples loop once
supports reach tens of thousands of points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NegativeMultiplicity, NotDominant
from .linalg import bilinear
from .rootsys import IntVector, RootSystemData, casimir_eigenvalue, is_dominant, to_dominant

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = None

# convolutions with at most this many coefficient pairs stay on the dict path
DICT_CONV_MAX_OPS = 1_000_000


@dataclass(eq=False)
class MultiplicityMap:
    """Sparse character: weight (omega-coords) -> multiplicity.

    Treat instances as immutable; total_dim caches the sum of all entries.
    """

    entries: dict
    total_dim: int = field(default=None)

    def __post_init__(self):
        if self.total_dim is None:
            self.total_dim = sum(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, weight) -> int:
        return self.entries.get(tuple(weight), 0)

    def __repr__(self) -> str:
        return f"MultiplicityMap({len(self.entries)} weights, total_dim={self.total_dim})"


@dataclass(eq=False)
class IrrepDecomposition:
    """Multiset of irreducible components: dominant weight -> multiplicity."""

    components: dict

    def __getitem__(self, weight) -> int:
        return self.components.get(tuple(weight), 0)

    def __repr__(self) -> str:
        return f"IrrepDecomposition({len(self.components)} components)"


def unit_map(rank: int) -> MultiplicityMap:
    """Character of the trivial representation."""
    return MultiplicityMap({(0,) * rank: 1}, 1)


def weyl_dim(rs: RootSystemData, lam) -> int:
    """Dimension of the irreducible with highest weight lam (Weyl formula)."""
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    num = Fraction(1)
    for vec, rho_pair in zip(rs.root_pair_vectors, rs.rho_root_pairings):
        pairing = sum((l + 1) * v for l, v in zip(lam, vec))
        num *= pairing / rho_pair
    if num.denominator != 1:
        raise AssertionError(f"Weyl dimension {num} is not an integer")
    return num.numerator


def _weight_support(rs: RootSystemData, lam) -> list[list[IntVector]]:
    """Weights of V_lam grouped by depth below lam in the root lattice.

    A vector nu in lam + Q is a weight iff its dominant representative is
    below lam, i.e. lam - dominant(nu) is a nonnegative integer combination
    of simple roots.  The levels are generated by subtracting simple roots.
    """
    r = rs.rank
    simple_omega = [tuple(rs.C[j][i] for j in range(r)) for i in range(r)]

    def admissible(nu) -> bool:
        dom = to_dominant(rs, nu)
        diff = tuple(l - x for l, x in zip(lam, dom))
        for row in rs.C_inv:
            coord = sum(c * x for c, x in zip(row, diff))
            if coord.denominator != 1 or coord < 0:
                return False
        return True

    levels = [[tuple(lam)]]
    seen = {tuple(lam)}
    current = levels[0]
    while True:
        nxt = set()
        for nu in current:
            for alpha in simple_omega:
                cand = tuple(x - a for x, a in zip(nu, alpha))
                if cand in seen:
                    continue
                seen.add(cand)
                if admissible(cand):
                    nxt.add(cand)
        if not nxt:
            return levels
        current = sorted(nxt)
        levels.append(current)


def freudenthal_multiplicities(rs: RootSystemData, lam) -> MultiplicityMap:
    """Full weight multiplicity map of the irreducible V_lam.

    Freudenthal recursion, evaluated only at dominant weights and spread over
    Weyl orbits: m(mu) is determined level by level from the weights above mu
    along positive root strings.
    """
    lam = tuple(lam)
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    levels = _weight_support(rs, lam)
    support = {nu for level in levels for nu in level}
    lam_rho = tuple(x + 1 for x in lam)
    norm_top = bilinear(lam_rho, rs.gram_omega, lam_rho)
    mult_dom = {lam: 1}
    for level in levels[1:]:
        for mu in level:
            if not is_dominant(mu):
                continue
            acc = Fraction(0)
            for alpha, vec in zip(rs.positive_roots_omega, rs.root_pair_vectors):
                nu = tuple(m + a for m, a in zip(mu, alpha))
                while nu in support:
                    pairing = sum(n * v for n, v in zip(nu, vec))
                    acc += mult_dom[to_dominant(rs, nu)] * pairing
                    nu = tuple(n + a for n, a in zip(nu, alpha))
            mu_rho = tuple(x + 1 for x in mu)
            denom = norm_top - bilinear(mu_rho, rs.gram_omega, mu_rho)
            # denom > 0 for dominant mu strictly below lam
            m = 2 * acc / denom
            if m.denominator != 1:
                raise AssertionError(f"non-integer multiplicity {m} at {mu}")
            mult_dom[mu] = m.numerator
    entries = {nu: mult_dom[to_dominant(rs, nu)] for nu in support}
    total = sum(entries.values())
    expected = weyl_dim(rs, lam)
    if total != expected:
        raise AssertionError(f"multiplicity total {total} != dim {expected}")
    return MultiplicityMap(entries, total)


def _convolve_dict(a: MultiplicityMap, b: MultiplicityMap) -> dict:
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    out: dict = {}
    for ws, cs in small.entries.items():
        for wb, cb in big.entries.items():
            key = tuple(x + y for x, y in zip(ws, wb))
            out[key] = out.get(key, 0) + cs * cb
    return out


def _convolve_kronecker(a: MultiplicityMap, b: MultiplicityMap) -> dict:
    """Convolve by packing both maps into big integers and multiplying.

    Weights are laid out in a mixed-radix grid padded to the output bounding
    box, one byte-aligned slot per grid point; slot width is chosen so that no
    output coefficient can overflow into its neighbor.  Valid because all
    multiplicities are nonnegative.
    """
    rank = len(next(iter(a.entries)))
    amin = [min(w[i] for w in a.entries) for i in range(rank)]
    amax = [max(w[i] for w in a.entries) for i in range(rank)]
    bmin = [min(w[i] for w in b.entries) for i in range(rank)]
    bmax = [max(w[i] for w in b.entries) for i in range(rank)]
    widths = [(amax[i] - amin[i]) + (bmax[i] - bmin[i]) + 1 for i in range(rank)]
    strides = [0] * rank
    acc = 1
    for i in range(rank - 1, -1, -1):
        strides[i] = acc
        acc *= widths[i]
    slots = acc
    peak = max(a.entries.values()) * max(b.entries.values()) * min(len(a), len(b))
    slot_bytes = (peak.bit_length() + 8) // 8

    def pack(m: MultiplicityMap, mins) -> int:
        buf = bytearray(slots * slot_bytes)
        for w, c in m.entries.items():
            idx = sum((w[i] - mins[i]) * strides[i] for i in range(rank))
            off = idx * slot_bytes
            buf[off : off + slot_bytes] = c.to_bytes(slot_bytes, "little")
        return int.from_bytes(buf, "little")

    pa, pb = pack(a, amin), pack(b, bmin)
    if _mpz is not None:
        product = int(_mpz(pa) * _mpz(pb))
    else:
        product = pa * pb
    raw = product.to_bytes(slots * slot_bytes, "little")
    view = memoryview(raw)
    omin = [amin[i] + bmin[i] for i in range(rank)]
    out: dict = {}
    for idx in range(slots):
        chunk = view[idx * slot_bytes : (idx + 1) * slot_bytes]
        c = int.from_bytes(chunk, "little")
        if c:
            rem = idx
            w = []
            for i in range(rank):
                q, rem = divmod(rem, strides[i])
                w.append(omin[i] + q)
            out[tuple(w)] = c
    return out


def convolve(a: MultiplicityMap, b: MultiplicityMap, method: str | None = None) -> MultiplicityMap:
    """Product of characters: entries[nu] = sum_mu a[mu] * b[nu - mu]."""
    if not a.entries or not b.entries:
        return MultiplicityMap({}, 0)
    if method is None:
        big = len(a) * len(b) > DICT_CONV_MAX_OPS and _mpz is not None
        method = "kronecker" if big else "dict"
    if method == "dict":
        out = _convolve_dict(a, b)
    elif method == "kronecker":
        out = _convolve_kronecker(a, b)
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    return MultiplicityMap(out, a.total_dim * b.total_dim)


def _convolution_power(base: MultiplicityMap, n: int, rank: int) -> MultiplicityMap:
    """base^n under convolution, by binary exponentiation."""
    if n == 0:
        return unit_map(rank)
    result = None
    square = base
    while n:
        if n & 1:
            result = square if result is None else convolve(result, square)
        n >>= 1
        if n:
            square = convolve(square, square)
    return result


def tensor_power_multiplicities(rs: RootSystemData, factors) -> MultiplicityMap:
    """Character of the tensor product of irreducible powers.

    factors is a list of (lam, n) pairs meaning V_lam tensored n times; the
    result is the convolution of all factor characters.
    """
    out = unit_map(rs.rank)
    for lam, n in factors:
        lam = tuple(lam)
        if not is_dominant(lam):
            raise NotDominant(f"{lam} is not dominant")
        if n < 0:
            raise ValueError(f"negative tensor power {n}")
        if n == 0:
            continue
        base = freudenthal_multiplicities(rs, lam)
        out = convolve(out, _convolution_power(base, n, rs.rank))
    return out


def tensor_power_table(rs: RootSystemData, factors, n_values) -> dict:
    """Characters of prod_l V_{lam_l}^(tau_l * N) for several N at once.

    factors is a list of (lam, tau) with rational tau; every tau_l * N must be
    an integer (the caller validates).  The doubling chain of each factor is
    shared across all N, so the whole table costs barely more than its
    largest entry.
    """
    n_values = sorted(set(int(n) for n in n_values))
    chains = []
    for lam, tau in factors:
        lam = tuple(lam)
        if not is_dominant(lam):
            raise NotDominant(f"{lam} is not dominant")
        exponents = []
        for n in n_values:
            e = Fraction(tau) * n
            if e.denominator != 1 or e < 0:
                raise ValueError(f"tau * N = {e} is not a nonnegative integer")
            exponents.append(e.numerator)
        base = freudenthal_multiplicities(rs, lam)
        top = max(exponents)
        squares = [base]
        while (1 << len(squares)) <= top:
            squares.append(convolve(squares[-1], squares[-1]))
        powers = {}
        for e in exponents:
            if e not in powers:
                result = None
                k, bits = 0, e
                while bits:
                    if bits & 1:
                        sq = squares[k]
                        result = sq if result is None else convolve(result, sq)
                    bits >>= 1
                    k += 1
                powers[e] = unit_map(rs.rank) if result is None else result
        chains.append(powers)
    table = {}
    for n in n_values:
        out = unit_map(rs.rank)
        for (lam, tau), powers in zip(factors, chains):
            e = (Fraction(tau) * n).numerator
            out = convolve(out, powers[e])
        table[n] = out
    return table


def racah_decompose(rs: RootSystemData, m: MultiplicityMap) -> IrrepDecomposition:
    """Irreducible components of a character by alternating Weyl sums.

    [V : V_mu] = sum over w of sign(w) * m(mu + rho - w rho), evaluated at
    every dominant weight in the support.  Negative counts mean the input was
    not a genuine character.
    """
    deltas = [
        (w.sign, tuple(1 - x for x in w.apply(rs.rho)))
        for w in rs.weyl
    ]
    entries = m.entries
    components = {}
    for mu in entries:
        if not is_dominant(mu):
            continue
        c = 0
        for sign, delta in deltas:
            val = entries.get(tuple(x + d for x, d in zip(mu, delta)))
            if val:
                c += sign * val
        if c < 0:
            raise NegativeMultiplicity(f"[V : V_{mu}] = {c}")
        if c:
            components[mu] = c
    total = sum(c * weyl_dim(rs, mu) for mu, c in components.items())
    if total != m.total_dim:
        raise NegativeMultiplicity(
            f"components account for dimension {total} of {m.total_dim}; input was not a character"
        )
    return IrrepDecomposition(components)


def peel_off_decompose(rs: RootSystemData, m: MultiplicityMap) -> IrrepDecomposition:
    """Decompose by repeatedly peeling the highest dominant weight.

    Independent of racah_decompose: the dominant weight of maximal height in
    the remaining support is a highest weight; subtract its full multiplicity
    map and recurse.  Meant as a cross-check oracle, not a production path.
    """
    height_vec = [sum(rs.C_inv[i][j] for i in range(rs.rank)) for j in range(rs.rank)]
    work = dict(m.entries)
    components: dict = {}
    irrep_cache: dict = {}
    while work:
        best = None
        best_height = None
        for mu in work:
            if is_dominant(mu):
                h = sum(hv * x for hv, x in zip(height_vec, mu))
                if best is None or (h, mu) > (best_height, best):
                    best, best_height = mu, h
        if best is None:
            raise NegativeMultiplicity(f"no dominant weight left in nonempty support {sorted(work)[:3]}...")
        c = work[best]
        if c < 0:
            raise NegativeMultiplicity(f"multiplicity {c} at {best}")
        if best not in irrep_cache:
            irrep_cache[best] = freudenthal_multiplicities(rs, best)
        for nu, cnt in irrep_cache[best].entries.items():
            rem = work.get(nu, 0) - c * cnt
            if rem < 0:
                raise NegativeMultiplicity(f"oversubtraction at {nu}")
            if rem:
                work[nu] = rem
            else:
                work.pop(nu, None)
        components[best] = c
    return IrrepDecomposition(components)


def trace_identity_check(rs: RootSystemData, lam, t) -> tuple[Fraction, Fraction]:
    """Both sides of the quadratic trace identity for V_lam along direction t.

    t is a rational vector in simple-root coordinates.  Returns
    (sum_mu dim V_lam(mu) * (t, mu)^2,  (lam, lam+2rho) * dim V_lam / dim g * (t, t));
    the two are equal for every lam and t.
    """
    lam = tuple(lam)
    t = tuple(Fraction(x) for x in t)
    m = freudenthal_multiplicities(rs, lam)
    lhs = Fraction(0)
    for mu, c in m.entries.items():
        pairing = sum(ti * di * xi for ti, di, xi in zip(t, rs.d, mu))
        lhs += c * pairing * pairing
    tt = bilinear(t, rs.Cbar, t)
    rhs = casimir_eigenvalue(rs, lam) * Fraction(m.total_dim, rs.dim_g) * tt
    return lhs, rhs


def save_multiplicity_map(m: MultiplicityMap, path) -> None:
    """Write a map as JSON: weights as integer arrays, counts as decimal strings."""
    items = sorted(m.entries.items())
    doc = {
        "weights": [list(w) for w, _ in items],
        "multiplicities": [str(c) for _, c in items],
        "total_dim": str(m.total_dim),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_multiplicity_map(path) -> MultiplicityMap:
    with open(path) as fh:
        doc = json.load(fh)
    entries = {
        tuple(int(x) for x in w): int(c)
        for w, c in zip(doc["weights"], doc["multiplicities"])
    }
    return MultiplicityMap(entries, int(doc["total_dim"]))
