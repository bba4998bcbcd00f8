"""Root-system, Weyl-group, and bilinear-form data for simple Lie algebras.

Supported families are A, B, C, D (rank >= 2), G2 and F4.  The E family is
rejected because every downstream computation sums over the full Weyl group,
which is enumerated explicitly here.

Conventions, fixed once and used everywhere else in the package:

* Weights are integer vectors in the fundamental-weight basis (omega-coords).
* The Cartan matrix is row normalized, c_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i),
  so a root beta = sum l_i alpha_i has omega-coords C @ l.
* The standard bilinear form is fixed by (alpha_i, alpha_j) = d_i c_ij with long
  simple roots of squared length 2, hence d_i in {1, 1/2, 1/3}.
* The Gram matrix of the fundamental weights is (C^t)^-1 diag(d), and
  (omega_i, alpha_j) = d_i delta_ij.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import re

from .errors import BasisMismatch, NotDominant, UnsupportedType, WeylCapExceeded
from .linalg import Matrix, bilinear, identity, inverse, mat, mat_int, mat_mul, mat_vec, transpose

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]

_FAMILIES = ("A", "B", "C", "D", "G", "F")


@dataclass(frozen=True)
class CartanType:
    """A simple-type letter plus rank, e.g. CartanType('B', 2)."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise UnsupportedType(f"unsupported family {self.family!r} (supported: A, B, C, D, G2, F4)")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise UnsupportedType(f"rank must be a positive integer, got {self.rank!r}")
        if self.family == "D" and self.rank < 2:
            raise UnsupportedType("family D requires rank >= 2")
        if self.family == "G" and self.rank != 2:
            raise UnsupportedType("family G requires rank = 2")
        if self.family == "F" and self.rank != 4:
            raise UnsupportedType("family F requires rank = 4")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        """Parse 'A3', 'b2', 'F4' style labels."""
        m = re.fullmatch(r"\s*([A-Za-z])\s*(\d+)\s*", text)
        if not m:
            raise UnsupportedType(f"cannot parse Cartan type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class WeylElement:
    """One Weyl group element, stored as its action on omega-coords."""

    matrix: IntMatrix
    length: int
    sign: int

    def apply(self, v: IntVector) -> IntVector:
        return tuple(sum(m * x for m, x in zip(row, v)) for row in self.matrix)


class OnWall:
    """Marker: mu + rho is fixed by some reflection, so mu has no shifted dominant form."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OnWall"


ON_WALL = OnWall()

DEFAULT_WEYL_CAP = 10_000


def cartan_matrix(t: CartanType) -> IntMatrix:
    """Cartan matrix in the Bourbaki node ordering for each family."""
    r = t.rank
    c = [[0] * r for _ in range(r)]
    for i in range(r):
        c[i][i] = 2
    # chain edges first, family-specific corrections after
    for i in range(r - 1):
        c[i][i + 1] = c[i + 1][i] = -1
    if t.family == "B" and r >= 2:
        c[r - 1][r - 2] = -2
    elif t.family == "C" and r >= 2:
        c[r - 2][r - 1] = -2
    elif t.family == "D":
        if r == 2:
            c[0][1] = c[1][0] = 0
        else:
            c[r - 2][r - 1] = c[r - 1][r - 2] = 0
            c[r - 3][r - 1] = c[r - 1][r - 3] = -1
    elif t.family == "G":
        c[1][0] = -3
    elif t.family == "F":
        c[2][1] = -2
    return tuple(tuple(row) for row in c)


def _symmetrizers(c: IntMatrix) -> tuple[Fraction, ...]:
    """Positive d_i with diag(d) @ C symmetric, normalized so max(d) = 1."""
    r = len(c)
    d: list[Fraction | None] = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(r):
                if c[i][j] != 0 and i != j and d[j] is None:
                    d[j] = d[i] * Fraction(c[i][j], c[j][i])
                    queue.append(j)
    top = max(d)
    return tuple(x / top for x in d)


def _positive_roots(c: IntMatrix) -> tuple[IntVector, ...]:
    """All positive roots in simple-root coordinates, by root-string closure.

    Processes roots level by level in height.  For a root beta and simple
    alpha_i, beta + alpha_i is a root iff q >= 1 where q = p - <beta, alpha_i^v>
    and p is the length of the descending alpha_i-string through beta.
    """
    r = len(c)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    found = set(simple)
    level = list(simple)
    while level:
        nxt = set()
        for beta in level:
            for i in range(r):
                pairing = sum(c[i][j] * beta[j] for j in range(r))
                p = 0
                while True:
                    down = list(beta)
                    down[i] -= p + 1
                    if min(down) < 0 or tuple(down) not in found:
                        break
                    p += 1
                if p - pairing >= 1:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= found
        found |= nxt
        level = sorted(nxt)
    return tuple(sorted(found, key=lambda v: (sum(v), v)))


def weyl_group_order(t: CartanType) -> int:
    """Order of the Weyl group, from the classical tables."""
    r = t.rank
    fact = 1
    for k in range(2, r + 1):
        fact *= k
    if t.family == "A":
        return fact * (r + 1)
    if t.family in ("B", "C"):
        return (2**r) * fact
    if t.family == "D":
        return (2 ** (r - 1)) * fact
    if t.family == "G":
        return 12
    return 1152  # F4


def b_g_constant(t: CartanType) -> int:
    """Ratio of the Killing form to the standard form (twice the dual Coxeter number)."""
    r = t.rank
    if t.family == "A":
        return 2 * (r + 1)
    if r == 1:
        # B1 and C1 coincide with A1
        return 4
    if t.family == "B":
        return 4 * r - 2
    if t.family == "C":
        return 2 * (r + 1)
    if t.family == "D":
        return 4 * r - 4
    if t.family == "G":
        return 8
    return 18  # F4


def _simple_reflection(c: IntMatrix, i: int) -> IntMatrix:
    """Matrix of s_i on omega-coords: s_i(m) = m - m_i * (column i of C)."""
    r = len(c)
    return tuple(
        tuple((1 if j == k else 0) - (c[j][i] if k == i else 0) for k in range(r))
        for j in range(r)
    )


def _enumerate_weyl(c: IntMatrix, cap: int, expected: int) -> tuple[WeylElement, ...]:
    if expected > cap:
        raise WeylCapExceeded(f"Weyl group order {expected} exceeds cap {cap}")
    r = len(c)
    gens = [_simple_reflection(c, i) for i in range(r)]
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    lengths = {ident: 0}
    frontier = [ident]
    order = [ident]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for w in frontier:
            for g in gens:
                wg = tuple(tuple(sum(w[a][b] * g[b][k] for b in range(r)) for k in range(r)) for a in range(r))
                if wg not in lengths:
                    lengths[wg] = depth
                    nxt.append(wg)
        nxt.sort()
        order.extend(nxt)
        frontier = nxt
    if len(order) != expected:
        raise WeylCapExceeded(f"enumerated {len(order)} Weyl elements, expected {expected}")
    return tuple(WeylElement(m, lengths[m], -1 if lengths[m] % 2 else 1) for m in order)


@dataclass(frozen=True, eq=False)
class RootSystemData:
    """Immutable bundle of everything downstream modules need about one type.

    The first block of fields is the public contract; the trailing fields are
    precomputed caches (roots in omega-coords, pairing vectors, lookup tables)
    that exist purely to keep the hot loops in other modules simple.
    """

    cartan_type: CartanType
    C: IntMatrix
    d: tuple[Fraction, ...]
    Cbar: Matrix
    positive_roots: tuple[IntVector, ...]
    rho: IntVector
    gram_omega: Matrix
    gram_omega_inv: Matrix
    weyl: tuple[WeylElement, ...]
    b_g: int
    dim_g: int
    # caches
    C_inv: Matrix
    positive_roots_omega: tuple[IntVector, ...]
    root_pair_vectors: tuple[tuple[Fraction, ...], ...]
    rho_root_pairings: tuple[Fraction, ...]
    simple_reflections: tuple[IntMatrix, ...]
    weyl_by_matrix: dict

    @property
    def rank(self) -> int:
        return self.cartan_type.rank

    def __repr__(self) -> str:
        return f"RootSystemData({self.cartan_type}, |W|={len(self.weyl)}, dim_g={self.dim_g})"


def build_root_system(t: CartanType | str, weyl_cap: int = DEFAULT_WEYL_CAP) -> RootSystemData:
    """Construct the full root-system bundle for one Cartan type.

    Raises UnsupportedType for bad labels and WeylCapExceeded when the Weyl
    group order (known from the tables before enumerating) exceeds weyl_cap.
    """
    if isinstance(t, str):
        t = CartanType.parse(t)
    c = cartan_matrix(t)
    d = _symmetrizers(c)
    cbar = tuple(tuple(d[i] * c[i][j] for j in range(t.rank)) for i in range(t.rank))
    pos = _positive_roots(c)
    rho = (1,) * t.rank
    c_t = transpose(mat(c))
    gram = mat_mul(inverse(c_t), tuple(tuple(d[i] if i == j else Fraction(0) for j in range(t.rank)) for i in range(t.rank)))
    gram_inv = inverse(gram)
    expected = weyl_group_order(t)
    weyl = _enumerate_weyl(c, weyl_cap, expected)
    dim_g = 2 * len(pos) + t.rank
    # (x, beta) for x in omega-coords and beta = sum l_i alpha_i is
    # sum_j x_j d_j l_j, so cache the vector (d_j l_j)_j per positive root
    pair_vecs = tuple(tuple(d[j] * l for j, l in enumerate(root)) for root in pos)
    rho_pair = tuple(sum(vec) for vec in pair_vecs)
    return RootSystemData(
        cartan_type=t,
        C=c,
        d=d,
        Cbar=cbar,
        positive_roots=pos,
        rho=rho,
        gram_omega=gram,
        gram_omega_inv=gram_inv,
        weyl=weyl,
        b_g=b_g_constant(t),
        dim_g=dim_g,
        C_inv=inverse(mat(c)),
        positive_roots_omega=tuple(mat_int([mat_vec(mat(c), root)])[0] for root in pos),
        root_pair_vectors=pair_vecs,
        rho_root_pairings=rho_pair,
        simple_reflections=tuple(_simple_reflection(c, i) for i in range(t.rank)),
        weyl_by_matrix={w.matrix: w for w in weyl},
    )


def is_dominant(mu) -> bool:
    return all(x >= 0 for x in mu)


def inner_product(rs: RootSystemData, u, v, basis: str = "omega", basis2: str | None = None):
    """Standard bilinear form of two vectors, each in a declared basis.

    basis / basis2 are 'omega' (fundamental-weight coords) or 'alpha'
    (simple-root coords); basis2 defaults to basis.  Exact on rational input.
    """
    if basis2 is None:
        basis2 = basis
    for b in (basis, basis2):
        if b not in ("omega", "alpha"):
            raise BasisMismatch(f"unknown basis {b!r} (expected 'omega' or 'alpha')")
    if len(u) != rs.rank or len(v) != rs.rank:
        raise BasisMismatch(f"expected length-{rs.rank} vectors")
    if basis == basis2 == "omega":
        return bilinear(u, rs.gram_omega, v)
    if basis == basis2 == "alpha":
        return bilinear(u, rs.Cbar, v)
    if basis == "omega":
        # (omega_j, alpha_i) = d_j delta_ij
        return sum(x * dj * y for x, dj, y in zip(u, rs.d, v))
    return sum(x * dj * y for x, dj, y in zip(v, rs.d, u))


def shifted_action(rs: RootSystemData, w: WeylElement, beta) -> IntVector:
    """Shifted Weyl action w * beta = w(beta + rho) - rho."""
    shifted = tuple(b + 1 for b in beta)
    image = w.apply(shifted)
    return tuple(x - 1 for x in image)


def to_dominant(rs: RootSystemData, mu) -> IntVector:
    """Dominant representative of the W-orbit of mu (ordinary, unshifted action)."""
    v = list(mu)
    r = rs.rank
    while True:
        i = next((k for k in range(r) if v[k] < 0), None)
        if i is None:
            return tuple(v)
        vi = v[i]
        v = [v[j] - rs.C[j][i] * vi for j in range(r)]


def to_dominant_shifted(rs: RootSystemData, mu):
    """Shifted-dominant form of mu: (w, lam) with w * lam = mu, or ON_WALL.

    mu + rho is reflected into the dominant cone; landing on a chamber wall
    means mu is fixed by some shifted reflection and ON_WALL is returned.
    """
    v = list(x + 1 for x in mu)
    r = rs.rank
    acc = None  # accumulates w = s_{i1} s_{i2} ... applied right to left
    while True:
        i = next((k for k in range(r) if v[k] < 0), None)
        if i is None:
            break
        s = rs.simple_reflections[i]
        acc = s if acc is None else mat_int(mat_mul(mat(acc), mat(s)))
        vi = v[i]
        v = [v[j] - rs.C[j][i] * vi for j in range(r)]
    if any(x == 0 for x in v):
        return ON_WALL
    if acc is None:
        w = rs.weyl[0]
    else:
        w = rs.weyl_by_matrix[acc]
    return w, tuple(x - 1 for x in v)


def casimir_eigenvalue(rs: RootSystemData, lam) -> Fraction:
    """Casimir scalar (lam, lam + 2 rho) on the irreducible with highest weight lam."""
    if not is_dominant(lam):
        raise NotDominant(f"{lam} has a negative fundamental coordinate")
    shifted = tuple(x + 2 for x in lam)
    return bilinear(lam, rs.gram_omega, shifted)


def _frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _parse_frac(s) -> Fraction:
    return Fraction(s) if isinstance(s, str) else Fraction(int(s))


def rootsys_to_json(rs: RootSystemData) -> dict:
    """Plain-JSON form: matrices as nested arrays, rationals as 'p/q' strings."""
    return {
        "cartan_type": str(rs.cartan_type),
        "cartan_matrix": [list(row) for row in rs.C],
        "symmetrizers": [_frac_str(x) for x in rs.d],
        "symmetrized_cartan": [[_frac_str(x) for x in row] for row in rs.Cbar],
        "positive_roots": [list(r) for r in rs.positive_roots],
        "rho": list(rs.rho),
        "gram_omega": [[_frac_str(x) for x in row] for row in rs.gram_omega],
        "gram_omega_inv": [[_frac_str(x) for x in row] for row in rs.gram_omega_inv],
        "weyl": [
            {"matrix": [list(row) for row in w.matrix], "length": w.length, "sign": w.sign}
            for w in rs.weyl
        ],
        "b_g": rs.b_g,
        "dim_g": rs.dim_g,
    }


def rootsys_from_json(doc: dict) -> RootSystemData:
    """Rebuild a RootSystemData from rootsys_to_json output (no re-enumeration)."""
    t = CartanType.parse(doc["cartan_type"])
    c = tuple(tuple(int(x) for x in row) for row in doc["cartan_matrix"])
    d = tuple(_parse_frac(x) for x in doc["symmetrizers"])
    pos = tuple(tuple(int(x) for x in r) for r in doc["positive_roots"])
    weyl = tuple(
        WeylElement(tuple(tuple(int(x) for x in row) for row in w["matrix"]), int(w["length"]), int(w["sign"]))
        for w in doc["weyl"]
    )
    pair_vecs = tuple(tuple(d[j] * l for j, l in enumerate(root)) for root in pos)
    return RootSystemData(
        cartan_type=t,
        C=c,
        d=d,
        Cbar=tuple(tuple(_parse_frac(x) for x in row) for row in doc["symmetrized_cartan"]),
        positive_roots=pos,
        rho=tuple(int(x) for x in doc["rho"]),
        gram_omega=tuple(tuple(_parse_frac(x) for x in row) for row in doc["gram_omega"]),
        gram_omega_inv=tuple(tuple(_parse_frac(x) for x in row) for row in doc["gram_omega_inv"]),
        weyl=weyl,
        b_g=int(doc["b_g"]),
        dim_g=int(doc["dim_g"]),
        C_inv=inverse(mat(c)),
        positive_roots_omega=tuple(mat_int([mat_vec(mat(c), root)])[0] for root in pos),
        root_pair_vectors=pair_vecs,
        rho_root_pairings=tuple(sum(vec) for vec in pair_vecs),
        simple_reflections=tuple(_simple_reflection(c, i) for i in range(t.rank)),
        weyl_by_matrix={w.matrix: w for w in weyl},
    )
