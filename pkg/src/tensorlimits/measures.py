"""Exact discrete probability measures induced by large tensor powers.

Three measures are built from the decomposition data of V_N, the N-th
tensor power bundle of a TensorSpec:

* xi: mass dim V_N(mu) / dim V_N at the scaled weight mu / (sigma sqrt(N)),
* eta: mass [V_N : V_mu] dim V_mu / dim V_N at scaled dominant mu,
* eta extended: the eta mass spread uniformly over shifted Weyl orbits,
  with zero mass on shifted walls.

Atoms keep their integer weight vector and exact rational probability; the
scale sigma*sqrt(N) is carried symbolically as the rational sigma^2*N, so
every identity at this layer is exact.  Floats appear only downstream.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateSpec, InadmissibleN, NotDominant
from .repchar import (
    MultiplicityMap,
    racah_decompose,
    tensor_power_multiplicities,
    weyl_dim,
)
from .rootsys import (
    ON_WALL,
    RootSystemData,
    casimir_eigenvalue,
    is_dominant,
    shifted_action,
    to_dominant_shifted,
)

# above this bounding-box volume, explicit zero-mass wall atoms are omitted
# from the extended measure (probabilities at walls are still zero, they are
# just not materialized)
WALL_ATOM_BOX_LIMIT = 100_000


@dataclass(frozen=True)
class TensorSpec:
    """A weighted family of highest weights: factors (lam_l, tau_l)."""

    rs: RootSystemData
    factors: tuple

    def __post_init__(self):
        norm = []
        for lam, tau in self.factors:
            lam = tuple(int(x) for x in lam)
            tau = Fraction(tau)
            if len(lam) != self.rs.rank:
                raise NotDominant(f"weight {lam} has wrong rank")
            if not is_dominant(lam):
                raise NotDominant(f"{lam} is not dominant")
            if tau <= 0:
                raise ValueError(f"tau must be positive, got {tau}")
            norm.append((lam, tau))
        object.__setattr__(self, "factors", tuple(norm))

    def describe(self) -> str:
        parts = ",".join(f"{list(lam)}:{tau}" for lam, tau in self.factors)
        return f"{self.rs.cartan_type}[{parts}]"


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms (weight vector, exact probability) at scale sqrt(sigma_sq * N).

    The physical atom position is weight / sqrt(sigma_sq * N); weight vectors
    are exact rationals (integers for all measures built here) in
    fundamental-weight coordinates.
    """

    atoms: tuple
    sigma_sq: Fraction
    N: int

    @property
    def rank(self) -> int:
        return len(self.atoms[0][0]) if self.atoms else 0

    @property
    def scale_sq(self) -> Fraction:
        return self.sigma_sq * self.N

    @property
    def sigma(self) -> float:
        return math.sqrt(float(self.sigma_sq))

    @property
    def scale(self) -> float:
        return math.sqrt(float(self.sigma_sq * self.N))

    def prob_at(self, weight) -> Fraction:
        key = tuple(weight)
        table = getattr(self, "_lookup", None)
        if table is None:
            table = {w: p for w, p in self.atoms}
            object.__setattr__(self, "_lookup", table)
        return table.get(key, Fraction(0))

    def total_mass(self) -> Fraction:
        return sum((p for _, p in self.atoms), Fraction(0))


def sigma_squared(spec: TensorSpec, convention: str = "consistent") -> Fraction:
    """Variance scale sigma^2 = sum_l tau_l (lam_l, lam_l + 2 rho) / dim g.

    The 'paper' convention multiplies by b_g; it is kept for comparison only,
    the consistent convention is the one under which the exact second-moment
    identity and the closed-form limits hold.
    """
    if convention not in ("consistent", "paper"):
        raise ValueError(f"unknown sigma convention {convention!r}")
    total = Fraction(0)
    for lam, tau in spec.factors:
        total += tau * casimir_eigenvalue(spec.rs, lam)
    total /= spec.rs.dim_g
    if convention == "paper":
        total *= spec.rs.b_g
    if total == 0:
        raise DegenerateSpec("all highest weights are zero, sigma^2 = 0")
    return total


def admissible_N(spec: TensorSpec, N: int) -> bool:
    """True iff tau_l * N is a nonnegative integer for every factor."""
    if N < 1:
        return False
    return all((tau * N).denominator == 1 for _, tau in spec.factors)


def factor_counts(spec: TensorSpec, N: int) -> list:
    """Integer tensor powers (lam_l, tau_l * N) for an admissible N."""
    if not admissible_N(spec, N):
        raise InadmissibleN(f"N = {N} is not admissible for taus {[str(t) for _, t in spec.factors]}")
    return [(lam, int(tau * N)) for lam, tau in spec.factors]


def _resolve_map(spec: TensorSpec, N: int, multiplicities) -> MultiplicityMap:
    if multiplicities is not None:
        return multiplicities
    return tensor_power_multiplicities(spec.rs, factor_counts(spec, N))


def xi_measure(
    spec: TensorSpec,
    N: int,
    convention: str = "consistent",
    multiplicities: MultiplicityMap | None = None,
) -> DiscreteMeasure:
    """Weight measure of V_N: mass dim V_N(mu) / dim V_N at scaled mu.

    multiplicities, when given, must be the precomputed character of V_N
    (cache hook used by the convergence module and the CLI).
    """
    sig = sigma_squared(spec, convention)
    m = _resolve_map(spec, N, multiplicities)
    total = m.total_dim
    atoms = tuple((w, Fraction(c, total)) for w, c in sorted(m.entries.items()))
    return DiscreteMeasure(atoms, sig, N)


def eta_measure(
    spec: TensorSpec,
    N: int,
    convention: str = "consistent",
    multiplicities: MultiplicityMap | None = None,
) -> DiscreteMeasure:
    """Component measure of V_N: mass [V_N : V_mu] dim V_mu / dim V_N."""
    sig = sigma_squared(spec, convention)
    m = _resolve_map(spec, N, multiplicities)
    dec = racah_decompose(spec.rs, m)
    total = m.total_dim
    atoms = tuple(
        (mu, Fraction(c * weyl_dim(spec.rs, mu), total))
        for mu, c in sorted(dec.components.items())
    )
    return DiscreteMeasure(atoms, sig, N)


def eta_extended_measure(
    spec: TensorSpec,
    N: int,
    convention: str = "consistent",
    multiplicities: MultiplicityMap | None = None,
) -> DiscreteMeasure:
    """Extension of eta to the whole weight lattice by shifted Weyl orbits.

    Each dominant atom mu of eta donates mass P(mu)/|W| to every orbit point
    w * mu = w(mu + rho) - rho.  Weights whose shifted orbit meets a wall get
    zero mass; those inside the bounding box of the support are materialized
    as explicit zero atoms while the box stays below WALL_ATOM_BOX_LIMIT.
    """
    rs = spec.rs
    eta = eta_measure(spec, N, convention, multiplicities)
    order = len(rs.weyl)
    masses: dict = {}
    for mu, p in eta.atoms:
        share = p / order
        for w in rs.weyl:
            masses[shifted_action(rs, w, mu)] = share
    if masses:
        lo = [min(w[i] for w in masses) for i in range(rs.rank)]
        hi = [max(w[i] for w in masses) for i in range(rs.rank)]
        volume = 1
        for a, b in zip(lo, hi):
            volume *= b - a + 1
        if volume <= WALL_ATOM_BOX_LIMIT:
            for w in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
                if w not in masses and to_dominant_shifted(rs, w) is ON_WALL:
                    masses[w] = Fraction(0)
    atoms = tuple(sorted(masses.items()))
    return DiscreteMeasure(atoms, eta.sigma_sq, N)


def pushforward_dominant_shifted(rs: RootSystemData, measure: DiscreteMeasure) -> DiscreteMeasure:
    """Push every atom to its shifted-dominant representative (walls carry no mass)."""
    masses: dict = {}
    for w, p in measure.atoms:
        res = to_dominant_shifted(rs, w)
        if res is ON_WALL:
            if p != 0:
                raise AssertionError(f"nonzero mass {p} on wall point {w}")
            continue
        _, lam = res
        masses[lam] = masses.get(lam, Fraction(0)) + p
    atoms = tuple(sorted((w, p) for w, p in masses.items() if p != 0))
    return DiscreteMeasure(atoms, measure.sigma_sq, measure.N)


def mixed_moments(measure: DiscreteMeasure, max_order: int) -> dict:
    """Raw moments of the scaled measure for all multi-indices up to max_order.

    Even total orders divide exactly by (sigma^2 N)^(|kappa|/2) and stay
    rational; odd total orders involve sqrt(sigma^2 N) and are returned as
    floats.
    """
    if max_order > 6:
        raise ValueError("moments above order 6 are not supported")
    rank = measure.rank
    out: dict = {}
    scale_sq = measure.scale_sq
    for kappa in itertools.product(range(max_order + 1), repeat=rank):
        order = sum(kappa)
        if order > max_order:
            continue
        raw = Fraction(0)
        for w, p in measure.atoms:
            if p == 0:
                continue
            term = p
            for x, k in zip(w, kappa):
                for _ in range(k):
                    term *= x
            raw += term
        if order % 2 == 0:
            out[kappa] = raw / scale_sq ** (order // 2)
        else:
            out[kappa] = float(raw) / float(scale_sq) ** (order / 2)
    return out


def directional_second_moment(rs: RootSystemData, measure: DiscreteMeasure, t) -> Fraction:
    """Exact sum of prob * (t, point)^2 along a direction t in simple-root coords.

    Equals (t, t) for every xi measure and admissible N.
    """
    t = tuple(Fraction(x) for x in t)
    acc = Fraction(0)
    for w, p in measure.atoms:
        if p == 0:
            continue
        pairing = sum(ti * di * xi for ti, di, xi in zip(t, rs.d, w))
        acc += p * pairing * pairing
    return acc / measure.scale_sq


def measure_to_csv(measure: DiscreteMeasure) -> str:
    """One atom per row: weight coordinates, then numerator and denominator."""
    rank = measure.rank
    header = ",".join(f"weight_{i+1}" for i in range(rank)) + ",numerator,denominator"
    lines = [header]
    for w, p in measure.atoms:
        lines.append(",".join(str(x) for x in w) + f",{p.numerator},{p.denominator}")
    return "\n".join(lines) + "\n"


def measure_to_json(measure: DiscreteMeasure) -> dict:
    return {
        "N": measure.N,
        "sigma_squared": f"{measure.sigma_sq.numerator}/{measure.sigma_sq.denominator}",
        "atoms": [
            {"weight": [int(x) for x in w], "prob": f"{p.numerator}/{p.denominator}"}
            for w, p in measure.atoms
        ],
    }
