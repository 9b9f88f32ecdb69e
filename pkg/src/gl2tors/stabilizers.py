"""Right action on row vectors: stabilizers, degree spectra, fixed modules."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import LemmaViolationError, PreconditionError
from .modarith import Mat2, _check_odd_prime, element_order
from .groups import Subgroup, subgroup_from_elements


def act_row(c: int, d: int, x: Mat2) -> tuple[int, int]:
    """Image of the row vector (c d) under right multiplication by x."""
    return ((c * x.a + d * x.c) % x.n, (c * x.b + d * x.d) % x.n)


@dataclass(frozen=True)
class ProjPoint:
    """A point of the projective line over F_ell, held as a canonical row vector.

    The representative is (1, s) for affine points and (0, 1) for the point
    at infinity of the row action.
    """

    ell: int
    c: int
    d: int

    def __post_init__(self):
        _check_odd_prime(self.ell)
        if not ((self.c == 1 and 0 <= self.d < self.ell) or (self.c, self.d) == (0, 1)):
            raise PreconditionError(f"({self.c},{self.d}) is not a canonical representative")

    @staticmethod
    def from_vector(ell: int, c: int, d: int) -> "ProjPoint":
        c, d = c % ell, d % ell
        if (c, d) == (0, 0):
            raise PreconditionError("the zero vector spans no projective point")
        if c == 0:
            return ProjPoint(ell, 0, 1)
        return ProjPoint(ell, 1, d * pow(c, -1, ell) % ell)

    @staticmethod
    def all_points(ell: int) -> list["ProjPoint"]:
        return [ProjPoint(ell, 0, 1)] + [ProjPoint(ell, 1, s) for s in range(ell)]

    def __repr__(self):
        return f"({self.c}:{self.d})"


def _check_prime_group(g: Subgroup) -> None:
    _check_odd_prime(g.n)


def vector_stabilizer(g: Subgroup, c: int, d: int) -> Subgroup:
    """Elements of g fixing the row vector (c d) itself, not just its line."""
    _check_prime_group(g)
    c, d = c % g.n, d % g.n
    fixed = [x for x in g.elements if act_row(c, d, x) == (c, d)]
    return subgroup_from_elements(g.n, fixed)


def stabilizer(g: Subgroup, p: ProjPoint) -> Subgroup:
    if g.n != p.ell:
        raise PreconditionError(f"modulus mismatch: {g.n} vs {p.ell}")
    return vector_stabilizer(g, p.c, p.d)


def sl_part(g: Subgroup) -> Subgroup:
    """Intersection with the determinant-1 subgroup."""
    _check_prime_group(g)
    return subgroup_from_elements(g.n, [x for x in g.elements if x.det() == 1])


class UnipotentClass(Enum):
    TRIVIAL = "Trivial"
    ORDER_ELL = "OrderEll"


@dataclass(frozen=True)
class UnipotentResult:
    kind: UnipotentClass
    conjugator: Mat2 | None  # T with T^-1 <U> T equal to the stabilizer, if non-trivial


def unipotent_class(g: Subgroup, p: ProjPoint) -> UnipotentResult:
    """Classify the det-1 vector stabilizer: trivial, or order ell conjugate to the shear."""
    ell = g.n
    stab = stabilizer(g, p)
    det1 = [x for x in stab.elements if x.det() == 1]
    if len(det1) == 1:
        return UnipotentResult(UnipotentClass.TRIVIAL, None)
    if len(det1) != ell:
        raise LemmaViolationError(
            f"det-1 stabilizer of {p} in a group of order {g.order} has order {len(det1)}"
        )
    gen = next(x for x in det1 if not x.is_identity())
    if gen.trace() != 2 or element_order(gen) != ell:
        raise LemmaViolationError(f"non-unipotent generator {gen} in det-1 stabilizer")
    t = _unipotent_conjugator(gen)
    return UnipotentResult(UnipotentClass.ORDER_ELL, t)


def _unipotent_conjugator(gen: Mat2) -> Mat2:
    """T with T^-1 gen T = (1 1; 0 1), built from the nilpotent part of gen.

    gen - I is rank one and squares to zero, so T = (Ms2 | s2) for any column
    s2 outside the kernel of M := gen - I.
    """
    ell = gen.n
    m_a, m_b = gen.a - 1, gen.b
    m_c, m_d = gen.c, gen.d - 1
    for s2 in ((1, 0), (0, 1)):
        s1 = ((m_a * s2[0] + m_b * s2[1]) % ell, (m_c * s2[0] + m_d * s2[1]) % ell)
        if s1 != (0, 0):
            t = Mat2(ell, s1[0], s2[0], s1[1], s2[1])
            if t.is_invertible():
                return t
    raise LemmaViolationError(f"no conjugator onto the shear for {gen}")


@dataclass(frozen=True)
class DegreeSpectrum:
    """Stabilizer indices over the projective line plus the det-1 index."""

    group_order: int
    entries: dict[ProjPoint, int]
    sl_index: int

    def values(self) -> list[int]:
        return [self.entries[p] for p in sorted(self.entries, key=lambda q: (q.c, q.d))]

    def as_rows(self) -> list[tuple[str, int, int]]:
        rows = []
        for p in sorted(self.entries, key=lambda q: (q.c, q.d)):
            idx = self.entries[p]
            rows.append((repr(p), self.group_order // idx, idx))
        return rows

    def __hash__(self):  # pragma: no cover
        return hash((self.group_order, tuple(sorted(self.entries.items(), key=lambda kv: (kv[0].c, kv[0].d))), self.sl_index))


def degree_spectrum(g: Subgroup) -> DegreeSpectrum:
    """Index of each projective-representative stabilizer, plus [g : g ∩ SL2]."""
    _check_prime_group(g)
    entries = {}
    for p in ProjPoint.all_points(g.n):
        stab = stabilizer(g, p)
        entries[p] = g.order // stab.order
    return DegreeSpectrum(g.order, entries, g.order // sl_part(g).order)


def exhaustive_spectrum(g: Subgroup) -> dict[tuple[int, int], int]:
    """Stabilizer index for every nonzero row vector, not just line representatives."""
    _check_prime_group(g)
    ell = g.n
    elems = list(g.elements)
    a = np.array([x.a for x in elems], dtype=np.int64)
    b = np.array([x.b for x in elems], dtype=np.int64)
    c_ = np.array([x.c for x in elems], dtype=np.int64)
    d_ = np.array([x.d for x in elems], dtype=np.int64)
    out = {}
    for c in range(ell):
        for d in range(ell):
            if (c, d) == (0, 0):
                continue
            fixed = np.count_nonzero(
                ((c * a + d * c_) % ell == c) & ((c * b + d * d_) % ell == d)
            )
            out[(c, d)] = g.order // int(fixed)
    return out


@dataclass(frozen=True)
class FixedModule:
    """Invariant factors (m, n) with m | n | N of the fixed-vector submodule."""

    modulus: int
    m: int
    n: int


def fixed_module(g: Subgroup) -> FixedModule:
    """Invariant factors of {v : vA = v for all A in g} inside (Z/NZ)^2."""
    big_n = g.n
    gens = g.generators if g.generators else tuple(g.elements)
    fixed = []
    for c in range(big_n):
        for d in range(big_n):
            if all(act_row(c, d, x) == (c, d) for x in gens):
                fixed.append((c, d))
    size = len(fixed)
    exponent = 1
    for c, d in fixed:
        ordv = big_n // math.gcd(big_n, c, d)
        exponent = exponent * ordv // math.gcd(exponent, ordv)
    n = exponent
    m = size // n
    assert n % m == 0 and big_n % n == 0
    return FixedModule(big_n, m, n)


def spectrum_table(spec: DegreeSpectrum) -> str:
    """Tabular text: point, stabilizer order, index."""
    lines = ["point\tstab_order\tindex"]
    for point, stab_order, idx in spec.as_rows():
        lines.append(f"{point}\t{stab_order}\t{idx}")
    lines.append(f"sl_index\t-\t{spec.sl_index}")
    return "\n".join(lines)
