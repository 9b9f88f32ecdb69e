"""Image classification for Borel / Cartan-normalizer shapes and its consequences."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from sympy import isprime

from .errors import LemmaViolationError, PreconditionError
from .modarith import Mat2, element_order, mat_inv, mat_mul, primitive_root, unipotent
from .groups import (
    NamedGroupId,
    Subgroup,
    diagexp_pair,
    named_group,
    subgroup_from_elements,
    tau,
)
from .lemmas import conjugate_into_normalizer, NormalizerTarget
from .stabilizers import ProjPoint, exhaustive_spectrum, stabilizer

INERTIA_EXPONENTS = (1, 2, 3, 4, 6)
MOD36_RESIDUES = frozenset({7, 11, 23, 31, 35})


def mod36_filter(ell: int) -> bool:
    """Whether ell lies in the surviving residue classes mod 36."""
    if not isprime(ell):
        raise PreconditionError(f"{ell} is not prime")
    return ell % 36 in MOD36_RESIDUES


def cong_check(delta: Subgroup) -> bool:
    """The exponent congruence 12u = 12t = 6(u+t) mod (ell-1) on a diagonal group."""
    ell = delta.n
    modulus = ell - 1
    for x in delta.elements:
        pair = diagexp_pair(x)  # raises on non-diagonal input
        u, t = pair.u, pair.t
        if (12 * u - 6 * (u + t)) % modulus or (12 * t - 6 * (u + t)) % modulus:
            return False
    return True


@dataclass(frozen=True)
class BlHypotheses:
    """Group-theoretic shadows of the number-field hypotheses.

    det_surjective asserts the determinant image is the full unit group;
    odd_degree_witness is a nonzero vector whose stabilizer index is coprime
    to 6; inertia_exponent is the ramification datum e restricted to its
    admissible values.
    """

    det_surjective: bool = True
    odd_degree_witness: tuple[int, int] | None = None
    inertia_exponent: int = 1

    def __post_init__(self):
        if self.inertia_exponent not in INERTIA_EXPONENTS:
            raise PreconditionError(
                f"inertia exponent must be one of {INERTIA_EXPONENTS}"
            )

    def validate_against(self, g: Subgroup) -> None:
        if self.det_surjective and len(g.det_image()) != g.n - 1:
            raise PreconditionError("determinant image is not the full unit group")
        if self.odd_degree_witness is not None:
            spec = exhaustive_spectrum(g)
            c, d = self.odd_degree_witness
            idx = spec.get((c % g.n, d % g.n))
            if idx is None or math.gcd(idx, 6) != 1:
                raise PreconditionError(
                    f"witness vector {self.odd_degree_witness} has index {idx}, "
                    "not coprime to 6"
                )


class ClassifyTarget(Enum):
    BOREL = "Borel"
    NORM_SPLIT = "NormSplit"
    NORM_NONSPLIT = "NormNonsplit"


@dataclass(frozen=True)
class ClassifyVerdict:
    target: ClassifyTarget
    conjugator: Mat2

    def verify(self, g: Subgroup) -> bool:
        gid = {
            ClassifyTarget.BOREL: NamedGroupId.BOREL,
            ClassifyTarget.NORM_SPLIT: NamedGroupId.NORM_SPLIT,
            ClassifyTarget.NORM_NONSPLIT: NamedGroupId.NORM_NONSPLIT,
        }[self.target]
        target = named_group(gid, g.n)
        tinv = mat_inv(self.conjugator)
        return all(
            mat_mul(mat_mul(tinv, x), self.conjugator) in target for x in g.elements
        )

    def to_dict(self) -> dict:
        return {
            "target": self.target.value,
            "conjugator": list(self.conjugator.entries()),
        }


def _invariant_line_conjugator(g: Subgroup) -> Mat2 | None:
    """T with the conjugated group upper triangular, from a stable projective line."""
    ell = g.n
    for p in ProjPoint.all_points(ell):
        if all(
            ProjPoint.from_vector(ell, *_row_image(p, x)) == p for x in g.generators
        ):
            # second row of T^-1 spans the stable line
            tinv = (
                Mat2(ell, 0, 1, p.c, p.d)
                if p.d != 0 or p.c == 0
                else Mat2(ell, 0, 1, 1, 0)
            )
            if not tinv.is_invertible():
                tinv = Mat2(ell, 1, 0, p.c, p.d)
            return mat_inv(tinv)
    return None


def _row_image(p: ProjPoint, x: Mat2) -> tuple[int, int]:
    return ((p.c * x.a + p.d * x.c) % x.n, (p.c * x.b + p.d * x.d) % x.n)


def classify_image(g: Subgroup, witness: ProjPoint) -> ClassifyVerdict:
    """Place g inside a Borel or a Cartan normalizer, given an odd-index witness."""
    ell = g.n
    if ell < 5:
        raise PreconditionError("classification requires ell >= 5")
    idx = g.order // stabilizer(g, witness).order
    if idx % 2 == 0:
        raise PreconditionError(f"witness index {idx} is even")
    if g.order % ell == 0:
        t = _invariant_line_conjugator(g)
        if t is None:
            raise LemmaViolationError(
                "group of order divisible by ell has no stable projective line"
            )
        verdict = ClassifyVerdict(ClassifyTarget.BOREL, t)
        if not verdict.verify(g):
            raise LemmaViolationError("stable-line conjugator misses the Borel group")
        return verdict
    emb = conjugate_into_normalizer(g)
    target = (
        ClassifyTarget.NORM_SPLIT
        if emb.target is NormalizerTarget.NORM_SPLIT
        else ClassifyTarget.NORM_NONSPLIT
    )
    verdict = ClassifyVerdict(target, emb.conjugator)
    if not verdict.verify(g):
        raise LemmaViolationError("normalizer conjugator fails elementwise check")
    return verdict


# ---------------------------------------------------------------------------
# inertia realizability: which ramification shapes an image can carry


def _has_eigenpair_one_alpha_e(x: Mat2, e: int) -> bool:
    # char poly (lam - 1)(lam - alpha^e): semisimple conjugacy test by trace/det
    ae = pow(primitive_root(x.n), e, x.n)
    return x.trace() == (1 + ae) % x.n and x.det() == ae


def _contains_nonsplit_power(cyclic: list[Mat2], e: int) -> bool:
    """Whether the cyclic group (as element list) contains a conjugate of the
    e-th power subgroup of the non-split Cartan."""
    ell = cyclic[0].n
    cns = named_group(NamedGroupId.NONSPLIT_CARTAN, ell)
    gen = next(x for x in cns.elements if element_order(x) == ell * ell - 1)
    power = gen**e
    target_order = element_order(power)
    if len(cyclic) % target_order != 0:
        return False
    charpolys = {
        ((power**k).trace(), (power**k).det())
        for k in range(1, target_order + 1)
        if math.gcd(k, target_order) == 1
    }
    return any(
        element_order(x) == target_order and (x.trace(), x.det()) in charpolys
        for x in cyclic
    )


def admissible_inertia_exponents(g: Subgroup) -> list[int]:
    """Exponents e for which g contains a plausible inertia image: a cyclic
    subgroup with full determinant image carrying the e-shaped ramification
    datum (an element with eigenvalues {1, alpha^e}, or a conjugate of the
    e-th power of the non-split Cartan)."""
    ell = g.n
    out = []
    for e in INERTIA_EXPONENTS:
        found = False
        for b in g.elements:
            order = element_order(b)
            cyc = [b**k for k in range(1, order + 1)]
            if len({x.det() for x in cyc}) != ell - 1:
                continue
            if any(_has_eigenpair_one_alpha_e(x, e) for x in cyc) or (
                _contains_nonsplit_power(cyc, e)
            ):
                found = True
                break
        if found:
            out.append(e)
    return out


@dataclass(frozen=True)
class NotBlReport:
    ambient: str  # "NormSplit" or "NormNonsplit"
    exponent: int
    table: dict[tuple[int, int], tuple[int, int]]  # vector -> (index, small divisor)

    @property
    def all_divisible(self) -> bool:
        return all(div in (2, 3) for _, div in self.table.values())


def not_bl_check(g: Subgroup, hyp: BlHypotheses) -> NotBlReport:
    """Verify that every vector-stabilizer index is divisible by 2 or 3."""
    ell = g.n
    ns = named_group(NamedGroupId.NORM_SPLIT, ell)
    nns = named_group(NamedGroupId.NORM_NONSPLIT, ell)
    cs = named_group(NamedGroupId.SPLIT_CARTAN, ell)
    e = hyp.inertia_exponent
    if g.elements <= nns.elements and not g.elements <= cs.elements:
        ambient = "NormNonsplit"
        cart = named_group(NamedGroupId.NONSPLIT_CARTAN, ell)
    elif g.elements <= ns.elements and not g.elements <= cs.elements:
        ambient = "NormSplit"
        cart = cs
    else:
        raise PreconditionError(
            "group must lie in a Cartan normalizer without being inside the split Cartan"
        )
    if not hyp.det_surjective:
        raise PreconditionError("determinant surjectivity hypothesis is required")
    hyp.validate_against(g)
    power = subgroup_from_elements(ell, {x**e for x in cart.elements})
    if not power.elements <= g.elements:
        raise PreconditionError(
            f"the {e}-th power of the ambient Cartan is not contained in the group"
        )
    if ambient == "NormSplit" and e not in admissible_inertia_exponents(g):
        # no cyclic full-determinant subgroup of g realizes this ramification
        # shape, so g cannot occur as an image under the hypotheses
        raise PreconditionError(
            f"no admissible inertia image with exponent {e} inside the group"
        )
    table = {}
    for vec, idx in exhaustive_spectrum(g).items():
        if idx % 2 == 0:
            table[vec] = (idx, 2)
        elif idx % 3 == 0:
            table[vec] = (idx, 3)
        else:
            raise LemmaViolationError(
                f"stabilizer index {idx} at vector {vec} is coprime to 6"
            )
    return NotBlReport(ambient, e, table)


@dataclass(frozen=True)
class BlVerdict:
    delta_kind: NamedGroupId  # DELTA1 or DELTA2
    divisor: int
    congruence_ok: bool
    mod36_class: int

    def to_dict(self) -> dict:
        return {
            "delta_kind": self.delta_kind.value,
            "divisor": self.divisor,
            "congruence_ok": self.congruence_ok,
            "mod36_class": self.mod36_class,
        }


def stripped_diagonal(g: Subgroup) -> Subgroup:
    """Image of an upper-triangular group under the diagonal projection."""
    out = set()
    for x in g.elements:
        if x.c != 0:
            raise PreconditionError(f"element {x} is not upper triangular")
        out.add(Mat2.diag(g.n, x.a, x.d))
    return subgroup_from_elements(g.n, out)


def derive_delta(g: Subgroup, hyp: BlHypotheses) -> BlVerdict:
    """Identify the diagonal part of a Borel image as one of the two derived
    diagonal groups, and verify its consequences."""
    ell = g.n
    borel = named_group(NamedGroupId.BOREL, ell)
    if not g.elements <= borel.elements:
        raise PreconditionError("group is not contained in the Borel subgroup")
    if ell < 11:
        raise PreconditionError("derivation requires ell >= 11")
    if not hyp.det_surjective:
        raise PreconditionError("determinant surjectivity hypothesis is required")
    hyp.validate_against(g)
    if not cong_check(stripped_diagonal(g)):
        raise PreconditionError("exponent congruence fails on the diagonal image")
    spectrum = exhaustive_spectrum(g)
    if not any(math.gcd(idx, 6) == 1 for idx in spectrum.values()):
        raise PreconditionError("no stabilizer index coprime to 6")

    if unipotent(ell) not in g.elements:
        if not admissible_inertia_exponents(g):
            raise PreconditionError(
                "no admissible inertia image; the group cannot occur as a"
                " Galois image under the hypotheses"
            )
        raise LemmaViolationError(
            "shear absent from a Borel image despite an admissible inertia shape"
        )
    delta = subgroup_from_elements(
        ell, [x for x in g.elements if x.b == 0 and x.c == 0]
    )
    d1 = named_group(NamedGroupId.DELTA1, ell)
    d2 = named_group(NamedGroupId.DELTA2, ell)
    if delta.elements == d1.elements:
        kind = NamedGroupId.DELTA1
    elif delta.elements == d2.elements:
        kind = NamedGroupId.DELTA2
    else:
        raise LemmaViolationError(
            f"diagonal part of order {delta.order} matches neither derived group"
        )
    divisor = (ell - 1) // (2 * tau(ell))
    for vec, idx in spectrum.items():
        if idx % divisor != 0:
            raise LemmaViolationError(
                f"index {idx} at {vec} is not divisible by {divisor}"
            )
    congruence_ok = ell % 4 == 3 and ell % 9 != 1
    if not congruence_ok:
        raise LemmaViolationError(f"residue conditions fail for ell = {ell}")
    mod36_class = ell % 36
    if mod36_class not in MOD36_RESIDUES:
        raise LemmaViolationError(f"mod-36 class {mod36_class} outside expected set")
    return BlVerdict(kind, divisor, congruence_ok, mod36_class)
