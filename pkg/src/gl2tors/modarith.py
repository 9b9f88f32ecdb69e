"""Exact arithmetic mod N, in F_ell and F_{ell^2}, and 2x2 matrix primitives."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from sympy import factorint, isprime

from .errors import PreconditionError, SingularMatrixError


def _check_modulus(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise PreconditionError(f"modulus must be an integer >= 2, got {n!r}")


def _check_odd_prime(ell: int) -> None:
    if ell % 2 == 0 or not isprime(ell):
        raise PreconditionError(f"expected an odd prime, got {ell}")


@lru_cache(maxsize=None)
def primitive_root(ell: int) -> int:
    """Smallest generator of the multiplicative group of F_ell."""
    _check_odd_prime(ell)
    order = ell - 1
    prime_divs = list(factorint(order))
    for cand in range(2, ell):
        if all(pow(cand, order // q, ell) != 1 for q in prime_divs):
            return cand
    raise AssertionError("no generator found; unreachable for prime modulus")


@lru_cache(maxsize=None)
def gl2_order(n: int) -> int:
    """Order of the group of invertible 2x2 matrices mod n."""
    if not isinstance(n, int) or n < 1:
        raise PreconditionError(f"modulus must be a positive integer, got {n!r}")
    total = 1
    for q, e in factorint(n).items():
        # |GL2(Z/q^e)| = q^(4e) (1 - q^-2)(1 - q^-1)
        total *= (q * q - 1) * (q * q - q) * q ** (4 * e - 4)
    return total


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix over Z/nZ with entries stored reduced in [0, n)."""

    n: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        _check_modulus(self.n)
        n = self.n
        object.__setattr__(self, "a", self.a % n)
        object.__setattr__(self, "b", self.b % n)
        object.__setattr__(self, "c", self.c % n)
        object.__setattr__(self, "d", self.d % n)

    @staticmethod
    def identity(n: int) -> "Mat2":
        return Mat2(n, 1, 0, 0, 1)

    @staticmethod
    def diag(n: int, a: int, d: int) -> "Mat2":
        return Mat2(n, a, 0, 0, d)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    def trace(self) -> int:
        return (self.a + self.d) % self.n

    def is_invertible(self) -> bool:
        return math.gcd(self.det(), self.n) == 1

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_identity(self) -> bool:
        return self == Mat2.identity(self.n)

    def transpose(self) -> "Mat2":
        return Mat2(self.n, self.a, self.c, self.b, self.d)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return mat_inv(self) ** (-k)
        result = Mat2.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = mat_mul(result, base)
            base = mat_mul(base, base)
            k >>= 1
        return result

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.n}"


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    if x.n != y.n:
        raise PreconditionError(f"modulus mismatch: {x.n} vs {y.n}")
    n = x.n
    return Mat2(
        n,
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )


def mat_inv(x: Mat2) -> Mat2:
    det = x.det()
    if math.gcd(det, x.n) != 1:
        raise SingularMatrixError(f"matrix {x} has non-unit determinant {det}")
    dinv = pow(det, -1, x.n)
    return Mat2(x.n, x.d * dinv, -x.b * dinv, -x.c * dinv, x.a * dinv)


def element_order(x: Mat2) -> int:
    """Least k >= 1 with x^k = I; divides gl2_order(n)."""
    if not x.is_invertible():
        raise PreconditionError(f"matrix {x} is not invertible")
    ident = Mat2.identity(x.n)
    power = x
    k = 1
    cap = gl2_order(x.n)
    while power != ident:
        power = mat_mul(power, x)
        k += 1
        if k > cap:
            raise AssertionError("order exceeds group order; unreachable")
    return k


def unipotent(n: int) -> Mat2:
    """The shear (1 1; 0 1)."""
    return Mat2(n, 1, 1, 0, 1)


def unipotent_lower(n: int) -> Mat2:
    """The transposed shear (1 0; 1 1)."""
    return Mat2(n, 1, 0, 1, 1)


def legendre(a: int, ell: int) -> int:
    """Legendre symbol of a mod an odd prime: 1, -1, or 0."""
    a %= ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


def sqrt_mod(a: int, ell: int) -> int | None:
    """A square root of a mod an odd prime, or None if a is a non-residue."""
    a %= ell
    if a == 0:
        return 0
    if legendre(a, ell) != 1:
        return None
    # fine at desk scale; Tonelli-Shanks would only matter for large ell
    for r in range(1, ell):
        if r * r % ell == a:
            return r
    return None


@dataclass(frozen=True)
class QuadExtElem:
    """An element re + im*sqrt(alpha) of the quadratic extension of F_ell.

    alpha is the fixed smallest generator of the multiplicative group, so it
    is a non-residue and sqrt(alpha) really is a proper extension element.
    """

    ell: int
    re: int
    im: int

    def __post_init__(self):
        _check_odd_prime(self.ell)
        object.__setattr__(self, "re", self.re % self.ell)
        object.__setattr__(self, "im", self.im % self.ell)

    @property
    def alpha(self) -> int:
        return primitive_root(self.ell)

    def conjugate(self) -> "QuadExtElem":
        return QuadExtElem(self.ell, self.re, -self.im)

    def is_rational(self) -> bool:
        return self.im == 0

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def norm(self) -> int:
        # re^2 - alpha * im^2, the product with the conjugate
        return (self.re * self.re - self.alpha * self.im * self.im) % self.ell

    def __add__(self, other: "QuadExtElem") -> "QuadExtElem":
        self._check(other)
        return QuadExtElem(self.ell, self.re + other.re, self.im + other.im)

    def __sub__(self, other: "QuadExtElem") -> "QuadExtElem":
        self._check(other)
        return QuadExtElem(self.ell, self.re - other.re, self.im - other.im)

    def __neg__(self) -> "QuadExtElem":
        return QuadExtElem(self.ell, -self.re, -self.im)

    def __mul__(self, other: "QuadExtElem") -> "QuadExtElem":
        self._check(other)
        ell, al = self.ell, self.alpha
        return QuadExtElem(
            ell,
            self.re * other.re + al * self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self) -> "QuadExtElem":
        nrm = self.norm()
        if nrm == 0:
            raise SingularMatrixError("zero element of the quadratic extension")
        ninv = pow(nrm, -1, self.ell)
        return QuadExtElem(self.ell, self.re * ninv, -self.im * ninv)

    def _check(self, other: "QuadExtElem") -> None:
        if self.ell != other.ell:
            raise PreconditionError("mixed characteristics in quadratic extension")

    def __repr__(self):
        return f"{self.re}+{self.im}√{self.alpha} (mod {self.ell})"


class EigenKind(Enum):
    RATIONAL_DISTINCT = "RationalDistinct"
    RATIONAL_REPEATED = "RationalRepeated"
    IRRATIONAL_CONJUGATE_PAIR = "IrrationalConjugatePair"


@dataclass(frozen=True)
class EigenResult:
    kind: EigenKind
    values: tuple  # two residues, or two QuadExtElem forming a conjugate pair


def eigenvalues(x: Mat2) -> EigenResult:
    """Eigenvalues of x over the prime field, split by char-poly discriminant."""
    ell = x.n
    _check_odd_prime(ell)
    tr, det = x.trace(), x.det()
    disc = (tr * tr - 4 * det) % ell
    inv2 = pow(2, -1, ell)
    sym = legendre(disc, ell)
    if sym == 0:
        lam = tr * inv2 % ell
        return EigenResult(EigenKind.RATIONAL_REPEATED, (lam, lam))
    if sym == 1:
        root = sqrt_mod(disc, ell)
        v1 = (tr + root) * inv2 % ell
        v2 = (tr - root) * inv2 % ell
        return EigenResult(EigenKind.RATIONAL_DISTINCT, tuple(sorted((v1, v2))))
    # disc is a non-residue: disc = alpha^(2k+1), so sqrt(disc) = alpha^k sqrt(alpha)
    alpha = primitive_root(ell)
    val, k = disc, 0
    while legendre(val, ell) != 1:
        # divide out alpha until the residue part remains
        val = val * pow(alpha, -1, ell) % ell
        k += 1
    assert k == 1  # a non-residue is alpha * (residue)
    im = sqrt_mod(val, ell)
    lam = QuadExtElem(ell, tr * inv2 % ell, im * inv2 % ell)
    return EigenResult(EigenKind.IRRATIONAL_CONJUGATE_PAIR, (lam, lam.conjugate()))
