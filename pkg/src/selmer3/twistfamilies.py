"""Twist classes over Q: canonical 2n-th-power-free representatives, the
height, and enumeration of squarefree / congruence-defined families.

A class in Q^x modulo 2n-th powers is stored by its unique 2n-th-power-free
integer representative, sign kept (the sign is the archimedean datum).
Factorization is trial division; heights at desk scale make that fine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .localfield import Rational, is_prime


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division with a
    primality check on the cofactor."""
    if n <= 0:
        raise DomainError("factorize expects a positive integer")
    out: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        if not is_prime(m):
            raise DomainError(f"cofactor {m} resisted factorization")
        out[m] = out.get(m, 0) + 1
    return out


def rational_exponents(d: Fraction) -> dict[int, int]:
    exps = dict(factorize(abs(d.numerator)).items())
    for p, e in factorize(d.denominator).items():
        exps[p] = exps.get(p, 0) - e
    return exps


@dataclass(frozen=True)
class TwistClass:
    """The 2n-th-power-free integer representative of a twist class."""

    d0: int
    n: int

    def __post_init__(self) -> None:
        if self.d0 == 0:
            raise DomainError("twist class must be nonzero")


def reduce_class(d: Rational, n: int) -> TwistClass:
    """Reduce d modulo 2n-th powers of rationals: every prime exponent is
    taken mod 2n, the sign is kept.  Idempotent."""
    d = Fraction(d)
    if d == 0:
        raise DomainError("twist class must be nonzero")
    sign = 1 if d > 0 else -1
    d0 = sign
    for p, e in sorted(rational_exponents(d).items()):
        d0 *= p ** (e % (2 * n))
    return TwistClass(d0, n)


def height(tc: TwistClass) -> int:
    return abs(tc.d0)


def is_squarefree_class(tc: TwistClass) -> bool:
    """Squarefree means every prime divides the representative to order 0
    or 1 (equivalently v(d) = 0 or 1 mod 2n at every prime)."""
    return all(e <= 1 for e in factorize(abs(tc.d0)).values())


@dataclass(frozen=True)
class CongruenceCondition:
    modulus: int
    residues: frozenset[int]

    def admits(self, d0: int) -> bool:
        return d0 % self.modulus in self.residues


@dataclass(frozen=True)
class TwistFamily:
    """A family of twist classes defined by local conditions: an
    archimedean sign set, an optional squarefree restriction, and finitely
    many congruence conditions."""

    n: int = 3
    signs: tuple[int, ...] = (1, -1)
    conditions: tuple[CongruenceCondition, ...] = ()
    squarefree: bool = False
    height_bound: int | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if not set(self.signs) <= {1, -1} or not self.signs:
            raise DomainError("signs must be a nonempty subset of {+1, -1}")
        if self.n < 3 or self.n % 3 != 0:
            raise DomainError("n must be a power of 3, at least 3")

    @property
    def is_large(self) -> bool:
        # squarefree and full presets contain the valuation-(0|1) disc at
        # all but the finitely many congruence-constrained primes
        return bool(self.signs)

    def admits(self, tc: TwistClass) -> bool:
        if tc.n != self.n:
            return False
        if (1 if tc.d0 > 0 else -1) not in self.signs:
            return False
        if self.squarefree and not is_squarefree_class(tc):
            return False
        return all(cond.admits(tc.d0) for cond in self.conditions)

    def to_json_obj(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "signs": ["+" if s > 0 else "-" for s in self.signs],
            "conditions": [
                {"modulus": c.modulus, "residues": sorted(c.residues)}
                for c in self.conditions
            ],
            "squarefree": self.squarefree,
            "height_bound": self.height_bound,
            "name": self.name,
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "TwistFamily":
        if obj.get("schema") != 1:
            raise DomainError("unsupported family schema")
        signs = tuple(1 if s == "+" else -1 for s in obj.get("signs", ["+", "-"]))
        conds = tuple(
            CongruenceCondition(int(c["modulus"]), frozenset(int(r) for r in c["residues"]))
            for c in obj.get("conditions", [])
        )
        return TwistFamily(
            n=int(obj.get("n", 3)),
            signs=signs,
            conditions=conds,
            squarefree=bool(obj.get("squarefree", False)),
            height_bound=obj.get("height_bound"),
            name=obj.get("name", ""),
        )

    @staticmethod
    def from_json(text: str) -> "TwistFamily":
        return TwistFamily.from_json_obj(json.loads(text))


def _excluded_heights(bound: int, power: int) -> bytearray:
    """Marks the h < bound divisible by some p^power."""
    bad = bytearray(max(bound, 1))
    p = 2
    while p**power < bound:
        if is_prime(p):
            q = p**power
            bad[q::q] = bytearray([1]) * len(range(q, bound, q))
        p += 1
    return bad


def enumerate_classes(family: TwistFamily, height_bound: int | None = None) -> list[TwistClass]:
    """All classes of the family with height strictly below the bound,
    sorted by height with the positive representative first.  The
    power-free and squarefree filters are sieved once."""
    bound = height_bound if height_bound is not None else family.height_bound
    if bound is None:
        raise DomainError("an enumeration needs a height bound")
    power = 2 if family.squarefree else 2 * family.n
    bad = _excluded_heights(bound, power)
    out = []
    for h in range(1, bound):
        if bad[h]:
            continue
        for sign in (1, -1):
            if sign not in family.signs:
                continue
            d0 = sign * h
            if all(cond.admits(d0) for cond in family.conditions):
                out.append(TwistClass(d0, family.n))
    return out


PRESETS: dict[str, TwistFamily] = {
    "sigma-36-2-11": TwistFamily(
        n=3,
        signs=(1, -1),
        conditions=(CongruenceCondition(36, frozenset({2, 11})),),
        squarefree=True,
        name="sigma-36-2-11",
    ),
    "squarefree-n3": TwistFamily(n=3, squarefree=True, name="squarefree-n3"),
    "full-n3": TwistFamily(n=3, name="full-n3"),
}


def family_preset(name: str) -> TwistFamily:
    if name not in PRESETS:
        raise DomainError(f"unknown family preset {name!r}")
    return PRESETS[name]
