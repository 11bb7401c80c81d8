"""Binary cubic forms, the twisted GL2 action, and the correspondence with
cubic rings.

A form f = a x^3 + b x^2 y + c x y^2 + d y^3 with exact rational
coefficients corresponds to the rank-3 ring on basis (1, w, t) with

    w*t = -a*d,   w^2 = -a*c + b*w - a*t,   t^2 = -b*d + d*w - c*t,

the translation-normalized multiplication table (w*t lands in the base
ring).  The table is commutative, associative for every (a, b, c, d), and
its trace-form discriminant equals disc(f) identically, which is what the
round-trip tests pin down.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError
from .localfield import Rational, is_prime, valuation
from .padicroots import form_has_projective_root_qp


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class BinaryCubicForm:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, a: Rational, b: Rational, c: Rational, d: Rational):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))
        object.__setattr__(self, "d", _frac(d))

    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def discriminant(self) -> Fraction:
        a, b, c, d = self.coefficients()
        return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2

    def evaluate(self, x: Rational, y: Rational) -> Fraction:
        a, b, c, d = self.coefficients()
        x, y = Fraction(x), Fraction(y)
        return a * x**3 + b * x**2 * y + c * x * y**2 + d * y**3

    def swap(self) -> "BinaryCubicForm":
        """f(y, x); the involution pairing the two SL2-orbits of a field."""
        return BinaryCubicForm(self.d, self.c, self.b, self.a)

    def scale(self, s: Rational) -> "BinaryCubicForm":
        s = Fraction(s)
        return BinaryCubicForm(s * self.a, s * self.b, s * self.c, s * self.d)

    def is_integral(self) -> bool:
        return all(t.denominator == 1 for t in self.coefficients())

    def is_p_integral(self, p: int) -> bool:
        return all(t == 0 or valuation(t, p) >= 0 for t in self.coefficients())

    def reduce_mod(self, p: int) -> tuple[int, int, int, int]:
        if not self.is_p_integral(p):
            raise DomainError(f"form is not {p}-integral")
        out = []
        for t in self.coefficients():
            out.append(t.numerator * pow(t.denominator, -1, p) % p)
        return tuple(out)  # type: ignore[return-value]

    def to_json_obj(self) -> list[str]:
        return [str(t) for t in self.coefficients()]

    @staticmethod
    def from_json_obj(obj) -> "BinaryCubicForm":
        if len(obj) != 4:
            raise DomainError("a form serializes as a 4-tuple")
        return BinaryCubicForm(*(Fraction(str(t)) for t in obj))

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c}, {self.d})"


@dataclass(frozen=True)
class TwoByTwoMatrix:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, a: Rational, b: Rational, c: Rational, d: Rational):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))
        object.__setattr__(self, "d", _frac(d))

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def is_sl2(self) -> bool:
        return self.det() == 1

    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def mul(self, other: "TwoByTwoMatrix") -> "TwoByTwoMatrix":
        return TwoByTwoMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @staticmethod
    def identity() -> "TwoByTwoMatrix":
        return TwoByTwoMatrix(1, 0, 0, 1)


def _linear_power(s: Fraction, t: Fraction, k: int) -> list[Fraction]:
    """Coefficients of (s*x + t*y)^k in x^(k-i) y^i order."""
    out = [Fraction(0)] * (k + 1)
    binom = 1
    for i in range(k + 1):
        out[i] = Fraction(binom) * s ** (k - i) * t**i
        binom = binom * (k - i) // (i + 1)
    return out


def act(gamma: TwoByTwoMatrix, f: BinaryCubicForm) -> BinaryCubicForm:
    """(gamma . f)(x, y) = f(a x + c y, b x + d y) / det(gamma).

    Satisfies disc(gamma . f) = det(gamma)^2 disc(f) and composes as a left
    action.
    """
    det = gamma.det()
    if det == 0:
        raise DomainError("singular matrix cannot act on forms")
    xs = {k: _linear_power(gamma.a, gamma.c, k) for k in range(4)}
    ys = {k: _linear_power(gamma.b, gamma.d, k) for k in range(4)}
    acc = [Fraction(0)] * 4
    for i, coeff in zip((3, 2, 1, 0), f.coefficients()):
        # coeff * X^i * Y^(3-i) with X = a x + c y, Y = b x + d y
        for u, cu in enumerate(xs[i]):
            for v, cv in enumerate(ys[3 - i]):
                acc[u + v] += coeff * cu * cv
    return BinaryCubicForm(*(t / det for t in acc))


# ----------------------------------------------------------------------
# Cubic rings
# ----------------------------------------------------------------------

Triple = tuple[Fraction, Fraction, Fraction]


def _triple(x0, x1, x2) -> Triple:
    return (Fraction(x0), Fraction(x1), Fraction(x2))


@dataclass(frozen=True)
class CubicRing:
    """Rank-3 algebra on basis (1, w, t): stores the products w^2, w*t, t^2
    as coordinate triples over that basis.  The table is commutative and
    unital by representation; `validate()` verifies associativity by finite
    checking on basis products and runs on every untrusted input path."""

    ww: Triple
    wt: Triple
    tt: Triple

    def validate(self) -> "CubicRing":
        for x, y, z in ((1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2), (2, 1, 2), (2, 2, 2)):
            left = self.mul(self.basis(x), self.mul(self.basis(y), self.basis(z)))
            right = self.mul(self.mul(self.basis(x), self.basis(y)), self.basis(z))
            if left != right:
                raise DomainError("multiplication table is not associative")
        return self

    @staticmethod
    def basis(i: int) -> Triple:
        return tuple(Fraction(1 if j == i else 0) for j in range(3))  # type: ignore[return-value]

    def mul(self, x: Triple, y: Triple) -> Triple:
        x0, x1, x2 = x
        y0, y1, y2 = y
        out = [x0 * y0, x0 * y1 + x1 * y0, x0 * y2 + x2 * y0]
        for coeff, prod in (
            (x1 * y1, self.ww),
            (x1 * y2 + x2 * y1, self.wt),
            (x2 * y2, self.tt),
        ):
            for i in range(3):
                out[i] += coeff * prod[i]
        return (out[0], out[1], out[2])

    def multiplication_matrix(self, z: Triple) -> list[list[Fraction]]:
        cols = [self.mul(z, self.basis(j)) for j in range(3)]
        return [[cols[j][i] for j in range(3)] for i in range(3)]

    def trace(self, z: Triple) -> Fraction:
        # Tr is linear; Tr(1) = 3, Tr(w) and Tr(t) read off the table
        tr_w = self.ww[1] + self.wt[2]
        tr_t = self.wt[1] + self.tt[2]
        return 3 * z[0] + z[1] * tr_w + z[2] * tr_t

    def discriminant(self) -> Fraction:
        basis = [self.basis(i) for i in range(3)]
        gram = [
            [self.trace(self.mul(basis[i], basis[j])) for j in range(3)]
            for i in range(3)
        ]
        return (
            gram[0][0] * (gram[1][1] * gram[2][2] - gram[1][2] * gram[2][1])
            - gram[0][1] * (gram[1][0] * gram[2][2] - gram[1][2] * gram[2][0])
            + gram[0][2] * (gram[1][0] * gram[2][1] - gram[1][1] * gram[2][0])
        )

    def structure_constants(self) -> list[list[list[str]]]:
        """Full 3x3x3 array: entry [i][j] is e_i * e_j over (1, w, t)."""
        table = [[None] * 3 for _ in range(3)]  # type: ignore[var-annotated]
        for i in range(3):
            for j in range(3):
                table[i][j] = [str(c) for c in self.mul(self.basis(i), self.basis(j))]
        return table  # type: ignore[return-value]

    def to_json(self) -> str:
        return json.dumps(self.structure_constants())

    @staticmethod
    def from_structure_constants(table) -> "CubicRing":
        def tr(entry) -> Triple:
            return _triple(*(Fraction(str(v)) for v in entry))

        e0e0 = tr(table[0][0])
        if e0e0 != CubicRing.basis(0):
            raise DomainError("basis element 0 must be the unit")
        for i in range(3):
            for j in range(3):
                if tr(table[i][j]) != tr(table[j][i]):
                    raise DomainError("multiplication table is not commutative")
            if tr(table[0][i]) != CubicRing.basis(i):
                raise DomainError("basis element 0 must be the unit")
        return CubicRing(tr(table[1][1]), tr(table[1][2]), tr(table[2][2])).validate()


def form_to_ring(f: BinaryCubicForm, p: int | None = None) -> CubicRing:
    """The cubic ring whose index form is f.  Requires integral
    coefficients (p-integral when a prime is given): the correspondence is
    over a PID."""
    if p is None:
        if not f.is_integral():
            raise DomainError("form must have integral coefficients")
    else:
        if not f.is_p_integral(p):
            raise DomainError(f"form must be {p}-integral")
    a, b, c, d = f.coefficients()
    return CubicRing(
        ww=_triple(-a * c, b, -a),
        wt=_triple(-a * d, 0, 0),
        tt=_triple(-b * d, d, -c),
    )


def ring_to_form(ring: CubicRing) -> BinaryCubicForm:
    """Inverse of form_to_ring.  The basis is first translated so that w*t
    lies in the base ring, then the coefficients are read off; a table that
    cannot be matched is rejected."""
    alpha, beta = ring.wt[1], ring.wt[2]  # w*t = n + alpha*w + beta*t
    if alpha != 0 or beta != 0:
        # (w - beta)(t - alpha) lands in the base ring
        ring = translate_basis(ring, -beta, -alpha)
    a = -ring.ww[2]
    b = ring.ww[1]
    c = -ring.tt[2]
    d = ring.tt[1]
    f = BinaryCubicForm(a, b, c, d)
    expected = CubicRing(
        ww=_triple(-a * c, b, -a),
        wt=_triple(-a * d, 0, 0),
        tt=_triple(-b * d, d, -c),
    )
    if expected != ring:
        raise DomainError("structure constants do not define a cubic ring of a form")
    return f


def translate_basis(ring: CubicRing, s: Rational, t: Rational) -> CubicRing:
    """The same ring on the basis (1, w + s, t + t')."""
    s, t = Fraction(s), Fraction(t)
    w = (Fraction(0) + s, Fraction(1), Fraction(0))
    th = (Fraction(0) + t, Fraction(0), Fraction(1))
    # products of the new basis, still in old coordinates
    ww = ring.mul(w, w)
    wt = ring.mul(w, th)
    tt = ring.mul(th, th)

    def to_new(z: Triple) -> Triple:
        # x + y*w_old + z*t_old = (x - y*s - z*t) + y*w_new + z*t_new
        return (z[0] - z[1] * s - z[2] * t, z[1], z[2])

    return CubicRing(to_new(ww), to_new(wt), to_new(tt))


# ----------------------------------------------------------------------
# Mod-p behaviour: factorization types, subrings of index p
# ----------------------------------------------------------------------

FACTORIZATION_TAGS = ("(111)", "(12)", "(3)", "(1^2 1)", "(1^3)", "degenerate")


def projective_roots_mod_p(f: BinaryCubicForm, p: int) -> list[tuple[int, int]]:
    """Zeros of f mod p in P^1(F_p), as normalized pairs (x, 1) or (1, 0).
    A form vanishing identically mod p has every point as a zero."""
    fa, fb, fc, fd = f.reduce_mod(p)
    if fa == 0 and fb == 0 and fc == 0 and fd == 0:
        return [(x, 1) for x in range(p)] + [(1, 0)]
    roots = []
    for x in range(p):
        if (((fa * x + fb) * x + fc) * x + fd) % p == 0:
            roots.append((x, 1))
    if fa == 0:
        roots.append((1, 0))
    return roots


def factorization_type(f: BinaryCubicForm, p: int) -> str:
    """Splitting type of f mod p over F_p.  When f corresponds to a maximal
    order this is the splitting of p in that order."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    fa, fb, fc, fd = f.reduce_mod(p)
    if fa == 0 and fb == 0 and fc == 0 and fd == 0:
        return "degenerate"
    mults = []
    # multiplicity of (1 : 0) is 3 minus the degree of f(x, 1) mod p
    coeffs = [fd, fc, fb, fa]
    deg = max(i for i, c in enumerate(coeffs) if c != 0)
    if deg < 3:
        mults.append(3 - deg)
    poly = coeffs[: deg + 1]
    for r in range(p):
        m = 0
        q = poly
        while q:
            quo, rem = _divmod_linear(q, r, p)
            if rem != 0:
                break
            q = quo
            m += 1
        if m:
            mults.append(m)
    mults.sort(reverse=True)
    if mults == [1, 1, 1]:
        return "(111)"
    if mults == [1]:
        return "(12)"
    if mults == []:
        return "(3)"
    if mults == [2, 1]:
        return "(1^2 1)"
    if mults == [3]:
        return "(1^3)"
    raise AssertionError(f"impossible multiplicity pattern {mults}")


def _divmod_linear(q: list[int], r: int, p: int) -> tuple[list[int], int]:
    """Divide a mod-p polynomial (constant term first) by (x - r)."""
    carry = 0
    high_to_low = []
    for c in reversed(q):
        carry = (carry * r + c) % p
        high_to_low.append(carry)
    return list(reversed(high_to_low[:-1])), high_to_low[-1]


def _unimodular_completion(x0: int, y0: int) -> TwoByTwoMatrix:
    """An SL2(Z) matrix with first row (x0, y0); requires gcd(x0, y0) = 1."""
    if gcd(x0, y0) != 1:
        raise DomainError("point must be primitive")
    old_r, r = x0, y0
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r == -1:
        old_s, old_t = -old_s, -old_t
    # old_s*x0 + old_t*y0 = 1, so [[x0, y0], [-old_t, old_s]] has det 1
    return TwoByTwoMatrix(x0, y0, -old_t, old_s)


def index_p_subrings(ring: CubicRing, p: int) -> list[CubicRing]:
    """The subrings of index p, one per zero of the associated form in
    P^1(F_p); each has discriminant p^2 times that of the input."""
    f = ring_to_form(ring)
    if not f.is_p_integral(p):
        raise DomainError(f"ring is not defined over the {p}-integral base")
    out = []
    shear = TwoByTwoMatrix(1, 0, 0, p)
    for x0, y0 in projective_roots_mod_p(f, p):
        gamma = _unimodular_completion(x0, y0)
        moved = act(gamma, f)
        sub = act(shear, moved)
        if not sub.is_p_integral(p):
            raise AssertionError("index-p subring construction lost integrality")
        out.append(form_to_ring(sub, p=p))
    return out


def conductor_subring(ring: CubicRing, p: int, k: int) -> CubicRing:
    """The ring base + p^k * S; its form is p^k times the form of S, so the
    discriminant is multiplied by p^(4k)."""
    if k < 0:
        raise DomainError("conductor exponent must be nonnegative")
    if k == 0:
        return ring
    f = ring_to_form(ring)
    return form_to_ring(f.scale(Fraction(p) ** k), p=p)


# ----------------------------------------------------------------------
# Orbits over a field
# ----------------------------------------------------------------------


def _has_rational_projective_root(f: BinaryCubicForm) -> bool:
    a, b, c, d = f.coefficients()
    if a == 0:
        return True  # (1 : 0)
    # clear denominators: integer cubic, rational root theorem
    lcm = 1
    for t in (a, b, c, d):
        lcm = lcm * t.denominator // gcd(lcm, t.denominator)
    A, B, C, D = (int(t * lcm) for t in (a, b, c, d))
    if D == 0:
        return True  # root x = 0
    for num in _divisors(abs(D)):
        for den in _divisors(abs(A)):
            for sgn in (1, -1):
                x = Fraction(sgn * num, den)
                if ((A * x + B) * x + C) * x + D == 0:
                    return True
    return False


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def orbit_split(f: BinaryCubicForm, p: int | None = None) -> tuple[BinaryCubicForm, ...]:
    """SL2-orbit representatives inside the determinant +-1 orbit of f:
    {f} when f is reducible over the field (Q, or Q_p when p is given),
    {f, f(y, x)} when f is irreducible, i.e. cuts out a field."""
    if f.discriminant() == 0:
        raise DomainError("orbit splitting requires nonzero discriminant")
    if p is None:
        reducible = _has_rational_projective_root(f)
    else:
        a, b, c, d = f.coefficients()
        reducible = form_has_projective_root_qp(a, b, c, d, p)
    return (f,) if reducible else (f, f.swap())


# ----------------------------------------------------------------------
# Desk-scale isomorphism testing
# ----------------------------------------------------------------------

_UNIMODULAR_BOUND = 2


def _bounded_unimodular_matrices(bound: int) -> list[TwoByTwoMatrix]:
    mats = []
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if abs(a * d - b * c) == 1:
                        mats.append(TwoByTwoMatrix(a, b, c, d))
    return mats


_BOUNDED_CACHE: dict[int, list[TwoByTwoMatrix]] = {}


def canonical_form_bounded(f: BinaryCubicForm, bound: int = _UNIMODULAR_BOUND) -> tuple:
    """Lexicographically least coefficient tuple over the GL2(Z) elements
    with entries bounded by `bound`.  A bounded search, adequate at test
    scale; use invariants for anything bigger."""
    if bound not in _BOUNDED_CACHE:
        _BOUNDED_CACHE[bound] = _bounded_unimodular_matrices(bound)
    best = None
    for gamma in _BOUNDED_CACHE[bound]:
        cand = act(gamma, f).coefficients()
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


def rings_isomorphic(
    r1: CubicRing, r2: CubicRing, bound: int = 3, probe_primes=(5, 7, 11, 13)
) -> bool:
    """Bounded unimodular transporter search on the index forms, with an
    invariant pre-check (discriminant, factorization types).  Adequate at
    test scale; a False from the bounded search means "not matched", full
    isomorphism testing is out of scope."""
    f1, f2 = ring_to_form(r1), ring_to_form(r2)
    if f1.discriminant() != f2.discriminant():
        return False
    for p in probe_primes:
        if f1.is_p_integral(p) and f2.is_p_integral(p):
            if factorization_type(f1, p) != factorization_type(f2, p):
                return False
    if bound not in _BOUNDED_CACHE:
        _BOUNDED_CACHE[bound] = _bounded_unimodular_matrices(bound)
    target = f2.coefficients()
    return any(act(g, f1).coefficients() == target for g in _BOUNDED_CACHE[bound])
