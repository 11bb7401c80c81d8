"""Exact root isolation in complete discretely valued rings.

The decision procedure is the classical branch-and-lift: scan residues,
accept a branch outright when the strong Hensel criterion
v(g(a)) > 2 v(g'(a)) holds, otherwise substitute x = a + pi*t, strip the
content, and recurse.  Depth is capped at twice the valuation of
Res(g, g') plus a margin; a separable polynomial must resolve before the
cap, so hitting it raises instead of guessing.

Models supply the ring: Z_p here, cubic extension rings in the oracle
module.  A model needs `zero`, `one`, `embed_int`, `residues()`, `val()`,
`div_uniformizer()` and `uniformizer()`, with elements supporting +, -, *.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, PrecisionError
from .localfield import valuation

_DEPTH_MARGIN = 6


class ZpModel:
    """Z_p with elements represented as exact rationals of valuation >= 0."""

    def __init__(self, p: int):
        self.p = p
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def embed_int(self, n: int) -> Fraction:
        return Fraction(n)

    def residues(self):
        return [Fraction(r) for r in range(self.p)]

    def val(self, x: Fraction) -> int | None:
        if x == 0:
            return None
        return valuation(x, self.p)

    def div_uniformizer(self, x: Fraction) -> Fraction:
        return x / self.p

    def uniformizer(self) -> Fraction:
        return Fraction(self.p)


def _peval(coeffs, x, zero):
    acc = zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _pderiv(coeffs, model):
    return [model.embed_int(i) * coeffs[i] for i in range(1, len(coeffs))]


def _pshift(coeffs, a, model):
    """Coefficients of g(a + pi*t) as a polynomial in t (Horner form)."""
    pi = model.uniformizer()
    out = [coeffs[-1]] + [model.zero] * (len(coeffs) - 1)
    deg = 0
    for c in reversed(coeffs[:-1]):
        new = [model.zero] * len(coeffs)
        for i in range(deg + 1):
            new[i] = new[i] + out[i] * a
            new[i + 1] = new[i + 1] + out[i] * pi
        new[0] = new[0] + c
        out = new
        deg += 1
    return out


def _strip_content(coeffs, model):
    vals = [model.val(c) for c in coeffs]
    nz = [v for v in vals if v is not None]
    if not nz:
        raise DomainError("zero polynomial in root isolation")
    for _ in range(min(nz)):
        coeffs = [model.div_uniformizer(c) for c in coeffs]
    return coeffs


def _det(rows, model):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = model.zero
    sign = 1
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _det(minor, model)
        acc = acc + term if sign > 0 else acc - term
        sign = -sign
    return acc


def _sylvester_resultant(f, g, model):
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return model.one
    rows = []
    for i in range(n):
        row = [model.zero] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [model.zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return _det(rows, model)


def _depth_cap(coeffs, model) -> int:
    deg = len(coeffs) - 1
    if deg <= 1:
        v = model.val(coeffs[1]) if deg == 1 else None
        return 2 * (v if v is not None else 0) + _DEPTH_MARGIN
    res = _sylvester_resultant(coeffs, _pderiv(coeffs, model), model)
    v = model.val(res)
    if v is None:
        raise DomainError("inseparable polynomial in root isolation")
    return 2 * v + _DEPTH_MARGIN


def has_ring_root(model, coeffs) -> bool:
    """Whether the polynomial with the given model-element coefficients
    (constant term first) has a root in the model's ring of integers."""
    coeffs = list(coeffs)
    while len(coeffs) > 1 and model.val(coeffs[-1]) is None:
        coeffs = coeffs[:-1]
    if len(coeffs) == 1:
        if model.val(coeffs[0]) is None:
            raise DomainError("zero polynomial in root isolation")
        return False
    cap = _depth_cap(coeffs, model)
    return _search(model, _strip_content(coeffs, model), 0, cap)


def _search(model, coeffs, depth: int, cap: int) -> bool:
    if depth > cap:
        raise PrecisionError(f"root isolation exceeded depth cap {cap}")
    deriv = _pderiv(coeffs, model)
    for a in model.residues():
        g_a = _peval(coeffs, a, model.zero)
        v0 = model.val(g_a)
        if v0 is None:
            return True  # exact root in the ring
        if v0 == 0:
            continue
        v1 = model.val(_peval(deriv, a, model.zero))
        if v1 is not None and v0 > 2 * v1:
            return True  # strong Hensel lift
        shifted = _strip_content(_pshift(coeffs, a, model), model)
        if _search(model, shifted, depth + 1, cap):
            return True
    return False


def has_zp_root(coeffs, p: int) -> bool:
    """Root in Z_p of a polynomial with rational coefficients (constant
    term first).  Coefficients are scaled to a p-integral primitive
    polynomial first; scaling does not change the root set."""
    coeffs = [Fraction(c) for c in coeffs]
    if all(c == 0 for c in coeffs):
        raise DomainError("zero polynomial")
    vmin = min(valuation(c, p) for c in coeffs if c != 0)
    scaled = [c * Fraction(p) ** (-vmin) for c in coeffs]
    return has_ring_root(ZpModel(p), scaled)


def form_has_projective_root_qp(a, b, c, d, p: int) -> bool:
    """Whether a binary cubic with the given coefficients has a zero in
    P^1(Q_p).  Any projective point has a representative with both
    coordinates in Z_p and one of them a unit, so testing f(x, 1) and
    f(1, y) for Z_p-roots covers everything."""
    a, b, c, d = (Fraction(t) for t in (a, b, c, d))
    if a == 0 or d == 0:
        return True  # [1:0] or [0:1] is a root
    return has_zp_root([d, c, b, a], p) or has_zp_root([a, b, c, d], p)
