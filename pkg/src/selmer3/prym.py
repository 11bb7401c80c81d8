"""Sextic twist families of Prym surfaces of bielliptic plane quartics
y^3 = (x^2 - d)(x^2 - a*d), and the rank / rational-point bounds for the
shipped a = 4 family.

The surface carries two 3-isogenies phi, psi whose composition is the
descent of 1 - zeta.  On the family Sigma (squarefree d = 2 or 11 mod 36)
every finite place except 3 contributes a trivial ratio: the good places
because d is squarefree there, the place 2 because neither d nor -3d is a
2-adic square on Sigma.  The 3-adic pair comes from a constraint solver:
exponents in {0, 1}, the four ratios of the twist and its -27-twist
multiply to 9, and (the externally computed input) the phi and psi ratios
differ.  The solver output is used unordered; which of phi, psi carries
the 3 is optional metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import DomainError, IncompleteConfigError
from .localfield import Place, Rational, is_square, sextic_class_3adic
from .selmerratio import (
    IsogenyDescriptor,
    LocalPlaceProfile,
    archimedean_exponent,
    local_exponent,
    parity_prediction,
    rank_density_bounds,
)
from .localclass import build_twist_datum
from .twistfamilies import TwistFamily, enumerate_classes, factorize, reduce_class


@dataclass(frozen=True)
class ThreeAdicInput:
    """What is known about the four 3-adic exponents
    (phi_d, psi_d, phi_{-27d}, psi_{-27d}): entries lie in {0, 1}, they sum
    to the product exponent, and in "unequal" mode the first two differ.
    `ordered` optionally pins the (phi, psi) order per sixth-power class."""

    mode: str = "unequal"  # "unequal" | "product-only"
    product_exponent: int = 2
    ordered: dict[int, tuple[int, int]] | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("unequal", "product-only"):
            raise DomainError(f"unknown 3-adic input mode {self.mode!r}")


@dataclass(frozen=True)
class FTildeEntry:
    curve_type: str
    max_r: int
    value: int


@dataclass(frozen=True)
class PrymCurveConfig:
    a: Fraction
    genus: int
    dim_b: int
    bad_primes: frozenset[int]
    family: TwistFamily
    three_adic: ThreeAdicInput
    kernel_characters: tuple[Fraction, Fraction]
    f_tilde: FTildeEntry
    trivial_points: int
    nontorsion_trivial_points: int
    name: str = ""

    def __post_init__(self) -> None:
        if self.a in (0, 1, -1):
            raise DomainError("curve parameter a must avoid 0 and +-1")

    def descriptors(self) -> tuple[IsogenyDescriptor, IsogenyDescriptor]:
        k_phi, k_psi = self.kernel_characters
        return (
            IsogenyDescriptor(m=1, kernel_character=k_phi, name="phi"),
            IsogenyDescriptor(m=1, kernel_character=k_psi, name="psi"),
        )

    @staticmethod
    def from_json_obj(obj: dict) -> "PrymCurveConfig":
        if obj.get("schema") != 1:
            raise DomainError("unsupported prym-config schema")
        three = obj.get("three_adic", {})
        ordered = three.get("ordered")
        if ordered is not None:
            ordered = {int(k): (int(v[0]), int(v[1])) for k, v in ordered.items()}
        ft = obj["f_tilde"]
        return PrymCurveConfig(
            a=Fraction(str(obj["a"])),
            genus=int(obj["genus"]),
            dim_b=int(obj["dim_B"]),
            bad_primes=frozenset(int(p) for p in obj.get("bad_primes", [])),
            family=TwistFamily.from_json_obj(obj["family"]),
            three_adic=ThreeAdicInput(
                mode=three.get("mode", "unequal"),
                product_exponent=int(three.get("product_exponent", 2)),
                ordered=ordered,
            ),
            kernel_characters=tuple(
                Fraction(str(k)) for k in obj.get("kernel_characters", ["1", "1"])
            ),
            f_tilde=FTildeEntry(ft["curve_type"], int(ft["max_r"]), int(ft["value"])),
            trivial_points=int(obj["trivial_points"]),
            nontorsion_trivial_points=int(obj["nontorsion_trivial_points"]),
            name=obj.get("name", ""),
        )

    @staticmethod
    def from_json(text: str) -> "PrymCurveConfig":
        return PrymCurveConfig.from_json_obj(json.loads(text))


def load_preset(name: str) -> PrymCurveConfig:
    try:
        text = resources.files("selmer3.presets").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise DomainError(f"unknown preset {name!r}") from None
    return PrymCurveConfig.from_json(text)


def solve_three_adic(config: PrymCurveConfig) -> list[tuple[int, int, int, int]]:
    """All assignments of the four 3-adic exponents consistent with the
    configured constraints; exhaustive over {0,1}^4."""
    want = config.three_adic.product_exponent
    out = []
    for x1 in (0, 1):
        for x2 in (0, 1):
            for x3 in (0, 1):
                for x4 in (0, 1):
                    if x1 + x2 + x3 + x4 != want:
                        continue
                    if config.three_adic.mode == "unequal" and x1 == x2:
                        continue
                    out.append((x1, x2, x3, x4))
    if not out:
        raise DomainError("3-adic constraints are unsatisfiable")
    return out


@dataclass(frozen=True)
class PlacePair:
    place_label: str
    pair: tuple[int, int]  # (phi exponent, psi exponent)
    ordered: bool
    provenance: str

    def to_json_obj(self) -> dict:
        return {
            "place": self.place_label,
            "pair": list(self.pair),
            "ordered": self.ordered,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class PrymLocalAssembly:
    d0: int
    places: tuple[PlacePair, ...]
    four_exponents: tuple[int, int, int, int]

    @property
    def pair_global(self) -> tuple[int, int]:
        """Global exponents of (phi, psi), as an unordered sorted pair
        unless the 3-adic order was configured."""
        kp = sum(p.pair[0] for p in self.places)
        ks = sum(p.pair[1] for p in self.places)
        if all(p.ordered for p in self.places):
            return (kp, ks)
        return tuple(sorted((kp, ks)))  # type: ignore[return-value]

    @property
    def k_pi(self) -> int:
        return sum(p.pair[0] + p.pair[1] for p in self.places)

    @property
    def parity(self) -> str:
        return parity_prediction(self.k_pi)

    def to_json_obj(self) -> dict:
        kp, ks = self.pair_global
        return {
            "d": self.d0,
            "places": [p.to_json_obj() for p in self.places],
            "pair_global_k": [kp, ks],
            "pair_ratios": [str(Fraction(3) ** kp), str(Fraction(3) ** ks)],
            "k_pi": self.k_pi,
            "parity": self.parity,
            "three_adic_four": list(self.four_exponents),
        }


def assemble_local_exponents(config: PrymCurveConfig, d: Rational) -> PrymLocalAssembly:
    """Per-place exponent pairs for (phi_d, psi_d) on the configured family.

    Good places away from 6 contribute (0, 0) because the family is
    squarefree there; the place 2 contributes (0, 0) after verifying that
    neither d nor -3d is a 2-adic square; the place 3 takes the solver's
    unique unordered pair; the real place is decided by the sign of d."""
    tc = reduce_class(d, config.family.n)
    if not config.family.admits(tc):
        raise DomainError(f"{d} is not in the configured family")
    d0 = tc.d0
    desc_phi, desc_psi = config.descriptors()
    places = []

    k_inf = (archimedean_exponent(desc_phi, d0), archimedean_exponent(desc_psi, d0))
    places.append(PlacePair("real", k_inf, True, "archimedean"))

    q2 = Place.finite(2)
    if is_square(d0, q2) or is_square(-3 * d0, q2):
        raise DomainError("family admits a twist with a 2-adic square; preset broken")
    places.append(PlacePair("2", (0, 0), True, "h1-zero"))

    solutions = solve_three_adic(config)
    pairs = {tuple(sorted(s[:2])) for s in solutions}
    if len(pairs) != 1:
        raise DomainError("3-adic constraints do not determine the unordered pair")
    pair3 = next(iter(pairs))
    ordered3 = False
    if config.three_adic.ordered is not None:
        rep = sextic_class_3adic(d0).representative
        if rep not in config.three_adic.ordered:
            raise IncompleteConfigError(f"no ordered 3-adic input for sixth-power class {rep}")
        pair3 = config.three_adic.ordered[rep]
        if tuple(sorted(pair3)) not in pairs:
            raise DomainError("ordered 3-adic input contradicts the constraints")
        ordered3 = True
    places.append(PlacePair("3", pair3, ordered3, "override"))

    for p in sorted(factorize(abs(d0))):
        if p in (2, 3):
            continue
        prof = LocalPlaceProfile(Place.finite(p))
        datum = build_twist_datum(p, d0)
        k = (
            local_exponent(prof, desc_phi, datum),
            local_exponent(prof, desc_psi, datum),
        )
        places.append(PlacePair(str(p), k, True, "good"))

    four = solutions[0]
    sums = {s[0] + s[1] + s[2] + s[3] for s in solutions}
    assert sums == {config.three_adic.product_exponent}
    return PrymLocalAssembly(d0, tuple(places), four)


@dataclass(frozen=True)
class PerTwistBound:
    d0: int
    pair_abs: tuple[int, int]
    typical_dim: int
    avg_dim_bound: Fraction
    typical_density: Fraction
    parity: str


def rank_bound_per_twist(assembly: PrymLocalAssembly) -> PerTwistBound:
    """Bounds through the two isogenies: the average 3-Selmer dimension is
    at most the sum of |k| + 3^-|k| over the pair, the dimension equals
    the sum of the |k| off an exceptional set of density at most the sum
    of 1/(2*3^|k|)."""
    kp, ks = assembly.pair_global
    pair_abs: tuple[int, int] = tuple(sorted((abs(kp), abs(ks))))  # type: ignore[assignment]
    avg = Fraction(0)
    density_loss = Fraction(0)
    for k in pair_abs:
        dim_bound, dens = rank_density_bounds(k)
        avg += dim_bound
        density_loss += 1 - dens
    return PerTwistBound(
        d0=assembly.d0,
        pair_abs=pair_abs,
        typical_dim=sum(pair_abs),
        avg_dim_bound=avg,
        typical_density=max(Fraction(0), 1 - density_loss),
        parity=assembly.parity,
    )


def chabauty_point_bound(config: PrymCurveConfig, rank_cap: int) -> int:
    """Rational-point bound from the uniform-Chabauty input: the f-tilde
    value at rank_cap + genus - dim B, plus the trivial points, plus the
    nontorsion trivial points.  Needs rank_cap < dim B."""
    if rank_cap >= config.dim_b:
        raise DomainError(
            f"Chabauty inapplicable: rank cap {rank_cap} must be below dim B = {config.dim_b}"
        )
    r = rank_cap + config.genus - config.dim_b
    if config.f_tilde.curve_type != "plane_quartic" or r > config.f_tilde.max_r:
        raise IncompleteConfigError(
            f"f-tilde value unavailable for {config.f_tilde.curve_type} at r = {r}"
        )
    return config.f_tilde.value + config.trivial_points + config.nontorsion_trivial_points


@dataclass(frozen=True)
class PrymReport:
    name: str
    height_bound: int
    rows: tuple[PrymLocalAssembly, ...]
    avg_rank_bound: Fraction
    rank_le_1_density: Fraction
    point_bound: int

    def to_json_obj(self) -> dict:
        return {
            "preset": self.name,
            "height_bound": self.height_bound,
            "member_count": len(self.rows),
            "rows": [r.to_json_obj() for r in self.rows],
            "aggregate": {
                "avg_rank_bound": str(self.avg_rank_bound),
                "rank_le_1_density": str(self.rank_le_1_density),
                "point_bound": self.point_bound,
            },
        }


def family_report(config: PrymCurveConfig, height_bound: int) -> PrymReport:
    """Enumerate the family, assemble all local exponents, and aggregate
    the analytic bounds.  Every member is checked against the invariants
    (exponents in {0,1} summing to the product exponent, odd global
    exponent, unordered ratio pair {1, 3+-1})."""
    rows = []
    for tc in enumerate_classes(config.family, height_bound):
        assembly = assemble_local_exponents(config, tc.d0)
        if config.three_adic.mode == "unequal":
            if sorted(assembly.four_exponents) != [0, 0, 1, 1]:
                raise AssertionError("solver output violated the product identity")
            if assembly.parity != "odd":
                raise AssertionError("parity invariant failed")
            if set(assembly.pair_global) not in ({0, -1}, {0, 1}):
                raise AssertionError("ratio pair invariant failed")
        rows.append(assembly)

    bounds = [rank_bound_per_twist(r) for r in rows]
    patterns = {b.pair_abs for b in bounds}
    if patterns and patterns != {(0, 1)}:
        raise AssertionError(f"unexpected |k| patterns {patterns}")
    avg_bound = bounds[0].avg_dim_bound if bounds else sum(rank_density_bounds(k)[0] for k in (0, 1))
    density = bounds[0].typical_density if bounds else 1 - sum(
        1 - rank_density_bounds(k)[1] for k in (0, 1)
    )
    return PrymReport(
        name=config.name,
        height_bound=height_bound,
        rows=tuple(rows),
        avg_rank_bound=avg_bound,
        rank_le_1_density=density,
        point_bound=chabauty_point_bound(config, rank_cap=1),
    )


def positive_proportion_rank_bound(config: PrymCurveConfig) -> int:
    """For a product-only configuration the pair is not pinned down, but
    every consistent assignment keeps both |k| at most 1, so a positive
    proportion of twists has 3-Selmer dimension (hence rank) at most 2."""
    worst = 0
    for sol in solve_three_adic(config):
        for sign in (1, -1):
            k_inf = archimedean_exponent(config.descriptors()[0], sign)
            worst = max(worst, abs(sol[0] + k_inf) + abs(sol[1] + k_inf))
    return worst
