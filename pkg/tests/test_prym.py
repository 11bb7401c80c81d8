from fractions import Fraction

import pytest

from selmer3.errors import DomainError, IncompleteConfigError
from selmer3.prym import (
    PrymCurveConfig,
    ThreeAdicInput,
    assemble_local_exponents,
    chabauty_point_bound,
    family_report,
    load_preset,
    positive_proportion_rank_bound,
    rank_bound_per_twist,
    solve_three_adic,
)
from selmer3.selmerratio import duality_exponent
from selmer3.twistfamilies import enumerate_classes


@pytest.fixture(scope="module")
def a4():
    return load_preset("prym-a4")


def test_preset_loads(a4):
    assert a4.a == 4
    assert a4.genus == 3 and a4.dim_b == 2
    assert a4.bad_primes == frozenset({2, 3})
    assert a4.family.name == "sigma-36-2-11"


def test_unknown_preset():
    with pytest.raises(DomainError):
        load_preset("prym-a5")


def test_three_adic_solver_unequal(a4):
    sols = solve_three_adic(a4)
    assert sols == [(0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0)]
    assert {tuple(sorted(s[:2])) for s in sols} == {(0, 1)}
    for s in sols:
        assert sum(s) == 2 and set(s) <= {0, 1}


def test_three_adic_solver_unsatisfiable(a4):
    bad = PrymCurveConfig(
        a=a4.a,
        genus=a4.genus,
        dim_b=a4.dim_b,
        bad_primes=a4.bad_primes,
        family=a4.family,
        three_adic=ThreeAdicInput(mode="unequal", product_exponent=9),
        kernel_characters=a4.kernel_characters,
        f_tilde=a4.f_tilde,
        trivial_points=a4.trivial_points,
        nontorsion_trivial_points=a4.nontorsion_trivial_points,
    )
    with pytest.raises(DomainError):
        solve_three_adic(bad)


def test_assemble_d2(a4):
    asm = assemble_local_exponents(a4, 2)
    # d = 2 > 0: archimedean pair (-1, -1); 3-adic unordered {0, 1}
    by_place = {p.place_label: p for p in asm.places}
    assert by_place["real"].pair == (-1, -1)
    assert by_place["2"].pair == (0, 0)
    assert tuple(sorted(by_place["3"].pair)) == (0, 1)
    assert asm.pair_global == (-1, 0)
    ratios = {Fraction(3) ** k for k in asm.pair_global}
    assert ratios == {Fraction(1), Fraction(1, 3)}
    assert asm.k_pi == -1 and asm.parity == "odd"


def test_assemble_negative_twist(a4):
    asm = assemble_local_exponents(a4, -34)
    by_place = {p.place_label: p for p in asm.places}
    assert by_place["real"].pair == (0, 0)
    assert by_place["17"].pair == (0, 0)  # good squarefree place
    assert asm.pair_global == (0, 1)
    assert asm.k_pi == 1 and asm.parity == "odd"


def test_assemble_rejects_non_members(a4):
    with pytest.raises(DomainError):
        assemble_local_exponents(a4, -25)  # not squarefree, wrong class anyway
    with pytest.raises(DomainError):
        assemble_local_exponents(a4, 3)  # residue 3 mod 36


def test_every_member_has_one_trivial_ratio(a4):
    for tc in enumerate_classes(a4.family, 300):
        asm = assemble_local_exponents(a4, tc.d0)
        kp, ks = asm.pair_global
        assert 0 in (kp, ks)
        assert {abs(kp), abs(ks)} == {0, 1}


def test_duality_consistency_of_three_adic(a4):
    # applying the 3-adic duality k -> 1 - k to a solver assignment gives
    # another valid assignment (same constraints hold for the duals)
    for sol in solve_three_adic(a4):
        dual = tuple(duality_exponent(3, k) for k in sol)
        assert sum(dual) == 2 and set(dual) <= {0, 1}
        assert dual[0] != dual[1]


def test_ordered_three_adic_input(a4):
    ordered = PrymCurveConfig(
        a=a4.a,
        genus=a4.genus,
        dim_b=a4.dim_b,
        bad_primes=a4.bad_primes,
        family=a4.family,
        three_adic=ThreeAdicInput(mode="unequal", product_exponent=2, ordered={2: (1, 0)}),
        kernel_characters=a4.kernel_characters,
        f_tilde=a4.f_tilde,
        trivial_points=a4.trivial_points,
        nontorsion_trivial_points=a4.nontorsion_trivial_points,
    )
    asm = assemble_local_exponents(ordered, 2)
    by_place = {p.place_label: p for p in asm.places}
    assert by_place["3"].pair == (1, 0) and by_place["3"].ordered
    assert asm.pair_global == (0, -1)  # now genuinely ordered (phi, psi)
    # every member of Sigma is in the sixth-power class of 2, so the single
    # ordered entry covers the family
    for tc in enumerate_classes(a4.family, 120):
        assemble_local_exponents(ordered, tc.d0)


def test_rank_bound_per_twist(a4):
    b = rank_bound_per_twist(assemble_local_exponents(a4, 2))
    assert b.pair_abs == (0, 1)
    assert b.typical_dim == 1
    assert b.avg_dim_bound == Fraction(7, 3)
    assert b.typical_density == Fraction(1, 3)
    assert b.parity == "odd"


def test_chabauty_point_bound(a4):
    assert chabauty_point_bound(a4, rank_cap=1) == 5
    assert chabauty_point_bound(a4, rank_cap=0) == 5
    with pytest.raises(DomainError):
        chabauty_point_bound(a4, rank_cap=2)


def test_chabauty_needs_f_tilde_entry(a4):
    odd = PrymCurveConfig(
        a=a4.a,
        genus=5,
        dim_b=2,
        bad_primes=a4.bad_primes,
        family=a4.family,
        three_adic=a4.three_adic,
        kernel_characters=a4.kernel_characters,
        f_tilde=a4.f_tilde,
        trivial_points=1,
        nontorsion_trivial_points=0,
    )
    with pytest.raises(IncompleteConfigError):
        chabauty_point_bound(odd, rank_cap=1)  # r = 4 exceeds the table


def test_family_report_aggregates(a4):
    report = family_report(a4, 500)
    assert report.avg_rank_bound == Fraction(7, 3)
    assert report.rank_le_1_density == Fraction(1, 3)
    assert report.point_bound == 5
    assert len(report.rows) == len(enumerate_classes(a4.family, 500))
    assert all(r.parity == "odd" for r in report.rows)


def test_family_report_empty_family(a4):
    report = family_report(a4, 2)  # Sigma has no members below height 2
    assert report.rows == ()
    assert report.avg_rank_bound == Fraction(7, 3)
    assert report.rank_le_1_density == Fraction(1, 3)
    assert report.point_bound == 5


def test_positive_proportion_rank_bound_product_only(a4):
    general = PrymCurveConfig(
        a=Fraction(9),
        genus=a4.genus,
        dim_b=a4.dim_b,
        bad_primes=a4.bad_primes,
        family=a4.family,
        three_adic=ThreeAdicInput(mode="product-only", product_exponent=2),
        kernel_characters=a4.kernel_characters,
        f_tilde=a4.f_tilde,
        trivial_points=a4.trivial_points,
        nontorsion_trivial_points=a4.nontorsion_trivial_points,
    )
    assert positive_proportion_rank_bound(general) == 2


def test_config_validation(a4):
    with pytest.raises(DomainError):
        PrymCurveConfig(
            a=Fraction(1),
            genus=3,
            dim_b=2,
            bad_primes=frozenset(),
            family=a4.family,
            three_adic=a4.three_adic,
            kernel_characters=a4.kernel_characters,
            f_tilde=a4.f_tilde,
            trivial_points=1,
            nontorsion_trivial_points=0,
        )


def test_prym_report_golden_file(a4):
    import json
    from pathlib import Path

    report = family_report(a4, 100)
    golden = json.loads(
        (Path(__file__).parent / "golden" / "prym_a4_height100.json").read_text()
    )
    assert report.to_json_obj() == golden


def test_members_satisfy_footnote_characterization(a4):
    from selmer3.localfield import Place, is_square

    q2, q3 = Place.finite(2), Place.finite(3)
    for tc in enumerate_classes(a4.family, 400):
        d = tc.d0
        assert not is_square(d, q2) and not is_square(-3 * d, q2)
        assert not is_square(d, q3) and not is_square(-3 * d, q3)
