import random
from fractions import Fraction

import pytest

from selmer3.cubicforms import BinaryCubicForm, form_to_ring, projective_roots_mod_p
from selmer3.errors import DomainError
from selmer3.localclass import classify_integral, h1_dims, unramified_cubic_form
from selmer3.localfield import Place, least_nonresidue
from selmer3.oracle import (
    CubicExtModel,
    OrbitTable,
    TruncatedRing,
    algebra_class_of_form,
    count_cubic_extensions,
    enumerate_orbits,
    h1_counts_from_extensions,
    orders_of_index,
    sl2_orbit_count_mod_p,
    verify_subring_bijection,
)


def test_extension_model_arithmetic():
    m = CubicExtModel.eisenstein(5, 1)
    w = m.w
    assert (w * w * w).c == (Fraction(5), 0, 0)
    assert m.val(w) == 1 and m.val(m.embed_int(5)) == 3
    assert m.val(m.div_uniformizer(w)) == 0
    e = CubicExtModel.unramified(5)
    assert e.val(e.embed_int(5)) == 1
    assert e.val(e.w) == 0
    assert len(e.residues()) == 125


def test_algebra_class_of_form():
    assert algebra_class_of_form(BinaryCubicForm(0, 1, 1, 0), 5) == "split"
    assert algebra_class_of_form(BinaryCubicForm(1, 0, 0, -5), 5) == "ram-u1"
    assert algebra_class_of_form(unramified_cubic_form(5), 5) == "unram"
    assert algebra_class_of_form(unramified_cubic_form(7), 7) == "unram"
    # x^3 - 8 is reducible over Q_5 (2 is a cube)
    assert algebra_class_of_form(BinaryCubicForm(1, 0, 0, -8), 5) == "split"
    # x^3 - 2 over Q_7: 2 is a cube mod 7 (2 = 4^3 mod 7 is false; 4^3=64=1;
    # cubes mod 7 are {1, 6}) so x^3 - 2 has no root and stays unramified-inert
    assert algebra_class_of_form(BinaryCubicForm(1, 0, 0, -2), 7) == "unram"
    # Eisenstein with the other unit class at p = 7
    assert algebra_class_of_form(BinaryCubicForm(1, 0, 0, -7 * 2), 7) == "ram-u2"


def test_count_cubic_extensions_reference_values():
    # zeta3 in Q_7: unramified + three Eisenstein classes, all square disc
    assert count_cubic_extensions(7, 1) == 4
    assert count_cubic_extensions(7, 3) == 0  # nonsquare class
    assert count_cubic_extensions(7, 7) == 0  # odd valuation class
    # zeta3 not in Q_5: split by square class
    assert count_cubic_extensions(5, 1) == 1
    assert count_cubic_extensions(5, -3) == 1
    assert count_cubic_extensions(5, 5) == 0
    assert count_cubic_extensions(13, 1) == 4


def test_h1_counts_match_dimension_table():
    # the acceptance-1 identity 3^dim = 1 + 2 * (number of extensions)
    for p in (5, 7, 13):
        nr = least_nonresidue(p)
        for d in (1, nr, -3, -3 * nr, p, p * nr, p * p, p * p * nr):
            dim_total, dim_un = h1_dims(Place.finite(p), d)
            total, unram = h1_counts_from_extensions(p, d)
            assert total == 3**dim_total
            assert unram == 3**dim_un


def test_orders_of_index_counts():
    # unramified maximal order: no index-p order (its form has no root)
    for p in (5, 7):
        maximal = form_to_ring(unramified_cubic_form(p))
        assert orders_of_index(maximal, p, 1) == []
        assert len(orders_of_index(maximal, p, 2)) >= 1
    # Eisenstein maximal order: exactly one index-p order (single root x^3)
    eis = form_to_ring(BinaryCubicForm(1, 0, 0, -5))
    assert len(orders_of_index(eis, 5, 1)) == 1
    # two projective roots (x^2(x + y) mod 5) give two index-p orders
    double = form_to_ring(BinaryCubicForm(1, 1, 0, -25))
    assert len(projective_roots_mod_p(BinaryCubicForm(1, 1, 0, -25), 5)) == 2
    assert len(orders_of_index(double, 5, 1)) == 2


def test_verify_subring_bijection_fixed_rings():
    assert verify_subring_bijection(form_to_ring(BinaryCubicForm(0, 1, 1, 0)), 5)
    assert verify_subring_bijection(form_to_ring(BinaryCubicForm(1, 0, 1, 1)), 5)
    assert verify_subring_bijection(form_to_ring(BinaryCubicForm(1, 0, 0, 5)), 5)


def test_verify_subring_bijection_random():
    rng = random.Random(5)
    for p in (5, 7, 11):
        for _ in range(30):
            f = BinaryCubicForm(*(rng.randint(-20, 20) for _ in range(4)))
            if f.discriminant() == 0:
                continue
            assert verify_subring_bijection(form_to_ring(f), p)


def _summaries_match(table: OrbitTable, p: int, d0) -> bool:
    theory = {}
    for c in classify_integral(p, d0):
        key = "unram" if c.kind.startswith("unram") else c.kind
        n, n_int = theory.get(key, (0, 0))
        theory[key] = (n + 1, n_int + (1 if c.integral else 0))
    return table.summary() == theory


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("disc_val", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("unit_class", ["square", "nonsquare"])
def test_enumerate_orbits_agrees_with_classification(p, disc_val, unit_class):
    table = enumerate_orbits(p, disc_val=disc_val, unit_class=unit_class)
    assert _summaries_match(table, p, table.d0)
    assert sum(r.orbit_count for r in table.rows) == table.h1_count
    dim_total, dim_un = h1_dims(Place.finite(p), table.d0)
    assert table.h1_count == 3**dim_total
    assert table.h1_unramified_count == 3**dim_un


def test_enumerate_orbits_key_strata():
    # v(d) = 2, d square: the nontrivial unramified classes are non-integral
    t = enumerate_orbits(5, disc_val=2, unit_class="square")
    unram = [r for r in t.rows if r.algebra == "unram"]
    assert len(unram) == 1 and not unram[0].integral and unram[0].orders_found == 0
    # v(d) = 1: single reducible class
    t = enumerate_orbits(5, disc_val=1, unit_class="square")
    assert [r.algebra for r in t.rows] == ["split"]
    # v(d) = 4: everything integral, with witnesses
    t = enumerate_orbits(7, disc_val=4, unit_class="square")
    assert all(r.integral for r in t.rows)
    assert all(r.witness is not None for r in t.rows)


def test_enumerate_orbits_precision_stability():
    for p, v, uc in ((5, 2, "square"), (7, 4, "square"), (5, 3, "nonsquare")):
        base = enumerate_orbits(p, disc_val=v, unit_class=uc)
        bumped = enumerate_orbits(p, k=base.k + 1, disc_val=v, unit_class=uc)
        assert [r.to_json_obj() for r in base.rows] == [r.to_json_obj() for r in bumped.rows]


def test_enumerate_orbits_determinism():
    a = enumerate_orbits(7, disc_val=2, unit_class="square").to_json_obj()
    b = enumerate_orbits(7, disc_val=2, unit_class="square").to_json_obj()
    assert a == b


def test_enumerate_orbits_rejects_small_precision():
    with pytest.raises(DomainError):
        enumerate_orbits(5, k=3, disc_val=4)
    with pytest.raises(DomainError):
        enumerate_orbits(3, disc_val=0)


def test_truncated_ring_sqrt():
    tr = TruncatedRing(5, 6)
    r = tr.unit_sqrt(Fraction(9, 4))
    assert r is not None and r * r % 5**6 == tr.reduce_unit(Fraction(9, 4))
    assert tr.unit_sqrt(2) is None  # 2 is not a square mod 5
    with pytest.raises(DomainError):
        TruncatedRing(4, 2)


def test_sl2_orbit_scan_mod_p():
    # over F_p the orbit count on fixed nonzero discriminant is 3 for a
    # square residue and 1 for a nonsquare (size of the Frobenius-fixed
    # stabilizer group)
    for p in (5, 7):
        assert sl2_orbit_count_mod_p(p, 1) == 3
        assert sl2_orbit_count_mod_p(p, least_nonresidue(p)) == 1


def test_orbit_table_golden_file():
    import json
    from pathlib import Path

    table = enumerate_orbits(5, disc_val=2, unit_class="square")
    golden = json.loads(
        (Path(__file__).parent / "golden" / "orbit_table_p5_v2_square.json").read_text()
    )
    assert table.to_json_obj() == golden


def test_orbit_split_consistent_with_algebra_class():
    import random as _random

    from selmer3.cubicforms import orbit_split

    rng = _random.Random(42)
    for _ in range(60):
        p = rng.choice([5, 7])
        f = BinaryCubicForm(*(rng.randint(-9, 9) for _ in range(4)))
        if f.discriminant() == 0:
            continue
        split = len(orbit_split(f, p=p)) == 1
        assert split == (algebra_class_of_form(f, p) == "split")


def test_form_space_scan_low_valuation():
    from selmer3.oracle import scan_forms_low_valuation

    scan = scan_forms_low_valuation(5)
    # v(disc) = 1 forms all reducible; Eisenstein dichotomy on triple roots
    assert scan.v1_forms == 60000 and scan.v1_all_have_simple_root
    assert scan.triple_forms == 15000 and scan.eisenstein_forms == 12000
    assert scan.dichotomy_holds


def test_norm_kernel_route_matches_dimension_table():
    from selmer3.oracle import h1_counts_from_norm_kernel

    # includes p = 2, which the extension-count route does not cover
    for p in (2, 5, 7, 13):
        place = Place.finite(p)
        units = [1, 3, 5, 7, -1, -3, -5, -7] if p == 2 else [1, least_nonresidue(p), -3]
        strata = [u * p**v for u in units for v in (0, 1, 2, 3)]
        for d in strata:
            dim_total, dim_un = h1_dims(place, d)
            assert h1_counts_from_norm_kernel(p, d) == (3**dim_total, 3**dim_un), (p, d)


def test_norm_kernel_agrees_with_extension_counts():
    from selmer3.oracle import h1_counts_from_norm_kernel

    for p in (5, 7, 13):
        nr = least_nonresidue(p)
        for d in (1, nr, -3, -3 * nr, p, p * nr, p * p, p**3 * nr):
            assert h1_counts_from_norm_kernel(p, d) == h1_counts_from_extensions(p, d)
