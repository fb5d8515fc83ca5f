import random

import pytest

from qmod import (
    EliminationError,
    UnconstructibleError,
    build_H,
    build_psi,
    catalog_form,
    coefficient,
    echelonize,
    first_difference,
    make_series,
    mul,
    spanning_family,
    truncate,
)
from qmod.spans import psi36_generators


def test_echelonize_two_by_two():
    fam = [make_series({-1: 1, 1: 1}, 3), make_series({1: 1}, 3)]
    basis = echelonize(fam)
    assert basis.pivots() == (-1, 1)
    # the q term of the first row is cleared by the second
    assert basis.rows[0].items() == [(-1, 1)]
    assert basis.rows[1].items() == [(1, 1)]


def test_echelonize_is_idempotent():
    fam = [make_series({-2: 1, 0: 4, 1: -1}, 5),
           make_series({0: 1, 3: 2}, 5),
           make_series({-2: 1, 3: 7}, 5)]
    basis = echelonize(fam)
    again = echelonize(list(basis.rows))
    assert again.rows == basis.rows


def test_echelonize_is_order_independent():
    rng = random.Random(3)
    fam = [make_series({-3: 1, 0: 2, 2: 5}, 6),
           make_series({-1: -1, 1: 4}, 6),
           make_series({0: 1, 2: -2}, 6),
           make_series({2: 1, 5: 9}, 6)]
    base = echelonize(fam).rows
    for _ in range(6):
        shuffled = fam[:]
        rng.shuffle(shuffled)
        assert echelonize(shuffled).rows == base


def test_echelonize_duplicate_pivot_both_orders():
    a = make_series({1: 1, 2: 1, 3: 4}, 5)
    b = make_series({1: 1, 2: 2, 3: 1}, 5)
    assert echelonize([a, b]).rows == echelonize([b, a]).rows
    assert echelonize([a, b]).pivots() == (1, 2)


def test_echelonize_normalizes_negative_pivots():
    basis = echelonize([make_series({2: -1, 3: 5}, 6)])
    assert basis.rows[0].items() == [(2, 1), (3, -5)]


def test_echelonize_truncates_to_common_precision():
    fam = [make_series({0: 1, 4: 1}, 9), make_series({1: 1}, 5)]
    rows = echelonize(fam).rows
    assert all(r.prec == 5 for r in rows)


def test_echelonize_rejects_non_unit_pivot():
    with pytest.raises(EliminationError) as exc:
        echelonize([make_series({1: 2}, 4)])
    assert exc.value.exponent == 1
    assert exc.value.coeff == 2


def test_echelonize_rejects_non_unit_residual():
    fam = [make_series({1: 1, 2: 1}, 4), make_series({1: 1, 2: 3}, 4)]
    with pytest.raises(EliminationError) as exc:
        echelonize(fam)
    assert exc.value.exponent == 2
    assert exc.value.coeff == 2


def test_echelonize_drops_dependent_rows():
    f = make_series({1: 1, 2: 1}, 4)
    basis = echelonize([f, f, make_series({1: 1, 2: 1}, 4)])
    assert len(basis.rows) == 1


def test_row_with_missing_pivot_raises():
    basis = echelonize([make_series({0: 1}, 3)])
    with pytest.raises(UnconstructibleError):
        basis.row_with_pivot(-5)


def test_spanning_family_27_leading_exponents():
    fam = spanning_family(27, 3, 10)
    assert sorted(f.order for f in fam) == [-3, -2, -1, 1]
    assert all(f.prec >= 10 for f in fam)
    # leading coefficients are all units
    assert all(coefficient(f, f.order) == 1 for f in fam)


def test_spanning_family_36_leading_exponents():
    fam = spanning_family(36, 1, 10)
    assert sorted(f.order for f in fam) == [-1, 1]
    fam = spanning_family(36, 9, 10)
    assert sorted(f.order for f in fam) == [-9, -7, -5, -3, -1, 1]


def test_spanning_family_validation():
    with pytest.raises(ValueError):
        spanning_family(27, 0, 10)
    with pytest.raises(ValueError):
        spanning_family(27, 2, 1)
    with pytest.raises(ValueError):
        spanning_family(36, 2, 2)
    with pytest.raises(ValueError):
        spanning_family(32, 2, 10)


def test_build_H_27_examples():
    assert build_H(27, -1, 5).items() == [(1, 1), (4, -2)]
    assert build_H(27, 1, 3).items() == [(-1, 1), (2, -1)]
    assert build_H(27, 2, 5).items() == [(-2, 1), (4, -5)]


def test_build_H_reproduces_catalog_forms():
    assert first_difference(build_H(27, -1, 40), catalog_form("g27", 40)) is None
    assert first_difference(build_H(27, 1, 40), catalog_form("G27", 40)) is None
    assert first_difference(build_H(36, -1, 40), catalog_form("g36", 40)) is None
    assert first_difference(build_H(36, 1, 40), catalog_form("G36", 40)) is None


@pytest.mark.parametrize("m", [-1, 1, 2, 3, 4, 5, 7, 10])
def test_build_H_27_normal_form(m):
    h = build_H(27, m, 12)
    assert h.order == -m
    assert coefficient(h, h.order) == 1
    # zeros strictly between the pole and q^2
    for e in range(-m + 1, 2):
        assert coefficient(h, e) == 0
    # support stays in the residue class of -m mod 3
    assert all(e % 3 == (-m) % 3 for e in h.support())


@pytest.mark.parametrize("m", [-1, 1, 3, 5, 7, 9])
def test_build_H_36_normal_form(m):
    h = build_H(36, m, 12)
    assert h.order == -m
    assert coefficient(h, h.order) == 1
    for e in range(-m + 1, 3):
        assert coefficient(h, e) == 0
    assert all(e % 6 == (-m) % 6 for e in h.support())


def test_build_H_constant_term_vanishes_for_m3():
    # the m = 3 row lives in the class 0 mod 3, so a constant term is
    # possible a priori; elimination must remove it
    h = build_H(27, 3, 10)
    assert coefficient(h, 0) == 0
    assert all(e % 3 == 0 for e in h.support())


def test_build_H_unique_under_family_changes():
    # deeper families and different precisions give the same series
    a = build_H(27, 2, 9)
    b = truncate(build_H(27, 2, 20), 9)
    assert a == b
    c = build_H(27, 2, 9)
    assert a == c
    deep = echelonize(spanning_family(27, 8, 9)).row_with_pivot(-2)
    assert first_difference(a, deep) is None


def test_build_H_rejects_bad_pole():
    with pytest.raises(UnconstructibleError):
        build_H(27, 0, 5)
    with pytest.raises(UnconstructibleError):
        build_H(27, -2, 5)
    with pytest.raises(UnconstructibleError):
        build_H(36, 2, 6)
    with pytest.raises(ValueError):
        build_H(32, 1, 5)


def test_build_psi_27_p2_is_L1():
    psi = build_psi(27, 2, 4)
    assert psi.items() == [(-2, 1), (1, 1)]
    assert first_difference(build_psi(27, 2, 30), catalog_form("L1", 30)) is None


def test_build_psi_27_p5():
    psi = build_psi(27, 5, 4)
    assert psi.order == -5
    assert coefficient(psi, 0) == 0
    assert all(e % 3 == 1 for e in psi.support())
    # q-coefficient is -C27(5) = 1
    assert coefficient(psi, 1) == 1


def test_build_psi_27_p11_normal_form():
    psi = build_psi(27, 11, 4)
    assert psi.order == -11
    # every intermediate pole the monomial family can reach is cleared
    for e in (-8, -5, -2, 0):
        assert coefficient(psi, e) == 0
    assert all(e % 3 == 1 for e in psi.support())


def test_build_psi_36_p5():
    psi = build_psi(36, 5, 7)
    psi2, psi3 = psi36_generators(12)
    direct = mul(psi2, psi3)
    assert first_difference(psi, direct) is None
    # q-coefficient is -C36(5) = 3
    assert coefficient(psi, 1) == 3
    assert all(e % 6 == 1 for e in psi.support())


def test_psi36_generators_shapes():
    psi2, psi3 = psi36_generators(8)
    assert psi2.prec >= 8 and psi3.prec >= 8
    assert psi2.items()[:2] == [(-2, 1), (4, 1)]
    assert psi3.items()[:2] == [(-3, 1), (3, 2)]
    assert all(e % 6 == 4 for e in psi2.support())
    assert all(e % 6 == 3 for e in psi3.support())


def test_build_psi_rejects_bad_parameters():
    with pytest.raises(UnconstructibleError):
        build_psi(27, 7, 5)   # split prime
    with pytest.raises(UnconstructibleError):
        build_psi(27, 9, 5)   # not prime
    with pytest.raises(UnconstructibleError):
        build_psi(36, 7, 5)   # 7 = 1 mod 6
    with pytest.raises(ValueError):
        build_psi(64, 3, 5)
