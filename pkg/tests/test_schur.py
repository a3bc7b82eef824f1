from itertools import product

import pytest
from hypothesis import given, strategies as st

from flagmirror.algebra.poly import PolyRing
from flagmirror.algebra.schur import (
    SchurVector, fits, lr_product_truncated, partitions_in_box, schur_polynomial,
    schur_reduce, schur_reduce_rational,
)


def _ssyt_count(lam, content):
    """Semistandard tableaux of shape lam and given content, by brute force
    over row fillings.  Independent of the bialternant construction."""
    r = len(content)
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    count = 0
    for fill in product(range(r), repeat=len(cells)):
        T = dict(zip(cells, fill))
        if any(fill.count(k) != content[k] for k in range(r)):
            continue
        ok = all(T[(i, j)] <= T[(i, j + 1)] for (i, j) in cells if (i, j + 1) in T)
        ok = ok and all(T[(i, j)] < T[(i + 1, j)] for (i, j) in cells if (i + 1, j) in T)
        count += ok
    return count


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1), (3, 1), (2, 2, 1)])
def test_schur_polynomial_matches_tableau_count(lam):
    names = ("x0", "x1", "x2")
    R = PolyRing(names)
    got = dict(schur_polynomial(lam, R, names).items())
    for exps in product(range(sum(lam) + 1), repeat=3):
        if sum(exps) == sum(lam):
            assert got.get(exps, 0) == _ssyt_count(lam, exps)


def test_box_enumeration():
    assert partitions_in_box(2, 2) == [(), (1,), (2,), (1, 1), (2, 1), (2, 2)]
    assert len(partitions_in_box(3, 3)) == 20


def test_power_sum_reduction():
    # H1^2 + H2^2 = s(2) - s(1,1)
    assert schur_reduce_rational({(2, 0): 1, (0, 2): 1}, 2, 4) == SchurVector(2, 4, {(2,): 1, (1, 1): -1})


def test_square_of_first_class():
    sq = schur_reduce_rational({(2, 0): 1, (1, 1): 2, (0, 2): 1}, 2, 4)
    assert sq == SchurVector(2, 4, {(2,): 1, (1, 1): 1})


def test_truncation_outside_box():
    # p_3 = s(3) - s(2,1) + s(1,1,1); only s(2,1) survives in the 2x2 box
    assert schur_reduce_rational({(3, 0): 1, (0, 3): 1}, 2, 4) == SchurVector(2, 4, {(2, 1): -1})
    assert lr_product_truncated(SchurVector(2, 4, {(2, 2): 1}), SchurVector(2, 4, {(1,): 1})).is_zero()


def test_rejects_non_symmetric():
    with pytest.raises(ValueError):
        schur_reduce_rational({(1, 0): 1}, 2, 4)


def test_box_validation():
    assert fits((2, 2), 2, 4) and not fits((3,), 2, 4)
    with pytest.raises(ValueError):
        SchurVector(2, 4, {(3,): 1})


def _lr_oracle(a, b, nu):
    """Littlewood-Richardson coefficient via the skew tableau count
    c^nu_{a,b} = #{SSYT of shape nu/a, content b, lattice word}."""
    if len(a) > len(nu) or any(x > y for x, y in zip(a, nu)):
        return 0
    cells = [(i, j) for i in range(len(nu)) for j in range(nu[i]) if j >= (a[i] if i < len(a) else 0)]
    if len(cells) != sum(b):
        return 0
    count = 0
    for fill in product(range(len(b)), repeat=len(cells)):
        if any(fill.count(k) != b[k] for k in range(len(b))):
            continue
        T = dict(zip(cells, fill))
        ok = all(T[(i, j)] <= T[(i, j + 1)] for (i, j) in cells if (i, j + 1) in T)
        ok = ok and all(T[(i, j)] < T[(i + 1, j)] for (i, j) in cells if (i + 1, j) in T)
        if not ok:
            continue
        word = [T[c] for c in sorted(cells, key=lambda c: (c[0], -c[1]))]
        seen = [0] * len(b)
        for w in word:
            seen[w] += 1
            if w and seen[w] > seen[w - 1]:
                ok = False
                break
        count += ok
    return count


box = st.sampled_from(partitions_in_box(2, 3))


@given(box, box)
def test_products_match_lr_oracle(a, b):
    got = lr_product_truncated(SchurVector(2, 5, {a: 1}), SchurVector(2, 5, {b: 1}))
    for nu in partitions_in_box(2, 3):
        want = _lr_oracle(a, b, nu) if a and b else (1 if nu == (a or b) else 0)
        assert got.entries.get(nu, 0) == want


def test_coefficients_in_extra_variables():
    R = PolyRing(("H1", "H2", "z"), laurent=("z",))
    H1, H2, z = R.gen("H1"), R.gen("H2"), R.gen("z")
    v = schur_reduce((H1 + z) * (H2 + z), ("H1", "H2"), 4)
    assert v.entries[(1, 1)] == R.one and v.entries[(1,)] == z and v.entries[()] == z * z
