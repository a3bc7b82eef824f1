import pytest
import sympy as sp

from flagmirror.algebra.rational import Rational
from flagmirror.operators import (
    a_expand, chern_character, qrr_apply, qrr_constants, qrr_delta_exponent, qrr_ring, s_coefficient,
    s_constants, twist_character, twist_identity_check,
)
from flagmirror.series import CoeffSeries, MultiDeg


def to_sympy(p):
    return sp.expand(sp.sympify(p.to_str().replace("^", "**")))


def test_bernoulli_values():
    assert [qrr_constants(m) for m in range(7)] == [1, Rational(-1, 2), Rational(1, 6), 0, Rational(-1, 30), 0,
                                                  Rational(1, 42)]
    for m in range(2, 12):
        assert qrr_constants(m) == Rational(int(sp.bernoulli(m).p), int(sp.bernoulli(m).q))


def test_s_coefficients():
    assert [s_coefficient(k) for k in range(5)] == [0, -1, 1, -2, 6]


def test_s_constants_shifted_expansion():
    ring = qrr_ring(["x"], 4)
    x, u = ring.gen("x"), ring.gen("u")
    # s_1(lam + x) = -1/(lam + x) = -u / (1 + x u)
    got = s_constants(1, ring, x)
    assert got == (-u + x * u * u - x * x * u ** 3 + x ** 3 * u ** 4).truncate()


def test_chern_character_line_and_sum():
    ring = qrr_ring(["c1", "c2"], 3)
    c1, c2 = ring.gen("c1"), ring.gen("c2")
    ch = chern_character([ring.one, c1, c2], 2, ring, 3)
    assert ch[0] == ring.const(2) and ch[1] == c1
    assert ch[2] == (c1 * c1 - c2 * 2) * Rational(1, 2)
    assert ch[3] == (c1 ** 3 - c1 * c2 * 3) * Rational(1, 6)


def test_twist_of_trivial_line():
    ring = qrr_ring(["x"], 3)
    x = ring.gen("x")
    ch = twist_character([ring.one, ring.zero, ring.zero], x, ring)
    assert ch == [ring.one, x, x * x * Rational(1, 2)]


@pytest.mark.parametrize("rank", [1, 2])
def test_a_operator_against_sympy_series(rank):
    order = 4
    ring = qrr_ring(["y", "zdQ"], order)
    op = a_expand(rank, ring)
    u, y, z, D = sp.symbols("u y z zdQ")
    expo = rank / z * ((1 / u + y + z / 2) * sp.log(1 + y * u) - y) + D / z * sp.log(1 + y * u)
    want = sp.expand(sp.series(expo, u, 0, order + 1).removeO())
    assert sp.simplify(to_sympy(op.exponent) - want) == 0


def test_trivial_bundle_delta_has_no_class_dependence():
    ring = qrr_ring(["H"], 4)
    ch = chern_character([ring.one], 1, ring, 5)
    G = qrr_delta_exponent(ch, ring).exponent
    u, z = sp.symbols("u z")
    # rank-one trivial E: sum_m s_{m-1} B_m/m! (-z)^{m-1}
    want = sum(sp.factorial(m - 2) * (-1) ** (m - 1) * u ** (m - 1) * sp.bernoulli(m) / sp.factorial(m)
               * (-z) ** (m - 1) for m in range(2, 6))
    want = want.subs(sp.bernoulli(1), 0)
    assert sp.simplify(to_sympy(G) - sp.expand(want)) == 0


def test_delta_is_additive():
    ring = qrr_ring(["a", "b"], 4)
    a, b = ring.gen("a"), ring.gen("b")
    ch_a = twist_character([ring.one] + [ring.zero] * 5, a, ring)
    ch_b = twist_character([ring.one] + [ring.zero] * 5, b, ring)
    both = [x + y for x, y in zip(ch_a, ch_b)]
    G = lambda ch: qrr_delta_exponent(ch, ring).exponent
    assert G(both) == G(ch_a) + G(ch_b)


def test_qrr_apply_rescales_novikov():
    ring = qrr_ring(["y"], 3)
    op = a_expand(0, ring)
    assert not op.exponent
    F = CoeffSeries("nonabelian", "poly", "x", {MultiDeg((), (1,)): ring.one}, (1,), 2,
                    meta={"poly_ring": ring})
    out = qrr_apply(op, F, pairing=lambda d: 2 * d.total)
    assert out[MultiDeg((), (1,))] == ring.gen("u") ** 2
    with pytest.raises(ValueError):
        qrr_apply(op, F, pairing=lambda d: Rational(1, 2))


@pytest.mark.parametrize("rank_q", [1, 2])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_class_factor_identity(rank_q, k):
    rep = twist_identity_check(rank_q, k, order=5)
    assert rep["passed"], rep["difference"]


def test_literal_ratio_reading_fails():
    assert not twist_identity_check(1, 0, order=4)["literal_ratio_matches"]
