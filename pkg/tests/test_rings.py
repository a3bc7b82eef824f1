from itertools import product

import pytest

from flagmirror.algebra.paramrat import ParamRat
from flagmirror.algebra.poly import PolyRing
from flagmirror.algebra.rational import Rational
from flagmirror.rings import (
    build_ring, check_associativity, chern_product_eval, cup, gkm_data, integrate, restrict,
    root_name, split_chern,
)


@pytest.fixture(scope="module")
def gr24():
    return build_ring("grassmann", 2, 4)


def test_grassmann_basis(gr24):
    assert gr24.labels == ("s()", "s(1)", "s(2)", "s(1,1)", "s(2,1)", "s(2,2)")
    assert gr24.degrees == (0, 1, 2, 2, 3, 4)


def test_cup_examples(gr24):
    s1 = gr24.basis_class("s(1)")
    assert cup(gr24, s1, s1) == gr24.cls({"s(2)": 1, "s(1,1)": 1})
    assert cup(gr24, gr24.unit_class(), s1) == s1
    assert cup(gr24, gr24.basis_class("s(2,2)"), s1) == gr24.cls({})


def test_cup_rejects_foreign_class(gr24):
    other = build_ring("projective", 2)
    with pytest.raises(ValueError):
        cup(gr24, gr24.unit_class(), other.unit_class())


def test_integrate_top(gr24):
    assert integrate(gr24, gr24.basis_class("s(2,2)")) == 1
    assert integrate(gr24, gr24.basis_class("s(2,1)")) == 0


@pytest.mark.parametrize("kind,args", [("grassmann", (2, 4)), ("grassmann", (2, 5)), ("projective", (3,)),
                                       ("projective_bundle", (1, (0, -1)))])
def test_associativity(kind, args):
    assert check_associativity(build_ring(kind, *args)) == []


def test_hirzebruch_relations():
    R = build_ring("projective_bundle", 1, (0, -1))
    H = R.basis_class("H1_1")
    HB = R.basis_class("HB")
    assert R.labels == ("1", "H1_1", "HB", "HB*H1_1")
    assert cup(R, HB, HB) == R.cls({})
    # c(O + O(-HB)) = 1 - HB, so H^2 = HB*H
    assert cup(R, H, H) == R.cls({"HB*H1_1": 1})


def test_chern_product_eval_examples():
    R = PolyRing(("H", "c1", "c2", "z"), laurent=("z",))
    H, c1, c2, z = (R.gen(n) for n in ("H", "c1", "c2", "z"))
    assert chern_product_eval([R.one], H, z) == R.one
    assert chern_product_eval([R.one, c1], H, z * 3) == H + c1 + z * 3
    assert chern_product_eval([R.one, c1, c2], R.zero, R.zero) == c2
    with pytest.raises(ValueError):
        chern_product_eval([R.zero, c1], H, z)


def test_split_chern():
    R = PolyRing(("HB",), {"HB": 1}, {"HB": 2})
    c = split_chern((1, 2), R)
    HB = R.gen("HB")
    assert c == [R.one, HB * 3, HB * HB * 2]


@pytest.mark.parametrize("N,rs,points,dim", [(2, (1,), 2, 1), (3, (1,), 3, 2), (3, (1, 2), 6, 3), (4, (2,), 6, 4)])
def test_gkm_counts(N, rs, points, dim):
    G = gkm_data(N, rs, "Fl")
    assert len(G.points) == points and G.dim == dim
    for p in G.points:
        assert len(G.tangent[p]) == dim
        prod = ParamRat.const(1, G.params)
        for e in G.edges[p]:
            prod = prod * e.weight
            back = [f for f in G.edges[e.target] if f.target == p]
            assert len(back) == 1 and back[0].weight == -e.weight and e.rho == -e.weight
        assert prod == G.euler[p]


def test_gkm_p1_edge():
    G = gkm_data(2, (1,), "Fl")
    (e,) = G.edges[((1,),)]
    assert e.weight == ParamRat.from_str("nu1 - nu2", G.params) and e.d == (1,)


def test_toric_flag_counts():
    R = build_ring("gkm_toric_flag", 3, (1, 2))
    assert len(R.gkm.points) == 18 and R.gkm.dim == 5
    for p in R.gkm.points:
        assert len(R.gkm.tangent[p]) == 5 and not R.gkm.euler[p].is_zero()


def test_invalid_levels():
    with pytest.raises(ValueError):
        gkm_data(3, (2, 1))
    with pytest.raises(ValueError):
        build_ring("grassmann", 3, 3)


def _restricted_class(G, poly_in_roots):
    return {p: restrict(poly_in_roots, G, p) for p in G.points}


def test_localization_p1():
    R = build_ring("gkm_flag", 2, (1,))
    Rp = PolyRing((root_name(1, 1),))
    H = _restricted_class(R.gkm, Rp.gen(root_name(1, 1)))
    assert integrate(R, R.cls(H), expect_polynomial=True) == 1
    assert integrate(R, R.unit_class(), expect_polynomial=True) == 0


def test_localization_vanishes_below_dimension():
    R = build_ring("gkm_flag", 3, (1, 2))
    Rp = PolyRing((root_name(1, 1), root_name(2, 1), root_name(2, 2)))
    x = Rp.gen(root_name(1, 1))
    assert integrate(R, R.cls(_restricted_class(R.gkm, x * x)), expect_polynomial=True) == 0


def test_table_and_localization_agree(gr24):
    from flagmirror.algebra.schur import schur_polynomial
    R = build_ring("gkm_flag", 4, (2,))
    roots = (root_name(1, 1), root_name(1, 2))
    Rp = PolyRing(roots)
    reps = {lab: schur_polynomial(tuple(int(x) for x in lab[2:-1].split(",") if x), Rp, roots)
            for lab in gr24.labels}
    for a, b in product(gr24.labels, repeat=2):
        table = integrate(gr24, cup(gr24, gr24.basis_class(a), gr24.basis_class(b)))
        loc = integrate(R, R.cls(_restricted_class(R.gkm, reps[a] * reps[b])), expect_polynomial=True)
        # above the dimension the equivariant integral is a positive-degree
        # polynomial in nu, so only its value at nu = 0 is comparable
        assert loc.subs({n: 0 for n in R.gkm.params}) == table


def test_restrict_examples():
    G = gkm_data(3, (1, 2))
    alpha = ((2,), (2, 3))
    Rp = PolyRing((root_name(1, 1), root_name(2, 1), root_name(2, 2)))
    assert restrict(Rp.gen(root_name(1, 1)), G, alpha) == ParamRat.var("nu2", G.params)
    assert restrict(Rational(1), G, alpha) == 1
    e1 = Rp.gen(root_name(2, 1)) + Rp.gen(root_name(2, 2))
    assert restrict(e1, G, alpha) == ParamRat.from_str("nu2 + nu3", G.params)


def test_restrict_rejects_vanishing_denominator():
    G = gkm_data(3, (1, 2))
    bad = ParamRat.from_str("1/(H2_1 - H1_1)")
    with pytest.raises(ZeroDivisionError):
        restrict(bad, G, ((2,), (2, 3)))
