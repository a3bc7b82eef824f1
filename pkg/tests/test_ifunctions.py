import pytest

from flagmirror.algebra.paramrat import ParamRat
from flagmirror.ifunctions import (
    FlagSetup, brown_i, f_ab, grassmann_i, gt_modify, hyp_factor, j_function_projective, main_flag_i,
    oh_split_input, twisted_F,
)
from flagmirror.rings import flag_dimension
from flagmirror.series import CoeffSeries, MultiDeg
from flagmirror.verify import check_divisor_equation, check_weyl_invariance, compare_series

ROOTS = ("H1_1", "H1_2", "z")


def test_hyp_factor_examples():
    assert hyp_factor((2,), (0, 0)) == 1
    assert hyp_factor((2,), (1, 1)) == 1
    assert hyp_factor((2,), (1, 0)) == ParamRat.from_str("-(H1_1 - H1_2 + z)/(H1_1 - H1_2)", ROOTS)


def test_hyp_factor_is_antisymmetric_under_swap():
    a = hyp_factor((2,), (2, 0))
    assert a.permute({"H1_1": "H1_2", "H1_2": "H1_1"}) == hyp_factor((2,), (0, 2))


def _frac_series(coeffs, levels=(2,)):
    return CoeffSeries("abelian", "frac", "x", {MultiDeg((), k): ParamRat.from_str(v, ROOTS)
                                                for k, v in coeffs.items()}, levels, dmax=2)


def test_gt_modify_unit():
    out = gt_modify(_frac_series({(0, 0): "1"}))
    assert out.side == "nonabelian" and out.coeffs == {MultiDeg((), (0,)): 1}


def test_gt_modify_rejects_non_invariant():
    with pytest.raises(ValueError):
        gt_modify(_frac_series({(0, 0): "1", (1, 0): "H1_1", (0, 1): "H1_1"}))


def test_gt_modify_orbit_sum_is_polynomial():
    out = gt_modify(_frac_series({(1, 0): "1", (0, 1): "1"}))
    # -(x + z)/x + (z - x)/x with x = H1_1 - H1_2
    assert out[MultiDeg((), (1,))] == -2


def test_brown_projective_line():
    B = brown_i(FlagSetup((1,), (0, 0), equivariant=True), dmax=2)
    names = ("nu1", "nu2", "H1_1", "z")
    assert B[MultiDeg((), (0,))] == 1
    for k in (1, 2):
        den = ParamRat.const(1, names)
        for c in range(1, k + 1):
            for j in (1, 2):
                den = den * ParamRat.from_str(f"H1_1 - nu{j} + {c}*z", names)
        assert B[MultiDeg((), (k,))] == 1 / den


def test_brown_non_equivariant_limit():
    B = brown_i(FlagSetup((1,), (0, 0, 0)), dmax=2, equivariant=False)
    assert B[MultiDeg((), (1,))] == ParamRat.from_str("1/(H1_1 + z)^3", ("H1_1", "z"))


def test_main_flag_projective_closed_form():
    F = main_flag_i(FlagSetup((1,), (0, 0, 0)), dmax=3, reduce=False)
    R = F.meta["poly_ring"]
    H, z = R.gen("H1_1"), R.gen("z")
    for k in range(4):
        den = R.one
        for c in range(1, k + 1):
            den = den * (H + z * c) ** 3
        assert (F[MultiDeg((), (k,))] * den).truncate() == R.one


def test_projective_line_frozen():
    F = grassmann_i(FlagSetup((1,), (0, 0)), dmax=2)
    assert {d.label(): {k: v.to_str() for k, v in c.items()} for d, c in F.coeffs.items()} == {
        "B()K(0)": {"s()": "1"},
        "B()K(1)": {"s()": "z^-2", "s(1)": "-2*z^-3"},
        "B()K(2)": {"s()": "1/4*z^-4", "s(1)": "-3/4*z^-5"},
    }


@pytest.mark.parametrize("r,n", [(1, 2), (2, 3)])
def test_flag_form_matches_grassmann_form(r, n):
    S = FlagSetup((r,), (0,) * n)
    assert compare_series(main_flag_i(S, dmax=2), grassmann_i(S, dmax=2)) == []


def test_oh_split_input_trivial_bundle():
    J = j_function_projective(1, 2)
    fam = oh_split_input((0, 0), J, (1,), 1, 2)
    for d in range(3):
        assert fam.coeffs[(d,)] == J[d].convert(fam.ring)


def test_oh_split_input_negative_line():
    J = j_function_projective(1, 2)
    fam = oh_split_input((0, -1), J, (1,), 1, 2)
    R = fam.ring
    lam, HB, z = R.gen("lam1_1"), R.gen("HB"), R.gen("z")
    assert fam.coeffs[(1,)] == (lam - HB) * J[1].convert(R)
    assert fam.coeffs[(2,)] == (lam - HB) * (lam - HB - z) * J[2].convert(R)
    assert fam.lambda_degree() == 2
    with pytest.raises(ValueError):
        oh_split_input((1,), J, (1,), 1, 2)


def test_setup_validation():
    with pytest.raises(ValueError):
        FlagSetup((1,), (0, 1))
    with pytest.raises(ValueError):
        FlagSetup((1,), (0, -1), base_dim=1, equivariant=True)
    S = FlagSetup((1, 2), (0, 0, 0), N=4)
    assert FlagSetup.from_json(S.to_json()) == S and S.rank_Q == 1


@pytest.mark.parametrize("rs,n,N", [((1,), 2, 3), ((2,), 3, 4)])
def test_twisted_at_zero_matches_main(rs, n, N):
    T = twisted_F(FlagSetup(rs, (0,) * n, N=N), dmax=2, reduce=False)
    M = main_flag_i(FlagSetup(rs, (0,) * n), dmax=2, reduce=False)
    R = M.meta["poly_ring"]
    dim = flag_dimension(n, rs)

    def low(p):
        return sum((p.weighted_part(k) for k in range(dim + 1)), R.zero)
    for d, v in M.coeffs.items():
        assert low(T[d].subs({"mu": 0}, T.meta["poly_ring"]).convert(R)) == low(v)


def test_abelian_twisted_checks():
    S = FlagSetup((2,), (0, -1, 0), N=4, base_dim=1)
    fam = oh_split_input((0, -1, 0), j_function_projective(1, 1), (2,), 1, 1)
    F = f_ab(S, fam, dmax=1)
    assert F[MultiDeg((0,), (0, 0))].convert(F.meta["poly_ring"]) == F.meta["poly_ring"].one
    assert check_weyl_invariance(F)["passed"]
    assert check_divisor_equation(F)["passed"]
