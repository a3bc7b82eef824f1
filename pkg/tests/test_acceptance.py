"""Acceptance gate A1-A9.

Each test prints one ``A#: PASS|FAIL (seconds)`` line; a criterion also
fails when it overruns its time budget.  Run alone with
``pytest tests/test_acceptance.py -v``.
"""
import time
from contextlib import contextmanager

import pytest

from flagmirror.algebra.paramrat import ParamRat
from flagmirror.ifunctions import (
    FlagSetup, brown_i, f_ab, grassmann_i, gt_modify, j_function_projective, main_flag_i,
    oh_split_input, reduce_series, twisted_F,
)
from flagmirror.operators import twist_identity_check
from flagmirror.rings import build_ring, gkm_data
from flagmirror.series import MultiDeg, to_points
from flagmirror.verify import (
    QuantumRing, check_divisor_equation, check_pole_locations_C1, check_recursion_C2,
    check_weyl_invariance, compare_series, compare_tables, corrupt_t_data, extract_recursion_table,
    qde_small_j, tangent_derivative, toric_i_hirzebruch,
)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(name, budget):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed <= budget
            with capsys.disabled():
                status = "PASS" if ok and within else "FAIL"
                note = "" if within else f", over the {budget:g} s budget"
                print(f"\n{name}: {status} ({elapsed:.2f} s{note})")
        assert within, f"{name} took {elapsed:.1f} s (budget {budget} s)"
    return run


def test_A1_projective_spaces(criterion):
    with criterion("A1", 60):
        for n in (1, 2, 3):
            I = grassmann_i(FlagSetup((1,), (0,) * (n + 1)), dmax=3)
            J = qde_small_j(QuantumRing.grassmannian(1, n + 1), 3, 10)
            assert compare_series(J, I, zwin=(-10, 0)) == [], f"P^{n}"


def _max_z_exponent(vec):
    return max(e[p.ring.index["z"]] for p in vec.values() for e, _ in p.items())


def test_A2_grassmannian(criterion):
    with criterion("A2", 300):
        I = grassmann_i(FlagSetup((2,), (0,) * 4), dmax=2)
        assert {k: v.to_str() for k, v in I[MultiDeg((), (0,))].items()} == {"s()": "1"}
        for d, v in I.coeffs.items():
            if d.total:
                assert _max_z_exponent(v) <= -2, d
        J = qde_small_j(QuantumRing.grassmannian(2, 4), 2, 8)
        assert compare_series(J, I, zwin=(-8, 0)) == []


def test_A3_class_factor_identity(criterion):
    with criterion("A3", 60):
        for rank_q in (1, 2):
            for k in range(4):
                rep = twist_identity_check(rank_q, k, order=6)
                assert rep["passed"], (rank_q, k, rep["difference"])


def test_A4_hirzebruch(criterion):
    with criterion("A4", 60):
        fam = oh_split_input((0, -1), j_function_projective(1, 3), (1,), 1, 3)
        I = main_flag_i(FlagSetup((1,), (0, -1), base_dim=1), fam, dmax=3)
        assert compare_series(toric_i_hirzebruch(1, 3), I) == []


@pytest.mark.parametrize("rs,N", [((1, 2), 3), ((2,), 4)], ids=["Fl123", "Gr24"])
def test_A5_characterization(criterion, rs, N):
    with criterion(f"A5[{'Fl(1,2;3)' if len(rs) == 2 else 'Gr(2,4)'}]", 600):
        S = FlagSetup(rs, (0,) * N, equivariant=True)
        G = gkm_data(N, rs, "Fl")
        B = brown_i(S, dmax=2)
        assert check_divisor_equation(B)["passed"]
        assert check_weyl_invariance(B)["passed"]
        nonab = gt_modify(B)
        assert check_pole_locations_C1(nonab, G)["passed"]
        M = main_flag_i(S, dmax=2)
        T = extract_recursion_table(M, G, 2)
        T_deriv = extract_recursion_table(tangent_derivative(M), G, 2)
        assert T.entries and not T.inconsistent
        assert compare_tables(T, T_deriv, G)["passed"]
        P = to_points(nonab, G)
        assert check_recursion_C2(P, T, G, 2)["passed"]
        assert compare_series(P, M) == []


def test_A6_gkm_sanity(criterion):
    with criterion("A6", 10):
        cases = [("gkm_flag", 2, (1,), 2), ("gkm_flag", 4, (2,), 6), ("gkm_flag", 3, (1, 2), 6),
                 ("gkm_toric_flag", 3, (1, 2), 18)]
        for kind, N, rs, count in cases:
            G = build_ring(kind, N, rs).gkm
            assert len(G.points) == count, (kind, N, rs)
            for p in G.points:
                assert len(G.edges[p]) == G.dim
                prod = ParamRat.const(1, G.params)
                for e in G.edges[p]:
                    prod = prod * e.weight
                assert prod == G.euler[p]


def test_A7_sign_consistency(criterion):
    with criterion("A7", 60):
        for r, n in ((1, 3), (2, 3), (2, 4)):
            S = FlagSetup((r,), (0,) * n)
            assert compare_series(main_flag_i(S, dmax=3), grassmann_i(S, dmax=3)) == [], (r, n)


def test_A8_abelian_bridge(criterion):
    with criterion("A8", 300):
        V = (0, -1, 0)
        S = FlagSetup((2,), V, N=4, base_dim=1)
        fam = oh_split_input(V, j_function_projective(1, 2), (2,), 1, 2)
        F = twisted_F(S, fam, dmax=2)
        ab = f_ab(S, fam, dmax=2)
        assert check_weyl_invariance(ab)["passed"]
        bridge = reduce_series(gt_modify(ab), F.meta["presentation"])
        assert compare_series(F, bridge) == []


def test_A9_negative_controls(criterion):
    with criterion("A9", 60):
        S = FlagSetup((1, 2), (0, 0, 0), equivariant=True)
        B = brown_i(S, dmax=2)
        G = gkm_data(3, (1, 2), "Fl")
        for d, texp in [((1, 0, 0), (1, 0, 0)), ((0, 1, 1), (0, 0, 1)), ((1, 1, 0), (0, 2, 0))]:
            rep = check_divisor_equation(corrupt_t_data(B, 2, (MultiDeg((), d), texp)))
            assert not rep["passed"] and rep["failures"][0]["degree"] == MultiDeg((), d).label()
        for d, factor in [((1, 1, 0), "H2_1 + 1"), ((0, 2, 0), "H2_2"), ((1, 0, 1), "2")]:
            bumped = dict(B.coeffs)
            bumped[MultiDeg((), d)] = bumped[MultiDeg((), d)] * ParamRat.from_str(factor)
            rep = check_weyl_invariance(B.with_coeffs(bumped))
            located = {f["degree"] for f in rep["failures"]} | {f["partner"] for f in rep["failures"]}
            assert not rep["passed"] and MultiDeg((), d).label() in located
        nonab = gt_modify(B)
        for d, pole in [((1, 0), "z - nu1 - nu2"), ((1, 1), "2*z - nu3"), ((0, 2), "z + 5")]:
            stray = dict(nonab.coeffs)
            stray[MultiDeg((), d)] = stray[MultiDeg((), d)] / ParamRat.from_str(pole)
            rep = check_pole_locations_C1(nonab.with_coeffs(stray), G)
            assert not rep["passed"]
            assert {f["degree"] for f in rep["failures"]} == {MultiDeg((), d).label()}
