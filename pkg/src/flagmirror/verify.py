"""Independent oracles and cone-membership checks.

Oracles: quantum Pieri for sigma_1 on Gr(r, n), the small J-function from
the quantum differential equation, and the toric I-function of the
Hirzebruch surface F_1.  Checks: divisor equation, Weyl invariance, pole
locations (C1), recursion coefficients (C2), the log-pole test at a point
base (C3), and series comparison.  Every check returns a JSON-able report
``{"check", "passed", "failures": [...], ...}``.
"""
from dataclasses import dataclass, field

from .algebra.paramrat import ParamRat, canonical_order
from .algebra.poly import Poly, PolyRing
from .algebra.rational import ONE, ZERO, Rational
from .algebra.schur import fits, partition_label, partitions_in_box
from .rings import root_name
from .series import (CoeffSeries, MultiDeg, divisor_op_apply, flat_roots, materialize_t,
                     to_points)

MAX_FAILURES = 20


def _report(name, failures, **extra):
    out = {"check": name, "passed": not failures, "failures": failures[:MAX_FAILURES]}
    if len(failures) > MAX_FAILURES:
        out["truncated"] = len(failures) - MAX_FAILURES
    out.update(extra)
    return out


def _s(x):
    if isinstance(x, ParamRat):
        return x.to_str()
    if isinstance(x, Poly):
        return x.to_str()
    return str(x)


# ---------------------------------------------------------------------------
# quantum Pieri and the QDE oracle
# ---------------------------------------------------------------------------

def quantum_pieri_sigma1(r, n, lam):
    """``sigma_1 * sigma_lam`` in QH*(Gr(r, n)) as ``[(mu, qpow, coeff)]``."""
    lam = tuple(p for p in lam if p)
    if not fits(lam, r, n):
        raise ValueError(f"partition {lam} does not fit in {r}x{n - r}")
    padded = list(lam) + [0] * (r - len(lam))
    out = []
    for i in range(r):
        mu = padded[:]
        mu[i] += 1
        if (i == 0 or mu[i] <= mu[i - 1]) and fits(mu, r, n):
            out.append((tuple(p for p in mu if p), 0, ONE))
    if padded[0] == n - r and padded[-1] >= 1:
        hat = tuple(p - 1 for p in padded[1:])
        out.append((tuple(p for p in hat if p), 1, ONE))
    return out


@dataclass
class QuantumRing:
    r: int
    n: int
    labels: list = field(default_factory=list)
    table: dict = field(default_factory=dict)    # label -> [(label, qpow, coeff)]

    @staticmethod
    def grassmannian(r, n):
        parts = partitions_in_box(r, n - r)
        labels = [partition_label(p) for p in parts]
        table = {partition_label(p): [(partition_label(mu), e, c) for mu, e, c in quantum_pieri_sigma1(r, n, p)]
                 for p in parts}
        return QuantumRing(r, n, labels, table)

    def matrices(self):
        """``(M_0, M_1)``: classical and q-linear parts of H* as matrices on
        basis indices (column = input)."""
        idx = {l: i for i, l in enumerate(self.labels)}
        size = len(self.labels)
        mats = [[[ZERO] * size for _ in range(size)] for _ in range(2)]
        for a, lst in self.table.items():
            for b, e, c in lst:
                mats[e][idx[b]][idx[a]] += c
        return mats

    def check_consistency(self):
        """Failures of two structural properties of the sigma_1 table:
        Frobenius symmetry for the Poincare pairing (the coefficient of
        q^e sigma_mu in sigma_1 * sigma_lam equals that of q^e sigma_{lam^c}
        in sigma_1 * sigma_{mu^c}), and agreement of the q^0 part with the
        product of Schur polynomials reduced in H*(Gr(r, n))."""
        from .algebra.schur import schur_polynomial, schur_reduce
        r, n = self.r, self.n
        parts = {partition_label(p): p for p in partitions_in_box(r, n - r)}
        comp = {}
        for lab, p in parts.items():
            padded = list(p) + [0] * (r - len(p))
            comp[lab] = partition_label(tuple(n - r - x for x in reversed(padded)))
        coeff = {}
        for a, lst in self.table.items():
            for b, e, c in lst:
                coeff[(a, b, e)] = coeff.get((a, b, e), ZERO) + c
        failures = []
        for (a, b, e), c in coeff.items():
            if coeff.get((comp[b], comp[a], e), ZERO) != c:
                failures.append(f"Frobenius: {a} -> q^{e} {b}")
        roots = tuple(f"x{i}" for i in range(r))
        ring = PolyRing(roots)
        e1 = schur_polynomial((1,), ring, roots)
        for lab, p in parts.items():
            red = schur_reduce(e1 * schur_polynomial(p, ring, roots), roots, n)
            classical = {partition_label(l): c for l, c in red.entries.items() if c}
            table0 = {b: c for (a, b, e), c in coeff.items() if a == lab and e == 0}
            if classical != table0:
                failures.append(f"classical Pieri: {lab}")
        return failures


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(m)), ZERO) for j in range(p)] for i in range(n)]


def _matvec(A, v):
    return [sum((A[i][k] * v[k] for k in range(len(v))), ZERO) for i in range(len(A))]


def qde_small_j(QR, dmax, z_depth, with_operator=False):
    """Small J-function from the divisor QDE.

    With ``S = sum_d q^d S_d``, ``S_d = sum_j S_{d,j} z^{-j}``:
    ``d S_{d,j} = S_{d,j-1} M0 - M0 S_{d,j-1} + sum_{e>=1} S_{d-e,j-1} M_e``,
    ``S_0 = id``; the J-function is ``S(1)``.
    """
    M0, M1 = QR.matrices()
    size = len(QR.labels)
    ident = [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
    zero = [[ZERO] * size for _ in range(size)]
    S = {(0, 0): ident}
    for d in range(1, dmax + 1):
        S[(d, 0)] = zero
        for j in range(1, z_depth + 1):
            prev = S[(d, j - 1)]
            acc = _madd(_matmul(prev, M0), _mscale(_matmul(M0, prev), -1))
            p = S.get((d - 1, j - 1), zero if j - 1 else (ident if d == 1 else zero))
            acc = _madd(acc, _matmul(p, M1))
            S[(d, j)] = _mscale(acc, Rational(1, d))
    ring = PolyRing(("z",), laurent=("z",))
    unit = QR.labels.index("s()")
    coeffs = {}
    for d in range(dmax + 1):
        vec = {}
        for j in range(0, z_depth + 1):
            M = S.get((d, j))
            if M is None:
                continue
            for i in range(size):
                c = M[i][unit]
                if c:
                    term = ring.gen("z", -j) * c if j else ring.const(c)
                    vec[QR.labels[i]] = vec[QR.labels[i]] + term if QR.labels[i] in vec else term
        if vec:
            coeffs[MultiDeg((), (d,))] = vec
    F = CoeffSeries("nonabelian", "vec", f"QH(Gr({QR.r},{QR.n}))", coeffs, (QR.r,), dmax,
                    zwin=(-z_depth, 0), meta={"constructor": "qde_small_j", "basis": QR.labels})
    if with_operator:
        return F, S
    return F


def _madd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _mscale(A, c):
    return [[a * c for a in row] for row in A]


def qde_residual(QR, S, dmax, z_depth):
    """Largest (d, j) where the recursion fails; None when it holds."""
    M0, M1 = QR.matrices()
    size = len(QR.labels)
    zero = [[ZERO] * size for _ in range(size)]
    for d in range(1, dmax + 1):
        for j in range(1, z_depth + 1):
            lhs = _mscale(S[(d, j)], d)
            prev = S[(d, j - 1)]
            rhs = _madd(_matmul(prev, M0), _mscale(_matmul(M0, prev), -1))
            rhs = _madd(rhs, _matmul(S.get((d - 1, j - 1), zero), M1))
            if lhs != rhs:
                return (d, j)
    return None


# ---------------------------------------------------------------------------
# toric oracle: the Hirzebruch surface F_1
# ---------------------------------------------------------------------------

F1_BASIS = ("1", "H1_1", "HB", "HB*H1_1")


def toric_i_hirzebruch(a=1, trunc=3):
    """Toric I-function of F_1 = P(O + O(-1)) over P^1.

    Toric divisors HB, HB, H, H - HB with pairings d, d, k, k - d against
    the class of base degree d and fiber degree k; the ring is
    Q[HB, H] / (HB^2, H^2 - HB H)."""
    if a != 1:
        raise ValueError("only a = 1 is supported")
    ring = PolyRing(("H1_1", "HB", "z"), {"H1_1": 1, "HB": 1}, {"HB": 1}, 2, ("z",))
    H, HB, z = ring.gen("H1_1"), ring.gen("HB"), ring.gen("z")
    divisors = [(HB, (1, 0)), (HB, (1, 0)), (H, (0, 1)), (H - HB, (-1, 1))]

    def factor(D, m):
        out = ring.one
        if m > 0:
            for c in range(1, m + 1):
                out = out * (D + z * c)
            return out.inverse()
        for c in range(m + 1, 1):
            out = out * (D + z * c)
        return out

    coeffs = {}
    for total in range(trunc + 1):
        for d in range(total + 1):
            k = total - d
            val = ring.one
            for D, (pd, pk) in divisors:
                val = val * factor(D, pd * d + pk * k)
            red = _reduce_f1(val)
            if red:
                coeffs[MultiDeg((d,), (k,))] = red
    return CoeffSeries("nonabelian", "vec", "F1", coeffs, (1,), trunc,
                       meta={"constructor": "toric_i_hirzebruch", "basis": list(F1_BASIS)})


def _reduce_f1(p):
    """Normal form for H^2 = HB H, HB^2 = 0 in degree <= 2."""
    out = {}
    for exps, c in p.split(("H1_1", "HB")).items():
        h, b = exps
        if b > 1 or h + b > 2:
            continue
        if (h, b) == (2, 0):
            h, b = 1, 1
        lab = {(0, 0): "1", (1, 0): "H1_1", (0, 1): "HB", (1, 1): "HB*H1_1"}[(h, b)]
        out[lab] = out[lab] + c if lab in out else c
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# divisor equation
# ---------------------------------------------------------------------------

def check_divisor_equation(F, order=2):
    """``z d/dt_i F = (z q_i d/dq_i + H_i) F`` on explicit t-data.

    Uses ``F.t_data`` (``{(MultiDeg, t-exponents): value}``) when present,
    with the t^0 slice always taken from the coefficients; otherwise the
    data is materialized from the t-convention (bookkeeping check)."""
    if F.kind != "frac":
        return _divisor_equation_implicit(F)
    data = dict(F.t_data) if F.t_data else materialize_t(F, order)
    for (d, texp) in list(data):
        if not any(texp):
            data[(d, texp)] = F.coeffs.get(d, data[(d, texp)])
    names = tuple(F.meta.get("params", ()))
    z = ParamRat.var("z", names + ("z",))
    dirs = [("t", m, i) for m, i in flat_roots(F.levels)] if F.side == "abelian" else \
        [("t", m + 1) for m in range(len(F.levels))]
    failures = []
    for (d, texp), val in sorted(data.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        for pos, sym in enumerate(dirs):
            nxt = list(texp)
            nxt[pos] += 1
            nxt = tuple(nxt)
            if (d, nxt) not in data:
                continue
            if F.side == "abelian":
                m, i = sym[1], sym[2]
                H = ParamRat.var(root_name(m, i), names + (root_name(m, i),))
            else:
                m = sym[1]
                H = sum((ParamRat.var(root_name(m, i + 1), names + (root_name(m, i + 1),))
                         for i in range(F.levels[m - 1])), ParamRat.const(0, names))
            lhs = z * (nxt[pos]) * data[(d, nxt)]
            rhs = (z * d.fiber[pos] + H) * val
            if lhs != rhs:
                failures.append({"degree": d.label(), "t": list(texp), "direction": pos,
                                 "exp": _s(rhs), "got": _s(lhs)})
    return _report("divisor", failures, mode="explicit-t" if F.t_data else "t-convention", order=order)


def _divisor_equation_implicit(F):
    # series without closed form: the t-convention makes the equation a
    # statement about the multiplier, which divisor_op_apply implements
    failures = []
    if not F.tconv:
        failures.append({"reason": "series is not in the t-convention"})
    return _report("divisor", failures, mode="t-convention")


def corrupt_t_data(F, order, location, factor=2):
    """Negative control helper: materialized t-data with one entry scaled."""
    data = materialize_t(F, order)
    data[location] = data[location] * factor
    return F.with_coeffs(dict(F.coeffs), t_data=data)


# ---------------------------------------------------------------------------
# Weyl invariance
# ---------------------------------------------------------------------------

def check_weyl_invariance(F):
    """Adjacent transpositions within each level act on root names and
    abelian degree indices together; coefficients must be fixed."""
    if F.side != "abelian":
        return _report("weyl", [{"reason": "abelian series expected"}])
    flat = flat_roots(F.levels)
    failures = []
    for m, r in enumerate(F.levels, start=1):
        for i in range(1, r):
            a, b = root_name(m, i), root_name(m, i + 1)
            pa, pb = flat.index((m, i)), flat.index((m, i + 1))
            for d, v in sorted(F.coeffs.items()):
                k = list(d.fiber)
                k[pa], k[pb] = k[pb], k[pa]
                other = MultiDeg(d.base, tuple(k))
                w = F.coeffs.get(other)
                moved = _permute_value(F.kind, v, {a: b, b: a})
                ok = w is not None and _values_equal(F.kind, moved, w)
                if not ok:
                    failures.append({"degree": d.label(), "transposition": [a, b],
                                     "partner": other.label(),
                                     "exp": _s(moved) if F.kind in ("frac", "poly") else None,
                                     "got": _s(w) if w is not None else None})
    return _report("weyl", failures)


def _permute_value(kind, v, mapping):
    if kind in ("frac", "poly"):
        return v.permute(mapping)
    raise ValueError(f"Weyl action not defined on kind {kind}")


def _values_equal(kind, a, b):
    if kind in ("frac", "poly"):
        return (a - b).is_zero() if kind == "frac" else not (a - b)
    return a == b


# ---------------------------------------------------------------------------
# pole locations and recursion (C1, C2)
# ---------------------------------------------------------------------------

def _points_series(F, G):
    if F.kind == "points":
        return F
    return to_points(F, G)


def _divides(P, f):
    q, r = divmod(P, f)
    return (q, True) if not r else (None, False)


def _field_poly(x, names):
    y = x.embed(names)
    return y.v.numer, y.v.denom


def check_pole_locations_C1(F, G, max_a=None):
    """Every z-pole of each restricted coefficient is 0 or rho/a for an
    edge at the point and 1 <= a <= degree."""
    P = _points_series(F, G)
    failures = []
    for d in sorted(P.coeffs):
        amax = max_a or max(d.total, 1)
        for alpha in G.points:
            val = P.coeffs[d].get(alpha)
            if val is None or val.is_zero():
                continue
            names = canonical_order(tuple(set(val.F.names) | set(G.params) | {"z"}))
            val = val.embed(names)
            den = val.v.denom
            z = ParamRat.var("z", names)
            cands = [_field_poly(z, names)[0]]
            for e in G.edges[alpha]:
                for a in range(1, amax + 1):
                    cands.append(_field_poly(z * a - e.rho, names)[0])
            for f in cands:
                while True:
                    q, ok = _divides(den, f)
                    if not ok:
                        break
                    den = q
            zi = names.index("z")
            if any(m[zi] for m in den.monoms()):
                rest = ParamRat(val.F, val.F.fld(den))
                failures.append({"degree": d.label(), "point": G.label(alpha),
                                 "unexpected_denominator": rest.to_str()})
    return _report("C1", failures)


def _residue(val, z0, a, rho, names):
    """Residue of ``val`` at ``z = rho / a`` if the pole there is simple;
    returns ``(residue, order)``."""
    z = ParamRat.var("z", names)
    val = val.embed(names)
    fac = _field_poly(z * a - rho, names)[0]
    den = val.v.denom
    order = 0
    while True:
        q, ok = _divides(den, fac)
        if not ok:
            break
        den, order = q, order + 1
    if order == 0:
        return None, 0
    if order > 1:
        return None, order
    rest = ParamRat(val.F, val.F.fld(val.v.numer) / val.F.fld(den))
    return rest.subs({"z": z0}) / a, 1


@dataclass
class RecursionTable:
    entries: dict = field(default_factory=dict)     # (alpha, beta, a) -> ParamRat
    undefined: list = field(default_factory=list)
    inconsistent: list = field(default_factory=list)

    def to_json(self, G):
        return {"entries": [{"alpha": G.label(a), "beta": G.label(b), "a": k, "value": v.to_str()}
                            for (a, b, k), v in sorted(self.entries.items(), key=lambda t: (str(t[0][0]), str(t[0][1]), t[0][2]))],
                "undefined": self.undefined, "inconsistent": self.inconsistent}


def _edge_instances(P, G, a_max):
    for alpha in G.points:
        for e in G.edges[alpha]:
            for a in range(1, a_max + 1):
                yield alpha, e, a


def _recursion_ratios(P, G, alpha, e, a):
    """Ratios ``Res_{z=rho/a} iota_alpha F_D / iota_beta F_{D-ad}(rho/a)``
    for every degree where both sides are defined."""
    names = None
    out = []
    shift = tuple(a * x for x in e.d)
    for D in sorted(P.coeffs):
        if len(D.fiber) != len(shift) or any(x < s for x, s in zip(D.fiber, shift)):
            continue
        val = P.coeffs[D].get(alpha)
        low = MultiDeg(D.base, tuple(x - s for x, s in zip(D.fiber, shift)))
        if val is None:
            continue
        names = canonical_order(tuple(set(val.F.names) | set(G.params) | {"z"}))
        z0 = e.rho.embed(names) / a
        res, order = _residue(val, z0, a, e.rho.embed(names), names)
        if order > 1:
            out.append((D, None, f"pole of order {order}"))
            continue
        if res is None:
            res = ParamRat.const(0, names)
        other = P.coeffs.get(low, {}).get(e.target)
        if other is None:
            if not res.is_zero():
                out.append((D, None, "lower coefficient vanishes but residue does not"))
            continue
        try:
            base = other.embed(names).subs({"z": z0})
        except ZeroDivisionError:
            out.append((D, None, "lower coefficient has a pole at z0"))
            continue
        if base.is_zero():
            continue
        out.append((D, res / base, None))
    return out


def extract_recursion_table(F_ref, G, a_max):
    P = _points_series(F_ref, G)
    T = RecursionTable()
    for alpha, e, a in _edge_instances(P, G, a_max):
        vals = _recursion_ratios(P, G, alpha, e, a)
        loc = {"alpha": G.label(alpha), "beta": G.label(e.target), "a": a}
        good = [(D, v) for D, v, err in vals if err is None]
        for D, v, err in vals:
            if err:
                T.inconsistent.append(dict(loc, degree=D.label(), reason=err))
        if not good:
            T.undefined.append(loc)
            continue
        first = good[0][1]
        for D, v in good[1:]:
            if v != first:
                T.inconsistent.append(dict(loc, degree=D.label(), exp=first.to_str(), got=v.to_str()))
        T.entries[(alpha, e.target, a)] = first
    return T


def check_recursion_C2(F_cand, table, G, a_max):
    P = _points_series(F_cand, G)
    failures = []
    for alpha, e, a in _edge_instances(P, G, a_max):
        entry = table.entries.get((alpha, e.target, a))
        for D, v, err in _recursion_ratios(P, G, alpha, e, a):
            loc = {"alpha": G.label(alpha), "beta": G.label(e.target), "a": a, "degree": D.label()}
            if err:
                failures.append(dict(loc, reason=err))
            elif entry is None:
                failures.append(dict(loc, reason="no table entry"))
            elif v != entry:
                failures.append(dict(loc, exp=entry.to_str(), got=v.to_str()))
    return _report("C2", failures, table_size=len(table.entries))


def compare_tables(T1, T2, G):
    failures = []
    for key in sorted(set(T1.entries) | set(T2.entries), key=lambda t: (str(t[0]), str(t[1]), t[2])):
        a, b = T1.entries.get(key), T2.entries.get(key)
        if a is None or b is None:
            continue
        if a != b:
            failures.append({"alpha": G.label(key[0]), "beta": G.label(key[1]), "a": key[2],
                             "exp": a.to_str(), "got": b.to_str()})
    shared = len(set(T1.entries) & set(T2.entries))
    return _report("C2-tables", failures, shared_entries=shared)


def tangent_derivative(F, level=1):
    """``z d/dt^(level)`` applied to a series (t-convention)."""
    return divisor_op_apply(F, {(("t", level),): 1})


# ---------------------------------------------------------------------------
# C3 over a point base
# ---------------------------------------------------------------------------

def check_log_pole_C3(F, G):
    """B = pt: each q-coefficient of ``log(iota_alpha F)`` has at most a
    simple pole at ``z = 0`` (coefficients are completed in the rational
    functions of the equivariant parameters)."""
    P = _points_series(F, G)
    degs = sorted(P.coeffs)
    zero_deg = [d for d in degs if d.total == 0]
    failures = []
    if len(zero_deg) != 1:
        return _report("C3", [{"reason": "missing degree-0 coefficient"}])
    d0 = zero_deg[0]
    for alpha in G.points:
        c0 = P.coeffs[d0][alpha]
        X = {d: P.coeffs[d][alpha] / c0 for d in degs if d.total > 0 and alpha in P.coeffs[d]}
        log = _log_series(X, degs)
        for d, v in sorted(log.items()):
            val = _z_valuation(v)
            if val < -1:
                failures.append({"degree": d.label(), "point": G.label(alpha), "z_order": val})
    return _report("C3", failures, completion="rational functions of nu, exact truncation by degree")


def _log_series(X, degs):
    dmax = max((d.total for d in degs), default=0)
    out = {}
    power = dict(X)
    for n in range(1, dmax + 1):
        sign = 1 if n % 2 else -1
        for d, v in power.items():
            term = v * Rational(sign, n)
            out[d] = out[d] + term if d in out else term
        new = {}
        for d1, v1 in power.items():
            for d2, v2 in X.items():
                d = d1 + d2
                if d.total > dmax:
                    continue
                new[d] = new[d] + v1 * v2 if d in new else v1 * v2
        power = new
    return out


def _z_valuation(v):
    if v.is_zero():
        return 10 ** 6
    zi = v.F.index.get("z")
    if zi is None:
        return 0
    num = min(m[zi] for m in v.v.numer.monoms())
    den = min(m[zi] for m in v.v.denom.monoms())
    return num - den


# ---------------------------------------------------------------------------
# series comparison
# ---------------------------------------------------------------------------

def _terms(kind, v):
    """Canonical term dictionary for comparison across rings."""
    out = {}
    if kind == "poly":
        items = [("", v)]
    elif kind == "vec":
        items = sorted(v.items())
    elif kind in ("frac", "points"):
        return None
    else:
        raise ValueError(kind)
    for lab, p in items:
        for exps, c in p.items():
            key = (lab, tuple(sorted((n, e) for n, e in zip(p.ring.names, exps) if e)))
            out[key] = out.get(key, ZERO) + c
    return {k: c for k, c in out.items() if c}


def compare_series(A, B, zwin=None, dmax=None):
    """First difference between two series (empty list when equal).

    ``zwin = (lo, hi)`` restricts the comparison to powers of ``z`` in the
    window; ``dmax`` to total degree at most ``dmax``."""
    if A.kind != B.kind:
        return [{"reason": f"kind mismatch {A.kind} vs {B.kind}"}]
    dm = dmax if dmax is not None else min(A.dmax, B.dmax)
    diffs = []
    for d in sorted(set(A.coeffs) | set(B.coeffs)):
        if d.total > dm:
            continue
        a, b = A.coeffs.get(d), B.coeffs.get(d)
        if A.kind in ("frac", "points"):
            if A.kind == "frac":
                if (a is None) != (b is None) or (a is not None and a != b):
                    diffs.append({"degree": d.label(), "exp": _s(a), "got": _s(b)})
            else:
                for p in sorted(set(a or {}) | set(b or {})):
                    x, y = (a or {}).get(p), (b or {}).get(p)
                    if (x is None and y is not None and not y.is_zero()) or \
                       (y is None and x is not None and not x.is_zero()) or \
                       (x is not None and y is not None and x != y):
                        diffs.append({"degree": d.label(), "point": str(p), "exp": _s(x), "got": _s(y)})
                        break
            if diffs:
                return diffs[:1]
            continue
        ta = _terms(A.kind, a) if a is not None else {}
        tb = _terms(B.kind, b) if b is not None else {}
        for key in sorted(set(ta) | set(tb)):
            zexp = dict(key[1]).get("z", 0)
            if zwin and not (zwin[0] <= zexp <= zwin[1]):
                continue
            if ta.get(key, ZERO) != tb.get(key, ZERO):
                mono = "*".join(f"{n}^{e}" for n, e in key[1] if n != "z")
                return [{"degree": d.label(), "z_exponent": zexp, "label": key[0] or None,
                         "monomial": mono or "1", "exp": str(ta.get(key, ZERO)), "got": str(tb.get(key, ZERO))}]
    return []
