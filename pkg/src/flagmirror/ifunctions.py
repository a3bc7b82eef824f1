"""Constructors for the explicit series: hypergeometric (g/t) factors,
the g/t modification, the toric I-function of the abelian quotient, the
flag-bundle I-function (general and Grassmann forms), split inputs, and the
mu-twisted functions F(mu) and F_ab(mu).

Each summand is described as a list of abstract factors (linear forms and
Chern-root products raised to +-1) and then evaluated by one of three
evaluators:

* ``PolyEvaluator``: truncated polynomial engine with formal roots and a
  Laurent ``z`` (non-equivariant; reduction into a basis afterwards),
* ``PointEvaluator``: exact rational functions at a torus-fixed point,
* ``FracEvaluator``: exact rational functions in formal roots.

Denominators ``H_i - H_j`` never get inverted in the polynomial engine:
summands over one Weyl orbit are put over the common denominator
``prod_{i<j} (H_i - H_j)`` and the orbit sum is divided exactly at the end.
"""
from dataclasses import dataclass
from itertools import product

from .algebra.paramrat import ParamRat, canonical_order
from .algebra.poly import Poly, PolyRing
from .parallel import pmap
from .rings import (BaseFactor, GrassmannFiber, Presentation, ProductOfProjectiveFiber,
                    ProjectiveBundleFiber, chern_product_eval, flag_dimension, gkm_data,
                    nu_name, root_name, split_chern, toric_flag_dimension, validate_levels)
from .series import (DEFAULT_DMAX, CoeffSeries, LambdaFamily, MultiDeg, compositions,
                     constant_family, flat_roots, substitute_lambda)


# ---------------------------------------------------------------------------
# setup
# ---------------------------------------------------------------------------

@dataclass
class FlagSetup:
    """Flag bundle Fl(r_1 < ... < r_l; V) over B = P^b (b = 0: a point) with
    V split as sum of O(a_j HB), embedded in B x Fl(r; N) via
    0 -> V -> O^N -> Q -> 0."""
    rs: tuple
    V_degrees: tuple
    N: int = None
    base_dim: int = 0
    equivariant: bool = False
    twist: bool = False

    def __post_init__(self):
        self.V_degrees = tuple(int(a) for a in self.V_degrees)
        if any(a > 0 for a in self.V_degrees):
            raise ValueError("V must have a globally generated dual (all degrees <= 0)")
        if self.N is None:
            self.N = self.n
        self.rs = validate_levels(self.n, self.rs)
        if self.N < self.n:
            raise ValueError("N must be at least rank V")
        if self.equivariant and (self.base_dim or any(self.V_degrees)):
            raise ValueError("equivariant mode supports a trivial V over a point")

    @property
    def n(self):
        return len(self.V_degrees)

    @property
    def rank_Q(self):
        return self.N - self.n

    @property
    def base(self):
        return BaseFactor(self.base_dim)

    def chern_V(self, ring):
        return split_chern(self.V_degrees, ring)

    def chern_Q(self, ring):
        """c(Q) = 1 / c(V) (Q has rank N - n); asserts the tail vanishes."""
        cv = self.chern_V(ring)
        inv = [ring.one]
        top = self.base_dim
        for deg in range(1, top + 1):
            acc = ring.zero
            for j in range(1, min(deg, len(cv) - 1) + 1):
                acc = acc - cv[j] * inv[deg - j]
            inv.append(acc)
        for deg in range(self.rank_Q + 1, len(inv)):
            if inv[deg]:
                raise ValueError("1/c(V) has terms beyond rank Q: enlarge N")
        inv = inv[:self.rank_Q + 1]
        inv += [ring.zero] * (self.rank_Q + 1 - len(inv))
        return inv

    def to_json(self):
        return {"r": list(self.rs), "V": list(self.V_degrees), "N": self.N,
                "base": self.base_dim, "equivariant": self.equivariant, "twist": self.twist}

    @staticmethod
    def from_json(d):
        if "V" in d:
            V = d["V"]
        else:
            V = [0] * int(d["n"])
        return FlagSetup(tuple(d["r"]), tuple(V), d.get("N"), int(d.get("base", 0)),
                         bool(d.get("equivariant", False)), bool(d.get("twist", False)))


# ---------------------------------------------------------------------------
# abstract factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lin:
    """``(sum coeffs * var + zc * z)^exp``."""
    coeffs: tuple
    zc: int
    exp: int


@dataclass(frozen=True)
class ChernF:
    """``prod_{delta in roots(bundle)} (sum coeffs * var + delta + zc * z)^exp``."""
    coeffs: tuple
    zc: int
    bundle: str
    exp: int


def _diff(a, b):
    return ((a, 1), (b, -1))


def range_ratio(x, e):
    """Factors of ``prod_{c<=e} (x + cz) / prod_{c<=0} (x + cz)``.

    Returns ``(factors, zero_in_denominator)``; for ``e < 0`` the c = 0
    factor ``x`` sits in the denominator and is reported instead of being
    listed."""
    if e > 0:
        return [Lin(x, c, 1) for c in range(1, e + 1)], False
    if e < 0:
        return [Lin(x, c, -1) for c in range(e + 1, 0)], True
    return [], False


def inverse_range_ratio(x, e):
    """Factors of ``prod_{c<=0} (x + cz) / prod_{c<=e} (x + cz)`` (the c = 0
    factor stays in the numerator, so no special case)."""
    if e > 0:
        return [Lin(x, c, -1) for c in range(1, e + 1)]
    if e < 0:
        return [Lin(x, c, 1) for c in range(e + 1, 1)]
    return []


def _split_levels(kflat, rs):
    out, pos = [], 0
    for r in rs:
        out.append(tuple(kflat[pos:pos + r]))
        pos += r
    return out


def weyl_ratio_factors(rs, kflat):
    """The i != j ratio relative to the common denominator
    ``prod_m prod_{i<j} (H_i - H_j)``: returns ``(sign, factors)``."""
    sign, factors = 1, []
    for m, k in enumerate(_split_levels(kflat, rs), start=1):
        r = len(k)
        for i in range(r):
            for j in range(i + 1, r):
                hi, hj = root_name(m, i + 1), root_name(m, j + 1)
                fij, zij = range_ratio(_diff(hi, hj), k[i] - k[j])
                fji, zji = range_ratio(_diff(hj, hi), k[j] - k[i])
                factors += fij + fji
                if zji:
                    sign = -sign            # H_j - H_i = -(H_i - H_j)
                if not (zij or zji):
                    factors.append(Lin(_diff(hi, hj), 0, 1))
    return sign, factors


def grassmann_weyl_factors(r, k):
    """Closed Grassmann form: ``(-1)^{k(r-1)} prod_{i<j} (H_i - H_j + (k_i - k_j) z)``
    over the common denominator."""
    sign = (-1) ** (sum(k) * (r - 1))
    factors = [Lin(_diff(root_name(1, i + 1), root_name(1, j + 1)), k[i] - k[j], 1)
               for i in range(r) for j in range(i + 1, r)]
    return sign, factors


def level_ratio_factors(rs, kflat, top=None):
    """Middle factors between consecutive levels.  ``top`` (Brown's
    I-function) appends level l+1 with roots nu_j and degree 0."""
    levels = _split_levels(kflat, rs)
    factors = []
    for m in range(len(rs) - 1):
        for i in range(rs[m]):
            for j in range(rs[m + 1]):
                x = _diff(root_name(m + 1, i + 1), root_name(m + 2, j + 1))
                factors += inverse_range_ratio(x, levels[m][i] - levels[m + 1][j])
    if top is not None:
        l = len(rs)
        for i in range(rs[-1]):
            for j in range(top):
                x = ((root_name(l, i + 1), 1),) + (((nu_name(j + 1), -1),))
                factors += inverse_range_ratio(x, levels[-1][i])
    return factors


def vandermonde_pairs(rs):
    return [(root_name(m + 1, i + 1), root_name(m + 1, j + 1))
            for m, r in enumerate(rs) for i in range(r) for j in range(i + 1, r)]


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

class PolyEvaluator:
    def __init__(self, ring, chern):
        self.ring = ring
        self.chern = chern
        self._cache = {}

    def lin(self, f):
        key = (f.coeffs, f.zc)
        base = self._cache.get(key)
        if base is None:
            R = self.ring
            base = R.linear(dict(f.coeffs)) + R.gen("z") * f.zc if f.zc else R.linear(dict(f.coeffs))
            self._cache[key] = base
        return self._power(key, base, f.exp)

    def chern_f(self, f):
        key = ("chern", f.coeffs, f.zc, f.bundle)
        base = self._cache.get(key)
        if base is None:
            R = self.ring
            base = chern_product_eval(self.chern[f.bundle], R.linear(dict(f.coeffs)), R.gen("z") * f.zc)
            self._cache[key] = base
        return self._power(key, base, f.exp)

    def _power(self, key, base, e):
        if e == 1:
            return base
        k2 = (key, e)
        v = self._cache.get(k2)
        if v is None:
            if e > 0:
                v = base ** e
            else:
                inv = self._cache.get((key, -1))
                if inv is None:
                    inv = self._cache[(key, -1)] = base.inverse()
                v = inv ** (-e)
            self._cache[k2] = v
        return v

    def one(self):
        return self.ring.one

    def evaluate(self, factors):
        out = self.ring.one
        for f in factors:
            out = out * (self.lin(f) if isinstance(f, Lin) else self.chern_f(f))
            if not out:
                break
        return out


class RationalEvaluator:
    """Evaluates factors as ParamRats, with roots replaced by ``assign``
    (a fixed point) or kept formal."""

    def __init__(self, names, assign=None, chern=None):
        self.names = canonical_order(tuple(names) + ("z",))
        self.assign = assign or {}
        self.chern = chern or {}
        self.z = ParamRat.var("z", self.names)
        self._cache = {}

    def value(self, name):
        if name in self.assign:
            return self.assign[name]
        return ParamRat.var(name, self.names)

    def linear(self, coeffs, zc):
        key = (coeffs, zc)
        v = self._cache.get(key)
        if v is None:
            v = self.z * zc
            for n, c in coeffs:
                v = v + self.value(n) * c
            self._cache[key] = v
        return v

    def one(self):
        return ParamRat.const(1, self.names)

    def evaluate(self, factors):
        out = self.one()
        for f in factors:
            if isinstance(f, Lin):
                base = self.linear(f.coeffs, f.zc)
            else:
                key = ("chern", f.coeffs, f.zc, f.bundle)
                base = self._cache.get(key)
                if base is None:
                    base = chern_product_eval(self.chern[f.bundle], self.linear(f.coeffs, 0), self.z * f.zc)
                    self._cache[key] = base
            out = out * base ** f.exp
        return out


# ---------------------------------------------------------------------------
# enumeration helpers
# ---------------------------------------------------------------------------

def _tuples_with_level_sums(rs, sums):
    per_level = [compositions(s, r) for s, r in zip(sums, rs)]
    for combo in product(*per_level):
        yield tuple(x for level in combo for x in level)


def _nonabelian_degrees(setup, dmax):
    nb = 1 if setup.base_dim else 0
    out = []
    for total in range(dmax + 1):
        for v in compositions(total, nb + len(setup.rs)):
            out.append((v[:nb], v[nb:]))
    return out


def _engine_ring(setup, dim, headroom, family=None, extra=(), caps=None):
    roots = [root_name(m + 1, i + 1) for m, r in enumerate(setup.rs) for i in range(r)]
    names = list(roots) + (["HB"] if setup.base_dim else []) + list(extra) + ["z"]
    weights = {n: 1 for n in roots}
    c = {}
    if setup.base_dim:
        weights["HB"] = 1
        c["HB"] = setup.base_dim
    c.update(caps or {})
    return PolyRing(names, weights, c, dim + headroom, ("z",))


def _family_assignment(family, rs, kflat, ring, mu=False):
    z = ring.gen("z")
    vals = {}
    for (m, i), k in zip(flat_roots(rs), kflat):
        v = ring.gen(root_name(m, i)) + z * k
        if mu:
            v = v + ring.gen("mu")
        vals[f"lam{m}_{i}"] = v
    return vals


def _resolve_family(family, setup):
    if family is None:
        return constant_family()
    return family


# ---------------------------------------------------------------------------
# hypergeometric factor and g/t modification
# ---------------------------------------------------------------------------

def hyp_factor(rs, k, extra_names=()):
    """``prod_m prod_{i != j} prod_{c <= k_i-k_j} (H_i-H_j+cz) / prod_{c<=0} (...)``
    as a ParamRat in the formal roots and ``z``."""
    rs = tuple(rs)
    roots = [root_name(m, i) for m, i in flat_roots(rs)]
    ev = RationalEvaluator(tuple(roots) + tuple(extra_names))
    out = ev.one()
    for m, kk in enumerate(_split_levels(tuple(k), rs), start=1):
        r = len(kk)
        for i in range(r):
            for j in range(r):
                if i == j:
                    continue
                x = ev.value(root_name(m, i + 1)) - ev.value(root_name(m, j + 1))
                e = kk[i] - kk[j]
                if e > 0:
                    for c in range(1, e + 1):
                        out = out * (x + ev.z * c)
                elif e < 0:
                    for c in range(e + 1, 1):
                        out = out / (x + ev.z * c)
    return out


def _is_weyl_invariant_frac(F):
    for d, v in F.coeffs.items():
        for m, r in enumerate(F.levels, start=1):
            for i in range(1, r):
                a, b = root_name(m, i), root_name(m, i + 1)
                pos = flat_roots(F.levels).index((m, i))
                k = list(d.fiber)
                k[pos], k[pos + 1] = k[pos + 1], k[pos]
                other = F.coeffs.get(MultiDeg(d.base, tuple(k)))
                if other is None or v.permute({a: b, b: a}) != other:
                    return False
    return True


def gt_modify(F, check_invariance=True):
    """Multiply each abelian coefficient by the Hyp factor, sum Weyl orbits
    and identify Novikov variables level-wise (q_i^(m) -> q^(m))."""
    if F.side != "abelian":
        raise ValueError("abelian input expected")
    rs = F.levels
    pairs = vandermonde_pairs(rs)
    groups = {}
    for d in F.coeffs:
        sums = tuple(sum(x) for x in _split_levels(d.fiber, rs))
        groups.setdefault((d.base, sums), []).append(d)
    out = {}
    if F.kind == "frac":
        if check_invariance and not _is_weyl_invariant_frac(F):
            raise ValueError("input is not Weyl-invariant")
        extra = tuple(F.meta.get("params", ()))
        for (base, sums), degs in sorted(groups.items()):
            total = None
            for d in degs:
                term = F.coeffs[d] * hyp_factor(rs, d.fiber, extra)
                total = term if total is None else total + term
            den = total.denom_poly()
            for a, b in pairs:
                if den.subs({a: ParamRat.var(b, den.F.names)}).is_zero():
                    raise ArithmeticError(f"orbit sum keeps a pole along {a} = {b}")
            if not total.is_zero():
                out[MultiDeg(base, sums)] = total
    elif F.kind == "poly":
        src = F.meta["poly_ring"]
        ring = F.meta.get("target_ring") or src
        ev = PolyEvaluator(ring, {})
        for (base, sums), degs in sorted(groups.items()):
            total = ring.zero
            for d in degs:
                sign, factors = weyl_ratio_factors(rs, d.fiber)
                total = total + F.coeffs[d].convert(ring) * ev.evaluate(factors) * sign
            for a, b in pairs:
                total = total.divide_by_difference(a, b)
            if total:
                out[MultiDeg(base, sums)] = total
    else:
        raise ValueError(f"g/t modification not supported for kind {F.kind}")
    meta = dict(F.meta)
    if F.kind == "poly":
        meta["poly_ring"] = ring
    return F.with_coeffs(out, side="nonabelian", meta=meta)


# ---------------------------------------------------------------------------
# Brown's toric I-function of the abelian quotient (B = pt)
# ---------------------------------------------------------------------------

def brown_i(setup, J_B=None, dmax=DEFAULT_DMAX, equivariant=True):
    """Equivariant toric I-function of the abelian quotient of Fl(r; N) as a
    closed-form series (ParamRat in formal roots, nu and z)."""
    if setup.base_dim:
        raise NotImplementedError("closed-form toric I-function implemented over a point")
    rs, N = setup.rs, setup.N
    roots = [root_name(m, i) for m, i in flat_roots(rs)]
    nus = [nu_name(j) for j in range(1, N + 1)]
    params = tuple(roots) + tuple(nus)
    assign = {} if equivariant else {n: ParamRat.const(0, params) for n in nus}
    ev = RationalEvaluator(params, assign)
    coeffs = {}
    for total in range(dmax + 1):
        for kflat in compositions(total, len(roots)):
            v = ev.evaluate(level_ratio_factors(rs, kflat, top=N))
            coeffs[MultiDeg((), kflat)] = v
    return CoeffSeries("abelian", "frac", space_name(setup, N).replace("Fl(", "FlT("), coeffs, rs, dmax,
                       meta={"params": params, "N": N, "equivariant": equivariant,
                             "constructor": "brown_i"})


# ---------------------------------------------------------------------------
# the flag-bundle I-function
# ---------------------------------------------------------------------------

def _presentation_for(setup, N_fiber, r_total_chern=None, kind="nonabelian"):
    rs = setup.rs
    base = setup.base
    if len(rs) != 1:
        return None
    r = rs[0]
    if kind == "abelian":
        return Presentation(base, ProductOfProjectiveFiber(r, N_fiber))
    trivial = not any(setup.V_degrees) or N_fiber != setup.n
    if trivial:
        return Presentation(base, GrassmannFiber(r, N_fiber))
    if r == 1:
        ring = PolyRing(("HB",), {"HB": 1}, {"HB": setup.base_dim})
        return Presentation(base, ProjectiveBundleFiber(split_chern(setup.V_degrees, ring)))
    return None


def main_flag_i(setup, family=None, dmax=DEFAULT_DMAX, form="flag", reduce=True):
    """The flag-bundle I-function.

    ``form='flag'`` uses the general-level formula with the i != j range
    ratios; ``form='grassmann'`` (one level only) uses the closed Grassmann
    form with the explicit sign ``(-1)^{k(r-1)}``.  Non-equivariant output is
    reduced into a basis when a presentation is available; equivariant
    output is a ``points`` series on the GKM graph of Fl(r; n).
    """
    if form == "grassmann" and len(setup.rs) != 1:
        raise ValueError("the Grassmann form has one level")
    family = _resolve_family(family, setup)
    if not family.is_weyl_invariant():
        raise ValueError("input family is not Weyl-invariant")
    if setup.equivariant:
        return _main_flag_points(setup, dmax, form)
    rs, n = setup.rs, setup.n
    dim = setup.base_dim + flag_dimension(n, rs)
    headroom = sum(r * (r - 1) // 2 for r in rs)
    ring = _engine_ring(setup, dim, headroom)
    ev = PolyEvaluator(ring, {"V": setup.chern_V(ring)})
    coeffs = {}
    for base, sums in _nonabelian_degrees(setup, dmax):
        total = ring.zero
        for kflat in _tuples_with_level_sums(rs, sums):
            fam = substitute_lambda(family, _family_assignment(family, rs, kflat, ring), ring, base)
            if not fam:
                continue
            sign, factors = _flag_summand(rs, kflat, form)
            term = fam * ev.evaluate(factors)
            total = total + (term if sign == 1 else -term)
        for a, b in vandermonde_pairs(rs):
            total = total.divide_by_difference(a, b)
        if total:
            coeffs[MultiDeg(base, sums)] = total
    F = CoeffSeries("nonabelian", "poly", space_name(setup), coeffs, rs, dmax,
                    meta={"poly_ring": ring, "constructor": "main_flag_i", "form": form})
    if reduce:
        pres = _presentation_for(setup, n)
        if pres is not None:
            return reduce_series(F, pres)
    return F


def space_name(setup, N=None):
    levels = ",".join(map(str, setup.rs))
    if N is None and not any(setup.V_degrees):
        N = setup.n
    fiber = f"Fl({levels};{N})" if N is not None else \
        f"Fl({levels};" + "+".join(f"O({a})" for a in setup.V_degrees) + ")"
    return f"P{setup.base_dim} x {fiber}" if setup.base_dim else fiber


def _flag_summand(rs, kflat, form):
    l = len(rs)
    last = _split_levels(kflat, rs)[-1]
    factors = []
    for i, k in enumerate(last):
        for c in range(1, k + 1):
            factors.append(ChernF(((root_name(l, i + 1), 1),), c, "V", -1))
    factors += level_ratio_factors(rs, kflat)
    if form == "grassmann":
        sign, wf = grassmann_weyl_factors(rs[0], kflat)
    else:
        sign, wf = weyl_ratio_factors(rs, kflat)
    return sign, factors + wf


def grassmann_i(setup, family=None, dmax=DEFAULT_DMAX, reduce=True):
    """Grassmann-bundle I-function in its closed one-level form."""
    return main_flag_i(setup, family, dmax, form="grassmann", reduce=reduce)


def fixed_point_lift(alpha):
    """Injective lift of a chain A_1 < ... < A_l to the abelian quotient:
    the i-th root of level m goes to the i-th smallest element of A_m."""
    return {root_name(m + 1, i + 1): a for m, A in enumerate(alpha) for i, a in enumerate(A)}


def _main_flag_points(setup, dmax, form):
    rs, N = setup.rs, setup.n
    G = gkm_data(N, rs, "Fl")
    nus = G.params
    names = canonical_order(nus + ("z",))
    # V has Chern roots -nu_j, so c_j(V) = e_j(-nu)
    cV = [ParamRat.const(1, names)]
    for j in range(1, N + 1):
        new = [ParamRat.const(0, names)] * (len(cV) + 1)
        for a, c in enumerate(cV):
            new[a] = new[a] + c
            new[a + 1] = new[a + 1] - c * ParamRat.var(nu_name(j), names)
        cV = new
    pairs = vandermonde_pairs(rs)
    degrees = _nonabelian_degrees(setup, dmax)

    def at_point(alpha):
        ev = RationalEvaluator(names, dict(G.assign[alpha]), {"V": cV})
        V = ev.one()
        for a, b in pairs:
            V = V * (G.assign[alpha][a] - G.assign[alpha][b])
        vals = []
        for base, sums in degrees:
            total = ParamRat.const(0, names)
            for kflat in _tuples_with_level_sums(rs, sums):
                sign, factors = _flag_summand(rs, kflat, form)
                total = total + ev.evaluate(factors) * sign
            vals.append(total / V)
        return vals

    coeffs = {}
    for alpha, vals in zip(G.points, pmap(at_point, G.points)):
        for (base, sums), v in zip(degrees, vals):
            coeffs.setdefault(MultiDeg(base, sums), {})[alpha] = v
    return CoeffSeries("nonabelian", "points", space_name(setup), coeffs, rs,
                       dmax, meta={"gkm": G, "constructor": "main_flag_i", "form": form})


# ---------------------------------------------------------------------------
# reduction into a basis
# ---------------------------------------------------------------------------

def reduce_series(F, pres):
    """``poly`` -> ``vec``: reduce each coefficient with a presentation."""
    out = {}
    for d, v in F.coeffs.items():
        red = pres.reduce(v)
        if red:
            out[d] = red
    meta = dict(F.meta)
    meta["presentation"] = pres
    meta["basis"] = [lab for lab, _, _ in pres.basis()]
    return F.with_coeffs(out, kind="vec", meta=meta)


# ---------------------------------------------------------------------------
# inputs: split bundles (quantum Lefschetz form)
# ---------------------------------------------------------------------------

def j_function_projective(b, dmax, ring=None):
    """Small J-function of P^b: ``J_d = 1 / prod_{c=1}^d (HB + cz)^(b+1)``."""
    ring = ring or PolyRing(("HB", "z"), {"HB": 1}, {"HB": b}, b, ("z",))
    out = {}
    for d in range(dmax + 1):
        den = ring.one
        for c in range(1, d + 1):
            den = den * (ring.gen("HB") + ring.gen("z") * c) ** (b + 1)
        out[d] = den.inverse()
    return out


def oh_split_input(degrees, J_B, levels, b, dmax):
    """Input family for a split bundle ``V = sum_j L_j`` with
    ``c_1(L_j) = degrees[j] * HB``:
    ``sum_d prod_j prod_i prod_{c=0}^{-c_1(L_j).d - 1} (lam_i + c_1(L_j) - cz) J_d Q^d``."""
    if any(a > 0 for a in degrees):
        raise ValueError("positive-degree line bundle: its dual is not globally generated")
    l = len(levels)
    lam = tuple(f"lam{l}_{i + 1}" for i in range(levels[-1]))
    names = lam + (("HB",) if b else ()) + ("z",)
    ring = PolyRing(names, {"HB": 1} if b else {}, {"HB": b} if b else {}, None, ("z",))
    z = ring.gen("z")
    coeffs = {}
    for d in range(dmax + 1):
        p = ring.one
        for a in degrees:
            c1 = ring.gen("HB") * a if b else ring.zero
            for lname in lam:
                for c in range(0, -a * d):
                    p = p * (ring.gen(lname) + c1 - z * c)
        Jd = J_B[d].convert(ring) if isinstance(J_B[d], Poly) else ring.const(J_B[d])
        val = p * Jd
        if val:
            coeffs[(d,) if b else ()] = val
        if not b:
            break
    return LambdaFamily(ring, coeffs, lam, tuple(levels))


# ---------------------------------------------------------------------------
# F(mu) and F_ab(mu)
# ---------------------------------------------------------------------------

def _twisted_summand(rs, kflat, N, weyl):
    l = len(rs)
    last = _split_levels(kflat, rs)[-1]
    factors = []
    for i, k in enumerate(last):
        h = root_name(l, i + 1)
        for c in range(1, k + 1):
            factors.append(ChernF((("mu", 1), (h, 1)), c, "Q", 1))
            factors.append(Lin(((h, 1),), c, -N))
    factors += level_ratio_factors(rs, kflat)
    if weyl:
        sign, wf = weyl_ratio_factors(rs, kflat)
        return sign, factors + wf
    return 1, factors


def twisted_F(setup, family=None, dmax=DEFAULT_DMAX, reduce=True):
    """F(mu) on B x Fl(r; N), mu symbolic."""
    if setup.rank_Q < 0:
        raise ValueError("missing Q data")
    family = _resolve_family(family, setup)
    rs, N = setup.rs, setup.N
    dim = setup.base_dim + flag_dimension(N, rs)
    headroom = sum(r * (r - 1) // 2 for r in rs)
    ring = _engine_ring(setup, dim, headroom, extra=("mu",))
    ev = PolyEvaluator(ring, {"Q": setup.chern_Q(ring)})
    coeffs = {}
    for base, sums in _nonabelian_degrees(setup, dmax):
        total = ring.zero
        for kflat in _tuples_with_level_sums(rs, sums):
            fam = substitute_lambda(family, _family_assignment(family, rs, kflat, ring, mu=True), ring, base)
            if not fam:
                continue
            sign, factors = _twisted_summand(rs, kflat, N, weyl=True)
            total = total + fam * ev.evaluate(factors) * sign
        for a, b in vandermonde_pairs(rs):
            total = total.divide_by_difference(a, b)
        if total:
            coeffs[MultiDeg(base, sums)] = total
    F = CoeffSeries("nonabelian", "poly", space_name(setup, N), coeffs, rs, dmax,
                    meta={"poly_ring": ring, "constructor": "twisted_F"})
    if reduce:
        pres = _presentation_for(setup, N, kind="nonabelian")
        if pres is not None:
            return reduce_series(F, pres)
    return F


def f_ab(setup, family=None, dmax=DEFAULT_DMAX):
    """F_ab(mu) on B x FlT(r; N): per-root Novikov grading, no Weyl factor.

    For one level the coefficients are computed in H*(B x (P^(N-1))^r)
    (root exponents capped at N-1); the ``target_ring`` stored in ``meta``
    is the uncapped ring used by the g/t modification."""
    family = _resolve_family(family, setup)
    rs, N = setup.rs, setup.N
    dim = setup.base_dim + toric_flag_dimension(N, rs)
    roots = [root_name(m, i) for m, i in flat_roots(rs)]
    caps = {h: N - 1 for h in roots} if len(rs) == 1 else {}
    ring = _engine_ring(setup, dim, 0, extra=("mu",), caps=caps)
    ev = PolyEvaluator(ring, {"Q": setup.chern_Q(ring)})
    coeffs = {}
    nb = 1 if setup.base_dim else 0
    for total_deg in range(dmax + 1):
        for v in compositions(total_deg, nb + len(roots)):
            base, kflat = v[:nb], v[nb:]
            fam = substitute_lambda(family, _family_assignment(family, rs, kflat, ring, mu=True), ring, base)
            if not fam:
                continue
            _, factors = _twisted_summand(rs, kflat, N, weyl=False)
            val = fam * ev.evaluate(factors)
            if val:
                coeffs[MultiDeg(base, kflat)] = val
    gdim = setup.base_dim + flag_dimension(N, rs)
    headroom = sum(r * (r - 1) // 2 for r in rs)
    target = _engine_ring(setup, gdim, headroom, extra=("mu",))
    return CoeffSeries("abelian", "poly", space_name(setup, N).replace("Fl(", "FlT("), coeffs, rs, dmax,
                       meta={"poly_ring": ring, "target_ring": target, "constructor": "f_ab"})
