"""Truncated Novikov series with cohomology-valued coefficients.

Coefficients are indexed by ``MultiDeg`` (base curve degrees plus fiber
degrees: one entry per Chern root on the abelian side, one per level on the
nonabelian side).  The dependence on the divisor coordinates ``t`` is kept
implicit: the coefficient of ``q^k`` carries ``exp((k + H/z) t)``, so
``z d/dt`` acts on it as multiplication by ``H + k z``.

Coefficient kinds:

* ``poly``: a Poly in formal roots, base classes, parameters and ``z``,
* ``vec``: basis label -> Poly in parameters and ``z`` (reduced classes),
* ``frac``: a ParamRat in formal roots, equivariant parameters and ``z``,
* ``points``: fixed point -> ParamRat in equivariant parameters and ``z``.
"""
from dataclasses import dataclass, field, replace
from functools import total_ordering
from math import factorial

from .algebra.paramrat import ParamRat
from .algebra.poly import PolyRing
from .algebra.zlaurent import ZLaurent
from .rings import restrict, root_name

DEFAULT_DMAX = 3
DEFAULT_ZWIN = (-12, 6)
DEFAULT_MINV = 6


@total_ordering
@dataclass(frozen=True)
class MultiDeg:
    base: tuple = ()
    fiber: tuple = ()

    def __post_init__(self):
        if any(x < 0 for x in self.base + self.fiber):
            raise ValueError("negative degree")

    @property
    def total(self):
        return sum(self.base) + sum(self.fiber)

    def key(self):
        return (self.total, self.base, self.fiber)

    def __lt__(self, other):
        return self.key() < other.key()

    def __add__(self, other):
        return MultiDeg(_vadd(self.base, other.base), _vadd(self.fiber, other.fiber))

    def __sub__(self, other):
        return MultiDeg(_vsub(self.base, other.base), _vsub(self.fiber, other.fiber))

    def ge(self, other):
        return (all(a >= b for a, b in zip(self.base, other.base))
                and all(a >= b for a, b in zip(self.fiber, other.fiber)))

    def label(self):
        return "B(" + ",".join(map(str, self.base)) + ")K(" + ",".join(map(str, self.fiber)) + ")"

    @staticmethod
    def parse(s):
        b, k = s[2:].split(")K(")
        k = k.rstrip(")")
        return MultiDeg(tuple(int(x) for x in b.split(",") if x), tuple(int(x) for x in k.split(",") if x))

    def __repr__(self):
        return f"MultiDeg({self.label()})"


def _vadd(a, b):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return tuple(x - y for x, y in zip(a, b))


def degrees_up_to(dmax, nbase, nfiber):
    """All MultiDegs with total <= dmax, sorted."""
    out = []
    for total in range(dmax + 1):
        for v in _compositions(total, nbase + nfiber):
            out.append(MultiDeg(v[:nbase], v[nbase:]))
    return sorted(out)


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def compositions(total, parts):
    return list(_compositions(total, parts))


def flat_roots(rs):
    """``[(m, i)]`` in the order used by abelian fiber degrees."""
    return [(m + 1, i + 1) for m, r in enumerate(rs) for i in range(r)]


@dataclass
class CoeffSeries:
    side: str
    kind: str
    ring: object
    coeffs: dict
    levels: tuple = ()
    dmax: int = DEFAULT_DMAX
    zwin: tuple = DEFAULT_ZWIN
    minv: int = DEFAULT_MINV
    tconv: bool = True
    t_data: dict = None
    meta: dict = field(default_factory=dict)

    def degrees(self):
        return sorted(self.coeffs)

    def __getitem__(self, d):
        return self.coeffs[d]

    def with_coeffs(self, coeffs, **kw):
        return replace(self, coeffs=coeffs, **kw)

    def ring_name(self):
        r = self.ring
        return getattr(r, "name", None) or str(r)


# ---------------------------------------------------------------------------
# value-level helpers
# ---------------------------------------------------------------------------

def value_is_zero(kind, v):
    if kind in ("poly", "frac"):
        return v.is_zero()
    if kind in ("vec", "points"):
        return all(x.is_zero() for x in v.values())
    raise ValueError(kind)


def value_add(kind, a, b):
    if kind in ("poly", "frac"):
        return a + b
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def value_scale(kind, a, c):
    if kind in ("poly", "frac"):
        return a * c
    return {k: v * c for k, v in a.items()}


def value_mul(kind, a, b, ringspec=None):
    if kind in ("poly", "frac"):
        return a * b
    if kind == "points":
        return {p: a[p] * b[p] for p in a if p in b}
    if kind == "vec":
        if ringspec is None:
            raise ValueError("vec multiplication needs a RingSpec")
        idx = {l: i for i, l in enumerate(ringspec.labels)}
        out = {}
        for la, ca in a.items():
            for lb, cb in b.items():
                for k, c in ringspec.structure.get((idx[la], idx[lb]), {}).items():
                    lab = ringspec.labels[k]
                    v = (ca * cb).scale(c)
                    out[lab] = out[lab] + v if lab in out else v
        return {k: v for k, v in out.items() if v}
    raise ValueError(kind)


def combine(op, A, B):
    """Sum or Cauchy product of two series (truncated at the common dmax)."""
    if (A.side, A.kind) != (B.side, B.kind):
        raise ValueError("incompatible series")
    if A.ring is not B.ring and A.ring_name() != B.ring_name():
        raise ValueError("ring mismatch")
    dmax = min(A.dmax, B.dmax)
    out = {}
    if op == "add":
        for d in set(A.coeffs) | set(B.coeffs):
            if d.total > dmax:
                continue
            if d in A.coeffs and d in B.coeffs:
                v = value_add(A.kind, A.coeffs[d], B.coeffs[d])
            else:
                v = A.coeffs.get(d, B.coeffs.get(d))
            if not value_is_zero(A.kind, v):
                out[d] = v
    elif op == "mul":
        rs = A.ring if A.kind == "vec" else None
        for da, va in A.coeffs.items():
            for db, vb in B.coeffs.items():
                d = da + db
                if d.total > dmax:
                    continue
                v = value_mul(A.kind, va, vb, rs)
                out[d] = value_add(A.kind, out[d], v) if d in out else v
        out = {d: v for d, v in out.items() if not value_is_zero(A.kind, v)}
    else:
        raise ValueError(op)
    return A.with_coeffs(out, dmax=dmax)


# ---------------------------------------------------------------------------
# lambda families
# ---------------------------------------------------------------------------

@dataclass
class LambdaFamily:
    """A polynomial in the lambda parameters ``lam{m}_{i}`` with coefficients
    indexed by base degree (Poly over a ring containing lambdas, base
    classes and z)."""
    ring: PolyRing
    coeffs: dict            # base-degree tuple -> Poly
    lam: tuple              # lambda names
    levels: tuple = ()

    def is_weyl_invariant(self):
        for m, r in enumerate(self.levels):
            names = [f"lam{m + 1}_{i + 1}" for i in range(r)]
            names = [n for n in names if n in self.ring.index]
            for p in self.coeffs.values():
                if not p.is_symmetric(names):
                    return False
        return True

    def lambda_degree(self):
        return max((sum(e[self.ring.index[n]] for n in self.lam if n in self.ring.index)
                    for p in self.coeffs.values() for e, _ in p.items()), default=0)


def constant_family(ring=None):
    ring = ring or PolyRing(("z",), laurent=("z",))
    return LambdaFamily(ring, {(): ring.one}, ())


def substitute_lambda(F, assignment, ring, base_degree=()):
    """Evaluate the family's coefficient at ``base_degree`` with
    ``lam -> assignment[lam]`` (Polys in ``ring``)."""
    p = F.coeffs.get(tuple(base_degree))
    if p is None:
        return ring.zero
    vals = {n: assignment[n] for n in F.lam if n in assignment}
    missing = [n for n in F.lam if n not in vals and p.degree(n) > 0]
    if missing:
        raise KeyError(f"no value for {missing}")
    return p.subs(vals, ring)


# ---------------------------------------------------------------------------
# divisor operators and Novikov specialization
# ---------------------------------------------------------------------------

def _divisor_multiplier(F, sym, d, point=None):
    """The multiplier by which a divisor derivative acts on the degree-d
    coefficient (as a value compatible with F.kind)."""
    tag = sym[0]
    if F.kind == "points":
        G = F.meta["gkm"]
        names = G.params + ("z",)
        z = ParamRat.var("z", names)
        if tag == "t":
            m = sym[1]
            r = F.levels[m - 1]
            H = sum((G.assign[point][root_name(m, i + 1)] for i in range(r)), ParamRat.const(0, names))
            return H + z * d.fiber[m - 1]
        raise ValueError("base divisors need a base class")
    if F.kind == "frac":
        names = F.meta.get("params", ())
        z = ParamRat.var("z", tuple(names) + ("z",))
        if tag == "t" and len(sym) == 3:
            m, i = sym[1], sym[2]
            pos = flat_roots(F.levels).index((m, i))
            H = ParamRat.var(root_name(m, i), tuple(names) + (root_name(m, i),))
            return H + z * d.fiber[pos]
        if tag == "t":
            m = sym[1]
            r = F.levels[m - 1]
            H = sum((ParamRat.var(root_name(m, i + 1), tuple(names) + (root_name(m, i + 1),))
                     for i in range(r)), ParamRat.const(0, names))
            return H + z * d.fiber[m - 1]
        if tag == "c1":
            a = sym[1]
            HB = ParamRat.var("HB", tuple(names) + ("HB",))
            return (HB + z * d.base[0]) * a
        raise ValueError(sym)
    if F.kind == "poly":
        R = F.meta["poly_ring"]
        z = R.gen("z")
        if tag == "t" and len(sym) == 3:
            m, i = sym[1], sym[2]
            pos = flat_roots(F.levels).index((m, i))
            return R.gen(root_name(m, i)) + z * d.fiber[pos]
        if tag == "t":
            m = sym[1]
            H = sum((R.gen(root_name(m, i + 1)) for i in range(F.levels[m - 1])), R.zero)
            return H + z * d.fiber[m - 1]
        if tag == "c1":
            return (R.gen("HB") + z * d.base[0]) * sym[1]
        raise ValueError(sym)
    raise ValueError(f"divisor operators not supported on kind {F.kind}")


def divisor_op_apply(F, P):
    """Apply a polynomial in divisor derivatives.

    ``P`` maps a tuple of operator symbols to a scalar coefficient; symbols
    are ``("t", m, i)`` (abelian root direction), ``("t", m)`` (level
    direction) and ``("c1", a)`` (``z d/d(tau)`` along ``a * HB``).
    """
    if not F.tconv:
        raise ValueError("divisor operators need the t-convention")
    out = {}
    for d, v in F.coeffs.items():
        total = None
        for word, coeff in P.items():
            if F.kind == "points":
                term = {}
                for p, x in v.items():
                    y = x
                    for sym in word:
                        y = y * _divisor_multiplier(F, sym, d, p)
                    term[p] = y * coeff
            else:
                term = v
                for sym in word:
                    term = term * _divisor_multiplier(F, sym, d)
                term = term * coeff
            total = term if total is None else value_add(F.kind, total, term)
        if total is not None and not value_is_zero(F.kind, total):
            out[d] = total
    return F.with_coeffs(out)


def specialize_novikov(F, signs=None):
    """Abelian -> nonabelian Novikov grading: sum coefficients over root
    degrees with equal level sums, scaled by ``prod_m signs[m]^k^(m)``."""
    if F.side != "abelian":
        raise ValueError("abelian input expected")
    rs = F.levels
    signs = signs or (1,) * len(rs)
    out = {}
    for d, v in F.coeffs.items():
        pos = 0
        sums = []
        for r in rs:
            sums.append(sum(d.fiber[pos:pos + r]))
            pos += r
        s = 1
        for sg, k in zip(signs, sums):
            s *= sg ** k
        nd = MultiDeg(d.base, tuple(sums))
        val = value_scale(F.kind, v, s) if s != 1 else v
        out[nd] = value_add(F.kind, out[nd], val) if nd in out else val
    out = {d: v for d, v in out.items() if not value_is_zero(F.kind, v)}
    return F.with_coeffs(out, side="nonabelian")


def fixed_point_restrict_series(F, G, alpha):
    """Restrict every coefficient of a closed-form series to a fixed point."""
    if F.kind == "points":
        return {d: v[alpha] for d, v in F.coeffs.items()}
    if F.kind not in ("frac", "poly"):
        raise ValueError("closed-form series expected")
    return {d: restrict(v, G, alpha) for d, v in F.coeffs.items()}


def to_points(F, G):
    """Whole-series restriction to all fixed points."""
    from .parallel import pmap
    coeffs = {d: {} for d in F.coeffs}
    for p, vals in zip(G.points, pmap(lambda p: fixed_point_restrict_series(F, G, p), G.points)):
        for d, v in vals.items():
            coeffs[d][p] = v
    meta = dict(F.meta)
    meta["gkm"] = G
    return F.with_coeffs(coeffs, kind="points", meta=meta)


# ---------------------------------------------------------------------------
# explicit t-data (finite order) for the divisor equation
# ---------------------------------------------------------------------------

def materialize_t(F, order):
    """Expand the implicit ``exp((k + H/z) t)`` factors to total t-order
    ``order``: returns ``{(MultiDeg, t-exponents): value}`` with one t per
    abelian root (or per level on the nonabelian side)."""
    if F.kind != "frac":
        raise ValueError("explicit t-data is produced for closed-form series")
    dirs = _directions(F)
    out = {}
    names = F.meta.get("params", ())
    z = ParamRat.var("z", tuple(names) + ("z",))
    for d, v in F.coeffs.items():
        mult = [_divisor_multiplier(F, sym, d) / z for sym in dirs]
        for texp in _exponent_vectors(len(dirs), order):
            val = v
            for mu, e in zip(mult, texp):
                if e:
                    val = val * mu ** e / factorial(e)
            out[(d, texp)] = val
    return out


def _directions(F):
    if F.side == "abelian":
        return [("t", m, i) for m, i in flat_roots(F.levels)]
    return [("t", m + 1) for m in range(len(F.levels))]


def _exponent_vectors(n, order):
    out = []
    for total in range(order + 1):
        out.extend(_compositions(total, n))
    return out


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def poly_to_zlaurent(p, window, zname="z"):
    """Split a Poly by powers of ``z``: ZLaurent with Poly coefficients."""
    pieces = {e[0]: c for e, c in p.split((zname,)).items()}
    return ZLaurent(pieces, window)


def vec_to_zlaurent(v, window, zname="z"):
    return {lab: poly_to_zlaurent(c, window, zname) for lab, c in v.items()}
