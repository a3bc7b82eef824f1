"""Cohomology rings: truncated presentations, structure-constant tables and
equivariant GKM models of partial flag varieties and their abelian quotients.

Naming conventions for variables shared with the series engine:

* ``H{m}_{i}``: i-th Chern root of the dual tautological bundle at level m
  (for a single level, ``H1_1, H1_2, ...``),
* ``HB``: hyperplane class of a projective-space base,
* ``nu{j}``: equivariant parameters of the ambient torus,
* ``z``: the loop parameter (Laurent variable).
"""
from dataclasses import dataclass, field
from itertools import combinations, product

from .algebra.paramrat import ParamRat, canonical_order
from .algebra.poly import Poly, PolyRing
from .algebra.rational import ONE, ZERO, as_rational
from .algebra.schur import partition_label, partitions_in_box, schur_polynomial, schur_reduce

MAX_BASIS = 10_000


def root_name(m, i):
    return f"H{m}_{i}"


def nu_name(j):
    return f"nu{j}"


def validate_levels(N, rs):
    rs = tuple(int(r) for r in rs)
    if not rs or any(b <= a for a, b in zip(rs, rs[1:])) or rs[0] < 1 or rs[-1] >= N:
        raise ValueError(f"invalid flag data N={N}, r={rs}")
    return rs


def flag_dimension(N, rs):
    ext = tuple(rs) + (N,)
    return sum(ext[m] * (ext[m + 1] - ext[m]) for m in range(len(rs)))


def toric_flag_dimension(N, rs):
    ext = tuple(rs) + (N,)
    return sum(ext[m] * (ext[m + 1] - 1) for m in range(len(rs)))


# ---------------------------------------------------------------------------
# presentations: reduce engine polynomials to basis coordinates
# ---------------------------------------------------------------------------

class BaseFactor:
    """pt or P^b, generated by ``HB`` with ``HB^(b+1) = 0``."""

    def __init__(self, b=0):
        self.b = int(b)
        self.dim = self.b
        self.vars = ("HB",) if self.b else ()

    @property
    def name(self):
        return "pt" if not self.b else f"P{self.b}"

    def caps(self):
        return {"HB": self.b} if self.b else {}

    def basis(self):
        return [(a, "" if a == 0 else ("HB" if a == 1 else f"HB^{a}")) for a in range(self.b + 1)]

    def split(self, poly):
        if not self.b:
            return {0: poly}
        return {e[0]: c for e, c in poly.split(("HB",)).items()}


class GrassmannFiber:
    def __init__(self, r, n, level=1):
        self.r, self.n = int(r), int(n)
        self.roots = tuple(root_name(level, i + 1) for i in range(self.r))
        self.dim = self.r * (self.n - self.r)
        self.vars = self.roots
        self.weyl_headroom = self.r * (self.r - 1) // 2

    def labels(self):
        return [(sum(l), partition_label(l), l) for l in partitions_in_box(self.r, self.n - self.r)]

    def representative(self, key, ring):
        return schur_polynomial(key, ring, self.roots)

    def reduce(self, poly):
        sv = schur_reduce(poly, self.roots, self.n, scalar=False)
        return {partition_label(l): c for l, c in sv.entries.items()}


class ProjectiveBundleFiber:
    """P(V) for V of rank n over the base: ``sum_j c_j(V) H^(n-j) = 0``."""

    def __init__(self, chern, level=1):
        self.chern = list(chern)
        self.n = len(self.chern) - 1
        self.H = root_name(level, 1)
        self.roots = (self.H,)
        self.vars = self.roots
        self.dim = self.n - 1
        self.weyl_headroom = 0

    def labels(self):
        return [(b, "1" if b == 0 else (self.H if b == 1 else f"{self.H}^{b}"), b)
                for b in range(self.n)]

    def representative(self, key, ring):
        return ring.gen(self.H, key)

    def reduce(self, poly):
        ring = poly.ring
        cj = [c.convert(ring) if isinstance(c, Poly) else ring.const(c) for c in self.chern]
        pieces = {e[0]: c for e, c in poly.split((self.H,)).items()}
        top = max(pieces, default=0)
        for e in range(top, self.n - 1, -1):
            c = pieces.pop(e, None)
            if not c:
                continue
            for j in range(1, self.n + 1):
                if cj[j]:
                    pieces[e - j] = pieces.get(e - j, ring.zero) - c * cj[j]
        labels = {b: lab for b, lab, _ in self.labels()}
        return {labels[b]: c for b, c in pieces.items() if c}


class ProductOfProjectiveFiber:
    """(P^(N-1))^r: the abelian quotient of Gr(r, N) (a single level)."""

    def __init__(self, r, N, level=1):
        self.r, self.N = int(r), int(N)
        self.roots = tuple(root_name(level, i + 1) for i in range(self.r))
        self.vars = self.roots
        self.dim = self.r * (self.N - 1)
        self.weyl_headroom = 0

    def caps(self):
        return {h: self.N - 1 for h in self.roots}

    def labels(self):
        out = []
        for exps in product(range(self.N), repeat=self.r):
            lab = "*".join(h if e == 1 else f"{h}^{e}" for h, e in zip(self.roots, exps) if e) or "1"
            out.append((sum(exps), lab, exps))
        return out

    def representative(self, key, ring):
        return ring.monomial(dict(zip(self.roots, key)))

    def reduce(self, poly):
        labels = {k: lab for _, lab, k in self.labels()}
        return {labels[e]: c for e, c in poly.split(self.roots).items()
                if all(x < self.N for x in e)}


class Presentation:
    """Base x fiber, with a reduction map from the engine's polynomial ring
    to coordinates in a fixed basis."""

    def __init__(self, base, fiber):
        self.base = base
        self.fiber = fiber
        self.dim = base.dim + (fiber.dim if fiber else 0)
        self.class_vars = tuple(base.vars) + (tuple(fiber.vars) if fiber else ())

    def caps(self):
        c = dict(self.base.caps())
        if self.fiber is not None and hasattr(self.fiber, "caps"):
            c.update(self.fiber.caps())
        return c

    def basis(self):
        out = []
        flabs = self.fiber.labels() if self.fiber else [(0, "1", None)]
        for a, blab in self.base.basis():
            for fd, flab, key in flabs:
                lab = _join_label(blab, flab)
                out.append((lab, a + fd, (a, key)))
        out.sort(key=lambda t: t[1])
        return out

    def representative(self, key, ring):
        a, fkey = key
        p = ring.gen("HB", a) if a else ring.one
        if self.fiber is not None:
            p = p * self.fiber.representative(fkey, ring)
        return p

    def reduce(self, poly):
        """``{label: Poly}`` where each Poly is free of class variables."""
        pieces = self.fiber.reduce(poly) if self.fiber else {"1": poly}
        out = {}
        for flab, c in pieces.items():
            for a, cc in self.base.split(c).items():
                if a > self.base.b:
                    continue
                blab = dict(self.base.basis())[a]
                lab = _join_label(blab, flab)
                out[lab] = out.get(lab, cc.ring.zero) + cc
        return {k: v for k, v in out.items() if v}


def _join_label(blab, flab):
    if not blab:
        return flab
    if flab == "1":
        return blab
    return f"{blab}*{flab}"


# ---------------------------------------------------------------------------
# RingSpec / CohClass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    source: tuple
    target: tuple
    weight: ParamRat      # tangent weight at the source
    rho: ParamRat         # conormal weight = pole location numerator
    d: tuple              # curve class, one entry per level (or per (m, i))


@dataclass
class GKMGraph:
    variant: str
    N: int
    rs: tuple
    points: list
    assign: dict          # point -> {root name: ParamRat}
    edges: dict           # point -> [Edge]
    tangent: dict         # point -> [ParamRat]
    euler: dict           # point -> ParamRat
    params: tuple
    dim: int

    def label(self, p):
        return point_label(self.variant, p)

    def adjacent(self, p):
        return self.edges[p]


def point_label(variant, p):
    if variant == "Fl":
        return "<".join("{" + ",".join(str(x) for x in A) + "}" for A in p)
    return "phi" + "".join("(" + ",".join(str(x) for x in phi) + ")" for phi in p)


@dataclass
class RingSpec:
    kind: str
    name: str
    labels: tuple = ()
    degrees: tuple = ()
    structure: dict = field(default_factory=dict)
    unit: int = 0
    integration: tuple = ()
    divisors: dict = field(default_factory=dict)
    chern: dict = field(default_factory=dict)
    gkm: GKMGraph = None
    presentation: Presentation = None

    @property
    def size(self):
        return len(self.labels) if self.kind == "table" else len(self.gkm.points)

    def index(self, label):
        return self.labels.index(label)

    def cls(self, data):
        return CohClass(self, dict(data))

    def basis_class(self, label):
        return CohClass(self, {label: ONE})

    def unit_class(self):
        if self.kind == "gkm":
            return CohClass(self, {p: ParamRat.const(1, self.gkm.params) for p in self.gkm.points})
        return self.basis_class(self.labels[self.unit])

    def top_label(self):
        d = max(self.degrees)
        tops = [l for l, dd in zip(self.labels, self.degrees) if dd == d]
        return tops[0]


class CohClass:
    __slots__ = ("ring", "data")

    def __init__(self, ring, data):
        self.ring = ring
        self.data = {k: v for k, v in data.items() if not _zero(v)}

    def __eq__(self, other):
        return isinstance(other, CohClass) and self.ring is other.ring and self.data == other.data

    def __add__(self, other):
        _same(self, other)
        out = dict(self.data)
        for k, v in other.data.items():
            out[k] = out[k] + v if k in out else v
        return CohClass(self.ring, out)

    def scale(self, c):
        return CohClass(self.ring, {k: v * c for k, v in self.data.items()})

    def __repr__(self):
        return "CohClass(" + ", ".join(f"{k}: {v}" for k, v in self.data.items()) + ")"


def _zero(v):
    if isinstance(v, (ParamRat, Poly)):
        return v.is_zero()
    return not v


def _same(a, b):
    if a.ring is not b.ring:
        raise ValueError("ring mismatch")


def cup(R, a, b):
    """Cup product (pointwise for GKM rings)."""
    if a.ring is not R or b.ring is not R:
        raise ValueError("ring mismatch")
    if R.kind == "gkm":
        return CohClass(R, {p: a.data[p] * b.data[p] for p in a.data if p in b.data})
    out = {}
    idx = {l: i for i, l in enumerate(R.labels)}
    for la, ca in a.data.items():
        for lb, cb in b.data.items():
            for k, c in R.structure.get((idx[la], idx[lb]), {}).items():
                lab = R.labels[k]
                v = ca * cb * c
                out[lab] = out[lab] + v if lab in out else v
    return CohClass(R, out)


def integrate(R, a, expect_polynomial=False):
    """Integration: the pairing vector for tables, localization for GKM."""
    if R.kind == "gkm":
        G = R.gkm
        total = ParamRat.const(0, G.params)
        for p in G.points:
            v = a.data.get(p)
            if v is not None:
                total = total + v / G.euler[p]
        if expect_polynomial and not total.is_polynomial():
            raise ArithmeticError("localization sum did not cancel denominators")
        return total
    total = ZERO
    for lab, c in a.data.items():
        w = R.integration[R.index(lab)]
        if w:
            total = total + c * w
    return total


def chern_product_eval(c, X, shift):
    """``sum_j c_j (X + shift)^(rank - j)``, i.e. the product of
    ``X + delta + shift`` over the Chern roots delta of a bundle with total
    Chern class ``c = (1, c_1, ..., c_rank)``."""
    rank = len(c) - 1
    if rank < 0 or not _is_one(c[0]):
        raise ValueError("Chern list must start with c_0 = 1")
    base = X + shift
    total = None
    power = None
    for j in range(rank, -1, -1):
        power = (base ** 0 if hasattr(base, "__pow__") else 1) if power is None else power * base
        term = power * c[j] if not isinstance(c[j], (int,)) else power * as_rational(c[j])
        total = term if total is None else total + term
    return total


def _is_one(x):
    if isinstance(x, Poly):
        return x == x.ring.one
    if isinstance(x, ParamRat):
        return x == 1
    return x == 1


def _table_from_presentation(name, pres, chern=None):
    basis = pres.basis()
    if len(basis) > MAX_BASIS:
        raise OverflowError("basis too large")
    names = pres.class_vars
    weights = {v: 1 for v in names}
    R = PolyRing(names, weights, pres.caps(), pres.dim)
    reps = [pres.representative(key, R) for _, _, key in basis]
    labels = tuple(l for l, _, _ in basis)
    idx = {l: i for i, l in enumerate(labels)}
    structure = {}
    for i, j in product(range(len(basis)), repeat=2):
        if j < i:
            if (j, i) in structure:
                structure[(i, j)] = structure[(j, i)]
            continue
        red = pres.reduce(reps[i] * reps[j])
        entry = {idx[l]: c.constant_term() for l, c in red.items() if c.constant_term()}
        if entry:
            structure[(i, j)] = entry
    top = max(range(len(basis)), key=lambda k: basis[k][1])
    integration = tuple(ONE if k == top else ZERO for k in range(len(basis)))
    spec = RingSpec("table", name, labels, tuple(d for _, d, _ in basis), structure,
                    idx[basis[0][0]], integration, chern=chern or {}, presentation=pres)
    return spec


def check_associativity(R):
    """All basis triples; returns the list of failures."""
    bad = []
    n = len(R.labels)
    if n > 50:
        return bad
    b = [R.basis_class(l) for l in R.labels]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if cup(R, cup(R, b[i], b[j]), b[k]) != cup(R, b[i], cup(R, b[j], b[k])):
                    bad.append((R.labels[i], R.labels[j], R.labels[k]))
    return bad


# ---------------------------------------------------------------------------
# GKM data
# ---------------------------------------------------------------------------

def _chains(N, rs):
    out = []

    def rec(prev, m):
        if m == len(rs):
            out.append(tuple(tuple(sorted(A)) for A in prev))
            return
        base = set(prev[-1]) if prev else set()
        rest = [x for x in range(1, N + 1) if x not in base]
        for add in combinations(rest, rs[m] - len(base)):
            rec(prev + [tuple(sorted(base | set(add)))], m + 1)
    rec([], 0)
    return sorted(out)


def gkm_data(N, rs, variant="Fl", twisted=True):
    """GKM graph of Fl(r_1 < ... < r_l; N) (``variant='Fl'``) or of its
    abelian quotient (``variant='FlT'``).

    Tangent weights at a fixed point are restrictions of the normal
    directions; ``rho`` is their negative, the location (times a) of the
    poles of restricted cone points.  For FlT the torus is extended by one
    parameter ``eta{m}_{i}`` per root so that fixed points are isolated
    (set ``twisted=False`` for the bare torus, where some weights vanish).
    """
    rs = validate_levels(N, rs)
    l = len(rs)
    nus = [nu_name(j) for j in range(1, N + 1)]
    if variant == "Fl":
        params = tuple(nus)
        nu = {j: ParamRat.var(nu_name(j), params) for j in range(1, N + 1)}
        points = _chains(N, rs)
        assign, edges, tangent, euler = {}, {}, {}, {}
        for p in points:
            assign[p] = {root_name(m + 1, i + 1): nu[a] for m, A in enumerate(p) for i, a in enumerate(A)}
            level_of = {}
            for x in range(1, N + 1):
                level_of[x] = next((m for m, A in enumerate(p) if x in A), l)
            elist = []
            for a, b in combinations(range(1, N + 1), 2):
                if level_of[a] == level_of[b]:
                    continue
                x, y = (a, b) if level_of[a] < level_of[b] else (b, a)
                swap = {x: y, y: x}
                q = tuple(tuple(sorted(swap.get(e, e) for e in A)) for A in p)
                d = tuple(1 if level_of[x] <= m < level_of[y] else 0 for m in range(l))
                w = nu[x] - nu[y]
                elist.append(Edge(p, q, w, -w, d))
            edges[p] = elist
            tangent[p] = [e.weight for e in elist]
            euler[p] = _prod(tangent[p], params)
        dim = flag_dimension(N, rs)
        return GKMGraph("Fl", N, rs, points, assign, edges, tangent, euler, params, dim)
    if variant != "FlT":
        raise ValueError(f"unknown variant {variant}")
    ext = rs + (N,)
    etas = [f"eta{m + 1}_{i + 1}" for m in range(l) for i in range(rs[m])] if twisted else []
    params = tuple(canonical_order(tuple(nus) + tuple(etas)))
    points = sorted(product(*[list(product(range(1, ext[m + 1] + 1), repeat=ext[m])) for m in range(l)]))
    assign, edges, tangent, euler = {}, {}, {}, {}

    def restrict_point(p):
        vals = {}
        for j in range(1, N + 1):
            vals[(l + 1, j)] = ParamRat.var(nu_name(j), params)
        for m in range(l, 0, -1):
            for i in range(1, ext[m - 1] + 1):
                v = vals[(m + 1, p[m - 1][i - 1])]
                if twisted:
                    v = v + ParamRat.var(f"eta{m}_{i}", params)
                vals[(m, i)] = v
        return vals

    nflat = sum(rs)
    for p in points:
        vals = restrict_point(p)
        assign[p] = {root_name(m, i): vals[(m, i)] for m in range(1, l + 1) for i in range(1, ext[m - 1] + 1)}
        elist = []
        flat = 0
        for m in range(1, l + 1):
            for i in range(1, ext[m - 1] + 1):
                cur = p[m - 1][i - 1]
                for j in range(1, ext[m] + 1):
                    if j == cur:
                        continue
                    phi = list(p[m - 1])
                    phi[i - 1] = j
                    q = p[:m - 1] + (tuple(phi),) + p[m:]
                    w = vals[(m + 1, cur)] - vals[(m + 1, j)]
                    d = tuple(1 if k == flat else 0 for k in range(nflat))
                    elist.append(Edge(p, q, w, -w, d))
                flat += 1
        edges[p] = elist
        tangent[p] = [e.weight for e in elist]
        euler[p] = _prod(tangent[p], params)
    dim = toric_flag_dimension(N, rs)
    return GKMGraph("FlT", N, rs, points, assign, edges, tangent, euler, params, dim)


def _prod(xs, params):
    out = ParamRat.const(1, params)
    for x in xs:
        out = out * x
    return out


def restrict(expr, G, alpha):
    """Restriction of a polynomial (Poly in roots and other variables, or a
    ParamRat in roots) to a fixed point: substitutes the point's values for
    the roots and returns a ParamRat."""
    vals = G.assign[alpha]
    if isinstance(expr, ParamRat):
        if not expr.is_polynomial():
            den = expr.denom_poly().subs(vals)
            if den.is_zero():
                raise ZeroDivisionError("denominator vanishes at the fixed point")
        return expr.subs(vals)
    if isinstance(expr, Poly):
        names = [n for n in expr.ring.names if n not in vals]
        total = ParamRat.const(0, tuple(G.params) + tuple(names))
        cache = {}
        for exps, c in expr.items():
            term = ParamRat.const(c, total.F.names)
            for n, e in zip(expr.ring.names, exps):
                if not e:
                    continue
                key = (n, e)
                pw = cache.get(key)
                if pw is None:
                    base = vals[n] if n in vals else ParamRat.var(n, total.F.names)
                    pw = cache[key] = base ** e
                term = term * pw
            total = total + term
        return total
    return ParamRat.const(expr, G.params)


# ---------------------------------------------------------------------------
# build_ring
# ---------------------------------------------------------------------------

def build_ring(kind, *args, **params):
    """Construct a RingSpec.

    kinds: ``point``, ``projective(n)``, ``grassmann(r, n)``,
    ``product(R1, R2)`` (table rings built from presentations),
    ``projective_bundle(b, degrees)`` (P(sum O(a_j)) over P^b),
    ``gkm_flag(N, rs)``, ``gkm_toric_flag(N, rs)``.
    """
    if kind == "point":
        return _table_from_presentation("pt", Presentation(BaseFactor(0), None))
    if kind == "projective":
        n = int(args[0] if args else params["n"])
        return _table_from_presentation(f"P{n}", Presentation(BaseFactor(n), None))
    if kind == "grassmann":
        r, n = (args if args else (params["r"], params["n"]))
        if not 0 < r < n:
            raise ValueError("need 0 < r < n")
        pres = Presentation(BaseFactor(params.get("base", 0)), GrassmannFiber(r, n))
        return _table_from_presentation(f"Gr({r},{n})", pres)
    if kind == "projective_bundle":
        b, degrees = (args if args else (params["b"], params["degrees"]))
        ring = PolyRing(("HB",), {"HB": 1}, {"HB": b})
        chern = split_chern(degrees, ring)
        pres = Presentation(BaseFactor(b), ProjectiveBundleFiber(chern))
        return _table_from_presentation(f"P(V)/P{b}", pres, chern={"V": chern})
    if kind == "product":
        R1, R2 = args
        return product_ring(R1, R2)
    if kind == "gkm_flag":
        N, rs = (args if args else (params["N"], params["rs"]))
        G = gkm_data(N, rs, "Fl")
        return RingSpec("gkm", f"Fl({','.join(map(str, rs))};{N})", gkm=G)
    if kind == "gkm_toric_flag":
        N, rs = (args if args else (params["N"], params["rs"]))
        G = gkm_data(N, rs, "FlT", twisted=params.get("twisted", True))
        return RingSpec("gkm", f"FlT({','.join(map(str, rs))};{N})", gkm=G)
    raise ValueError(f"unknown ring kind {kind}")


def product_ring(R1, R2):
    if R1.kind != "table" or R2.kind != "table":
        raise ValueError("product of table rings only")
    labels, degrees, pairs = [], [], []
    for i, (l1, d1) in enumerate(zip(R1.labels, R1.degrees)):
        for j, (l2, d2) in enumerate(zip(R2.labels, R2.degrees)):
            labels.append(_join_label("" if l1 == "1" else l1, l2))
            degrees.append(d1 + d2)
            pairs.append((i, j))
    if len(labels) > MAX_BASIS:
        raise OverflowError("basis too large")
    pos = {p: k for k, p in enumerate(pairs)}
    structure = {}
    for a, (i1, j1) in enumerate(pairs):
        for b, (i2, j2) in enumerate(pairs):
            s1 = R1.structure.get((i1, i2), {})
            s2 = R2.structure.get((j1, j2), {})
            entry = {}
            for k1, c1 in s1.items():
                for k2, c2 in s2.items():
                    entry[pos[(k1, k2)]] = c1 * c2
            if entry:
                structure[(a, b)] = entry
    integration = tuple(R1.integration[i] * R2.integration[j] for i, j in pairs)
    return RingSpec("table", f"{R1.name}x{R2.name}", tuple(labels), tuple(degrees), structure,
                    pos[(R1.unit, R2.unit)], integration)


def split_chern(degrees, ring):
    """Total Chern class of ``sum_j O(a_j HB)`` as a list of Polys."""
    total = [ring.one]
    for a in degrees:
        lin = ring.gen("HB") * a if "HB" in ring.index else ring.zero
        new = [ring.zero] * (len(total) + 1)
        for j, c in enumerate(total):
            new[j] = new[j] + c
            new[j + 1] = new[j + 1] + c * lin
        total = new
    return total
