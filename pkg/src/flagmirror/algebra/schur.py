"""Schur polynomials and reduction into the cohomology of Grassmannians.

H*(Gr(r, n)) is the ring of symmetric polynomials in the r Chern roots
modulo s_lambda for every lambda not fitting in an r x (n - r) box.  A
symmetric polynomial is expanded in Schur polynomials by repeatedly
stripping the lex-leading monomial, whose exponent vector is a partition.
"""
from functools import lru_cache
from itertools import permutations

from .poly import Poly, PolyRing
from .rational import ZERO, as_rational


def partitions_in_box(rows, cols):
    """All partitions with at most ``rows`` parts, each at most ``cols``,
    ordered by size and then reverse-lexicographically."""
    out = []

    def rec(prefix, maxpart):
        if len(prefix) == rows:
            out.append(tuple(p for p in prefix if p))
            return
        for p in range(maxpart, -1, -1):
            rec(prefix + [p], p)
    rec([], cols)
    out = sorted(set(out), key=lambda lam: (sum(lam), tuple(-x for x in lam)))
    return out


def fits(lam, r, n):
    lam = tuple(p for p in lam if p)
    return len(lam) <= r and (not lam or lam[0] <= n - r)


def partition_label(lam):
    lam = tuple(p for p in lam if p)
    return "s(" + ",".join(str(p) for p in lam) + ")"


def _sign(perm):
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


@lru_cache(maxsize=None)
def _schur_terms(lam, r):
    names = tuple(f"x{i}" for i in range(r))
    R = PolyRing(names)
    lam = tuple(lam) + (0,) * (r - len(lam))
    alt = {}
    for perm in permutations(range(r)):
        exps = [0] * r
        for j in range(r):
            exps[perm[j]] = lam[j] + r - 1 - j
        alt[tuple(exps)] = alt.get(tuple(exps), 0) + _sign(perm)
    p = R.poly(alt)
    for i in range(r):
        for j in range(i + 1, r):
            p = p.divide_by_difference(names[i], names[j])
    return tuple(sorted(p.items()))


def schur_polynomial(lam, ring, roots):
    """s_lambda(roots) as a Poly in ``ring``."""
    r = len(roots)
    lam = tuple(p for p in lam if p)
    if len(lam) > r:
        return ring.zero
    data = {}
    idx = [ring.index[n] for n in roots]
    for exps, c in _schur_terms(lam, r):
        full = [0] * ring.nvars
        for i, e in zip(idx, exps):
            full[i] = e
        data[tuple(full)] = c
    return ring.poly(data)


class SchurVector:
    """Finite combination of s_lambda with lambda in the r x (n-r) box.
    Coefficients are rationals or ring elements (e.g. Polys in other
    variables)."""
    __slots__ = ("r", "n", "entries")

    def __init__(self, r, n, entries):
        self.r, self.n = r, n
        clean = {}
        for lam, c in entries.items():
            lam = tuple(p for p in lam if p)
            if not fits(lam, r, n):
                raise ValueError(f"partition {lam} outside the {r}x{n - r} box")
            if not _iszero(c):
                clean[lam] = c
        self.entries = clean

    def __eq__(self, other):
        return (isinstance(other, SchurVector) and (self.r, self.n) == (other.r, other.n)
                and self.entries == other.entries)

    def __repr__(self):
        return "SchurVector(" + ", ".join(f"{partition_label(l)}: {c}" for l, c in sorted(self.entries.items())) + ")"

    def is_zero(self):
        return not self.entries


def _iszero(c):
    if isinstance(c, Poly):
        return not c
    return not c


def schur_reduce(f, roots, n, check=True, scalar=None):
    """Expand a polynomial ``f`` symmetric in ``roots`` in Schur polynomials
    of the roots, dropping s_lambda outside the box.  Coefficients are Polys
    in the remaining variables (rationals if there are none)."""
    r = len(roots)
    ring = f.ring
    if check and not f.is_symmetric(roots):
        raise ValueError("input is not symmetric in the roots")
    pieces = f.split(roots)
    out = {}
    while pieces:
        lead = max(pieces)
        coeff = pieces[lead]
        lam = tuple(lead)
        if any(lam[i] < lam[i + 1] for i in range(r - 1)):
            raise ValueError("input is not symmetric in the roots")
        s = schur_polynomial(lam, ring, roots).split(roots)
        for exps, c in s.items():
            cst = c.constant_term()
            new = pieces.get(exps, ring.zero) - coeff.scale(cst)
            if new:
                pieces[exps] = new
            else:
                pieces.pop(exps, None)
        if fits(lam, r, n):
            key = tuple(p for p in lam if p)
            out[key] = out.get(key, ring.zero) + coeff
    if scalar is None:
        scalar = all(v in roots for v in ring.names)
    if scalar:
        out = {k: v.constant_term() for k, v in out.items()}
    return SchurVector(r, n, {k: v for k, v in out.items() if not _iszero(v)})


def schur_reduce_rational(f, r, n):
    """Convenience: reduce a polynomial given as ``{exps: coeff}`` in r
    variables with rational coefficients."""
    names = tuple(f"H{i + 1}" for i in range(r))
    R = PolyRing(names)
    p = R.poly({tuple(e): as_rational(c) for e, c in f.items()})
    return schur_reduce(p, names, n)


def lr_product_truncated(a, b):
    """Product of two SchurVectors (rational coefficients) in H*(Gr(r,n)),
    computed by multiplying Schur polynomials and reducing."""
    if (a.r, a.n) != (b.r, b.n):
        raise ValueError("box mismatch")
    r, n = a.r, a.n
    names = tuple(f"H{i + 1}" for i in range(r))
    R = PolyRing(names)
    total = {}
    for la, ca in a.entries.items():
        for lb, cb in b.entries.items():
            prod = schur_polynomial(la, R, names) * schur_polynomial(lb, R, names)
            for lam, c in schur_reduce(prod, names, n, check=False).entries.items():
                total[lam] = total.get(lam, ZERO) + c * ca * cb
    return SchurVector(r, n, total)
