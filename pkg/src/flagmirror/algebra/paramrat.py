"""Exact rational functions in named parameters.

Backed by sympy's sparse fraction fields (``sympy.polys.fields``), which
keep numerator and denominator gcd-reduced.  On top of that a canonical
printed form is fixed: variables in the order nu_1 < ... < mu < lambda <
roots < base classes < z, terms printed in decreasing lexicographic order,
and the denominator scaled so its leading coefficient is 1.
"""
import re
from functools import lru_cache

from sympy import QQ, Symbol, sympify
from sympy.polys.fields import field as _sympy_field

from .rational import Rational, as_rational, rational_str

_ORDER_RE = re.compile(r"^(nu|eta|mu|lam|H|HB|c|u|z)(.*)$")
_RANK = {"nu": 0, "eta": 1, "mu": 2, "lam": 3, "H": 4, "HB": 5, "c": 6, "u": 7, "z": 8}


def _num_key(s):
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s) if p != "")


def canonical_order(names):
    """Sort parameter names into the canonical variable order."""
    def key(n):
        m = _ORDER_RE.match(n)
        if not m:
            return (9, _num_key(n))
        return (_RANK[m.group(1)], _num_key(m.group(2)))
    return tuple(sorted(set(names), key=key))


@lru_cache(maxsize=None)
def param_field(names):
    """Fraction field over QQ in the given names (canonically ordered)."""
    names = canonical_order(names)
    fld, *gens = _sympy_field(",".join(names) if names else "", QQ) if names else (None,)
    return _Field(names, fld, gens)


class _Field:
    def __init__(self, names, fld, gens):
        self.names = names
        self.fld = fld
        self.gens = dict(zip(names, gens))
        self.index = {n: i for i, n in enumerate(names)}

    def __repr__(self):
        return f"ParamField({', '.join(self.names)})"


def _remap_poly(p, src_names, dst):
    """Move a sympy PolyElement from one field's ring to another by name."""
    ring = dst.fld.ring
    pos = [dst.index[n] for n in src_names]
    n = len(dst.names)
    terms = {}
    for monom, c in p.terms():
        new = [0] * n
        for i, e in enumerate(monom):
            if e:
                new[pos[i]] = e
        terms[tuple(new)] = c
    return ring.from_dict(terms) if terms else ring.zero


class ParamRat:
    """An element of Q(names)."""
    __slots__ = ("F", "v")

    def __init__(self, F, value):
        self.F = F
        self.v = value

    # construction ----------------------------------------------------------
    @staticmethod
    def const(c, names=()):
        F = param_field(tuple(names))
        c = as_rational(c)
        if F.fld is None:
            return ParamRat(F, c)
        return ParamRat(F, F.fld(QQ(int(c.numerator), int(c.denominator))))

    @staticmethod
    def var(name, names=None):
        F = param_field(tuple(names) if names else (name,))
        return ParamRat(F, F.gens[name])

    @staticmethod
    def linear(coeffs, const=0, names=None):
        names = tuple(names) if names else tuple(coeffs)
        F = param_field(names)
        val = F.fld(QQ(int(as_rational(const).numerator), int(as_rational(const).denominator)))
        for n, c in coeffs.items():
            if c:
                c = as_rational(c)
                val = val + F.gens[n] * QQ(int(c.numerator), int(c.denominator))
        return ParamRat(F, val)

    def embed(self, names):
        """Same value in a field with (at least) the given names."""
        names = canonical_order(tuple(names) + self.F.names)
        if names == self.F.names:
            return self
        G = param_field(names)
        if self.F.fld is None:
            c = self.v
            return ParamRat(G, G.fld(QQ(int(c.numerator), int(c.denominator))))
        num = _remap_poly(self.v.numer, self.F.names, G)
        den = _remap_poly(self.v.denom, self.F.names, G)
        return ParamRat(G, G.fld(num) / G.fld(den))

    def _unify(self, other):
        if not isinstance(other, ParamRat):
            other = ParamRat.const(other, self.F.names)
        if self.F is other.F:
            return self, other
        names = canonical_order(self.F.names + other.F.names)
        return self.embed(names), other.embed(names)

    # arithmetic ------------------------------------------------------------
    def __add__(self, o):
        a, b = self._unify(o)
        return ParamRat(a.F, a.v + b.v)

    __radd__ = __add__

    def __sub__(self, o):
        a, b = self._unify(o)
        return ParamRat(a.F, a.v - b.v)

    def __rsub__(self, o):
        a, b = self._unify(o)
        return ParamRat(a.F, b.v - a.v)

    def __mul__(self, o):
        a, b = self._unify(o)
        return ParamRat(a.F, a.v * b.v)

    __rmul__ = __mul__

    def __truediv__(self, o):
        a, b = self._unify(o)
        if b.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return ParamRat(a.F, a.v / b.v)

    def __rtruediv__(self, o):
        a, b = self._unify(o)
        return b / a

    def __neg__(self):
        return ParamRat(self.F, -self.v)

    def __pow__(self, n):
        if n < 0:
            return ParamRat.const(1, self.F.names) / (self ** (-n))
        return ParamRat(self.F, self.v ** n)

    def __eq__(self, o):
        if not isinstance(o, (ParamRat, int, Rational)):
            return NotImplemented
        a, b = self._unify(o)
        return a.v == b.v

    def __hash__(self):
        return hash(self.to_str())

    def is_zero(self):
        if self.F.fld is None:
            return not self.v
        return not self.v.numer

    def __bool__(self):
        return not self.is_zero()

    # structure -------------------------------------------------------------
    def numer_terms(self):
        """Canonically scaled numerator as ``{exps: Rational}``."""
        return self._canonical()[0]

    def denom_terms(self):
        return self._canonical()[1]

    def _canonical(self):
        if self.F.fld is None:
            return {(): as_rational(self.v)} if self.v else {}, {(): as_rational(1)}
        num = {m: _q(c) for m, c in self.v.numer.terms()}
        den = {m: _q(c) for m, c in self.v.denom.terms()}
        lead = den[max(den)]
        return ({m: c / lead for m, c in num.items()}, {m: c / lead for m, c in den.items()})

    def is_polynomial(self):
        den = self.denom_terms()
        return len(den) == 1 and all(e == 0 for e in next(iter(den)))

    def free_of(self, name):
        if name not in self.F.index:
            return True
        i = self.F.index[name]
        num, den = self._canonical()
        return all(m[i] == 0 for m in num) and all(m[i] == 0 for m in den)

    def subs(self, values):
        """Substitute ``values[name]`` (ParamRat or rational) for variables."""
        if self.F.fld is None:
            return self
        vals = {}
        for n, val in values.items():
            if n in self.F.index:
                vals[n] = val if isinstance(val, ParamRat) else ParamRat.const(val)
        if not vals:
            return self
        keep = [n for n in self.F.names if n not in vals]
        names = canonical_order(tuple(keep) + sum((v.F.names for v in vals.values()), ()))
        G = param_field(names)
        num = _eval_poly(self.v.numer, self.F, vals, G)
        den = _eval_poly(self.v.denom, self.F, vals, G)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes under substitution")
        return num / den

    def permute(self, mapping):
        """Rename variables (a permutation of names within this field)."""
        if self.F.fld is None:
            return self
        perm = [self.F.index[mapping.get(n, n)] for n in self.F.names]
        ring = self.F.fld.ring
        n = len(self.F.names)

        def move(p):
            terms = {}
            for monom, c in p.terms():
                new = [0] * n
                for i, e in enumerate(monom):
                    new[perm[i]] = e
                terms[tuple(new)] = c
            return ring.from_dict(terms) if terms else ring.zero
        return ParamRat(self.F, self.F.fld(move(self.v.numer)) / self.F.fld(move(self.v.denom)))

    def numer_poly(self):
        return ParamRat(self.F, self.F.fld(self.v.numer)) if self.F.fld else self

    def denom_poly(self):
        return ParamRat(self.F, self.F.fld(self.v.denom)) if self.F.fld else ParamRat.const(1)

    # printing ----------------------------------------------------------------
    def to_str(self):
        num, den = self._canonical()
        names = self.F.names
        ns = _poly_str(num, names)
        if len(den) == 1 and all(e == 0 for e in next(iter(den))):
            return ns
        return f"({ns})/({_poly_str(den, names)})"

    __str__ = to_str

    def __repr__(self):
        return f"ParamRat({self.to_str()})"

    @staticmethod
    def from_str(s, names=None):
        syms = {}
        found = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", s))
        allnames = canonical_order(tuple(found) + tuple(names or ()))
        for n in allnames:
            syms[n] = Symbol(n)
        expr = sympify(s.replace("^", "**"), locals=syms)
        F = param_field(allnames)
        if F.fld is None:
            return ParamRat(F, as_rational(str(expr)))
        return ParamRat(F, F.fld.from_expr(expr))


def _q(c):
    return Rational(int(c.numerator), int(c.denominator))


def _poly_str(terms, names):
    if not terms:
        return "0"
    parts = []
    for exps, c in sorted(terms.items(), reverse=True):
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
        cs = rational_str(c)
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _eval_poly(p, F, vals, G):
    """Evaluate a PolyElement of field F at ``vals`` inside field G.

    Works in the polynomial ring over the common denominator
    ``prod_i den_i^maxdeg_i`` and cancels once at the end."""
    if G.fld is None:
        # every variable substituted by a constant
        point = [as_rational(vals[n].v) for n in F.names]
        total = Rational(0)
        for monom, c in p.terms():
            term = as_rational(c)
            for x, e in zip(point, monom):
                if e:
                    term *= x ** e
            total += term
        return ParamRat(G, total)
    R = G.fld.ring
    keep = [(i, R.gens[G.index[n]]) for i, n in enumerate(F.names) if n not in vals]
    subs = []
    for i, n in enumerate(F.names):
        if n in vals:
            v = vals[n].embed(G.names).v
            subs.append((i, R(v.numer), R(v.denom)))
    monoms = list(p.terms())
    maxdeg = {i: max((m[i] for m, _ in monoms), default=0) for i, _, _ in subs}
    cache = {}

    def power(key, base, e):
        k = (key, e)
        v = cache.get(k)
        if v is None:
            v = cache[k] = base ** e
        return v

    total = R.zero
    for monom, c in monoms:
        term = R(c)
        for i, g in keep:
            if monom[i]:
                term = term * power(("g", i), g, monom[i])
        for i, num, den in subs:
            e = monom[i]
            if e:
                term = term * power(("n", i), num, e)
            if maxdeg[i] - e:
                term = term * power(("d", i), den, maxdeg[i] - e)
        total = total + term
    den = R.one
    for i, _, d in subs:
        if maxdeg[i]:
            den = den * power(("d", i), d, maxdeg[i])
    return ParamRat(G, G.fld(total) / G.fld(den))


def normalize_rational(p, q):
    """Canonical ParamRat for ``p / q`` (p, q ParamRat/Poly-like or strings)."""
    if isinstance(p, str):
        p = ParamRat.from_str(p)
    if isinstance(q, str):
        q = ParamRat.from_str(q)
    if not isinstance(q, ParamRat):
        q = ParamRat.const(q)
    if q.is_zero():
        raise ZeroDivisionError("zero denominator")
    if not isinstance(p, ParamRat):
        p = ParamRat.const(p, q.F.names)
    return p / q
