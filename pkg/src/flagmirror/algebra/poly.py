"""Sparse multivariate polynomials with exact rational coefficients.

Exponent vectors are packed into integers (see ``_pykernels``).  A
``PolyRing`` fixes the variable names, their grading weights, optional
per-variable exponent caps (for relations like ``H^4 = 0``), an optional
weighted-degree cap, and which variables may carry negative exponents
(the loop parameter ``z`` and inverse equivariant parameters).  Products
are truncated by the ring on the fly, so every element is a representative
of a class in a truncated graded ring.
"""
from fractions import Fraction
from math import comb

from . import kernels
from .kernels import BIAS, FIELD, MASK
from .rational import ONE, ZERO, Rational, as_rational, rational_str

EXP_LIMIT = 120


class PolyRing:
    __slots__ = ("names", "index", "nvars", "weights", "caps", "max_degree",
                 "laurent", "_bias", "_sig", "_gens")

    def __init__(self, names, weights=None, caps=None, max_degree=None, laurent=()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        w = dict(weights or {})
        c = dict(caps or {})
        for key in list(w) + list(c) + list(laurent):
            if key not in self.index:
                raise KeyError(key)
        self.weights = tuple(int(w.get(n, 0)) for n in names)
        self.caps = tuple(-1 if c.get(n) is None else int(c[n]) for n in names)
        self.max_degree = None if max_degree is None else int(max_degree)
        self.laurent = frozenset(self.index[n] for n in laurent)
        self._bias = kernels.bias_key(self.nvars)
        self._sig = (names, self.weights, self.caps, self.max_degree, self.laurent)
        self._gens = {}

    # identity -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._sig == other._sig

    def __hash__(self):
        return hash(self._sig)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)}; maxdeg={self.max_degree})"

    def derive(self, names=None, weights=None, caps=None, max_degree="keep", laurent=None):
        """A ring with some attributes replaced (by name, so weights/caps of
        retained variables carry over)."""
        names = self.names if names is None else tuple(names)
        old_w = {n: self.weights[i] for n, i in self.index.items()}
        old_c = {n: (None if self.caps[i] < 0 else self.caps[i]) for n, i in self.index.items()}
        old_l = {self.names[i] for i in self.laurent}
        w = {n: old_w.get(n, 0) for n in names}
        w.update(weights or {})
        c = {n: old_c.get(n) for n in names}
        if caps is not None:
            c.update(caps)
        lau = [n for n in names if n in old_l] if laurent is None else list(laurent)
        md = self.max_degree if max_degree == "keep" else max_degree
        return PolyRing(names, w, c, md, lau)

    # packing ----------------------------------------------------------------
    def pack(self, exps):
        key = self._bias
        for i, e in enumerate(exps):
            if e:
                if e < 0 and i not in self.laurent:
                    raise ValueError(f"negative exponent for {self.names[i]}")
                if abs(e) > EXP_LIMIT:
                    raise OverflowError("exponent out of packable range")
                key += e << (FIELD * i)
        return key

    def unpack(self, key):
        return tuple(((key >> (FIELD * i)) & MASK) - BIAS for i in range(self.nvars))

    def degree_of(self, exps):
        return sum(w * e for w, e in zip(self.weights, exps))

    def admissible(self, exps):
        if self.max_degree is not None and self.degree_of(exps) > self.max_degree:
            return False
        return all(c < 0 or e <= c for e, c in zip(exps, self.caps))

    # constructors -------------------------------------------------------------
    def poly(self, data):
        terms = {}
        for exps, c in data.items():
            if isinstance(exps, str):
                exps = (0,) * self.nvars if exps == "1" else None
            if len(exps) != self.nvars:
                raise ValueError("exponent vector length mismatch")
            c = as_rational(c)
            if c and self.admissible(exps):
                k = self.pack(exps)
                terms[k] = terms.get(k, ZERO) + c
        return Poly(self, {k: v for k, v in terms.items() if v})

    def const(self, c):
        c = as_rational(c)
        return Poly(self, {self._bias: c} if c else {})

    @property
    def zero(self):
        return Poly(self, {})

    @property
    def one(self):
        return self.const(1)

    def gen(self, name, power=1):
        key = (name, power)
        g = self._gens.get(key)
        if g is None:
            exps = [0] * self.nvars
            exps[self.index[name]] = power
            g = self.poly({tuple(exps): 1})
            self._gens[key] = g
        return g

    def monomial(self, powers, coeff=1):
        exps = [0] * self.nvars
        for n, e in powers.items():
            exps[self.index[n]] = e
        return self.poly({tuple(exps): coeff})

    def linear(self, coeffs, const=0):
        """Linear form ``const + sum coeffs[name] * name``."""
        p = self.const(const)
        for n, c in coeffs.items():
            if c:
                p = p + self.gen(n) * c
        return p


class Poly:
    __slots__ = ("ring", "terms", "_bounds")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._bounds = None

    # basic protocol ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        unpack = self.ring.unpack
        for k, c in self.terms.items():
            yield unpack(k), c

    def coeff(self, exps):
        return self.terms.get(self.ring.pack(exps), ZERO)

    def constant_term(self):
        return self.terms.get(self.ring._bias, ZERO)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring._bias in self.terms)

    def _check(self, other):
        if self.ring is not other.ring and self.ring != other.ring:
            raise ValueError("ring mismatch")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return self.ring.const(other)

    # arithmetic --------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return Poly(self.ring, {})
        return Poly(self.ring, {k: v * c for k, v in self.terms.items()})

    def bounds(self):
        if self._bounds is None:
            n = self.ring.nvars
            lo = [0] * n
            hi = [0] * n
            for k in self.terms:
                for i in range(n):
                    e = ((k >> (FIELD * i)) & MASK) - BIAS
                    if e < lo[i]:
                        lo[i] = e
                    elif e > hi[i]:
                        hi[i] = e
            self._bounds = (lo, hi)
        return self._bounds

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Poly(self.ring, {})
        la, ha = self.bounds()
        lb, hb = other.bounds()
        for i in range(self.ring.nvars):
            if la[i] + lb[i] < -EXP_LIMIT or ha[i] + hb[i] > EXP_LIMIT:
                raise OverflowError(f"exponent of {self.ring.names[i]} leaves packable range")
        r = self.ring
        md = -1 if r.max_degree is None else r.max_degree
        return Poly(r, kernels.mul_trunc(self.terms, other.terms, r.nvars, r.weights, md, r.caps))

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.is_constant() and other.terms:
                return self.scale(ONE / other.constant_term())
            return self * other.inverse()
        return self.scale(ONE / as_rational(other))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self):
        r = self.ring
        return Poly(r, {k: c for k, c in self.terms.items() if r.admissible(r.unpack(k))})

    # structure -----------------------------------------------------------------
    def weighted_part(self, degree):
        r = self.ring
        return Poly(r, {k: c for k, c in self.terms.items()
                        if kernels.weighted_degree(k, r.weights) == degree})

    def min_weighted_degree(self):
        r = self.ring
        return min((kernels.weighted_degree(k, r.weights) for k in self.terms), default=None)

    def max_weighted_degree(self):
        r = self.ring
        return max((kernels.weighted_degree(k, r.weights) for k in self.terms), default=None)

    def degree(self, name):
        i = self.ring.index[name]
        return max((e[i] for e, _ in self.items()), default=0)

    def inverse(self):
        """Inverse of a unit: the weight-zero part must be one monomial in
        Laurent variables; the rest must be nilpotent under the ring's
        truncation."""
        r = self.ring
        lead = self.weighted_part(0)
        if len(lead) != 1:
            raise ZeroDivisionError("weight-zero part is not a single monomial")
        (exps, c), = lead.items()
        if any(e and i not in r.laurent for i, e in enumerate(exps)):
            raise ZeroDivisionError("leading monomial is not invertible")
        lead_inv = r.poly({tuple(-e for e in exps): ONE / c})
        x = r.one - self * lead_inv
        if x and r.max_degree is None and all(cap < 0 for cap in r.caps):
            raise ZeroDivisionError("no truncation: inverse would be infinite")
        total = r.one
        power = r.one
        while True:
            power = power * x
            if not power:
                break
            total = total + power
        return total * lead_inv

    def exp_series(self):
        """exp of an element whose terms all have positive weight."""
        r = self.ring
        if not self:
            return r.one
        if self.min_weighted_degree() <= 0:
            raise ValueError("exp needs a topologically nilpotent argument")
        total = r.one
        term = r.one
        n = 0
        while True:
            n += 1
            term = (term * self).scale(Fraction(1, n))
            if not term:
                return total
            total = total + term

    def divide_by_difference(self, a, b):
        """Exact quotient by ``a - b`` (variable names); raises if inexact."""
        r = self.ring
        q, exact = kernels.divided_difference(self.terms, r.index[a], r.index[b], r.nvars)
        if not exact:
            raise ArithmeticError(f"not divisible by {a} - {b}")
        return Poly(r, q)

    def permute(self, mapping):
        """Rename variables by a permutation given as ``{name: name}``."""
        r = self.ring
        perm = list(range(r.nvars))
        for src, dst in mapping.items():
            perm[r.index[src]] = r.index[dst]
        out = {}
        for exps, c in self.items():
            new = [0] * r.nvars
            for i, e in enumerate(exps):
                new[perm[i]] = e
            out[r.pack(new)] = c
        return Poly(r, out)

    def is_symmetric(self, names):
        names = list(names)
        for a, b in zip(names, names[1:]):
            if self.permute({a: b, b: a}) != self:
                return False
        return True

    def split(self, names):
        """Group terms by the exponents of ``names``: returns
        ``{exps: Poly}`` with those variables removed from each piece."""
        r = self.ring
        idx = [r.index[n] for n in names]
        out = {}
        for k, c in self.terms.items():
            sub = tuple(((k >> (FIELD * i)) & MASK) - BIAS for i in idx)
            rest = k
            for i, e in zip(idx, sub):
                rest -= e << (FIELD * i)
            out.setdefault(sub, {})[rest] = c
        return {s: Poly(r, t) for s, t in out.items()}

    def convert(self, ring):
        """Re-encode in another ring by variable name (missing variables must
        not occur); the target ring's truncation is applied."""
        if ring == self.ring:
            return self
        src = self.ring
        pos = []
        for i, n in enumerate(src.names):
            pos.append(ring.index.get(n))
        out = {}
        for exps, c in self.items():
            new = [0] * ring.nvars
            for i, e in enumerate(exps):
                if e:
                    j = pos[i]
                    if j is None:
                        raise ValueError(f"variable {src.names[i]} absent from target ring")
                    new[j] = e
            if ring.admissible(new):
                k = ring.pack(new)
                out[k] = out.get(k, ZERO) + c
        return Poly(ring, {k: v for k, v in out.items() if v})

    def subs(self, values, ring=None):
        """Substitute ``values[name]`` (Poly in ``ring``) for variables;
        unlisted variables are carried over by name."""
        ring = ring or self.ring
        r = self.ring
        cache = {}

        def power(i, e):
            key = (i, e)
            p = cache.get(key)
            if p is None:
                name = r.names[i]
                if name in values:
                    v = values[name]
                    v = v if isinstance(v, Poly) else ring.const(v)
                    p = v ** e if e >= 0 else v.inverse() ** (-e)
                else:
                    p = ring.gen(name, e)
                cache[key] = p
            return p

        total = ring.zero
        for exps, c in self.items():
            term = ring.const(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
                    if not term:
                        break
            total = total + term
        return total

    def map_coefficients(self, fn):
        return Poly(self.ring, {k: v for k, v in ((k, fn(c)) for k, c in self.terms.items()) if v})

    # printing -------------------------------------------------------------------
    def sorted_items(self):
        return sorted(self.items(), key=lambda t: t[0], reverse=True)

    def to_str(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for exps, c in self.sorted_items():
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

    def __repr__(self):
        return f"Poly({self.to_str()})"

    __str__ = to_str


def binomial(n, k):
    """Generalized binomial coefficient for integer ``n`` (possibly negative)."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(-n + k - 1, k)
