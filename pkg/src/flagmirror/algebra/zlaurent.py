"""Truncated Laurent series in z with coefficients in an arbitrary ring.

A window ``(lo, hi)`` bounds the stored exponents.  Results that would
need exponents outside the window are truncated and the ``lost`` flag is
raised, so a later stage can assert that no nonzero data was discarded.
"""
from .poly import binomial
from .rational import ONE, as_rational


class ZLaurent:
    __slots__ = ("coeffs", "window", "lost")

    def __init__(self, coeffs, window, lost=False):
        lo, hi = window
        if lo > hi:
            raise ValueError("empty window")
        kept = {}
        for e, c in coeffs.items():
            if not _is_zero(c):
                if lo <= e <= hi:
                    kept[e] = c
                else:
                    lost = True
        self.coeffs = kept
        self.window = (lo, hi)
        self.lost = lost

    def __eq__(self, other):
        if not isinstance(other, ZLaurent):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, e):
        return self.coeffs.get(e, 0)

    def exponents(self):
        return sorted(self.coeffs)

    def _window_with(self, other):
        return (max(self.window[0], other.window[0]), min(self.window[1], other.window[1]))

    def __add__(self, other):
        w = self._window_with(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return ZLaurent(out, w, self.lost or other.lost)

    def __neg__(self):
        return ZLaurent({e: -c for e, c in self.coeffs.items()}, self.window, self.lost)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ZLaurent):
            return ZLaurent({e: c * other for e, c in self.coeffs.items()}, self.window, self.lost)
        w = self._window_with(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return ZLaurent(out, w, self.lost or other.lost)

    def truncated(self, window):
        return ZLaurent(self.coeffs, window, self.lost)

    def map(self, fn):
        return ZLaurent({e: fn(c) for e, c in self.coeffs.items()}, self.window, self.lost)

    def __repr__(self):
        body = " + ".join(f"({c})*z^{e}" for e, c in sorted(self.coeffs.items(), reverse=True))
        return f"ZLaurent[{self.window[0]},{self.window[1]}]({body or '0'}{', lost' if self.lost else ''})"


def _is_zero(c):
    if hasattr(c, "is_zero"):
        iz = c.is_zero
        return iz() if callable(iz) else bool(iz)
    return not c


def expand_nilpotent_inverse(X, c, e, window, order, one=None):
    """``(X + c z)^(-e)`` as a ZLaurent, for ``X`` with ``X**order == 0``.

    Uses ``(cz)^(-e) * sum_{j<order} binom(-e, j) (X / cz)^j``.
    """
    c = as_rational(c)
    if not c:
        raise ZeroDivisionError("c = 0: no expansion around z = infinity")
    if e < 1:
        raise ValueError("e must be positive")
    if one is None:
        one = X ** 0 if hasattr(X, "__pow__") else 1
    out = {}
    power = one
    for j in range(order):
        coef = binomial(-e, j) * (ONE / c) ** (e + j)
        out[-e - j] = power * coef
        power = power * X
    return ZLaurent(out, window)
