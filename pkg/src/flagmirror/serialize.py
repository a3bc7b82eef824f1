"""Deterministic JSON for series and reports (schema ``fm/1``).

Layout of a series file::

    {"schema": "fm/1", "setup_hash": ..., "setup": {...},
     "constructor": ..., "truncation": {"dmax", "zwin", "minv"},
     "side", "kind", "levels", "ring", "variables", ...,
     "entries": [{"degree": "B()K(1)", "value": ...}, ...]}

``vec`` values are ``{label: {z-exponent: coefficient}}``, ``poly`` values
``{z-exponent: coefficient}`` (sparse z-maps, coefficients are polynomial
strings in the remaining variables), ``frac`` values canonical ParamRat
strings and ``points`` values ``{point label: ParamRat string}``.
"""
import hashlib
import json
import re

from . import SCHEMA_VERSION
from .algebra.paramrat import ParamRat, canonical_order
from .algebra.poly import PolyRing
from .algebra.rational import parse_rational
from .series import CoeffSeries, MultiDeg


class TruncationOverflow(ValueError):
    """Nonzero data above the upper end of the z-window."""

    def __init__(self, degree, exponent, window):
        super().__init__(f"z^{exponent} at {degree} exceeds the z-window {list(window)}")
        self.degree, self.exponent, self.window = degree, exponent, window

    def to_json(self):
        return {"error": "truncation_overflow", "degree": self.degree,
                "z_exponent": self.exponent, "zwin": list(self.window)}


class ProvenanceMismatch(ValueError):
    pass


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": "), ensure_ascii=True) + "\n"


def setup_hash(setup_json):
    blob = json.dumps(setup_json, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# polynomial strings
# ---------------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])\s*")


def parse_poly(s, ring):
    """Inverse of ``Poly.to_str`` (terms joined by `` + `` / `` - ``)."""
    s = s.strip()
    if s == "0":
        return ring.zero
    if not s.startswith("-"):
        s = "+" + s
    parts = re.split(r"(?:^|\s)([+-])\s*", s)
    out = ring.zero
    sign = 1
    for tok in parts:
        tok = tok.strip()
        if not tok:
            continue
        if tok in "+-":
            sign = 1 if tok == "+" else -1
            continue
        coef = 1
        mono = {}
        for f in tok.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", f):
                coef = parse_rational(f)
            else:
                name, _, e = f.partition("^")
                mono[name] = mono.get(name, 0) + (int(e) if e else 1)
        term = ring.const(parse_rational(str(coef)) * sign)
        for n, e in mono.items():
            term = term * ring.gen(n, e)
        out = out + term
    return out


def _zmap(p, window, degree, state):
    """``{z-exponent: coefficient string}`` for a Poly."""
    out = {}
    for e, c in p.split(("z",)).items():
        ze = e[0]
        if ze > window[1]:
            raise TruncationOverflow(degree, ze, window)
        if ze < window[0]:
            state["truncated_below"] = True
            continue
        out[str(ze)] = c.to_str()
    return out


def _zmap_parse(m, ring):
    total = ring.zero
    for e, s in m.items():
        total = total + parse_poly(s, ring) * ring.gen("z", int(e))
    return total


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def _value_vars(F):
    names = set()
    for v in F.coeffs.values():
        polys = v.values() if F.kind == "vec" else [v]
        for p in polys:
            for exps, _ in p.items():
                names.update(n for n, e in zip(p.ring.names, exps) if e and n != "z")
    return canonical_order(tuple(sorted(names)))


def series_to_json(F, setup_json, constructor, args=None):
    state = {"truncated_below": False}
    lo, hi = F.zwin
    doc = {"schema": SCHEMA_VERSION, "setup_hash": setup_hash(setup_json), "setup": setup_json,
           "constructor": constructor, "args": args or {},
           "truncation": {"dmax": F.dmax, "zwin": [lo, hi], "minv": F.minv},
           "side": F.side, "kind": F.kind, "levels": list(F.levels), "ring": F.ring_name(),
           "tconv": F.tconv}
    entries = []
    if F.kind in ("vec", "poly"):
        doc["variables"] = list(_value_vars(F))
        if F.kind == "vec":
            doc["basis"] = list(F.meta.get("basis", ()))
    if F.kind == "frac":
        doc["params"] = list(F.meta.get("params", ()))
    if F.kind == "points":
        G = F.meta["gkm"]
        doc["gkm"] = {"variant": G.variant, "N": G.N, "rs": list(G.rs)}
    for d in sorted(F.coeffs):
        if d.total > F.dmax:
            continue
        v = F.coeffs[d]
        lab = d.label()
        if F.kind == "vec":
            val = {k: _zmap(p, F.zwin, lab, state) for k, p in sorted(v.items())}
            val = {k: m for k, m in val.items() if m}
        elif F.kind == "poly":
            val = _zmap(v, F.zwin, lab, state)
        elif F.kind == "frac":
            val = v.to_str()
        else:
            G = F.meta["gkm"]
            val = {G.label(p): x.to_str() for p, x in v.items() if not x.is_zero()}
        if val:
            entries.append({"degree": lab, "value": val})
    doc["entries"] = entries
    doc["truncation"]["truncated_below"] = state["truncated_below"]
    return doc


def series_from_json(doc):
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    kind = doc["kind"]
    tr = doc["truncation"]
    meta = {"constructor": doc.get("constructor"), "setup": doc.get("setup"),
            "setup_hash": doc.get("setup_hash")}
    coeffs = {}
    if kind in ("vec", "poly"):
        names = tuple(doc.get("variables", ())) + ("z",)
        ring = PolyRing(names, {}, {}, None, ("z",))
        meta["poly_ring"] = ring
        if kind == "vec":
            meta["basis"] = doc.get("basis", [])
        for e in doc["entries"]:
            d = MultiDeg.parse(e["degree"])
            if kind == "vec":
                coeffs[d] = {k: _zmap_parse(m, ring) for k, m in e["value"].items()}
            else:
                coeffs[d] = _zmap_parse(e["value"], ring)
    elif kind == "frac":
        params = tuple(doc.get("params", ()))
        meta["params"] = params
        for e in doc["entries"]:
            coeffs[MultiDeg.parse(e["degree"])] = ParamRat.from_str(e["value"], params + ("z",))
    elif kind == "points":
        from .rings import gkm_data
        g = doc["gkm"]
        G = gkm_data(g["N"], tuple(g["rs"]), g["variant"])
        meta["gkm"] = G
        by_label = {G.label(p): p for p in G.points}
        names = tuple(G.params) + ("z",)
        for e in doc["entries"]:
            coeffs[MultiDeg.parse(e["degree"])] = {by_label[k]: ParamRat.from_str(s, names)
                                                   for k, s in e["value"].items()}
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return CoeffSeries(doc["side"], kind, doc.get("ring", ""), coeffs, tuple(doc["levels"]), tr["dmax"],
                       tuple(tr["zwin"]), tr["minv"], doc.get("tconv", True), meta=meta)
