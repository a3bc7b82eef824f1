"""Pure-Python kernels for sparse polynomials with packed exponent keys.

A monomial over ``nvars`` variables is packed into one integer, eight bits
per variable, each exponent stored with a bias of 128.  Adding two packed
keys and subtracting ``bias_key(nvars)`` adds the exponent vectors.
"""

FIELD = 8
MASK = 0xFF
BIAS = 128


def bias_key(nvars):
    key = 0
    for i in range(nvars):
        key |= BIAS << (FIELD * i)
    return key


def weighted_degree(key, weights):
    deg = 0
    shift = 0
    for w in weights:
        if w:
            deg += w * (((key >> shift) & MASK) - BIAS)
        shift += FIELD
    return deg


def mul_trunc(a, b, nvars, weights, maxdeg, caps):
    """Product of two term dicts, dropping monomials of weighted degree above
    ``maxdeg`` (ignored when negative) or exceeding a per-variable cap
    (``caps[i] < 0`` means uncapped)."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    bias = bias_key(nvars)
    capped = [(FIELD * i, c) for i, c in enumerate(caps) if c >= 0]
    use_deg = maxdeg >= 0
    bl = [(kb, cb, weighted_degree(kb, weights) if use_deg else 0) for kb, cb in b.items()]
    out = {}
    get = out.get
    for ka, ca in a.items():
        da = weighted_degree(ka, weights) if use_deg else 0
        for kb, cb, db in bl:
            if use_deg and da + db > maxdeg:
                continue
            key = ka + kb - bias
            if capped:
                ok = True
                for shift, c in capped:
                    if ((key >> shift) & MASK) - BIAS > c:
                        ok = False
                        break
                if not ok:
                    continue
            v = get(key)
            out[key] = ca * cb if v is None else v + ca * cb
    return {k: v for k, v in out.items() if v}


def divided_difference(terms, i, j, nvars):
    """Exact quotient of a polynomial by ``x_i - x_j``.

    Returns ``(quotient, remainder_is_zero)``; the remainder is the
    polynomial with ``x_i`` replaced by ``x_j``.
    """
    si, sj = FIELD * i, FIELD * j
    out = {}
    rem = {}
    for key, c in terms.items():
        ei = ((key >> si) & MASK) - BIAS
        ej = ((key >> sj) & MASK) - BIAS
        base = key - (ei << si) - (ej << sj)
        rkey = base + ((ei + ej) << sj)
        rem[rkey] = rem.get(rkey, 0) + c
        # (x_i^a - x_j^a)/(x_i - x_j) = sum_{s<a} x_i^s x_j^(a-1-s)
        for s in range(ei):
            qkey = base + (s << si) + ((ei - 1 - s + ej) << sj)
            out[qkey] = out.get(qkey, 0) + c
    exact = all(v == 0 for v in rem.values())
    return {k: v for k, v in out.items() if v}, exact
