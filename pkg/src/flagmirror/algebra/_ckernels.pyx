# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled twins of the kernels in ``_pykernels`` (same packing, same
semantics).  Keys are handled as 64-bit integers, so rings with more than
seven variables are delegated to the pure-Python versions."""
from libc.stdint cimport int64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

from . import _pykernels

cdef enum:
    FIELD = 8
    MASK = 0xFF
    BIAS = 128
    MAXVARS = 7


cdef inline int64_t _bias_key(int nvars):
    cdef int64_t key = 0
    cdef int i
    for i in range(nvars):
        key |= (<int64_t>BIAS) << (FIELD * i)
    return key


cdef inline long _wdeg(int64_t key, long* w, int nvars):
    cdef long d = 0
    cdef int i
    for i in range(nvars):
        if w[i]:
            d += w[i] * (((key >> (FIELD * i)) & MASK) - BIAS)
    return d


def mul_trunc(dict a, dict b, int nvars, tuple weights, long maxdeg, tuple caps):
    if not a or not b:
        return {}
    if nvars > MAXVARS:
        return _pykernels.mul_trunc(a, b, nvars, weights, maxdeg, caps)
    if len(a) > len(b):
        a, b = b, a
    cdef long w[MAXVARS]
    cdef long cp[MAXVARS]
    cdef int i
    cdef int ncap = 0
    for i in range(nvars):
        w[i] = weights[i]
        cp[i] = caps[i]
        if cp[i] >= 0:
            ncap += 1
    cdef bint use_deg = maxdeg >= 0
    cdef int64_t bias = _bias_key(nvars)

    cdef Py_ssize_t nb = len(b)
    cdef vector[int64_t] kb
    cdef vector[long] db
    kb.reserve(nb)
    db.reserve(nb)
    cb = []
    for key, c in b.items():
        kb.push_back(<int64_t>key)
        db.push_back(_wdeg(<int64_t>key, w, nvars) if use_deg else 0)
        cb.append(c)

    cdef unordered_map[int64_t, Py_ssize_t] slot
    cdef unordered_map[int64_t, Py_ssize_t].iterator it
    out_keys = []
    out_vals = []
    cdef int64_t ka, k
    cdef long da
    cdef Py_ssize_t j, pos
    cdef bint ok
    for key, ca in a.items():
        ka = <int64_t>key
        da = _wdeg(ka, w, nvars) if use_deg else 0
        for j in range(nb):
            if use_deg and da + db[j] > maxdeg:
                continue
            k = ka + kb[j] - bias
            if ncap:
                ok = True
                for i in range(nvars):
                    if cp[i] >= 0 and ((k >> (FIELD * i)) & MASK) - BIAS > cp[i]:
                        ok = False
                        break
                if not ok:
                    continue
            it = slot.find(k)
            if it == slot.end():
                slot[k] = len(out_vals)
                out_keys.append(k)
                out_vals.append(ca * cb[j])
            else:
                pos = slot[k]
                out_vals[pos] = out_vals[pos] + ca * cb[j]
    return {kk: v for kk, v in zip(out_keys, out_vals) if v}


def divided_difference(dict terms, int i, int j, int nvars):
    if nvars > MAXVARS:
        return _pykernels.divided_difference(terms, i, j, nvars)
    cdef int si = FIELD * i
    cdef int sj = FIELD * j
    cdef int64_t key, base, rkey, qkey
    cdef long ei, ej, s
    cdef unordered_map[int64_t, Py_ssize_t] qslot
    cdef unordered_map[int64_t, Py_ssize_t] rslot
    qk = []
    qv = []
    rv = []
    for pkey, c in terms.items():
        key = <int64_t>pkey
        ei = ((key >> si) & MASK) - BIAS
        ej = ((key >> sj) & MASK) - BIAS
        base = key - ((<int64_t>ei) << si) - ((<int64_t>ej) << sj)
        rkey = base + ((<int64_t>(ei + ej)) << sj)
        if rslot.find(rkey) == rslot.end():
            rslot[rkey] = len(rv)
            rv.append(c)
        else:
            rv[rslot[rkey]] = rv[rslot[rkey]] + c
        for s in range(ei):
            qkey = base + ((<int64_t>s) << si) + ((<int64_t>(ei - 1 - s + ej)) << sj)
            if qslot.find(qkey) == qslot.end():
                qslot[qkey] = len(qv)
                qk.append(qkey)
                qv.append(c)
            else:
                qv[qslot[qkey]] = qv[qslot[qkey]] + c
    exact = all(not v for v in rv)
    return {kk: v for kk, v in zip(qk, qv) if v}, exact
