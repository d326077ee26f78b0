"""numba twins of the kernels in ``_kernels_numpy``.

Same signatures, same counter layout. Loops run per key, so rejection samplers
and record scans stop early instead of materialising whole blocks.
"""
import math

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0 ** -53

_jit = njit(cache=True, nogil=True)


@_jit
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@_jit
def _draw_bits(key, i):
    return _mix64(key + (np.uint64(i) + _ONE) * _GOLDEN)


@_jit
def _draw_uniform(key, i):
    return (np.float64(_draw_bits(key, i) >> _S11) + 0.5) * _INV53


@_jit
def _uniforms(keys, start, count):
    out = np.empty((count, keys.shape[0]))
    for r in range(keys.shape[0]):
        for j in range(count):
            out[j, r] = _draw_uniform(keys[r], start + j)
    return out


def uniforms(keys, start, count):
    return _uniforms(np.asarray(keys, dtype=np.uint64), int(start), int(count))


@_jit
def _gamma_sums(keys, n):
    out = np.empty(keys.shape[0])
    for r in range(keys.shape[0]):
        key = keys[r]
        s = 0.0
        for i in range(n):
            s += -math.log(_draw_uniform(key, i))
        out[r] = s
    return out


def gamma_sums(keys, n):
    return _gamma_sums(np.asarray(keys, dtype=np.uint64), int(n))


@_jit
def _polar_normals(keys):
    out = np.empty(keys.shape[0])
    for r in range(keys.shape[0]):
        key = keys[r]
        j = 0
        while True:
            v1 = 2.0 * _draw_uniform(key, 2 * j) - 1.0
            v2 = 2.0 * _draw_uniform(key, 2 * j + 1) - 1.0
            j += 1
            s = v1 * v1 + v2 * v2
            if 0.0 < s < 1.0:
                out[r] = v1 * math.sqrt(-2.0 * math.log(s) / s)
                break
    return out


def polar_normals(keys):
    return _polar_normals(np.asarray(keys, dtype=np.uint64))


@_jit
def _gamma_mt(keys, shape):
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(keys.shape[0])
    for r in range(keys.shape[0]):
        key = keys[r]
        j = 0
        while True:
            u0 = _draw_uniform(key, 3 * j)
            u1 = _draw_uniform(key, 3 * j + 1)
            u2 = _draw_uniform(key, 3 * j + 2)
            j += 1
            x = math.sqrt(-2.0 * math.log(u0)) * math.cos(2.0 * math.pi * u1)
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            if math.log(u2) < 0.5 * x * x + d - d * v + d * math.log(v):
                out[r] = d * v
                break
    return out


def gamma_mt(keys, shape):
    return _gamma_mt(np.asarray(keys, dtype=np.uint64), float(shape))


@_jit
def _scan_records(keys, n_target, max_draws):
    nrep = keys.shape[0]
    rec_u = np.full((nrep, n_target), np.nan)
    rec_t = np.zeros((nrep, n_target), dtype=np.int64)
    found = np.zeros(nrep, dtype=np.int64)
    draws = np.zeros(nrep, dtype=np.int64)
    for r in range(nrep):
        key = keys[r]
        best = np.int64(-1)
        k = 0
        i = 0
        while k < n_target and i < max_draws:
            m = np.int64(_draw_bits(key, i) >> _S11)
            i += 1
            if m > best:
                best = m
                rec_u[r, k] = (np.float64(m) + 0.5) * _INV53
                rec_t[r, k] = i
                k += 1
        found[r] = k
        draws[r] = i
    return rec_u, rec_t, found, draws


def scan_records(keys, n_target, max_draws):
    return _scan_records(np.asarray(keys, dtype=np.uint64), int(n_target), int(max_draws))


@_jit
def _gammainc_scalar(a, x, lga, tol, max_iter):
    if x <= 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    pre = math.exp(-x + a * math.log(x) - lga)
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(max_iter):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * tol:
                break
        p = total * pre
        return p, 1.0 - p
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            break
    q = pre * h
    return 1.0 - q, q


@_jit
def _gammainc_pq(a, x, tol, max_iter):
    lga = math.lgamma(a)
    p = np.empty(x.shape[0])
    q = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        p[i], q[i] = _gammainc_scalar(a, x[i], lga, tol, max_iter)
    return p, q


def gammainc_pq(a, x, tol=1e-15, max_iter=100000):
    x = np.asarray(x, dtype=np.float64)
    p, q = _gammainc_pq(float(a), np.ascontiguousarray(x.ravel()), tol, max_iter)
    return p.reshape(x.shape), q.reshape(x.shape)
