"""Pure-numpy kernels.

Every function here has a twin with the same signature in ``_kernels_numba``.
Random draws come from the stateless counter hash in ``mix64``: draw ``i`` of
the stream keyed by ``k`` is ``mix64(k + (i + 1) * GOLDEN)``, so both backends
consume identical bit streams.
"""
import math

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0 ** -53

# Cells of (replicates x draws) materialised at once by the vectorised paths.
_BLOCK = 1 << 21


def mix64(z):
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _bits(keys, counters):
    # keys (R,), counters (C,) -> bits (C, R)
    return mix64(keys[None, :] + (counters[:, None] + np.uint64(1)) * GOLDEN)


def _to_uniform(bits):
    return ((bits >> _S11).astype(np.float64) + 0.5) * _INV53


def uniforms(keys, start, count):
    """Uniforms in (0, 1), shape (count, R), from counters start..start+count-1."""
    counters = np.arange(start, start + count, dtype=np.uint64)
    return _to_uniform(_bits(np.asarray(keys, dtype=np.uint64), counters))


def gamma_sums(keys, n):
    """Sum of n unit exponentials per key, added sequentially in counter order."""
    keys = np.asarray(keys, dtype=np.uint64)
    out = np.zeros(keys.shape[0])
    rows = max(1, _BLOCK // max(keys.shape[0], 1))
    for start in range(0, n, rows):
        count = min(rows, n - start)
        e = -np.log(uniforms(keys, start, count))
        for row in e:  # sequential, same order as the scalar loop
            out += row
    return out


def _rejection_rounds(keys, per_attempt, attempt_fn):
    """Run a per-key sequential rejection loop as vectorised rounds.

    ``attempt_fn(u)`` receives uniforms of shape (per_attempt, m) for one
    attempt of m pending keys and returns ``(accepted_mask, value)``. Attempt
    ``j`` of every key consumes counters ``per_attempt*j`` onwards, matching
    the scalar loop.
    """
    keys = np.asarray(keys, dtype=np.uint64)
    out = np.empty(keys.shape[0])
    pending = np.arange(keys.shape[0])
    attempt = 0
    while pending.size:
        u = uniforms(keys[pending], per_attempt * attempt, per_attempt)
        ok, value = attempt_fn(u)
        out[pending[ok]] = value[ok]
        pending = pending[~ok]
        attempt += 1
    return out


def _polar_attempt(u):
    v1 = 2.0 * u[0] - 1.0
    v2 = 2.0 * u[1] - 1.0
    s = v1 * v1 + v2 * v2
    ok = (s > 0.0) & (s < 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = v1 * np.sqrt(-2.0 * np.log(s) / s)
    return ok, z


def polar_normals(keys):
    """One standard normal per key by the Marsaglia polar method."""
    return _rejection_rounds(keys, 2, _polar_attempt)


def gamma_mt(keys, shape):
    """Gamma(shape, 1) per key by Marsaglia-Tsang; shape >= 1.

    Each attempt uses three uniforms: two for a Box-Muller normal, one for the
    acceptance test.
    """
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)

    def attempt(u):
        x = np.sqrt(-2.0 * np.log(u[0])) * np.cos(2.0 * math.pi * u[1])
        v = 1.0 + c * x
        ok = v > 0.0
        v = np.where(ok, v * v * v, 1.0)
        ok &= np.log(u[2]) < 0.5 * x * x + d - d * v + d * np.log(v)
        return ok, d * v

    return _rejection_rounds(keys, 3, attempt)


def scan_records(keys, n_target, max_draws):
    """Scan iid uniforms per key and collect strict upper records.

    Returns ``(record_u, record_times, found, draws)``; ``record_u`` and
    ``record_times`` have shape (R, n_target), unused slots hold nan / 0.
    Records are detected on the 53-bit integer mantissa, so ties are exact.
    """
    keys = np.asarray(keys, dtype=np.uint64)
    r = keys.shape[0]
    rec_u = np.full((r, n_target), np.nan)
    rec_t = np.zeros((r, n_target), dtype=np.int64)
    found = np.zeros(r, dtype=np.int64)
    draws = np.zeros(r, dtype=np.int64)
    for i in range(r):
        key = keys[i : i + 1]
        best = -1
        pos = 0
        chunk = 64
        k = 0
        while k < n_target and pos < max_draws:
            count = min(chunk, max_draws - pos)
            counters = np.arange(pos, pos + count, dtype=np.uint64)
            m = (_bits(key, counters)[:, 0] >> _S11).astype(np.int64)
            prior = np.empty(count, dtype=np.int64)
            prior[0] = best
            if count > 1:
                np.maximum(np.maximum.accumulate(m[:-1]), best, out=prior[1:])
            hits = np.flatnonzero(m > prior)
            need = n_target - k
            if hits.size >= need:
                hits = hits[:need]
                used = int(hits[-1]) + 1
            else:
                used = count
            for h in hits:
                rec_u[i, k] = (float(m[h]) + 0.5) * _INV53
                rec_t[i, k] = pos + int(h) + 1
                k += 1
            if used:
                best = max(best, int(m[:used].max()))
            pos += used
            chunk = min(chunk * 4, 1 << 20)
        found[i] = k
        draws[i] = pos
    return rec_u, rec_t, found, draws


def gammainc_pq(a, x, tol=1e-15, max_iter=100000):
    """Regularised incomplete gamma (P, Q) at shape a for an array of x.

    Series for x < a + 1 (gives P), modified Lentz continued fraction
    otherwise (gives Q); the other is the complement.
    """
    x = np.asarray(x, dtype=np.float64)
    flat = x.ravel()
    p = np.empty_like(flat)
    q = np.empty_like(flat)
    lga = math.lgamma(a)

    low = flat <= 0.0
    p[low], q[low] = 0.0, 1.0
    top = np.isposinf(flat)
    p[top], q[top] = 1.0, 0.0
    body = ~(low | top)

    ser = body & (flat < a + 1.0)
    if ser.any():
        xs = flat[ser]
        ap = np.full_like(xs, a)
        term = np.full_like(xs, 1.0 / a)
        total = term.copy()
        active = np.ones(xs.shape, dtype=bool)
        for _ in range(max_iter):
            ap += 1.0
            term *= xs / ap
            total += term
            active &= np.abs(term) >= np.abs(total) * tol
            if not active.any():
                break
        ps = total * np.exp(-xs + a * np.log(xs) - lga)
        p[ser] = ps
        q[ser] = 1.0 - ps

    cf = body & ~ser
    if cf.any():
        xs = flat[cf]
        tiny = 1e-300
        b = xs + 1.0 - a
        c = np.full_like(xs, 1.0 / tiny)
        d = 1.0 / b
        h = d.copy()
        active = np.ones(xs.shape, dtype=bool)
        for i in range(1, max_iter):
            an = -i * (i - a)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < tiny, tiny, d)
            c = b + an / c
            c = np.where(np.abs(c) < tiny, tiny, c)
            d = 1.0 / d
            delta = d * c
            h = np.where(active, h * delta, h)
            active &= np.abs(delta - 1.0) >= tol
            if not active.any():
                break
        qs = np.exp(-xs + a * np.log(xs) - lga) * h
        q[cf] = qs
        p[cf] = 1.0 - qs
    return p.reshape(x.shape), q.reshape(x.shape)
