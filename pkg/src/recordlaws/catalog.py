"""Distribution catalog in exponent scale.

The central primitive is ``exponent_quantile(dist, x) = F^{-1}(1 - e^{-x})``,
written ``H(x)`` below. Every entry evaluates H, log H and (for bounded
entries) ``log(uep - H)`` from closed forms rearranged so that ``e^{-x}`` is
never subtracted from 1. Records are ``H(S)`` with S a gamma sum, so this is
what keeps n = 1600 computable.

For the light-tailed entries the auxiliary function is exposed in the same
scale: ``s(e^{-x}) = H'(x)``.

Entries are addressed as ``id`` or ``id:key=value,...``, e.g.
``singhmaddala:a=2,b=1.5,c=2``.
"""
import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np
from scipy import special

_LOG_2PI = math.log(2.0 * math.pi)


class CatalogError(ValueError):
    """Unknown entry, malformed parameter list or invalid parameter value."""


@dataclass(frozen=True)
class TailRepresentation:
    """Which tail representation the entry satisfies, with its known constants.

    ``kind`` is one of ``karamata-frechet``, ``karamata-weibull``, ``dehaan``.
    The functions a(u) and l(u) are not unique and are recorded in ``notes``
    only.
    """

    kind: str
    c: float | None = None
    d: float | None = None
    s_closed_form: str | None = None
    notes: str = ""


@dataclass(frozen=True)
class DistributionSpec:
    id: str
    params: MappingProxyType
    gamma: float
    lep: float
    uep: float
    strategy: str
    alpha: float | None
    tail: TailRepresentation
    s_valid_below: float | None = None
    alpha_sq: float | None = None
    _family: "_Family" = field(repr=False, compare=False, default=None)

    @property
    def label(self):
        if not self.params:
            return self.id
        return self.id + ":" + ",".join(f"{k}={_fmt(v)}" for k, v in self.params.items())

    @property
    def params_text(self):
        return ",".join(f"{k}={_fmt(v)}" for k, v in self.params.items())

    @property
    def alpha2(self):
        """alpha^2, exact where a closed form exists."""
        if self.alpha_sq is not None:
            return self.alpha_sq
        return None if self.alpha is None else self.alpha ** 2

    @property
    def has_aux_s(self):
        return self._family.has_s


def _fmt(v):
    return f"{v:.17g}"


def _log_expm1(y):
    """log(e^y - 1) for y > 0 without overflow or cancellation."""
    return y + np.log(-np.expm1(-y))


def _softplus(y):
    return np.logaddexp(0.0, y)


def _normal_h(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= math.log(2.0)
    mid = ~small & (x <= 700.0)
    big = x > 700.0
    out[small] = special.ndtri(-np.expm1(-x[small]))
    out[mid] = -special.ndtri(np.exp(-x[mid]))
    if big.any():
        xb = x[big]
        lx = np.log(xb)
        t = np.sqrt(2.0 * xb) - (math.log(4.0 * math.pi) + lx) / (2.0 * np.sqrt(2.0 * xb))
        # Newton on log Phi_c(t) = -x; converges in a few steps from the expansion
        for _ in range(8):
            logsf = special.log_ndtr(-t)
            step = (logsf + xb) / np.exp(-0.5 * t * t - 0.5 * _LOG_2PI - logsf)
            t = t + step
            if np.all(np.abs(step) < 1e-15 * t):
                break
        out[big] = t
    return out


def _normal_s(x):
    # s(e^{-x}) = e^{-x} / phi(H(x))
    t = _normal_h(x)
    return np.exp(-np.asarray(x, dtype=float) + 0.5 * t * t + 0.5 * _LOG_2PI)


def _normal_cumhaz(t):
    return -special.log_ndtr(-np.asarray(t, dtype=float))


class _Family:
    name = ""
    defaults = {}
    has_s = False
    has_log = False
    has_gap = False

    def validate(self, p):
        for k, v in p.items():
            if not (math.isfinite(v) and v > 0):
                raise CatalogError(f"{self.name}: parameter {k} must be a positive real, got {v}")

    # Each of these receives the parameter mapping as ``p``.
    def h(self, x, p):
        raise NotImplementedError

    def log_h(self, x, p):
        raise CatalogError(f"{self.name}: support is not positive, log scale undefined")

    def log_gap(self, x, p):
        raise CatalogError(f"{self.name}: upper endpoint is infinite")

    def cdf(self, t, p):
        raise NotImplementedError

    def cumhaz(self, t, p):
        raise NotImplementedError

    def s_exp(self, x, p):
        raise CatalogError(f"{self.name}: no closed-form auxiliary function s(u)")


class _Exponential(_Family):
    name = "exponential"
    defaults = {"lambda": 1.0}
    has_s = has_log = True

    def spec(self, p):
        lam = p["lambda"]
        return dict(gamma=0.0, lep=0.0, uep=math.inf, strategy="point-b", alpha=1.0 / lam, alpha_sq=1.0 / lam ** 2,
                    tail=TailRepresentation("dehaan", d=-1.0 / lam, s_closed_form="1/lambda",
                                            notes="s constant, so (Hb) fails; exp(X) is Pareto with index 1/lambda"),
                    s_valid_below=1.0)

    def h(self, x, p):
        return x / p["lambda"]

    def log_h(self, x, p):
        return np.log(x) - math.log(p["lambda"])

    def cdf(self, t, p):
        return np.where(t > 0, -np.expm1(-p["lambda"] * np.maximum(t, 0.0)), 0.0)

    def cumhaz(self, t, p):
        return p["lambda"] * np.maximum(t, 0.0)

    def s_exp(self, x, p):
        return np.full(np.shape(x), 1.0 / p["lambda"])


class _Normal(_Family):
    name = "normal"
    has_s = True

    def spec(self, p):
        return dict(gamma=0.0, lep=-math.inf, uep=math.inf, strategy="point-d", alpha=math.sqrt(0.5), alpha_sq=0.5,
                    tail=TailRepresentation("dehaan", s_closed_form="u / phi(Phi^{-1}(1-u))",
                                            notes="s(u) ~ (2 log(1/u))^{-1/2}"),
                    s_valid_below=0.5)

    def h(self, x, p):
        return _normal_h(x)

    def cdf(self, t, p):
        return special.ndtr(t)

    def cumhaz(self, t, p):
        return _normal_cumhaz(t)

    def s_exp(self, x, p):
        return _normal_s(x)


class _Rayleigh(_Family):
    name = "rayleigh"
    defaults = {"rho": 1.0}
    has_s = has_log = True

    def spec(self, p):
        rho = p["rho"]
        return dict(gamma=0.0, lep=0.0, uep=math.inf, strategy="point-d", alpha=0.5 / math.sqrt(rho), alpha_sq=0.25 / rho,
                    tail=TailRepresentation("dehaan", s_closed_form="1/(2 rho (-(1/rho) log u)^{1/2})"),
                    s_valid_below=1.0)

    def h(self, x, p):
        return np.sqrt(x / p["rho"])

    def log_h(self, x, p):
        return 0.5 * (np.log(x) - math.log(p["rho"]))

    def cdf(self, t, p):
        t = np.maximum(t, 0.0)
        return -np.expm1(-p["rho"] * t * t)

    def cumhaz(self, t, p):
        t = np.maximum(t, 0.0)
        return p["rho"] * t * t

    def s_exp(self, x, p):
        return 0.5 / np.sqrt(p["rho"] * np.asarray(x, dtype=float))


class _Logistic(_Family):
    name = "logistic"
    has_s = True

    def spec(self, p):
        return dict(gamma=0.0, lep=-math.inf, uep=math.inf, strategy="point-b", alpha=1.0,
                    tail=TailRepresentation("dehaan", s_closed_form="1/(1-u)",
                                            notes="exp(X) is log-logistic with index 1"),
                    s_valid_below=1.0)

    def h(self, x, p):
        return _log_expm1(np.asarray(x, dtype=float))

    def cdf(self, t, p):
        return special.expit(t)

    def cumhaz(self, t, p):
        return _softplus(np.asarray(t, dtype=float))

    def s_exp(self, x, p):
        return -1.0 / np.expm1(-np.asarray(x, dtype=float))


class _Lognormal(_Family):
    name = "lognormal"
    has_s = has_log = True

    def spec(self, p):
        # alpha is the limit scale on the log scale the entry is routed through
        return dict(gamma=0.0, lep=0.0, uep=math.inf, strategy="log-then-d", alpha=math.sqrt(0.5), alpha_sq=0.5,
                    tail=TailRepresentation("dehaan", s_closed_form="H * s_normal",
                                            notes="s(u) -> infinity, so (Hb) fails on the direct scale"),
                    s_valid_below=0.5)

    def h(self, x, p):
        return np.exp(_normal_h(x))

    def log_h(self, x, p):
        return _normal_h(x)

    def cdf(self, t, p):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, special.ndtr(np.log(np.where(t > 0, t, 1.0))), 0.0)

    def cumhaz(self, t, p):
        t = np.asarray(t, dtype=float)
        return np.where(t > 0, _normal_cumhaz(np.log(np.where(t > 0, t, 1.0))), 0.0)

    def s_exp(self, x, p):
        return np.exp(_normal_h(x)) * _normal_s(x)


class _Gumbel(_Family):
    name = "gumbel"
    has_s = True

    def spec(self, p):
        return dict(gamma=0.0, lep=-math.inf, uep=math.inf, strategy="point-b", alpha=1.0,
                    tail=TailRepresentation("dehaan", s_closed_form="u/((1-u) log(1/(1-u)))"),
                    s_valid_below=1.0)

    @staticmethod
    def _ratio(x):
        # q = -log(1-u)/u with u = e^{-x}; series once u is tiny
        u = np.exp(-x)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(u > 1e-8, -np.log1p(-u) / np.where(u > 1e-8, u, 1.0), 1.0 + 0.5 * u)
        return u, q

    def h(self, x, p):
        x = np.asarray(x, dtype=float)
        _, q = self._ratio(x)
        return x - np.log(q)

    def cdf(self, t, p):
        return np.exp(-np.exp(-np.asarray(t, dtype=float)))

    def cumhaz(self, t, p):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            w = np.exp(-t)
        direct = -np.log(-np.expm1(-np.where(w > 1e-8, w, 1.0)))
        return np.where(w > 1e-8, direct, t + 0.5 * w)

    def s_exp(self, x, p):
        x = np.asarray(x, dtype=float)
        u, q = self._ratio(x)
        return 1.0 / (q * (1.0 - u))


class _Loglogistic(_Family):
    name = "loglogistic"
    defaults = {"p": 1.0}
    has_log = True

    def spec(self, p):
        return dict(gamma=1.0 / p["p"], lep=0.0, uep=math.inf, strategy="point-a", alpha=None,
                    tail=TailRepresentation("karamata-frechet", c=1.0,
                                            notes="F^{-1}(1-u) = u^{-1/p} (1-u)^{1/p}; a(u) = (1-u)^{1/p} - 1, l = 0"))

    def h(self, x, p):
        return np.exp(self.log_h(x, p))

    def log_h(self, x, p):
        return _log_expm1(np.asarray(x, dtype=float)) / p["p"]

    def cdf(self, t, p):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, special.expit(p["p"] * np.log(np.maximum(t, 0.0))), 0.0)

    def cumhaz(self, t, p):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, _softplus(p["p"] * np.log(np.maximum(t, 0.0))), 0.0)


class _SinghMaddala(_Family):
    name = "singhmaddala"
    defaults = {"a": 1.0, "b": 1.0, "c": 1.0}
    has_log = True

    def spec(self, p):
        a, b, c = p["a"], p["b"], p["c"]
        return dict(gamma=1.0 / (b * c), lep=0.0, uep=math.inf, strategy="point-a", alpha=None,
                    tail=TailRepresentation("karamata-frechet", c=a ** (-1.0 / b),
                                            notes="F^{-1}(1-u) = a^{-1/b} u^{-1/(bc)} (1-u^{1/c})^{1/b}"))

    def h(self, x, p):
        return np.exp(self.log_h(x, p))

    def log_h(self, x, p):
        x = np.asarray(x, dtype=float)
        return (_log_expm1(x / p["c"]) - math.log(p["a"])) / p["b"]

    def cumhaz(self, t, p):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            y = math.log(p["a"]) + p["b"] * np.log(np.maximum(t, 0.0))
        return np.where(t > 0, p["c"] * _softplus(y), 0.0)

    def cdf(self, t, p):
        return -np.expm1(-self.cumhaz(t, p))


class _Uniform(_Family):
    name = "uniform"
    has_log = has_gap = True

    def spec(self, p):
        return dict(gamma=-1.0, lep=0.0, uep=1.0, strategy="point-c", alpha=None,
                    tail=TailRepresentation("karamata-weibull", c=1.0, notes="uep - F^{-1}(1-u) = u"))

    def h(self, x, p):
        return -np.expm1(-np.asarray(x, dtype=float))

    def log_h(self, x, p):
        return np.log(self.h(x, p))

    def log_gap(self, x, p):
        return -np.asarray(x, dtype=float)

    def cdf(self, t, p):
        return np.clip(t, 0.0, 1.0)

    def cumhaz(self, t, p):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            return -np.log1p(-t)


class _PowerFn(_Family):
    name = "powerfn"
    defaults = {"k": 2.0}
    has_log = has_gap = True

    def spec(self, p):
        return dict(gamma=-1.0 / p["k"], lep=0.0, uep=1.0, strategy="point-c", alpha=None,
                    tail=TailRepresentation("karamata-weibull", c=1.0, notes="uep - F^{-1}(1-u) = u^{1/k}"))

    def h(self, x, p):
        return -np.expm1(-np.asarray(x, dtype=float) / p["k"])

    def log_h(self, x, p):
        return np.log(self.h(x, p))

    def log_gap(self, x, p):
        return -np.asarray(x, dtype=float) / p["k"]

    def cdf(self, t, p):
        return -np.expm1(-self.cumhaz(t, p))

    def cumhaz(self, t, p):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            return -p["k"] * np.log1p(-t)


_FAMILIES = {f.name: f for f in (
    _Exponential(), _Normal(), _Rayleigh(), _Logistic(), _Lognormal(), _Gumbel(),
    _Loglogistic(), _SinghMaddala(), _Uniform(), _PowerFn(),
)}
_ALIASES = {"λ": "lambda", "ρ": "rho"}

CATALOG_IDS = tuple(_FAMILIES)


def make_dist(dist_id, **params):
    """Build a catalog entry; missing parameters take the entry defaults."""
    fam = _FAMILIES.get(dist_id)
    if fam is None:
        raise CatalogError(f"unknown distribution {dist_id!r}; choose from {', '.join(CATALOG_IDS)}")
    merged = dict(fam.defaults)
    for key, value in params.items():
        key = _ALIASES.get(key, key)
        if key not in fam.defaults:
            raise CatalogError(f"{dist_id}: unknown parameter {key!r}")
        try:
            merged[key] = float(value)
        except (TypeError, ValueError):
            raise CatalogError(f"{dist_id}: parameter {key} is not a number: {value!r}") from None
    fam.validate(merged)
    return DistributionSpec(id=dist_id, params=MappingProxyType(merged), _family=fam, **fam.spec(merged))


def parse_params(text):
    """Parse ``key=value,key=value`` into a dict of strings."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise CatalogError(f"malformed parameter {item!r}; expected key=value")
        out[key.strip()] = value.strip()
    return out


def parse_dist(text, params=None):
    """Parse ``id[:k=v,...]``; a separate ``params`` string is merged on top."""
    dist_id, _, inline = text.strip().partition(":")
    merged = parse_params(inline)
    merged.update(parse_params(params))
    return make_dist(dist_id.strip(), **merged)


def default_catalog():
    """One entry per catalog id with default parameters."""
    return [make_dist(name) for name in CATALOG_IDS]


def _as_exponent(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("exponent must be finite")
    if np.any(x <= 0):
        raise ValueError("exponent must be > 0")
    return x


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def exponent_quantile(dist, x):
    """H(x) = F^{-1}(1 - e^{-x}) for x > 0 (scalar or array)."""
    x = _as_exponent(x)
    with np.errstate(over="ignore"):
        return _out(dist._family.h(x, dist.params))


def log_exponent_quantile(dist, x):
    """log H(x); defined for entries with positive support."""
    x = _as_exponent(x)
    return _out(dist._family.log_h(x, dist.params))


def log_endpoint_gap(dist, x):
    """log(uep - H(x)); defined for entries with a finite upper endpoint."""
    x = _as_exponent(x)
    return _out(dist._family.log_gap(x, dist.params))


def quantile(dist, u):
    """F^{-1}(u) for u in (0, 1), through the exponent scale."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("u must lie in (0, 1)")
    return exponent_quantile(dist, -np.log1p(-u))


def cdf(dist, t):
    """F(t), clamped to 0 below lep and 1 above uep."""
    t = np.asarray(t, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        v = dist._family.cdf(t, dist.params)
    v = np.where(t <= dist.lep, 0.0, np.where(t >= dist.uep, 1.0, v))
    return _out(np.clip(v, 0.0, 1.0))


def cumulative_hazard(dist, t):
    """-log(1 - F(t)), evaluated without forming 1 - F(t)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        v = dist._family.cumhaz(t, dist.params)
    v = np.where(t <= dist.lep, 0.0, np.where(t >= dist.uep, np.inf, v))
    return _out(v)


def aux_s_exponent(dist, x):
    """s(e^{-x}) = H'(x), the auxiliary function in exponent scale."""
    x = _as_exponent(x)
    return _out(dist._family.s_exp(x, dist.params))


def aux_s(dist, u):
    """de Haan auxiliary function s(u) = -u d/du F^{-1}(1-u).

    Only light-tailed entries carry a closed form; ``dist.s_valid_below`` is
    the u0 below which the formula is the one to use.
    """
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("u must lie in (0, 1)")
    if not dist.has_aux_s:
        raise CatalogError(f"{dist.id}: no closed-form auxiliary function s(u)")
    if np.any(u >= dist.s_valid_below):
        raise ValueError(f"{dist.id}: s(u) formula documented for u < {dist.s_valid_below}")
    return aux_s_exponent(dist, -np.log(u))


def estimate_s_pi_variation(dist, u, theta):
    """(F^{-1}(1 - theta u) - F^{-1}(1 - u)) / (-log theta)."""
    if theta <= 0 or theta == 1:
        raise ValueError("theta must be positive and != 1")
    if not (0 < u < 1 and 0 < theta * u < 1):
        raise ValueError("need 0 < u < 1 and 0 < theta*u < 1")
    x = -math.log(u)
    shifted = x - math.log(theta)
    diff = exponent_quantile(dist, shifted) - exponent_quantile(dist, x)
    return float(diff / -math.log(theta))


@dataclass(frozen=True)
class RegularVariationReport:
    dist_id: str
    theta: float
    target: float
    u_grid: tuple
    ratios: tuple
    deviations: tuple


def check_regular_variation(dist, u_grid, theta=2.0):
    """Ratios F^{-1}(1-theta u)/F^{-1}(1-u) (gamma > 0) or the endpoint-gap ratios
    (gamma < 0), compared to theta^{-gamma} along ``u_grid``."""
    if dist.gamma == 0:
        raise CatalogError(f"{dist.id}: regular variation check needs gamma != 0")
    if theta <= 0 or theta == 1:
        raise ValueError("theta must be positive and != 1")
    u = np.atleast_1d(np.asarray(u_grid, dtype=float))
    if np.any((u <= 0) | (theta * u >= 1) | (u >= 1)):
        raise ValueError("need 0 < u < 1 and theta*u < 1 on the whole grid")
    x = -np.log(u)
    xs = x - math.log(theta)
    if dist.gamma > 0:
        ratios = np.exp(log_exponent_quantile(dist, xs) - log_exponent_quantile(dist, x))
    else:
        ratios = np.exp(log_endpoint_gap(dist, xs) - log_endpoint_gap(dist, x))
    target = theta ** (-dist.gamma)
    ratios = np.atleast_1d(ratios)
    return RegularVariationReport(dist.id, float(theta), float(target), tuple(u.tolist()),
                                  tuple(ratios.tolist()), tuple((ratios - target).tolist()))
