"""Record transforms and their limit laws.

A ``TransformPlan`` says on which scale a record is read, how it is centred
and scaled, and which law the result approaches:

===========  =========  ==============================================  ==============
strategy     scale      statistic                                       limit
===========  =========  ==============================================  ==============
point-a      log        exp((log x - log H(n)) / sqrt(n))               LN(0, gamma^2)
point-b      direct     (x - H(n)) / sqrt(n)                            N(0, alpha^2)
point-c      endpoint   exp((log(uep-x) - log(uep-H(n))) / sqrt(n))     LN(0, gamma^2)
point-d      direct     x - H(n)                                        N(0, alpha^2)
theorem-2    direct     x - H(n)                                        N(0, alpha^2)
log-then-d   log        log x - log H(n)                                N(0, alpha^2)
===========  =========  ==============================================  ==============

``iterated-exp(k)`` applies log k times and then point-d. For point-b the
catalog variable is already the log of a heavy-tailed variable (an
exponential is the log of a Pareto), so it is read on its own scale.

Lognormal targets are always computed through logs; the power
``ratio ** n^{-1/2}`` is never formed.
"""
import math
from dataclasses import dataclass

import numpy as np

from .catalog import (
    CatalogError,
    aux_s_exponent,
    exponent_quantile,
    log_endpoint_gap,
    log_exponent_quantile,
)
from .limits import lognormal, normal

_LOG_4PI = math.log(4.0 * math.pi)

BASE_TAGS = ("point-a", "point-b", "point-c", "point-d", "theorem-2", "log-then-d")
CENTERINGS = ("exact", "simple", "refined")


@dataclass(frozen=True)
class TransformStrategy:
    tag: str
    depth: int = 0

    def __post_init__(self):
        if self.tag == "iterated-exp":
            if self.depth not in (1, 2):
                raise ValueError("iterated-exp(k) is supported for k in {1, 2}")
        elif self.tag not in BASE_TAGS:
            raise ValueError(f"unknown strategy {self.tag!r}")
        elif self.depth:
            raise ValueError(f"{self.tag} takes no depth")

    def __str__(self):
        return f"iterated-exp({self.depth})" if self.tag == "iterated-exp" else self.tag

    @property
    def lognormal_target(self):
        return self.tag in ("point-a", "point-c")

    @property
    def log_depth(self):
        if self.tag == "iterated-exp":
            return self.depth
        return 1 if self.tag in ("point-a", "log-then-d") else 0

    @property
    def working_scale(self):
        if self.tag == "point-c":
            return "endpoint"
        return "log" if self.log_depth else "direct"


def parse_strategy(text):
    """``point-a`` ... ``log-then-d``, or ``iterated-exp(k)`` / ``iterated-exp:k``."""
    text = text.strip()
    if text.startswith("iterated-exp"):
        rest = text[len("iterated-exp"):].strip("():")
        try:
            depth = int(rest) if rest else 1
        except ValueError:
            raise ValueError(f"malformed strategy {text!r}") from None
        return TransformStrategy("iterated-exp", depth)
    return TransformStrategy(text)


def refined_normal_centering(n):
    """b_n = sqrt(2n) - (log 4pi + log n) / (2 sqrt(2n)), for n >= 2."""
    if n < 2:
        raise ValueError("refined centering needs n >= 2")
    root = math.sqrt(2.0 * n)
    return root - (_LOG_4PI + math.log(n)) / (2.0 * root)


@dataclass(frozen=True)
class TransformPlan:
    dist: object
    strategy: TransformStrategy
    law: object

    @property
    def working_scale(self):
        return self.strategy.working_scale

    @property
    def is_catalog_route(self):
        return str(self.strategy) == self.dist.strategy

    def working_from_exponent(self, s):
        """The record H(s) read on the working scale, evaluated from s."""
        depth = self.strategy.log_depth
        if self.working_scale == "endpoint":
            return log_endpoint_gap(self.dist, s)
        if depth == 0:
            return exponent_quantile(self.dist, s)
        w = log_exponent_quantile(self.dist, s)
        for _ in range(depth - 1):
            w = np.log(w)
        return w

    def working_from_value(self, x):
        x = np.asarray(x, dtype=float)
        if self.working_scale == "endpoint":
            if np.any(x >= self.dist.uep):
                raise ValueError("point-c needs x < uep")
            return np.log(self.dist.uep - x)
        w = x
        for _ in range(self.strategy.log_depth):
            if np.any(w <= 0):
                raise ValueError(f"{self.strategy} needs positive values on every log level")
            w = np.log(w)
        return w

    def center(self, n, centering="exact"):
        """Centring on the working scale.

        ``exact`` is H(n) read on the working scale. ``simple`` is the closed
        form listed for the entry (sqrt(2n) for the normal and lognormal
        entries). ``refined`` is b_n for those two entries and H(n) elsewhere.
        """
        if centering not in CENTERINGS:
            raise ValueError(f"centering must be one of {CENTERINGS}")
        if centering != "exact" and self.is_catalog_route:
            closed = _closed_form_center(self.dist, n, centering)
            if closed is not None:
                return closed
        return float(self.working_from_exponent(float(n)))

    def scale(self, n):
        return math.sqrt(n) if self.strategy.tag in ("point-a", "point-b", "point-c") else 1.0

    def _finish(self, w, n, centering):
        z = (w - self.center(n, centering)) / self.scale(n)
        return np.exp(z) if self.strategy.lognormal_target else z


def _closed_form_center(dist, n, centering):
    p = dist.params
    if dist.id in ("normal", "lognormal"):
        if centering == "simple":
            return math.sqrt(2.0 * n)
        return refined_normal_centering(n) if n >= 2 else None
    if centering == "refined":
        return None
    simple = {
        "logistic": lambda: float(n),
        "gumbel": lambda: float(n),
        "loglogistic": lambda: n / p["p"],
        "singhmaddala": lambda: n / (p["b"] * p["c"]) - math.log(p["a"]) / p["b"],
    }.get(dist.id)
    return simple() if simple else None


def _estimate_limit(fn, lo=1e6):
    a, b = fn(lo), fn(4 * lo)
    if not (math.isfinite(a) and math.isfinite(b) and b > 0 and abs(a / b - 1) < 0.01):
        return None
    return b


def _working_slope(plan, x):
    """d/dx of the working value at exponent x (s on the working scale)."""
    if plan.strategy.log_depth == 0:
        return float(aux_s_exponent(plan.dist, x))
    h = 1e-3 * x
    return float((plan.working_from_exponent(x + h) - plan.working_from_exponent(x - h)) / (2 * h))


def _plan_law(dist, strategy):
    tag = strategy.tag
    if tag in ("point-a", "point-c"):
        if tag == "point-a" and not dist.gamma > 0:
            raise CatalogError(f"point-a needs gamma > 0; {dist.id} has gamma = {dist.gamma}")
        if tag == "point-c" and not (dist.gamma < 0 and math.isfinite(dist.uep)):
            raise CatalogError(f"point-c needs gamma < 0 and a finite uep; {dist.id} has gamma = {dist.gamma}")
        return lognormal(0.0, dist.gamma ** 2)
    if strategy.log_depth and dist.lep < 0:
        raise CatalogError(f"{strategy} needs a positive support; {dist.id} has lep = {dist.lep}")
    if str(strategy) == dist.strategy:
        return normal(0.0, dist.alpha2)
    if dist.gamma != 0 and strategy.log_depth == 0:
        raise CatalogError(f"{strategy} needs gamma = 0; {dist.id} has gamma = {dist.gamma}")
    if not dist.has_aux_s:
        raise CatalogError(f"{dist.id}: no auxiliary function to determine the limit scale of {strategy}")
    probe = TransformPlan(dist, strategy, None)
    if tag == "point-b":
        sigma = _estimate_limit(lambda x: _working_slope(probe, x))
    else:
        sigma = _estimate_limit(lambda x: math.sqrt(x) * _working_slope(probe, x))
    if sigma is None:
        raise CatalogError(f"{dist.id}: {strategy} has no finite limit scale (auxiliary function does not settle)")
    return normal(0.0, sigma ** 2)


def make_plan(dist, strategy):
    if isinstance(strategy, str):
        strategy = parse_strategy(strategy)
    return TransformPlan(dist, strategy, _plan_law(dist, strategy))


def plan_for(dist):
    """The routing used for the entry: its catalog strategy and limit law."""
    return make_plan(dist, dist.strategy)


def limit_law_of(dist):
    return plan_for(dist).law


def apply_transform(plan, n, x, centering="exact"):
    """Transform direct-scale record value(s) x taken at record index n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = plan._finish(plan.working_from_value(x), n, centering)
    return float(out) if np.ndim(out) == 0 else out


def transform_exponents(plan, n, s, centering="exact"):
    """Transform the records H(s) using s directly (no loss near endpoints or overflow)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = plan._finish(np.asarray(plan.working_from_exponent(s), dtype=float), n, centering)
    return float(out) if np.ndim(out) == 0 else out


_CENTERING_TEXT = {
    "exponential": "n/lambda",
    "normal": "(2n)^{1/2}; refined b_n",
    "rayleigh": "(n/rho)^{1/2}",
    "logistic": "n",
    "lognormal": "(2n)^{1/2} on log X; refined b_n",
    "gumbel": "n",
    "loglogistic": "exp(n/p)",
    "singhmaddala": "a^{-1/b} exp(n/(bc))",
    "uniform": "1 - e^{-n}",
    "powerfn": "1 - e^{-n/k}",
}

_STATISTIC_TEXT = {
    "point-a": "(X/c_n)^{n^{-1/2}}",
    "point-b": "(X - c_n)/n^{1/2}",
    "point-c": "((uep - X)/(uep - c_n))^{n^{-1/2}}",
    "point-d": "X - c_n",
    "theorem-2": "X - c_n",
    "log-then-d": "log X - c_n",
}


def describe_route(dist):
    """Human-readable routing of one entry: strategy, centring, statistic, law."""
    plan = plan_for(dist)
    return {
        "strategy": str(plan.strategy),
        "working_scale": plan.working_scale,
        "centering": _CENTERING_TEXT.get(dist.id, "H(n)"),
        "statistic": _STATISTIC_TEXT.get(plan.strategy.tag, "log^k X - c_n"),
        "limit_law": str(plan.law),
    }
