"""Normal and lognormal limit laws."""
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import kernels
from .rng import Role, check_seed, map_replicates

_LOG_4PI = math.log(4.0 * math.pi)


@dataclass(frozen=True)
class LimitLaw:
    family: str
    m: float
    sigma2: float

    def __post_init__(self):
        if self.family not in ("normal", "lognormal"):
            raise ValueError(f"family must be normal or lognormal, got {self.family!r}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError("sigma2 must be a positive real; degenerate limits are not supported")
        if not math.isfinite(self.m):
            raise ValueError("location must be finite")

    @property
    def sigma(self):
        return math.sqrt(self.sigma2)

    @property
    def mean(self):
        if self.family == "normal":
            return self.m
        return math.exp(self.m + 0.5 * self.sigma2)

    @property
    def var(self):
        if self.family == "normal":
            return self.sigma2
        return math.expm1(self.sigma2) * math.exp(2.0 * self.m + self.sigma2)

    def __str__(self):
        tag = "N" if self.family == "normal" else "LN"
        return f"{tag}({self.m:.17g}, {self.sigma2:.17g})"


def normal(m=0.0, sigma2=1.0):
    return LimitLaw("normal", float(m), float(sigma2))


def lognormal(m=0.0, sigma2=1.0):
    return LimitLaw("lognormal", float(m), float(sigma2))


def limit_cdf(law, x):
    """CDF of the law; the normal CDF is erfc-based (scipy ``ndtr``)."""
    x = np.asarray(x, dtype=float)
    if law.family == "normal":
        z = (x - law.m) / law.sigma
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(x > 0, (np.log(np.where(x > 0, x, 1.0)) - law.m) / law.sigma, -np.inf)
    out = special.ndtr(z)
    return float(out) if out.ndim == 0 else out


def limit_quantile(law, q):
    q = np.asarray(q, dtype=float)
    z = law.m + law.sigma * special.ndtri(q)
    out = z if law.family == "normal" else np.exp(z)
    return float(out) if np.ndim(out) == 0 else out


def normal_tail_quantile_expansion(x, terms=2):
    """Tail expansion of Phi^{-1}(1 - e^{-x}) with one or two terms.

    sqrt(2x) - (log 4pi + log x) / (2 sqrt(2x)); the error of the two-term
    form is O((log x)^2 / sqrt(x)).
    """
    if terms not in (1, 2):
        raise ValueError("terms must be 1 or 2")
    x = np.asarray(x, dtype=float)
    if np.any(x < 2):
        raise ValueError("expansion needs x >= 2")
    root = np.sqrt(2.0 * x)
    out = root if terms == 1 else root - (_LOG_4PI + np.log(x)) / (2.0 * root)
    return float(out) if out.ndim == 0 else out


def sample_limit(law, reps, seed, threads=1):
    """iid draws from ``law``; normals by the Marsaglia polar method."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    z = map_replicates(kernels.polar_normals, check_seed(seed), Role.LIMIT, int(reps), threads)
    y = law.m + law.sigma * z
    return y if law.family == "normal" else np.exp(y)
