"""Numerical checks of the hypotheses behind the light-tailed limits.

(Hb) asks that sqrt(n) s(e^{-n}) settle at some alpha > 0. (Ha) asks that s
barely moves between e^{-n} and e^{-S(n)}; it is measured here as

    sup |s(u)/s(v) - 1|   over  u, v in [min(e^{-n}, e^{-S}), max(e^{-n}, e^{-S})],

which for monotone s is attained at the two endpoints. The same supremum
taken over u/v itself is e^{|S - n|} - 1 and grows without bound for every
distribution; it is reported as ``ha_literal_median`` for reference only.

(Gb) is probed along the five paths x_n = n + c sqrt(n), c in {-2, ..., 2}.
All evaluations are in exponent scale, so n in the thousands is fine.
"""
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .catalog import CatalogError, aux_s_exponent
from .records import sample_gamma_sum

HB_RTOL = 0.01
GB_RTOL = 0.02
GB_OFFSETS = (-2, -1, 0, 1, 2)


@dataclass
class HypothesisReport:
    dist_id: str
    n_grid: list = field(default_factory=list)
    hb_values: list = field(default_factory=list)
    hb_alpha: float | None = None
    hb_diverges: bool | None = None
    ha_n: list = field(default_factory=list)
    ha_quantiles: list = field(default_factory=list)
    ha_verdict: str | None = None
    ha_literal_median: list = field(default_factory=list)
    gb_offsets: list = field(default_factory=lambda: list(GB_OFFSETS))
    gb_path_values: list = field(default_factory=list)
    gb_accepted: bool | None = None

    def merge(self, other):
        for name, value in asdict(other).items():
            if name in ("dist_id", "gb_offsets"):
                continue
            if value not in (None, []):
                setattr(self, name, value)
        return self

    def to_json(self, **kw):
        return json.dumps(asdict(self), **kw)


def _require_s(dist):
    if not dist.has_aux_s:
        raise CatalogError(f"{dist.id}: no auxiliary function s(u); hypothesis checks need one")


def _grid(n_grid):
    grid = [int(n) for n in n_grid]
    if not grid or any(n < 1 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be a non-empty increasing list of positive integers")
    return grid


def check_hb(dist, n_grid):
    """sqrt(n) s(e^{-n}) along ``n_grid``; converged when the last two values
    differ by less than 1% relatively, in which case ``hb_alpha`` is the last one."""
    _require_s(dist)
    grid = _grid(n_grid)
    values = [math.sqrt(n) * float(aux_s_exponent(dist, float(n))) for n in grid]
    converged = len(values) >= 2 and abs(values[-1] / values[-2] - 1.0) < HB_RTOL
    return HypothesisReport(dist.id, n_grid=grid, hb_values=values,
                            hb_alpha=values[-1] if converged else None, hb_diverges=not converged)


def ha_statistic(dist, n, s):
    """Per-replicate (Ha) s-ratio statistic for the exponents s = S(n)."""
    s = np.asarray(s, dtype=float)
    sn = float(aux_s_exponent(dist, float(n)))
    sv = np.asarray(aux_s_exponent(dist, s), dtype=float)
    ratio = sv / sn
    return np.maximum(ratio, 1.0 / ratio) - 1.0


def ha_literal_statistic(n, s):
    """e^{|S - n|} - 1, the supremum of |u/v - 1| over the same interval."""
    with np.errstate(over="ignore"):
        return np.expm1(np.abs(np.asarray(s, dtype=float) - n))


def check_ha_mc(dist, n, reps, seed, threads=1):
    """Monte Carlo (Ha) quartiles at n, 4n and 16n; ``shrinking`` when the
    median decreases along the three."""
    _require_s(dist)
    if n < 10:
        raise ValueError("check_ha_mc needs n >= 10")
    ns = [int(n), 4 * int(n), 16 * int(n)]
    quartiles, literal = [], []
    for m in ns:
        s = sample_gamma_sum(m, reps, seed, threads=threads)
        stat = ha_statistic(dist, m, s)
        quartiles.append([float(q) for q in np.quantile(stat, [0.25, 0.5, 0.75])])
        literal.append(float(np.median(ha_literal_statistic(m, s))))
    medians = [q[1] for q in quartiles]
    shrinking = all(b < a for a, b in zip(medians, medians[1:]))
    return HypothesisReport(dist.id, ha_n=ns, ha_quantiles=quartiles,
                            ha_verdict="shrinking" if shrinking else "non-shrinking",
                            ha_literal_median=literal)


def check_gb_paths(dist, n_grid):
    """sqrt(n) s(exp(-(n + c sqrt(n)))) for c in -2..2 at every n.

    Accepted when s decreases strictly over the probed exponents, the five
    paths agree within 2% at the largest n, and the central path moved by
    less than 2% over the last step of the grid.
    """
    _require_s(dist)
    grid = _grid(n_grid)
    rows = []
    exps = []
    for n in grid:
        x = np.array([n + c * math.sqrt(n) for c in GB_OFFSETS], dtype=float)
        x = np.maximum(x, 1e-12)
        exps.append(x)
        rows.append([float(v) for v in math.sqrt(n) * np.asarray(aux_s_exponent(dist, x), dtype=float)])
    last = np.array(rows[-1])
    agree = bool(np.all(np.abs(last / last[GB_OFFSETS.index(0)] - 1.0) < GB_RTOL))
    probe = np.unique(np.concatenate(exps))
    s_probe = np.asarray(aux_s_exponent(dist, probe), dtype=float)
    decreasing = bool(np.all(np.diff(s_probe) < 0))
    settled = len(rows) >= 2 and abs(rows[-1][2] / rows[-2][2] - 1.0) < GB_RTOL
    return HypothesisReport(dist.id, n_grid=grid, gb_path_values=rows,
                            gb_accepted=agree and decreasing and settled)


def full_report(dist, n_grid, reps, seed, threads=1):
    """(Hb), (Gb) over ``n_grid`` and (Ha) from its first entry."""
    report = check_hb(dist, n_grid)
    report.merge(check_gb_paths(dist, n_grid))
    report.merge(check_ha_mc(dist, max(10, _grid(n_grid)[0]), reps, seed, threads=threads))
    return report
