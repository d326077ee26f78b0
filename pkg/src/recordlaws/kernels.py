"""Backend dispatch for the hot kernels.

The numba backend is used when numba imports cleanly, unless the environment
variable ``RECORDLAWS_BACKEND`` is set to ``numpy``. Both backends read the
same counter-based bit streams; results agree to rounding, and each backend is
bit-reproducible on its own.
"""
import logging
import os

from . import _kernels_numpy

log = logging.getLogger(__name__)

_requested = os.environ.get("RECORDLAWS_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"RECORDLAWS_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

_impl = _kernels_numpy
BACKEND = "numpy"
if _requested == "numba":
    try:
        from . import _kernels_numba as _impl  # noqa: F811

        BACKEND = "numba"
    except ImportError as exc:  # pragma: no cover - depends on environment
        log.warning("numba unavailable (%s); using numpy kernels", exc)
        _impl = _kernels_numpy

mix64 = _kernels_numpy.mix64
uniforms = _impl.uniforms
gamma_sums = _impl.gamma_sums
gamma_mt = _impl.gamma_mt
polar_normals = _impl.polar_normals
scan_records = _impl.scan_records
gammainc_pq = _impl.gammainc_pq
