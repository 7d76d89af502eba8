"""Name-keyed registry of the symmetric SVD backends.

Every entry maps a SymmetricMatrix to an SvdResult under the same contract,
so callers (benchmarks, the CLI, eigenface training) can pick one by string.
"""

from __future__ import annotations

from .divide_conquer import dc_svd
from .golub_kahan import gk_svd
from .hestenes import hestenes_svd
from .jacobi import jacobi_svd
from .tridiag_qr import tridiag_qr_svd

BACKENDS = {
    "jacobi": jacobi_svd,
    "hestenes": hestenes_svd,
    "gk": gk_svd,
    "qr": tridiag_qr_svd,
    "dc": dc_svd,
}


def get_backend(name: str):
    try:
        return BACKENDS[name]
    except KeyError:
        known = ", ".join(sorted(BACKENDS))
        raise ValueError(f"unknown backend {name!r} (known: {known})") from None
