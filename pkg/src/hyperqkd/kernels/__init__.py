"""Monte Carlo kernel selection.

The compiled extension is preferred when it was built; otherwise the NumPy
fallback is used.  Both implementations fulfil the same contract and return
bit-identical counts, so the choice affects speed only.
"""
from __future__ import annotations

from . import _pyloop

try:
    from . import _fastloop
    BACKEND = "compiled"
    mc_chunk = _fastloop.mc_chunk
except ImportError:  # extension not built
    _fastloop = None
    BACKEND = "python"
    mc_chunk = _pyloop.mc_chunk


def available_backends() -> dict[str, object]:
    """Kernel name -> chunk function, for benchmarks and equivalence tests."""
    backends = {"python": _pyloop.mc_chunk}
    if _fastloop is not None:
        backends["compiled"] = _fastloop.mc_chunk
    return backends


def get_kernel(name: str | None = None):
    """Chunk function by backend name; the default backend when name is None."""
    if name is None:
        return mc_chunk
    backends = available_backends()
    if name not in backends:
        raise KeyError(f"unknown kernel backend {name!r}; "
                       f"available: {sorted(backends)}")
    return backends[name]
