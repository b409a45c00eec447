"""Hot kernels for pair-Bernoulli graph sampling.

A compiled Cython extension is preferred when present; otherwise a
vectorized NumPy implementation is used. Both produce bit-identical edge
sets for identical inputs (same hash stream, same rounding order), so the
choice only affects speed. ``IMPLEMENTATION`` records which one is active.
"""

try:
    from . import _pairs_cy as _impl

    IMPLEMENTATION = "cython"
except ImportError:  # extension not built
    from . import _pairs_np as _impl

    IMPLEMENTATION = "numpy"

from ._pairs_np import pair_uniform

sample_edges = _impl.sample_edges

__all__ = ["sample_edges", "pair_uniform", "IMPLEMENTATION"]
