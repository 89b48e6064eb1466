"""Genuine-multipartite-entanglement concurrence and Schmidt rank.

The pure-state concurrence is exact; for mixed states only the
criterion-based lower bound is computed here -- the convex-roof value
itself involves an optimisation over all pure-state decompositions and
is not computable in general.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod, sqrt

import numpy as np

from .criteria import gme_value
from .errors import DomainError
from .partitions import iter_bipartitions
from .tensor import StateVector

SV_TOL = 1e-9


@dataclass(frozen=True)
class MeasureResult:
    name: str
    value: float
    exact: bool


def _amplitude_matrix(psi, side_a):
    """Amplitudes reshaped to (dim A, dim B) for the bipartition side_a."""
    n = psi.shape.n
    side_a = sorted(set(int(x) for x in side_a))
    if not side_a or len(side_a) == n:
        raise DomainError("cut must be a proper non-empty subsystem subset")
    if any(not 0 <= s < n for s in side_a):
        raise DomainError(f"cut labels {side_a} out of range for n={n}")
    side_b = [s for s in range(n) if s not in side_a]
    tensor = psi.amp.reshape(psi.shape.dims)
    tensor = tensor.transpose(side_a + side_b)
    da = prod(psi.shape.dims[s] for s in side_a)
    return tensor.reshape(da, -1)


def cgme_pure(psi):
    """GME-concurrence of a pure state.

    min over all bipartitions of sqrt(2 (1 - purity of the reduction));
    zero exactly when the state is biseparable.
    """
    if not isinstance(psi, StateVector):
        raise DomainError("cgme_pure takes a pure StateVector")
    n = psi.shape.n
    if n < 2:
        raise DomainError("need at least two subsystems")
    best = None
    for part in iter_bipartitions(n):
        m = _amplitude_matrix(psi, part.blocks[0])
        sv = np.linalg.svd(m, compute_uv=False)
        purity = float(np.sum(sv ** 4))
        c = sqrt(max(2.0 * (1.0 - purity), 0.0))
        best = c if best is None else min(best, c)
    return MeasureResult("cgme", best, exact=True)


def cgme_lower_bound(state, probe):
    """Criterion-based lower bound 2 * gme_value, clamped at zero.

    Valid for any state; on pure inputs it never exceeds cgme_pure.  The
    probe is exposed so callers can pre-rotate the state (or pick the
    best computational probe) themselves.
    """
    report = gme_value(state, probe)
    return MeasureResult("cgme_lower_bound", max(0.0, 2.0 * report.value), exact=False)


def schmidt_rank(psi, cut, tol=SV_TOL):
    """Number of non-negligible Schmidt coefficients across the cut."""
    if not isinstance(psi, StateVector):
        raise DomainError("schmidt_rank takes a pure StateVector")
    sv = np.linalg.svd(_amplitude_matrix(psi, cut), compute_uv=False)
    return int(np.sum(sv > tol))
