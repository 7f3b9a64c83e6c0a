"""Physics probes of the driven system under a single joint evolution.

Both probes start from a product state of an input register and a reservoir
and follow continuous-time evolution of one injection (no repeated channel
steps): the Hilbert-Schmidt norm of the deviation from the initial state
measures total correlation build-up, and the logarithmic negativity across
the register/reservoir cut measures genuinely quantum correlations.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .qstate import (
    DensityMatrix,
    evolution_operator,
    herm_eig,
    hs_norm,
    partial_transpose,
    trace_norm,
)

_NEGATIVITY_CLAMP = -1e-10


def _product_state(rho_s: DensityMatrix, rho_r: DensityMatrix, h: np.ndarray) -> DensityMatrix:
    dim = rho_s.dim * rho_r.dim
    if h.shape != (dim, dim):
        raise ValueError(
            f"Hamiltonian shape {h.shape} does not match product dimension {dim}"
        )
    return DensityMatrix(
        rho_s.n_qubits + rho_r.n_qubits, np.kron(rho_s.matrix, rho_r.matrix)
    )


def _evolved_states(
    h: np.ndarray, rho0: DensityMatrix, times: Sequence[float]
) -> Iterator[DensityMatrix]:
    dec = herm_eig(h)
    for t in times:
        u = evolution_operator(dec, float(t))
        evolved = u @ rho0.matrix @ u.conj().T
        yield DensityMatrix(rho0.n_qubits, evolved)


def log_negativity(rho: DensityMatrix, subsystem: Iterable[int]) -> float:
    """log2 of the trace norm of the partial transpose; zero for PPT states."""
    sub = sorted(set(subsystem))
    if not sub or len(sub) >= rho.n_qubits:
        raise ValueError(f"subsystem {sub} must be a proper non-empty subset")
    value = float(np.log2(trace_norm(partial_transpose(rho, sub))))
    if value < 0.0:
        if value < _NEGATIVITY_CLAMP:
            raise ValueError(f"trace norm below 1 by more than tolerance: {value:.3e}")
        return 0.0
    return value


def correlation_norm_trajectory(
    h: np.ndarray,
    rho_s: DensityMatrix,
    rho_r: DensityMatrix,
    times: Sequence[float],
) -> np.ndarray:
    """Hilbert-Schmidt distance of the evolved state from its product start."""
    rho0 = _product_state(rho_s, rho_r, h)
    return np.array(
        [hs_norm(rho0.matrix - rho_t.matrix) for rho_t in _evolved_states(h, rho0, times)]
    )


def negativity_trajectory(
    h: np.ndarray,
    rho_s: DensityMatrix,
    rho_r: DensityMatrix,
    times: Sequence[float],
    subsystem: Iterable[int] | None = None,
) -> np.ndarray:
    """Logarithmic negativity across the register/reservoir cut over time.

    ``subsystem`` defaults to the input register, which occupies the leading
    tensor factors of the product state.
    """
    rho0 = _product_state(rho_s, rho_r, h)
    sub = tuple(range(rho_s.n_qubits)) if subsystem is None else tuple(subsystem)
    return np.array(
        [log_negativity(rho_t, sub) for rho_t in _evolved_states(h, rho0, times)]
    )


def probe_trajectories(
    h: np.ndarray,
    rho_s: DensityMatrix,
    rho_r: DensityMatrix,
    times: Sequence[float],
    subsystem: Iterable[int] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Both probes from one evolution pass (shares the propagator work)."""
    rho0 = _product_state(rho_s, rho_r, h)
    sub = tuple(range(rho_s.n_qubits)) if subsystem is None else tuple(subsystem)
    corr = np.empty(len(times))
    neg = np.empty(len(times))
    for i, rho_t in enumerate(_evolved_states(h, rho0, times)):
        corr[i] = hs_norm(rho0.matrix - rho_t.matrix)
        neg[i] = log_negativity(rho_t, sub)
    return corr, neg
