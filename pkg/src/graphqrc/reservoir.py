"""Input-driven quantum channel: inject, evolve, measure.

Each step overwrites the auxiliary register with a fresh input state,
evolves the composite system with a fixed unitary, and records computational
basis observables of the reservoir marginal: all <Z_i> and all <Z_i Z_j>
with i < j over reservoir sites.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .qstate import (
    TRACE_RENORM_THRESHOLD,
    DensityMatrix,
    is_unitary,
    maximally_mixed,
    partial_trace,
    partial_trace_matrix,
    permute_qubits,
    z_sign_table,
)

_FEATURE_BOUND_SLACK = 1e-8


@dataclass(frozen=True)
class ReservoirConfig:
    """Geometry and timing of the driven system.

    ``aux_sites`` lists the vertices that receive inputs; the remaining
    vertices form the measured reservoir. ``dt`` is the evolution time per
    step in units of the inverse zz coupling.
    """

    n_total: int
    n_aux: int = 2
    dt: float = 3.0
    aux_sites: tuple[int, ...] = (0, 1)

    def __post_init__(self) -> None:
        if not 1 <= self.n_aux < self.n_total:
            raise ValueError(f"need 1 <= n_aux < n_total, got ({self.n_aux}, {self.n_total})")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        sites = tuple(self.aux_sites)
        if len(sites) != self.n_aux or len(set(sites)) != self.n_aux:
            raise ValueError(f"aux_sites {sites} must be {self.n_aux} distinct vertices")
        if any(s < 0 or s >= self.n_total for s in sites):
            raise ValueError(f"aux_sites {sites} out of range")

    @property
    def reservoir_sites(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.n_total) if s not in self.aux_sites)

    @property
    def n_reservoir(self) -> int:
        return self.n_total - self.n_aux

    @property
    def n_features(self) -> int:
        m = self.n_reservoir
        return m * (m + 1) // 2


@dataclass(frozen=True)
class FeatureRecord:
    """Measured observables after one step: singles then pairs, in [-1, 1]."""

    step_index: int
    values: np.ndarray


def encode_werner(eta: float) -> DensityMatrix:
    """Two-qubit mixture of the identity and the singlet projector.

    rho = (1 - eta) * I/4 + eta * |phi><phi| with
    |phi> = (|01> - |10>)/sqrt(2); separable iff eta <= 1/3.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"mixing parameter {eta} outside [0, 1]")
    singlet = np.zeros(4, dtype=complex)
    singlet[1] = 1.0 / np.sqrt(2.0)
    singlet[2] = -1.0 / np.sqrt(2.0)
    m = (1.0 - eta) * np.eye(4, dtype=complex) / 4.0 + eta * np.outer(
        singlet, singlet.conj()
    )
    return DensityMatrix(2, m)


def encode_bits(b1: int, b2: int) -> DensityMatrix:
    """Two-qubit product state |b1><b1| x |b2><b2| in the z basis."""
    if b1 not in (0, 1) or b2 not in (0, 1):
        raise ValueError(f"bits must be 0 or 1, got ({b1}, {b2})")
    m = np.zeros((4, 4), dtype=complex)
    m[2 * b1 + b2, 2 * b1 + b2] = 1.0
    return DensityMatrix(2, m)


def initial_state(cfg: ReservoirConfig) -> DensityMatrix:
    """Maximally mixed composite state; the transient erases this choice."""
    return maximally_mixed(cfg.n_total)


def _site_order(cfg: ReservoirConfig) -> tuple[int, ...]:
    return tuple(cfg.aux_sites) + cfg.reservoir_sites


def inject(
    rho_total: DensityMatrix, rho_input: DensityMatrix, cfg: ReservoirConfig
) -> DensityMatrix:
    """Replace the auxiliary marginal with a fresh input state.

    Returns rho_input (x) Tr_aux[rho_total], reassembled in the global site
    ordering set by cfg.aux_sites.
    """
    if rho_input.n_qubits != cfg.n_aux:
        raise ValueError(
            f"input state has {rho_input.n_qubits} qubits, expected {cfg.n_aux}"
        )
    if rho_total.n_qubits != cfg.n_total:
        raise ValueError(
            f"composite state has {rho_total.n_qubits} qubits, expected {cfg.n_total}"
        )
    reservoir = partial_trace(rho_total, cfg.reservoir_sites)
    combined = np.kron(rho_input.matrix, reservoir.matrix)
    order = _site_order(cfg)
    if order != tuple(range(cfg.n_total)):
        # combined factor p holds global site order[p]; send it back home
        perm = [order.index(q) for q in range(cfg.n_total)]
        combined = permute_qubits(combined, perm)
    return DensityMatrix(cfg.n_total, combined)


def _restore_state(m: np.ndarray) -> np.ndarray:
    # One cheap hermitization per step plus trace renormalization keeps
    # floating-point drift bounded over thousands of steps.
    m = 0.5 * (m + m.conj().T)
    tr = float(m.trace().real)
    if abs(tr - 1.0) > TRACE_RENORM_THRESHOLD:
        m = m / tr
    return m


def step(
    rho_total: DensityMatrix,
    rho_input: DensityMatrix,
    u: np.ndarray,
    cfg: ReservoirConfig,
) -> DensityMatrix:
    """One channel step: inject the input, then conjugate by the unitary."""
    injected = inject(rho_total, rho_input, cfg)
    m = u @ injected.matrix @ u.conj().T
    return DensityMatrix(cfg.n_total, _restore_state(m))


@lru_cache(maxsize=None)
def _observable_signs(n_sites: int) -> np.ndarray:
    """Rows of z-basis signs for each observable: singles, then pairs i < j."""
    z = z_sign_table(n_sites)
    rows = [z[:, i] for i in range(n_sites)]
    for i in range(n_sites):
        for j in range(i + 1, n_sites):
            rows.append(z[:, i] * z[:, j])
    table = np.array(rows)
    table.flags.writeable = False
    return table


def _features_from_marginal_diag(diag: np.ndarray, n_sites: int) -> np.ndarray:
    values = _observable_signs(n_sites) @ diag
    overshoot = np.abs(values).max(initial=0.0) - 1.0
    if overshoot > _FEATURE_BOUND_SLACK:
        raise ValueError(f"feature magnitude exceeds 1 by {overshoot:.3e}")
    return np.clip(values, -1.0, 1.0)


def extract_features(
    rho_total: DensityMatrix, cfg: ReservoirConfig, step_index: int = 0
) -> FeatureRecord:
    """Expectation values of Z_i and Z_i Z_j over reservoir sites (i < j).

    All observables are diagonal in the computational basis, so only the
    diagonal of the reservoir marginal enters.
    """
    marginal = partial_trace(rho_total, cfg.reservoir_sites)
    diag = np.real(np.diagonal(marginal.matrix))
    return FeatureRecord(step_index, _features_from_marginal_diag(diag, cfg.n_reservoir))


def _marginal_propagator(u: np.ndarray, cfg: ReservoirConfig) -> np.ndarray:
    """Unitary reshaped to (aux, res, aux, res) with aux as leading factors."""
    order = _site_order(cfg)
    if order != tuple(range(cfg.n_total)):
        perm = list(order)
        u = permute_qubits(u, perm)
    da, dr = 2**cfg.n_aux, 2**cfg.n_reservoir
    return np.ascontiguousarray(u.reshape(da, dr, da, dr))


def _advance_marginal(
    u4: np.ndarray, u4_conj: np.ndarray, rho_input: np.ndarray, marginal: np.ndarray
) -> np.ndarray:
    """Reservoir marginal after inject + evolve, computed in the reduced space.

    Contracting the three factors in sequence costs O(da^2 dr^3) instead of
    the O((da dr)^3) of conjugating the composite state.
    """
    t1 = np.tensordot(u4, rho_input, axes=([2], [0]))  # (a, r, s, c)
    t2 = np.tensordot(t1, marginal, axes=([2], [0]))  # (a, r, c, t)
    out = np.tensordot(t2, u4_conj, axes=([0, 2, 3], [0, 2, 3]))  # (r, r')
    return _restore_state(out)


def run_sequence(
    inputs: Sequence[DensityMatrix],
    u: np.ndarray,
    cfg: ReservoirConfig,
    rho0: DensityMatrix,
) -> list[FeatureRecord]:
    """Drive the channel with an input sequence and record features each step.

    Equivalent to repeating ``step`` + ``extract_features`` from ``rho0``,
    but propagates only the reservoir marginal: the injected auxiliary state
    never depends on the previous composite state, so tracing out the
    auxiliary register commutes with the recursion.
    """
    if not is_unitary(u):
        raise ValueError("propagator is not unitary to tolerance")
    if u.shape != (2**cfg.n_total, 2**cfg.n_total):
        raise ValueError(f"propagator shape {u.shape} does not match {cfg.n_total} qubits")
    records: list[FeatureRecord] = []
    if len(inputs) == 0:
        return records
    u4 = _marginal_propagator(u, cfg)
    u4_conj = np.ascontiguousarray(u4.conj())
    marginal = partial_trace_matrix(rho0.matrix, cfg.reservoir_sites, cfg.n_total)
    n_res = cfg.n_reservoir
    for n, rho_in in enumerate(inputs):
        if rho_in.n_qubits != cfg.n_aux:
            raise ValueError(f"input {n} has {rho_in.n_qubits} qubits, expected {cfg.n_aux}")
        marginal = _advance_marginal(u4, u4_conj, rho_in.matrix, marginal)
        diag = np.real(np.diagonal(marginal))
        records.append(FeatureRecord(n, _features_from_marginal_diag(diag, n_res)))
    return records


def feature_matrix(records: Sequence[FeatureRecord]) -> np.ndarray:
    """Stack feature records into a (steps, n_features) array."""
    return np.stack([r.values for r in records])


def features_to_csv(records: Sequence[FeatureRecord], path) -> None:
    """Write a feature trajectory as CSV: step, f_0 ... f_{N-1}."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n_feat = len(records[0].values) if records else 0
        writer.writerow(["step"] + [f"f_{i}" for i in range(n_feat)])
        for rec in records:
            writer.writerow([rec.step_index] + [repr(float(v)) for v in rec.values])
