"""Disordered interacting spin Hamiltonians on graphs, and spectral statistics.

The model couples z and x Pauli components along graph edges and applies
uniform-plus-random local fields:

    H = sum_edges (jz * Z_i Z_j + jx * X_i X_j)
        + sum_i (hx + dx_i) X_i + sum_i (hz + dz_i) Z_i

with dx_i uniform on [-delta_x, delta_x] and dz_i uniform on
[-delta_z, delta_z]. With jx = 0 and delta_x = 0 this is a transverse-field
Ising model with weak longitudinal-field disorder breaking the global
spin-flip symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .qstate import z_sign_table

DEGENERACY_CUTOFF = 1e-12


@dataclass(frozen=True)
class HamiltonianSpec:
    """Coupling and field parameters; energies in units of the zz coupling."""

    jz: float = 1.0
    jx: float = 0.0
    hx: float = 1.0
    hz: float = 0.0
    delta_x: float = 0.0
    delta_z: float = 0.2

    def __post_init__(self) -> None:
        if self.delta_x < 0 or self.delta_z < 0:
            raise ValueError("disorder amplitudes must be non-negative")


@dataclass(frozen=True)
class DisorderRealization:
    """Per-site random field offsets, each uniform on [-amplitude, amplitude]."""

    delta_x_fields: np.ndarray
    delta_z_fields: np.ndarray


def sample_disorder(
    spec: HamiltonianSpec, n: int, rng: np.random.Generator
) -> DisorderRealization:
    if n < 1:
        raise ValueError("need at least one site")
    return DisorderRealization(
        delta_x_fields=rng.uniform(-spec.delta_x, spec.delta_x, size=n),
        delta_z_fields=rng.uniform(-spec.delta_z, spec.delta_z, size=n),
    )


def build_hamiltonian(
    g: Graph, spec: HamiltonianSpec, dis: DisorderRealization
) -> np.ndarray:
    """Dense 2^N x 2^N Hermitian matrix of the spin model on graph g.

    Each unordered edge contributes one zz and one xx bond. Construction is
    index-based: zz and z terms fill the diagonal through the sigma_z sign
    table, and every x-type term couples basis states differing by the
    corresponding bit flips.
    """
    n = g.n_vertices
    if len(dis.delta_x_fields) != n or len(dis.delta_z_fields) != n:
        raise ValueError(
            f"disorder vectors of length {len(dis.delta_x_fields)} do not match {n} sites"
        )
    dim = 2**n
    z = z_sign_table(n)
    hx_i = spec.hx + np.asarray(dis.delta_x_fields, dtype=float)
    hz_i = spec.hz + np.asarray(dis.delta_z_fields, dtype=float)

    diag = z @ hz_i
    for i, j in g.edges:
        diag = diag + spec.jz * z[:, i] * z[:, j]

    h = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    h[idx, idx] = diag

    def flip_mask(site: int) -> int:
        return 1 << (n - 1 - site)

    for i in range(n):
        h[idx, idx ^ flip_mask(i)] += hx_i[i]
    if spec.jx != 0.0:
        for i, j in g.edges:
            h[idx, idx ^ (flip_mask(i) | flip_mask(j))] += spec.jx
    return h


def level_spacing_ratios(energies: np.ndarray, central_fraction: float | None = None) -> float:
    """Mean ratio of consecutive level spacings, min(gap_n, gap_n+1)/max(...).

    Gaps below DEGENERACY_CUTOFF are treated as exact degeneracies and
    dropped before forming ratios. By default the average runs over the full
    sorted spectrum; ``central_fraction`` keeps only that central share of
    the levels first (e.g. 0.5 drops the lowest and highest quarters), a
    sensitivity check that suppresses non-universal band edges.
    """
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size < 3:
        raise ValueError("need at least 3 energies")
    if central_fraction is not None:
        if not 0.0 < central_fraction <= 1.0:
            raise ValueError("central_fraction must lie in (0, 1]")
        drop = int(round(e.size * (1.0 - central_fraction) / 2.0))
        if e.size - 2 * drop < 3:
            raise ValueError("central window keeps fewer than 3 levels")
        e = e[drop: e.size - drop]
    gaps = np.diff(e)
    if np.any(gaps < -DEGENERACY_CUTOFF):
        raise ValueError("energies must be sorted ascending")
    gaps = gaps[gaps >= DEGENERACY_CUTOFF]
    if gaps.size < 2:
        raise ValueError("spectrum is fully degenerate, no gap ratios defined")
    ratios = np.minimum(gaps[:-1], gaps[1:]) / np.maximum(gaps[:-1], gaps[1:])
    return float(ratios.mean())
