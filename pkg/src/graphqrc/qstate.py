"""Dense linear algebra over multi-qubit Hilbert spaces.

Conventions used throughout the package:

* Qubit 0 is the leftmost (most significant) tensor factor. The basis state
  |b0 b1 ... b_{n-1}> maps to row index sum_i b_i * 2^(n-1-i).
* |up> = (1, 0)^T is basis state 0, so sigma_z |up> = +|up>.
* All operators are dense complex numpy arrays; the largest systems handled
  here are 10 qubits (1024-dimensional), where dense storage wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
TRACE_RENORM_THRESHOLD = 1e-12
UNITARITY_TOL = 1e-9

PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
for _m in PAULI.values():
    _m.flags.writeable = False


class InvariantViolation(ValueError):
    """A state or operator failed one of its defining invariants."""


def _require_square(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


def _n_qubits_for_dim(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class DensityMatrix:
    """A positive semidefinite, unit-trace operator on n qubits.

    Instances are treated as immutable values; the wrapped array must not be
    mutated after construction. Use :meth:`from_matrix` at trust boundaries
    (it validates the invariants) and the plain constructor on hot paths
    where the invariants are maintained analytically.
    """

    n_qubits: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, validate: bool = True) -> "DensityMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        dim = _require_square(matrix)
        rho = cls(_n_qubits_for_dim(dim), matrix)
        if validate:
            rho.validate()
        return rho

    def validate(self) -> None:
        """Raise InvariantViolation if hermiticity, trace or positivity fail."""
        m = self.matrix
        if m.shape != (self.dim, self.dim):
            raise InvariantViolation(
                f"matrix shape {m.shape} does not match {self.n_qubits} qubits"
            )
        if not np.all(np.isfinite(m.view(float))):
            raise InvariantViolation("matrix contains non-finite entries")
        herm_defect = np.abs(m - m.conj().T).max()
        if herm_defect > HERMITICITY_TOL:
            raise InvariantViolation(f"not Hermitian: max defect {herm_defect:.3e}")
        trace_defect = abs(m.trace() - 1.0)
        if trace_defect > TRACE_TOL:
            raise InvariantViolation(f"trace deviates from 1 by {trace_defect:.3e}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < EIGENVALUE_FLOOR:
            raise InvariantViolation(f"minimum eigenvalue {min_eig:.3e} below floor")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem of a Hermitian operator, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two operators (dimensions multiply)."""
    return np.kron(np.asarray(a), np.asarray(b))


def pauli_on_site(direction: str, site: int, n_qubits: int) -> np.ndarray:
    """Pauli operator acting on one site, identity elsewhere.

    ``direction`` is one of "x", "y", "z"; site 0 is the leftmost factor.
    """
    if direction not in ("x", "y", "z"):
        raise ValueError(f"unknown Pauli direction {direction!r}")
    if not 0 <= site < n_qubits:
        raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    return pauli_string({site: direction}, n_qubits)


def pauli_string(ops: Mapping[int, str], n_qubits: int) -> np.ndarray:
    """Tensor product with given Pauli factors and identities elsewhere."""
    for site in ops:
        if not 0 <= site < n_qubits:
            raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    out = np.array([[1.0 + 0.0j]])
    for site in range(n_qubits):
        out = np.kron(out, PAULI[ops.get(site, "i")])
    return out


@lru_cache(maxsize=None)
def z_sign_table(n_qubits: int) -> np.ndarray:
    """(2^n, n) table of sigma_z eigenvalues: entry [x, i] = +-1 for basis x."""
    x = np.arange(2**n_qubits)
    bits = (x[:, None] >> (n_qubits - 1 - np.arange(n_qubits))) & 1
    table = 1.0 - 2.0 * bits
    table.flags.writeable = False
    return table


def permute_qubits(m: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so output factor q is input factor perm[q]."""
    m = np.asarray(m)
    dim = _require_square(m)
    n = _n_qubits_for_dim(dim)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{n - 1}")
    axes = perm + [n + p for p in perm]
    return m.reshape([2] * (2 * n)).transpose(axes).reshape(dim, dim)


def partial_trace_matrix(m: np.ndarray, keep: Iterable[int], n_qubits: int) -> np.ndarray:
    """Trace out all qubits not in ``keep``; kept qubits stay in ascending order."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep-set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n_qubits:
        raise ValueError(f"keep-set {keep} out of range for {n_qubits} qubits")
    traced = [q for q in range(n_qubits) if q not in keep]
    if not traced:
        return np.asarray(m)
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    perm = keep + traced
    t = np.asarray(m).reshape([2] * (2 * n_qubits))
    t = t.transpose(perm + [n_qubits + p for p in perm]).reshape(dk, dt, dk, dt)
    return np.trace(t, axis1=1, axis2=3)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix over the kept qubits."""
    keep = sorted(set(keep))
    reduced = partial_trace_matrix(rho.matrix, keep, rho.n_qubits)
    return DensityMatrix(len(keep), reduced)


def partial_transpose_matrix(
    m: np.ndarray, subsystem: Iterable[int], n_qubits: int
) -> np.ndarray:
    """Transpose the row/column indices of the given qubits only."""
    sub = sorted(set(subsystem))
    if sub and (sub[0] < 0 or sub[-1] >= n_qubits):
        raise ValueError(f"subsystem {sub} out of range for {n_qubits} qubits")
    dim = 2**n_qubits
    axes = list(range(2 * n_qubits))
    for q in sub:
        axes[q], axes[n_qubits + q] = axes[n_qubits + q], axes[q]
    return np.asarray(m).reshape([2] * (2 * n_qubits)).transpose(axes).reshape(dim, dim)


def partial_transpose(rho: DensityMatrix, subsystem: Iterable[int]) -> np.ndarray:
    return partial_transpose_matrix(rho.matrix, subsystem, rho.n_qubits)


def _is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    scale = max(1.0, float(np.abs(m).max()) if m.size else 1.0)
    return bool(np.abs(m - m.conj().T).max() <= tol * scale)


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|."""
    m = np.asarray(m)
    _require_square(m)
    if _is_hermitian(m):
        return float(np.abs(np.linalg.eigvalsh(m)).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def hs_norm(m: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(sum |m_ij|^2)."""
    return float(np.linalg.norm(np.asarray(m)))


def herm_eig(h: np.ndarray) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues ascending.

    Exactly-real Hermitian input is diagonalized in real arithmetic, which
    is markedly faster at the 1024-dimensional sizes used here.
    """
    h = np.asarray(h)
    _require_square(h)
    if not _is_hermitian(h):
        raise ValueError("input is not Hermitian to tolerance")
    if np.iscomplexobj(h) and np.abs(h.imag).max() == 0.0:
        h = h.real
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return SpectralDecomposition(eigenvalues, eigenvectors)


def herm_eigvalsh(h: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    h = np.asarray(h)
    _require_square(h)
    if not _is_hermitian(h):
        raise ValueError("input is not Hermitian to tolerance")
    if np.iscomplexobj(h) and np.abs(h.imag).max() == 0.0:
        h = h.real
    return np.linalg.eigvalsh(h)


def evolution_operator(spec: SpectralDecomposition, dt: float) -> np.ndarray:
    """Unitary propagator exp(-i H dt) from the eigensystem of H."""
    phases = np.exp(-1j * spec.eigenvalues * dt)
    v = spec.eigenvectors
    return (v * phases) @ v.conj().T


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    u = np.asarray(u)
    dim = _require_square(u)
    return bool(np.abs(u @ u.conj().T - np.eye(dim)).max() <= tol)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    dim = 2**n_qubits
    return DensityMatrix(n_qubits, np.eye(dim, dtype=complex) / dim)
