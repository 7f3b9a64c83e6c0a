"""Benchmark task generators and task-level metrics.

Two temporal tasks drive the reservoir: delayed reconstruction of a
continuous mixing parameter (linear memory), and simultaneous AND/OR/XOR of
two binary streams (nonlinear classification).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np


@dataclass(frozen=True)
class MemoryTaskSpec:
    """Continuous input stream for the delayed-reconstruction task.

    ``encoding_noise`` is the half-width of the uniform corruption applied
    to the values that actually enter the reservoir; the clean values remain
    the regression targets.
    """

    sequence_length: int
    tau_max: int = 6
    encoding_noise: float = 0.02
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sequence_length < 1:
            raise ValueError("sequence_length must be positive")
        if self.tau_max < 1:
            raise ValueError("tau_max must be at least 1")
        if not 0.0 <= self.encoding_noise < 1.0:
            raise ValueError("encoding_noise must lie in [0, 1)")


@dataclass(frozen=True)
class MultitaskSpec:
    """Two independent fair-coin bit streams for the logic task."""

    sequence_length: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sequence_length < 1:
            raise ValueError("sequence_length must be positive")


def gen_memory_inputs(spec: MemoryTaskSpec) -> tuple[np.ndarray, np.ndarray]:
    """Clean targets uniform on [0, 1] and their noise-corrupted encodings.

    The encoded value is clamped back to [0, 1] so it remains a valid
    mixing parameter.
    """
    rng = np.random.default_rng(spec.seed)
    clean = rng.uniform(0.0, 1.0, size=spec.sequence_length)
    noise = rng.uniform(-spec.encoding_noise, spec.encoding_noise, size=spec.sequence_length)
    encoded = np.clip(clean + noise, 0.0, 1.0)
    return clean, encoded


def memory_targets(clean: np.ndarray, tau: int) -> np.ndarray:
    """Targets delayed by tau steps; the first tau entries are NaN (unusable)."""
    clean = np.asarray(clean, dtype=float)
    if not 0 <= tau < clean.size:
        raise ValueError(f"tau = {tau} out of range for length {clean.size}")
    targets = np.full(clean.size, np.nan)
    if tau == 0:
        targets[:] = clean
    else:
        targets[tau:] = clean[:-tau]
    return targets


def total_memory_capacity(capacities: np.ndarray) -> float:
    """Mean reconstruction capacity over the delay range."""
    caps = np.asarray(capacities, dtype=float)
    if caps.size == 0:
        raise ValueError("capacity vector is empty")
    if np.any(caps < -1e-12) or np.any(caps > 1.0 + 1e-12):
        raise ValueError("capacities must lie in [0, 1]")
    return float(caps.mean())


class MultitaskData(NamedTuple):
    bits_a: np.ndarray
    bits_b: np.ndarray
    targets_and: np.ndarray
    targets_or: np.ndarray
    targets_xor: np.ndarray


def gen_multitask(spec: MultitaskSpec) -> MultitaskData:
    rng = np.random.default_rng(spec.seed)
    a = rng.integers(0, 2, size=spec.sequence_length)
    b = rng.integers(0, 2, size=spec.sequence_length)
    return MultitaskData(
        bits_a=a,
        bits_b=b,
        targets_and=a & b,
        targets_or=a | b,
        targets_xor=a ^ b,
    )


@dataclass(frozen=True)
class CriticalDisorder:
    """Disorder strength at which accuracy first drops below a threshold.

    ``censored`` marks scans where the accuracy never crossed the threshold
    on the grid; ``delta_x`` is then the right edge of the grid (a lower
    bound on the true crossing).
    """

    delta_x: float
    censored: bool


def threshold_crossing(
    delta_grid: np.ndarray, accuracies: np.ndarray, threshold: float
) -> CriticalDisorder:
    """Smallest disorder at which accuracy falls below the threshold.

    Linear interpolation between the bracketing grid points; a curve that
    starts below the threshold reports the first grid point.
    """
    grid = np.asarray(delta_grid, dtype=float)
    acc = np.asarray(accuracies, dtype=float)
    if grid.shape != acc.shape or grid.size < 1:
        raise ValueError("grid and accuracies must be equal-length and non-empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("disorder grid must be strictly ascending")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    below = np.flatnonzero(acc < threshold)
    if below.size == 0:
        return CriticalDisorder(delta_x=float(grid[-1]), censored=True)
    first = int(below[0])
    if first == 0:
        return CriticalDisorder(delta_x=float(grid[0]), censored=False)
    x0, x1 = grid[first - 1], grid[first]
    a0, a1 = acc[first - 1], acc[first]
    crossing = x0 + (a0 - threshold) / (a0 - a1) * (x1 - x0)
    return CriticalDisorder(delta_x=float(crossing), censored=False)


def critical_disorder_scan(
    k_values: Iterable[int],
    threshold: float,
    delta_grid: np.ndarray,
    accuracy_fn: Callable[[int, float], float],
) -> dict[int, CriticalDisorder]:
    """Trace the accuracy-threshold boundary over graph degrees.

    ``accuracy_fn(k, delta_x)`` must return the mean rescaled accuracy at
    that point; it is evaluated over the full grid for each degree.
    """
    grid = np.asarray(delta_grid, dtype=float)
    out: dict[int, CriticalDisorder] = {}
    for k in k_values:
        curve = np.array([accuracy_fn(k, float(dx)) for dx in grid])
        out[k] = threshold_crossing(grid, curve, threshold)
    return out


def memory_task_to_csv(clean: np.ndarray, encoded: np.ndarray, path) -> None:
    """Audit dump of the memory task stream: step, encoded input, clean target."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "encoded", "clean"])
        for n, (e, c) in enumerate(zip(encoded, clean)):
            writer.writerow([n, repr(float(e)), repr(float(c))])


def multitask_to_csv(data: MultitaskData, path) -> None:
    """Audit dump of the logic task: step, both input bits, all three targets."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "bit_a", "bit_b", "and", "or", "xor"])
        rows = zip(data.bits_a, data.bits_b, data.targets_and, data.targets_or, data.targets_xor)
        for n, (a, b, t_and, t_or, t_xor) in enumerate(rows):
            writer.writerow([n, int(a), int(b), int(t_and), int(t_or), int(t_xor)])
