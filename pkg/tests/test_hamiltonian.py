import numpy as np
import pytest

from graphqrc.graph import Graph, sample_rrg
from graphqrc.hamiltonian import (
    DisorderRealization,
    HamiltonianSpec,
    build_hamiltonian,
    level_spacing_ratios,
    sample_disorder,
)
from graphqrc.qstate import herm_eigvalsh, pauli_string

import oracles

TRIANGLE = Graph(3, 2, frozenset([(0, 1), (0, 2), (1, 2)]))


def zero_disorder(n):
    return DisorderRealization(np.zeros(n), np.zeros(n))


def brute_force_hamiltonian(g, spec, dis):
    """Term-by-term sum of explicit Pauli kron products."""
    n = g.n_vertices
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i, j in g.edges:
        h += spec.jz * oracles.op_on_sites({i: oracles.SZ, j: oracles.SZ}, n)
        h += spec.jx * oracles.op_on_sites({i: oracles.SX, j: oracles.SX}, n)
    for i in range(n):
        h += (spec.hx + dis.delta_x_fields[i]) * oracles.op_on_sites({i: oracles.SX}, n)
        h += (spec.hz + dis.delta_z_fields[i]) * oracles.op_on_sites({i: oracles.SZ}, n)
    return h


def test_zero_amplitude_disorder_is_exactly_zero():
    spec = HamiltonianSpec(delta_x=0.0, delta_z=0.0)
    dis = sample_disorder(spec, 6, np.random.default_rng(0))
    assert np.all(dis.delta_x_fields == 0.0)
    assert np.all(dis.delta_z_fields == 0.0)


def test_disorder_bounds_and_mean():
    spec = HamiltonianSpec(delta_x=10.0, delta_z=0.2)
    rng = np.random.default_rng(1)
    samples = np.concatenate(
        [sample_disorder(spec, 100, rng).delta_x_fields for _ in range(100)]
    )
    assert np.all(np.abs(samples) <= 10.0)
    # mean of 1e4 uniform[-10, 10] draws: sigma = 10/sqrt(3)/100
    assert abs(samples.mean()) < 3 * 10.0 / np.sqrt(3.0) / 100.0
    dz = sample_disorder(spec, 1000, rng).delta_z_fields
    assert np.all(np.abs(dz) <= 0.2)


def test_negative_amplitude_rejected():
    with pytest.raises(ValueError):
        HamiltonianSpec(delta_x=-1.0)


def test_two_site_ising_bond():
    g = Graph(2, 1, frozenset([(0, 1)]))
    spec = HamiltonianSpec(jz=1.0, jx=0.0, hx=0.0, hz=0.0, delta_x=0.0, delta_z=0.0)
    h = build_hamiltonian(g, spec, zero_disorder(2))
    assert np.allclose(h, np.kron(oracles.SZ, oracles.SZ), atol=1e-15)
    assert np.allclose(herm_eigvalsh(h), [-1.0, -1.0, 1.0, 1.0])


def test_triangle_matches_brute_force_oracle():
    rng = np.random.default_rng(2)
    spec = HamiltonianSpec(
        jz=rng.normal(), jx=rng.normal(), hx=rng.normal(), hz=rng.normal(),
        delta_x=2.0, delta_z=0.5,
    )
    dis = sample_disorder(spec, 3, rng)
    h = build_hamiltonian(TRIANGLE, spec, dis)
    assert np.abs(h - brute_force_hamiltonian(TRIANGLE, spec, dis)).max() < 1e-12


def test_hermitian_for_random_inputs():
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = sample_rrg(6, 3, rng)
        spec = HamiltonianSpec(jx=rng.normal(), delta_x=5.0)
        dis = sample_disorder(spec, 6, rng)
        h = build_hamiltonian(g, spec, dis)
        assert np.abs(h - h.conj().T).max() < 1e-12


def test_transverse_field_ising_limit():
    # with jx = 0 and delta_x = 0 only zz bonds and fields survive
    rng = np.random.default_rng(4)
    g = sample_rrg(6, 3, rng)
    spec = HamiltonianSpec(jz=1.0, jx=0.0, hx=1.0, hz=0.0, delta_x=0.0, delta_z=0.2)
    dis = sample_disorder(spec, 6, rng)
    n = g.n_vertices
    ising = np.zeros((2**n, 2**n), dtype=complex)
    for i, j in g.edges:
        ising += oracles.op_on_sites({i: oracles.SZ, j: oracles.SZ}, n)
    for i in range(n):
        ising += oracles.op_on_sites({i: oracles.SX}, n)
        ising += dis.delta_z_fields[i] * oracles.op_on_sites({i: oracles.SZ}, n)
    h = build_hamiltonian(g, spec, dis)
    # equality up to one ulp of summation reordering between the two builds
    assert np.abs(h - ising).max() < 1e-14
    assert np.array_equal(h != 0, ising != 0)


def test_z_disorder_breaks_global_spin_flip():
    rng = np.random.default_rng(5)
    g = sample_rrg(4, 3, rng)
    spec = HamiltonianSpec()  # delta_z = 0.2 by default
    dis = sample_disorder(spec, 4, rng)
    h = build_hamiltonian(g, spec, dis)
    flip = pauli_string({i: "x" for i in range(4)}, 4)
    assert np.abs(h @ flip - flip @ h).max() > 1e-6


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        build_hamiltonian(TRIANGLE, HamiltonianSpec(), zero_disorder(4))


def test_level_spacing_equally_spaced():
    assert level_spacing_ratios(np.array([0.0, 1.0, 2.0, 3.0])) == pytest.approx(1.0)


def test_level_spacing_two_gaps():
    assert level_spacing_ratios(np.array([0.0, 1.0, 3.0])) == pytest.approx(0.5)


def test_level_spacing_skips_degeneracies():
    assert level_spacing_ratios(np.array([0.0, 0.0, 1.0, 2.0])) == pytest.approx(1.0)


def test_level_spacing_needs_three_levels():
    with pytest.raises(ValueError):
        level_spacing_ratios(np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        level_spacing_ratios(np.array([1.0, 1.0, 1.0]))


def test_level_spacing_central_window():
    # lowest/highest quarters dropped: (0, 9) excluded leaves gaps (1, 1, 4)
    e = np.array([0.0, 1.0, 2.0, 3.0, 7.0, 9.0])
    assert level_spacing_ratios(e, central_fraction=0.67) == pytest.approx((1.0 + 0.25) / 2)
    with pytest.raises(ValueError):
        level_spacing_ratios(e, central_fraction=0.1)
    with pytest.raises(ValueError):
        level_spacing_ratios(e, central_fraction=1.5)


def test_level_spacing_poisson_limit():
    # i.i.d. uniform levels have independent exponential gaps:
    # <r> = 2 ln 2 - 1 = 0.3863
    rng = np.random.default_rng(6)
    levels = np.sort(rng.uniform(0.0, 1.0, size=10_000))
    assert level_spacing_ratios(levels) == pytest.approx(2 * np.log(2) - 1, abs=0.01)
