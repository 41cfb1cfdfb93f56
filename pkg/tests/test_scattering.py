"""Scattering transform: propagation, energy accounting, and symmetries."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gscatter.errors import DomainError, PreconditionError
from gscatter.frames import Kernel, admissibility, random_parseval_kernel
from gscatter.groups import build_affine, build_cyclic
from gscatter.scattering import (check_approx_invariance,
                                 check_energy_preservation,
                                 check_energy_split, check_equivariance,
                                 check_nonexpansive, check_stability,
                                 injectivity_witness, paths_up_to, propagate,
                                 scatter, scatter_matrix)
from gscatter.signals import (Signal, constant, convolve, modulus, norm,
                              random_signal, translate_left)

TOL = 1e-9


def two_scale_kernel_z4():
    """Hand-built Parseval kernel on the 4-element cyclic group, J = 2."""
    g = build_cyclic(4)
    gamma = np.array([
        [0.6, 0.8, 0.5, 0.3],
        [0.8, 0.0, 0.5, np.sqrt(0.91)],
        [0.0, 0.6, np.sqrt(0.5), 0.0],
    ], dtype=complex)
    kern = Kernel(g, gamma)
    assert kern.is_parseval()
    return kern


def synthesized(kern, j):
    from gscatter.frames import synthesize
    return synthesize(kern, j)


def test_paths_enumeration():
    assert paths_up_to(2, 0) == [()]
    assert paths_up_to(2, 2) == [(), (1,), (2,), (1, 1), (1, 2), (2, 1),
                                 (2, 2)]
    assert len(paths_up_to(3, 2)) == 1 + 3 + 9


def test_propagate_empty_path_is_identity(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = random_signal(s3, rng)
    assert np.allclose(propagate(kern, f, ()).values, f.values)


def test_propagate_zero_signal(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    zero = constant(s3, 0.0)
    assert np.allclose(propagate(kern, zero, (1, 2)).values, 0.0)


def test_propagate_matches_straight_line_oracle(rng):
    kern = two_scale_kernel_z4()
    g = kern.group
    f = random_signal(g, rng)
    psi1 = synthesized(kern, 1)
    psi2 = synthesized(kern, 2)
    expected = modulus(convolve(psi2, modulus(convolve(psi1, f))))
    assert np.allclose(propagate(kern, f, (1, 2)).values, expected.values,
                       atol=TOL)


def test_propagate_rejects_bad_scale(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    with pytest.raises(DomainError):
        propagate(kern, random_signal(s3, rng), (3,))


def test_lowpass_only_kernel_reproduces_input(s3, rng):
    gamma = np.zeros((3, s3.k), dtype=complex)
    gamma[0] = 1.0
    kern = Kernel(s3, gamma)
    f = random_signal(s3, rng)
    out = scatter(kern, f, 2)
    assert np.allclose(out.features[()].values, f.values, atol=TOL)
    for p in out.paths:
        if p:
            assert np.allclose(out.features[p].values, 0.0, atol=TOL)


def test_depth_zero_single_feature(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = random_signal(s3, rng)
    out = scatter(kern, f, 0)
    assert out.paths == [()]
    phi_f = convolve(synthesized(kern, 0), f)
    assert np.allclose(out.features[()].values, phi_f.values, atol=TOL)


def test_energy_split_identity(aff3, rng):
    kern = random_parseval_kernel(aff3, 3, rng)
    f = random_signal(aff3, rng)
    for m in (0, 1, 2):
        um, um1, sm = check_energy_split(kern, f, m)
        assert um == pytest.approx(um1 + sm, rel=1e-9)
    zero = constant(aff3, 0.0)
    um, um1, sm = check_energy_split(kern, zero, 0)
    assert um == um1 == sm == 0.0


def test_total_energy_budget(s3, rng):
    kern = random_parseval_kernel(s3, 3, rng)
    f = random_signal(s3, rng)
    out = scatter(kern, f, 3)
    captured = out.feature_energy()
    tail = float(out.layer_propagated_energies[4])
    assert captured + tail == pytest.approx(norm(f) ** 2, rel=1e-9)
    rep = admissibility(kern)
    assert tail <= rep.alpha ** 4 * norm(f) ** 2 + TOL


def test_nonexpansive_and_stable(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = random_signal(s3, rng)
    assert check_nonexpansive(kern, f, 2)
    assert check_stability(kern, f, f, 2)
    f2 = Signal(s3, f.values + 1e-6 * rng.standard_normal(s3.order))
    assert check_stability(kern, f, f2, 2)


def test_stability_on_grid_with_prototype_kernel(grid28, rng):
    from gscatter.learning import prototype_kernel, shannon_bank
    kern = prototype_kernel(shannon_bank(4), grid28, (28, 28))
    f = random_signal(grid28, rng)
    f2 = Signal(grid28, f.values + 0.01 * rng.standard_normal(grid28.order))
    assert check_nonexpansive(kern, f, 2)
    assert check_stability(kern, f, f2, 2)


def test_energy_preservation_lowpass_tail_zero(s3, rng):
    gamma = np.zeros((2, s3.k), dtype=complex)
    gamma[0] = 1.0
    kern = Kernel(s3, gamma)
    f = random_signal(s3, rng)
    captured, bound = check_energy_preservation(kern, f, 0)
    assert captured == pytest.approx(norm(f) ** 2, rel=1e-9)
    assert bound <= TOL


def test_energy_preservation_geometric_tail():
    g = build_cyclic(2)
    gamma = np.array([[0.8, 0.6], [0.6, 0.8]], dtype=complex)
    kern = Kernel(g, gamma)
    rng = np.random.default_rng(3)
    f = random_signal(g, rng)
    captured, bound = check_energy_preservation(kern, f, 3)
    tail = norm(f) ** 2 - captured
    assert bound == pytest.approx(0.64 ** 4 * norm(f) ** 2, rel=1e-9)
    assert tail <= bound + TOL


def test_layer_energies_geometric_decay(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    rep = admissibility(kern)
    f = random_signal(s3, rng)
    out = scatter(kern, f, 3)
    nf2 = norm(f) ** 2
    for m in range(4):
        layer = float(out.layer_feature_energies[m])
        assert layer <= rep.gamma0_max * rep.alpha ** m * nf2 + TOL


def test_equivariance_identity_and_exhaustive(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = random_signal(s3, rng)
    assert check_equivariance(kern, f, 0, 2) <= TOL
    for g_el in range(s3.order):
        assert check_equivariance(kern, f, g_el, 2) <= TOL


def test_equivariance_sampled_affine(aff7, rng):
    kern = random_parseval_kernel(aff7, 2, rng)
    f = random_signal(aff7, rng)
    for g_el in rng.integers(0, aff7.order, size=6):
        assert check_equivariance(kern, f, int(g_el), 2) <= TOL


def test_approx_invariance_identity(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = random_signal(s3, rng)
    for lhs, bound in check_approx_invariance(kern, f, 0, 2):
        assert lhs <= TOL
        assert bound >= 0.0


def test_approx_invariance_layer_bounds(rng):
    g = build_cyclic(6)
    kern = random_parseval_kernel(g, 2, rng)
    rep = admissibility(kern)
    if rep.beta <= 0.0:
        pytest.skip("sampled kernel not admissible")
    f = random_signal(g, rng)
    for g_el in range(g.order):
        pairs = check_approx_invariance(kern, f, g_el, 3)
        for lhs, bound in pairs:
            assert lhs <= bound + TOL


def test_batched_scattering_matches_reference(s3, rng):
    kern = random_parseval_kernel(s3, 3, rng)
    vals = rng.standard_normal((4, s3.order)) \
        + 1j * rng.standard_normal((4, s3.order))
    batch = scatter_matrix(kern, vals, 2)
    for i in range(4):
        ref = scatter(kern, Signal(s3, vals[i]), 2)
        for pi, p in enumerate(ref.paths):
            assert np.allclose(batch[i, pi], ref.features[p].values,
                               atol=1e-12)


def test_injectivity_witness(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    rep = admissibility(kern)
    f = random_signal(s3, rng)
    f2 = random_signal(s3, rng)
    low_energy, floor = injectivity_witness(kern, f, f2)
    assert low_energy >= floor - TOL
    assert floor == pytest.approx(rep.beta * norm(f - f2) ** 2, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0))
def test_scattering_contracts_random_pairs(seed):
    g = build_cyclic(5)
    rng = np.random.default_rng(seed)
    kern = random_parseval_kernel(g, 2, rng)
    f = random_signal(g, rng)
    f2 = random_signal(g, rng)
    assert check_stability(kern, f, f2, 2)
    assert check_nonexpansive(kern, f, 2)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0), st.integers(min_value=1, max_value=3))
def test_translation_invariant_path_energies(seed, depth):
    """Path-output norms are unchanged under translation of the input."""
    g = build_cyclic(6)
    rng = np.random.default_rng(seed)
    kern = random_parseval_kernel(g, 2, rng)
    f = random_signal(g, rng)
    base = scatter(kern, f, depth)
    for h in range(g.order):
        moved = scatter(kern, translate_left(f, h), depth)
        for p in base.paths:
            assert norm(moved.features[p]) == pytest.approx(
                norm(base.features[p]), abs=1e-9)
