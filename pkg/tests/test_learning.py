"""Kernel construction recipes: sampled prototypes and trained kernels."""

import numpy as np
import pytest

from gscatter.errors import InvalidParameterError, PreconditionError
from gscatter.frames import kernel_from_prototype_signals
from gscatter.groups import build_affine, build_product, build_cyclic, build_symmetric
from gscatter.learning import (PrototypeSpec, affine_twoclass_kernel,
                               distance_class_kernel, prototype_kernel,
                               sample_prototype, shannon_bank)
from gscatter.signals import Signal, constant

TOL = 1e-9
MORLET_BOUND = 0.5 ** 0.5 * (2 * np.pi * 3.5) ** -0.25


def test_prototype_spec_validation():
    with pytest.raises(InvalidParameterError):
        PrototypeSpec(family="triangle")
    with pytest.raises(InvalidParameterError):
        PrototypeSpec(family="mexican_hat", sigma=0.0)
    with pytest.raises(InvalidParameterError):
        PrototypeSpec(family="shannon", dilation=-1.0)


def test_mexican_hat_value_at_origin():
    spec = PrototypeSpec(family="mexican_hat", sigma=2.0)
    grid = sample_prototype(spec, 28, 28)
    assert grid[0, 0] == pytest.approx(1.0)


def test_mexican_hat_radial_decay():
    spec = PrototypeSpec(family="mexican_hat", sigma=2.0)
    grid = sample_prototype(spec, 28, 28)
    # centered sampling: value at wrapped coordinate -1 equals value at +1
    assert grid[1, 0] == pytest.approx(grid[27, 0])
    assert grid[0, 1] == pytest.approx(grid[0, 27])


def test_constant_prototype_concentrates_on_trivial(grid28):
    proto = constant(grid28, 1.0)
    kern = kernel_from_prototype_signals([proto], grid28)
    trivial = [r for r in range(grid28.k)
               if np.allclose(grid28.table.chi[r], 1.0)][0]
    # the single low-pass row is 1 on the trivial character; every other
    # column is dead and falls back to pure low-pass as well
    assert kern.J == 0
    assert kern.gamma[0, trivial] == pytest.approx(1.0, abs=TOL)
    assert kern.is_parseval()


def test_shannon_bank_count_and_rotations():
    bank = shannon_bank(8)
    assert len(bank) == 9  # low-pass plus 8 wavelets
    assert bank[0].family == "mexican_hat"
    assert all(s.family == "shannon" for s in bank[1:])
    assert len({(s.rotation, s.dilation) for s in bank[1:]}) == 8


def test_shannon_kernel_is_parseval(grid28):
    kern = prototype_kernel(shannon_bank(8), grid28, (28, 28))
    assert kern.J == 8
    assert np.allclose(kern.calderon_sums(), 1.0, atol=TOL)


def test_prototype_kernel_grid_must_match(s3):
    with pytest.raises(InvalidParameterError):
        prototype_kernel(shannon_bank(2), s3, (28, 28))


def make_affine_signals(group, rng, n, scale=0.1):
    return [Signal(group, scale * rng.standard_normal(group.order))
            for _ in range(n)]


def test_twoclass_kernel_tie_goes_to_first_class():
    group = build_affine(5)
    rng = np.random.default_rng(0)
    sigs = make_affine_signals(group, rng, 3)
    kern = affine_twoclass_kernel(sigs, list(sigs), group)
    # identical class means: row 1 carries the mean, row 2 is zero
    assert np.max(np.abs(kern.gamma[2])) <= TOL
    assert np.all(kern.gamma[1].real >= -TOL)
    assert kern.is_parseval()


def test_twoclass_kernel_empty_class():
    group = build_affine(5)
    rng = np.random.default_rng(1)
    sigs = make_affine_signals(group, rng, 3)
    kern = affine_twoclass_kernel(sigs, [], group)
    assert np.max(np.abs(kern.gamma[2])) <= TOL
    c = np.abs(kern.gamma[1]) ** 2
    assert np.allclose(np.abs(kern.gamma[0]) ** 2, 1.0 - c, atol=TOL)


def test_twoclass_kernel_signs_and_parseval():
    group = build_affine(7)
    rng = np.random.default_rng(2)
    a = make_affine_signals(group, rng, 4)
    b = make_affine_signals(group, rng, 4, scale=0.2)
    kern = affine_twoclass_kernel(a, b, group)
    assert kern.is_parseval()
    # per character exactly one of the two wavelet rows is active
    active = (np.abs(kern.gamma[1]) > TOL).astype(int) \
        + (np.abs(kern.gamma[2]) > TOL).astype(int)
    assert np.all(active <= 1)
    # the second row is stored negated
    assert np.all(kern.gamma[2].real <= TOL)


def test_twoclass_kernel_rejects_unnormalized_signals():
    group = build_affine(5)
    big = [Signal(group, np.full(group.order, 10.0))]
    with pytest.raises(PreconditionError):
        affine_twoclass_kernel(big, [], group)


def test_twoclass_kernel_rejects_empty_input():
    with pytest.raises(InvalidParameterError):
        affine_twoclass_kernel([], [], build_affine(5))


def test_morlet_features_respect_coefficient_bound():
    from gscatter import datasets
    from gscatter.cli import synthetic_audio_clips
    group = build_affine(19)
    clips, _ = synthetic_audio_clips(3, seed=5)
    chi_elem = group.table.chi[:, group.class_of]
    for clip in clips:
        f = datasets.morlet_cwt_to_affine(clip, group)
        coeffs = np.abs(np.conj(chi_elem) @ f.values / group.order)
        assert np.max(coeffs) <= MORLET_BOUND + TOL


def test_distance_kernel_degenerate_input(s3):
    zero = constant(s3, 0.0)
    kern = distance_class_kernel([zero], s3)
    assert np.allclose(kern.gamma[0], 1.0, atol=TOL)
    assert np.max(np.abs(kern.gamma[1])) <= TOL


def test_distance_kernel_six_metrics_on_s3(s3):
    from gscatter import datasets
    from gscatter.cli import S3_METRICS
    reps = [datasets.normalized_identity_distance(s3, m) for m in S3_METRICS]
    kern = distance_class_kernel(reps, s3)
    assert kern.J == 6
    assert kern.gamma.shape == (7, 3)
    assert np.allclose(kern.calderon_sums(), 1.0, atol=TOL)


def test_distance_kernel_unscaled_rows():
    from gscatter import datasets
    group = build_symmetric(4)
    values, _ = datasets.random_orbit_signals(group, 2, seed=0)
    reps = [Signal(group, values[0].astype(complex)),
            Signal(group, values[group.order].astype(complex))]
    kern = distance_class_kernel(reps, group, scale=False)
    chi_elem = group.table.chi[:, group.class_of]
    for j, f in enumerate(reps, start=1):
        expect = np.abs(np.conj(chi_elem) @ f.values / group.order)
        assert np.allclose(np.abs(kern.gamma[j]), expect, atol=TOL)
    assert kern.is_parseval()


def test_distance_kernel_requires_representatives(s3):
    with pytest.raises(InvalidParameterError):
        distance_class_kernel([], s3)
