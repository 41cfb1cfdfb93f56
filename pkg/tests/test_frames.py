"""Wavelet kernels, tight frames, reconstruction, and admissibility."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gscatter.errors import (FormatError, InvalidParameterError,
                             PreconditionError)
from gscatter.frames import (Kernel, admissibility, analyze,
                             empirical_frame_check, frame_bounds,
                             kernel_from_csv, kernel_from_prototype_signals,
                             kernel_to_csv, positivity_bound_check,
                             normalize_parseval, random_parseval_kernel,
                             reconstruct, relaxed_admissibility, synthesize,
                             tensor_multiplicities, tensor_support,
                             wavelet_convolve)
from gscatter.groups import build_affine, build_cyclic, build_symmetric
from gscatter.signals import (Signal, constant, convolve, delta, norm,
                              random_signal)

TOL = 1e-9


def trivial_index(g):
    return [r for r in range(g.k) if np.allclose(g.table.chi[r], 1.0)][0]


def lowpass_kernel(g, j_extra=1):
    """gamma_0 = 1 everywhere, wavelet rows zero."""
    gamma = np.zeros((1 + j_extra, g.k), dtype=complex)
    gamma[0] = 1.0
    return Kernel(g, gamma)


def test_wavelet_from_trivial_row_is_constant(s3):
    gamma = np.zeros((2, s3.k), dtype=complex)
    gamma[1, trivial_index(s3)] = 1.0
    psi = synthesize(Kernel(s3, gamma), 1)
    assert np.allclose(psi.values, 1.0, atol=TOL)


def test_wavelet_from_all_ones_is_point_mass(s3):
    gamma = np.zeros((2, s3.k), dtype=complex)
    gamma[1] = 1.0
    psi = synthesize(Kernel(s3, gamma), 1)
    expected = np.zeros(s3.order)
    expected[s3.identity] = s3.order
    assert np.allclose(psi.values, expected, atol=TOL)


def test_wavelet_from_degree_two_row(s3):
    r2 = int(np.argmax(s3.table.degrees))
    gamma = np.zeros((2, s3.k), dtype=complex)
    gamma[1, r2] = 1.0
    psi = synthesize(Kernel(s3, gamma), 1)
    # twice the degree-2 character: 4 on the identity, 0 on transpositions,
    # -2 on 3-cycles
    expected = 2.0 * s3.character_values(r2)
    assert np.allclose(psi.values, expected, atol=TOL)
    by_size = {int(s3.class_sizes[s3.class_of[x]]): psi.values[x].real
               for x in range(s3.order)}
    assert by_size[1] == pytest.approx(4.0)
    assert by_size[3] == pytest.approx(0.0)
    assert by_size[2] == pytest.approx(-2.0)


def test_normalize_parseval_leaves_parseval_alone(s3, rng):
    kern = random_parseval_kernel(s3, 3, rng)
    again = normalize_parseval(kern.gamma, s3)
    assert np.allclose(again.gamma, kern.gamma, atol=TOL)


def test_normalize_parseval_single_row():
    g = build_cyclic(4)
    raw = np.full((1, 4), 2.0, dtype=complex)
    kern = normalize_parseval(raw, g)
    assert np.allclose(kern.gamma[0], 1.0, atol=TOL)


def test_normalize_parseval_dead_column_fallback():
    g = build_cyclic(3)
    raw = np.zeros((2, 3), dtype=complex)
    raw[1, 0] = 1.0  # columns 1 and 2 vanish entirely
    kern = normalize_parseval(raw, g)
    assert kern.is_parseval()
    assert np.allclose(kern.gamma[0, 1:], 1.0)


def test_prototype_normalization_on_grid(grid28):
    from gscatter.learning import PrototypeSpec, sample_prototype, shannon_bank
    specs = shannon_bank(4) + [PrototypeSpec(family="mexican_hat", sigma=2.0)]
    protos = [Signal(grid28, sample_prototype(s, 28, 28).ravel())
              for s in specs]
    kern = kernel_from_prototype_signals(protos, grid28)
    assert np.allclose(kern.calderon_sums(), 1.0, atol=TOL)


def test_frame_bounds_parseval(s3, rng):
    kern = random_parseval_kernel(s3, 3, rng)
    a, b = frame_bounds(kern)
    assert a == pytest.approx(1.0, abs=TOL)
    assert b == pytest.approx(1.0, abs=TOL)
    f = random_signal(s3, rng)
    coeffs = analyze(kern, f)
    total = np.sum(np.abs(coeffs) ** 2) / s3.order
    assert total == pytest.approx(norm(f) ** 2, rel=TOL)


def test_frame_bounds_constant_wavelet():
    g = build_cyclic(4)
    gamma = np.zeros((2, 4), dtype=complex)
    gamma[1] = 0.5
    a, b = frame_bounds(Kernel(g, gamma))
    assert a == pytest.approx(0.25) and b == pytest.approx(0.25)


def test_empirical_frame_check_brute_force(s3, rng):
    gamma = rng.normal(size=(3, s3.k)) + 1j * rng.normal(size=(3, s3.k))
    kern = Kernel(s3, gamma)
    a, b = frame_bounds(kern)
    sigs = [random_signal(s3, rng) for _ in range(5)]
    worst = empirical_frame_check(kern, sigs)
    assert worst <= TOL
    # cross-check one signal against direct convolutions
    f = sigs[0]
    total = sum(norm(convolve(synthesize(kern, j), f)) ** 2
                for j in range(kern.J + 1))
    nf2 = norm(f) ** 2
    assert a * nf2 - TOL <= total <= b * nf2 + TOL


def test_analyze_matches_wavelet_convolve(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = random_signal(s3, rng)
    coeffs = analyze(kern, f)
    for j in range(kern.J + 1):
        assert np.allclose(coeffs[j], wavelet_convolve(kern, j, f).values,
                           atol=TOL)


def test_reconstruct_point_mass(rng):
    g = build_cyclic(4)
    kern = random_parseval_kernel(g, 2, rng)
    f = delta(g, 2)
    rec = reconstruct(kern, analyze(kern, f))
    assert np.allclose(rec.values, f.values, atol=TOL)


def test_reconstruct_constant(s3, rng):
    kern = random_parseval_kernel(s3, 2, rng)
    f = constant(s3, 2.5)
    rec = reconstruct(kern, analyze(kern, f))
    assert np.allclose(rec.values, f.values, atol=TOL)


def test_reconstruct_round_trip_affine(aff3, rng):
    kern = random_parseval_kernel(aff3, 3, rng)
    for _ in range(5):
        f = random_signal(aff3, rng)
        rec = reconstruct(kern, analyze(kern, f))
        assert norm(rec - f) <= TOL * norm(f)


def test_reconstruct_requires_unit_calderon(s3, rng):
    gamma = np.zeros((2, s3.k), dtype=complex)
    gamma[0] = 0.5
    with pytest.raises(PreconditionError):
        reconstruct(Kernel(s3, gamma), np.zeros((2, s3.order)))


def test_admissibility_pure_lowpass(s3):
    rep = admissibility(lowpass_kernel(s3))
    assert rep.beta == pytest.approx(1.0) and rep.alpha == pytest.approx(0.0)


def test_admissibility_no_lowpass():
    g = build_cyclic(2)
    gamma = np.zeros((2, 2), dtype=complex)
    gamma[1] = 1.0
    rep = admissibility(Kernel(g, gamma))
    assert rep.beta == pytest.approx(0.0) and rep.alpha == pytest.approx(1.0)


def test_admissibility_mixed():
    g = build_cyclic(2)
    gamma = np.array([[0.8, 0.6], [0.6, 0.8]], dtype=complex)
    rep = admissibility(Kernel(g, gamma))
    assert rep.beta == pytest.approx(0.36)
    assert rep.alpha == pytest.approx(0.64)
    assert rep.gamma0_max == pytest.approx(0.64)


def test_tensor_support_consecutive_characters():
    n = 12
    g = build_cyclic(n)
    subset = [3, 4, 5]  # three consecutive character indices
    support = tensor_support(g, subset)
    assert sorted(support) == sorted({(a - b) % n for a in subset
                                      for b in subset})
    assert len(support) == 2 * len(subset) - 1


def test_tensor_support_trivial_only(s3):
    t = trivial_index(s3)
    assert tensor_support(s3, [t]) == (t,)
    mult = tensor_multiplicities(s3, [t])
    expected = np.zeros(s3.k, dtype=int)
    expected[t] = 1
    assert np.array_equal(mult, expected)


@pytest.mark.parametrize("n", [3, 5])
def test_tensor_support_trivial_and_sign(n):
    g = build_symmetric(n)
    one_dim = [r for r in range(g.k) if g.table.degrees[r] == 1]
    assert len(one_dim) == 2
    assert sorted(tensor_support(g, one_dim)) == sorted(one_dim)


def test_relaxed_admissibility_reduces_to_plain(s3, rng):
    for _ in range(5):
        kern = random_parseval_kernel(s3, 2, rng)
        rep = relaxed_admissibility(kern, range(s3.k))
        assert rep.relaxed.degree == s3.order
        # full subset: relaxed rate is at least as strong as the plain one
        # whenever the low-pass row never vanishes
        if rep.beta > 0:
            assert rep.relaxed.beta >= rep.beta * rep.relaxed.degree / s3.order - TOL


def test_relaxed_admissibility_degree_two(s5, rng):
    kern = random_parseval_kernel(s5, 2, rng)
    one_dim = [r for r in range(s5.k) if s5.table.degrees[r] == 1]
    rep = relaxed_admissibility(kern, one_dim)
    assert rep.relaxed.degree == 2
    low = np.abs(kern.gamma[0]) ** 2
    expect = 2.0 / 120.0 * min(low[r] for r in rep.relaxed.support)
    assert rep.relaxed.beta == pytest.approx(expect)


def test_relaxed_beats_plain_with_targeted_zero():
    g = build_cyclic(6)
    subset = [0]  # trivial character: T(S) = {0}
    gamma = np.zeros((2, 6), dtype=complex)
    gamma[0] = 1.0
    gamma[0, 3] = 0.0  # vanishes outside T(S)
    gamma[1, 3] = 1.0
    kern = Kernel(g, gamma)
    rep = relaxed_admissibility(kern, subset)
    assert rep.beta == pytest.approx(0.0)
    assert rep.relaxed.beta > 0.0


def test_positivity_bound_equality_case():
    g = build_cyclic(2)
    f = Signal(g, [1.0, 0.0])
    lhs, rhs, holds = positivity_bound_check(f, [0])
    assert lhs == pytest.approx(0.25, abs=TOL)
    assert rhs == pytest.approx(0.25, abs=TOL)
    assert holds


def test_positivity_bound_constant(s3):
    f = constant(s3, 1.0)
    lhs, rhs, holds = positivity_bound_check(f, [trivial_index(s3), 1])
    assert holds
    assert lhs >= norm(f) ** 2 * 1.0 / s3.order - TOL


def test_positivity_bound_rejects_signed_signal(s3):
    f = Signal(s3, [-1.0] + [1.0] * 5)
    with pytest.raises(PreconditionError):
        positivity_bound_check(f, [0])


@pytest.mark.parametrize("builder,arg", [(build_symmetric, 3),
                                         (build_cyclic, 6),
                                         (build_affine, 3)])
def test_positivity_bound_random_sweep(builder, arg):
    g = builder(arg)
    rng = np.random.default_rng(7)
    subsets = [[r] for r in range(g.k)] + [list(range(g.k))]
    for _ in range(25):
        f = Signal(g, rng.uniform(0.0, 1.0, size=g.order))
        for s in subsets:
            lhs, rhs, holds = positivity_bound_check(f, s)
            assert holds, (s, lhs, rhs)


def test_kernel_csv_round_trip(s3, rng):
    kern = random_parseval_kernel(s3, 3, rng)
    again = kernel_from_csv(kernel_to_csv(kern))
    assert again.group.order == s3.order
    assert np.allclose(again.gamma, kern.gamma, atol=1e-12)


def test_kernel_csv_rejects_garbage():
    with pytest.raises(FormatError):
        kernel_from_csv("not,a,kernel\n1,2,3\n")


def test_kernel_shape_validation(s3):
    with pytest.raises(InvalidParameterError):
        Kernel(s3, np.zeros((0, s3.k)))
    with pytest.raises(InvalidParameterError):
        Kernel(s3, np.zeros((2, s3.k + 1)))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=10), st.integers(min_value=0))
def test_random_kernels_are_parseval(n, seed):
    g = build_cyclic(n)
    kern = random_parseval_kernel(g, 3, np.random.default_rng(seed))
    assert kern.is_parseval()
    a, b = frame_bounds(kern)
    assert abs(a - 1.0) <= TOL and abs(b - 1.0) <= TOL
