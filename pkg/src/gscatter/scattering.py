"""Scattering transform on a finite group: propagators, windowed features,
and executable versions of the energy/stability/equivariance theorems.

Paths are tuples of wavelet indices in 1..J.  The propagator along a path is
the iterated modulus-of-wavelet-convolution ``U[p]f = |psi_{j_m} * ... |psi_{j_1} * f||``
and the extracted feature is the low-pass average ``S[p]f = phi * U[p]f``.
Layers are computed breadth-first, memoizing the previous layer, so depth M
costs one convolution per path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError, PreconditionError
from .frames import Kernel, admissibility, relaxed_admissibility
from .signals import (Signal, class_sums, modulus, norm, translate_left,
                      translate_right)

Path = tuple[int, ...]

DEFAULT_BUDGET = 10 ** 9


def paths_up_to(J: int, depth: int) -> list[Path]:
    """All paths of length <= depth, breadth-first then lexicographic."""
    out: list[Path] = []
    for m in range(depth + 1):
        out.extend(itertools.product(range(1, J + 1), repeat=m))
    return out


@dataclass
class ScatteringOutput:
    """Features S[p]f for |p| <= depth, plus per-layer energy bookkeeping."""

    depth: int
    features: dict[Path, Signal]
    propagated: dict[Path, Signal] = field(default_factory=dict)
    layer_feature_energies: np.ndarray | None = None   # (depth+1,)
    layer_propagated_energies: np.ndarray | None = None  # (depth+2,)

    @property
    def paths(self) -> list[Path]:
        return list(self.features.keys())

    def feature_energy(self) -> float:
        return float(np.sum(self.layer_feature_energies))


def _check_path(kernel: Kernel, p: Path):
    for step in p:
        if not 1 <= step <= kernel.J:
            raise DomainError(f"path step {step} out of range 1..{kernel.J}")


def propagate(kernel: Kernel, f: Signal, p: Path) -> Signal:
    """U[p]f; the empty path returns f itself."""
    _check_path(kernel, p)
    cur = f
    for step in p:
        cls = kernel.class_values(step)
        cs = class_sums(cur)
        cur = modulus(Signal(cur.group, (cls @ cs) / cur.group.order, copy=False))
    return cur


def scatter(kernel: Kernel, f: Signal, depth: int, *,
            keep_propagated: bool = False,
            budget: float = DEFAULT_BUDGET) -> ScatteringOutput:
    """Full windowed scattering up to the given depth."""
    if f.group is not kernel.group:
        raise DomainError("signal and kernel live on different groups")
    if depth < 0:
        raise DomainError("depth must be >= 0")
    group = kernel.group
    J = kernel.J
    n_paths = sum(J ** m for m in range(depth + 2))
    if n_paths * group.order ** 2 > budget:
        raise CapacityError(
            f"scattering cost {n_paths} paths x |G|^2 = "
            f"{n_paths * group.order ** 2:.2e} exceeds budget {budget:.2e}; "
            "reduce depth or J")

    phi_cls = kernel.class_values(0)
    wav_cls = [kernel.class_values(j) for j in range(1, J + 1)]
    features: dict[Path, Signal] = {}
    propagated: dict[Path, Signal] = {(): f} if keep_propagated else {}
    s_energy = np.zeros(depth + 1)
    u_energy = np.zeros(depth + 2)

    layer: dict[Path, Signal] = {(): f}
    for m in range(depth + 2):
        u_energy[m] = sum(norm(u) ** 2 for u in layer.values())
        if m > depth:
            break
        nxt: dict[Path, Signal] = {}
        for p, u in layer.items():
            cs = class_sums(u)
            s_vals = (phi_cls @ cs) / group.order
            features[p] = Signal(group, s_vals, copy=False)
            s_energy[m] += norm(features[p]) ** 2
            for j in range(1, J + 1):
                child = modulus(
                    Signal(group, (wav_cls[j - 1] @ cs) / group.order,
                           copy=False))
                nxt[p + (j,)] = child
        if keep_propagated:
            propagated.update(nxt)
        layer = nxt
    return ScatteringOutput(depth=depth, features=features,
                            propagated=propagated,
                            layer_feature_energies=s_energy,
                            layer_propagated_energies=u_energy)


def scatter_matrix(kernel: Kernel, values: np.ndarray, depth: int,
                   *, budget: float = 1e13) -> np.ndarray:
    """Batched scattering: `values` is (n_samples, |G|); returns the complex
    feature tensor (n_samples, n_paths, |G|) in `paths_up_to` order.

    Uses precomputed convolution-operator matrices so the per-layer work is
    dense matrix products over the whole batch.
    """
    group = kernel.group
    J = kernel.J
    vals = np.asarray(values, dtype=complex)
    if vals.ndim != 2 or vals.shape[1] != group.order:
        raise DomainError(f"values must be (n, {group.order})")
    n = len(vals)
    n_paths = sum(J ** m for m in range(depth + 1))
    if n_paths * group.order ** 2 * max(n, 1) > budget:
        raise CapacityError(
            "batched scattering exceeds compute budget; reduce depth, J, "
            "or the batch size")

    conj_idx = group.conj_class_index()  # [x, z] = class(x z^{-1})
    ops = [kernel.class_values(j)[conj_idx] / group.order
           for j in range(J + 1)]  # (|G|, |G|) operator matrices
    phi_t = ops[0].T.copy()
    wav_t = [op.T.copy() for op in ops[1:]]

    out = np.empty((n, n_paths, group.order), dtype=complex)
    pos = 0
    layer = vals[:, None, :]  # (n, paths_in_layer, |G|)
    for m in range(depth + 1):
        n_layer_paths = layer.shape[1]
        flat = layer.reshape(n * n_layer_paths, group.order)
        out[:, pos:pos + n_layer_paths, :] = (flat @ phi_t).reshape(
            n, n_layer_paths, group.order)
        pos += n_layer_paths
        if m == depth:
            break
        # children ordered parent-major, wavelet-index-minor, matching
        # itertools.product path order
        children = np.stack([np.abs(flat @ wt) for wt in wav_t], axis=1)
        layer = children.reshape(n, n_layer_paths * J, group.order)
    return out


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------

def check_energy_split(kernel: Kernel, f: Signal,
                       m: int) -> tuple[float, float, float]:
    """Energies (sum_U_m, sum_U_{m+1}, sum_S_m); the first equals the sum of
    the other two for any Parseval kernel."""
    out = scatter(kernel, f, m)
    return (float(out.layer_propagated_energies[m]),
            float(out.layer_propagated_energies[m + 1]),
            float(out.layer_feature_energies[m]))


def check_nonexpansive(kernel: Kernel, f: Signal, depth: int,
                       rel_slack: float = 1e-9) -> bool:
    out = scatter(kernel, f, depth)
    return out.feature_energy() <= norm(f) ** 2 * (1.0 + rel_slack) + 1e-300


def check_stability(kernel: Kernel, f: Signal, f2: Signal, depth: int,
                    rel_slack: float = 1e-9) -> bool:
    a = scatter(kernel, f, depth)
    b = scatter(kernel, f2, depth)
    diff = sum(norm(a.features[p] - b.features[p]) ** 2 for p in a.features)
    bound = norm(f - f2) ** 2
    return diff <= bound * (1.0 + rel_slack) + 1e-300


def check_energy_preservation(kernel: Kernel, f: Signal, depth: int,
                              subset=None,
                              tol: float = 1e-9) -> tuple[float, float]:
    """Returns (captured feature energy, certified tail bound alpha^{M+1}).

    Verifies the exact split ``||f||^2 - captured = tail`` and the geometric
    tail bound; with `subset` the relaxed decay rate alpha(S) is used for
    layers >= 2 (propagated signals are nonnegative there).
    """
    report = (relaxed_admissibility(kernel, subset) if subset is not None
              else admissibility(kernel))
    alpha = report.alpha
    if subset is not None:
        alpha_s = report.relaxed.alpha
        if alpha_s >= 1.0 and report.beta <= 0.0:
            raise PreconditionError("kernel admissible under neither route")
    elif report.beta <= 0.0:
        raise PreconditionError("kernel is not admissible (beta = 0)")

    out = scatter(kernel, f, depth)
    captured = out.feature_energy()
    tail = float(out.layer_propagated_energies[depth + 1])
    nf2 = norm(f) ** 2
    if abs(nf2 - captured - tail) > tol * max(nf2, 1.0):
        raise PreconditionError(
            f"energy split violated: {nf2} != {captured} + {tail}")
    if subset is None:
        bound = alpha ** (depth + 1) * nf2
    else:
        # layer 1 only uses the plain rate (inputs there need not be
        # nonnegative); layers >= 2 use the relaxed rate
        alpha1 = alpha if report.beta > 0.0 else 1.0
        bound = alpha1 * alpha_s ** depth * nf2
    if tail > bound + tol * max(nf2, 1.0):
        raise PreconditionError(
            f"tail {tail} exceeds certified bound {bound}")
    return captured, bound


def check_equivariance(kernel: Kernel, f: Signal, g: int,
                       depth: int) -> float:
    """Max over paths and both translation sides of
    ``|| S[p] (translate f) - translate(S[p] f) ||_inf``."""
    base = scatter(kernel, f, depth)
    left = scatter(kernel, translate_left(f, g), depth)
    right = scatter(kernel, translate_right(f, g), depth)
    dev = 0.0
    for p, s in base.features.items():
        dev = max(dev, float(np.max(np.abs(
            left.features[p].values - translate_left(s, g).values))))
        dev = max(dev, float(np.max(np.abs(
            right.features[p].values - translate_right(s, g).values))))
    return dev


def check_approx_invariance(kernel: Kernel, f: Signal, g: int,
                            depth: int) -> list[tuple[float, float]]:
    """Per-layer (sum_p ||S[p] L_g f - S[p] f||^2, theoretical bound)."""
    report = admissibility(kernel)
    if report.beta <= 0.0:
        raise PreconditionError("approximate invariance needs beta > 0")
    base = scatter(kernel, f, depth)
    moved = scatter(kernel, translate_left(f, g), depth)
    nf2 = norm(f) ** 2
    out = []
    for m in range(depth + 1):
        lhs = sum(norm(moved.features[p] - base.features[p]) ** 2
                  for p in base.features if len(p) == m)
        bound = 4.0 * report.gamma0_max * report.alpha ** m * nf2
        out.append((float(lhs), float(bound)))
    return out


def injectivity_witness(kernel: Kernel, f: Signal, f2: Signal) -> tuple[float, float]:
    """Depth-0 lower bound: ||phi * (f - f')||^2 >= beta ||f - f'||^2."""
    report = admissibility(kernel)
    diff = f - f2
    cs = class_sums(diff)
    low = Signal(f.group, (kernel.class_values(0) @ cs) / f.group.order,
                 copy=False)
    return norm(low) ** 2, report.beta * norm(diff) ** 2
