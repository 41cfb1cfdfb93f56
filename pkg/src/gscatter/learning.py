"""Kernel construction from analytic prototypes and from training data.

Three recipes:

* grid prototypes (Mexican hat low-pass + rotated/dilated Shannon wavelets)
  expanded in characters of Z/n x Z/m and Parseval-normalized;
* a two-class kernel on the affine group learned from mean character
  magnitudes of the two training sets (winner-take-all per character);
* distance/orbit kernels on symmetric groups from normalized class
  representatives, with the low-pass row completing the Parseval condition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (InvalidParameterError, NumericalIntegrityError,
                     PreconditionError)
from .frames import Kernel, kernel_from_prototype_signals
from .groups import FiniteGroup
from .signals import Signal


@dataclass(frozen=True)
class PrototypeSpec:
    """One sampled prototype on an n x m grid in centered coordinates."""

    family: str                      # "mexican_hat" | "shannon"
    sigma: float = 2.0               # Mexican hat width
    freq: tuple[float, float] = (np.pi / 2, np.pi / 2)  # Shannon (f_x, f_y)
    rotation: float = 0.0            # radians, in [0, 2*pi)
    dilation: float = 1.0

    def __post_init__(self):
        if self.family not in ("mexican_hat", "shannon"):
            raise InvalidParameterError(f"unknown prototype family {self.family}")
        if self.sigma <= 0 or self.dilation <= 0:
            raise InvalidParameterError("sigma and dilation must be positive")
        if not 0.0 <= self.rotation < 2 * np.pi:
            raise InvalidParameterError("rotation must lie in [0, 2*pi)")


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with the removable singularity filled in."""
    return np.sinc(x / np.pi)


def sample_prototype(spec: PrototypeSpec, n: int, m: int) -> np.ndarray:
    """Evaluate the prototype on the centered grid, wrap-mapped so that the
    origin lands on the group identity (index (0, 0))."""
    gx = np.where(np.arange(n) < (n + 1) // 2, np.arange(n), np.arange(n) - n)
    gy = np.where(np.arange(m) < (m + 1) // 2, np.arange(m), np.arange(m) - m)
    x = gx[:, None].astype(float)
    y = gy[None, :].astype(float)
    c, s = np.cos(spec.rotation), np.sin(spec.rotation)
    u = (c * x + s * y) / spec.dilation
    v = (-s * x + c * y) / spec.dilation
    if spec.family == "mexican_hat":
        r2 = (u ** 2 + v ** 2) / (2.0 * spec.sigma ** 2)
        return (1.0 - r2) * np.exp(-r2)
    fx, fy = spec.freq
    return np.sin(fx * u) * _sinc(u) * np.sin(fy * v) * _sinc(v)


def shannon_bank(J: int, freq: tuple[float, float] = (np.pi / 2, np.pi / 2),
                 sigma: float = 2.0) -> list[PrototypeSpec]:
    """Default prototype set: Mexican hat low-pass plus J Shannon wavelets at
    angles pi*(i-1)/J, the second half of the bank dilated by 0.5."""
    specs = [PrototypeSpec(family="mexican_hat", sigma=sigma)]
    for i in range(1, J + 1):
        dilation = 1.0 if i <= (J + 1) // 2 else 0.5
        specs.append(PrototypeSpec(family="shannon", freq=freq,
                                   rotation=np.pi * (i - 1) / J,
                                   dilation=dilation))
    return specs


def prototype_kernel(specs: list[PrototypeSpec], group: FiniteGroup,
                     grid: tuple[int, int]) -> Kernel:
    """Sample each prototype on the grid of Z/n x Z/m, expand in characters,
    and Parseval-normalize.  The first spec is the low-pass filter."""
    n, m = grid
    if group.order != n * m:
        raise InvalidParameterError(
            f"grid {n}x{m} does not match group order {group.order}")
    signals = []
    for spec in specs:
        vals = sample_prototype(spec, n, m).reshape(-1)
        if np.max(np.abs(vals)) == 0.0:
            raise InvalidParameterError(
                f"prototype {spec.family} is identically zero on the grid")
        signals.append(Signal(group, vals))
    return kernel_from_prototype_signals(signals, group)


# ---------------------------------------------------------------------------
# trained kernels
# ---------------------------------------------------------------------------

def _mean_char_magnitudes(signals: list[Signal], group: FiniteGroup) -> np.ndarray:
    """Per-character mean of |<f, chi^k>| over the given signals."""
    if not signals:
        return np.zeros(group.k)
    chi_elem = group.table.chi[:, group.class_of]  # (k, |G|)
    acc = np.zeros(group.k)
    for f in signals:
        acc += np.abs(np.conj(chi_elem) @ f.values / group.order)
    return acc / len(signals)


def affine_twoclass_kernel(train_a: list[Signal], train_b: list[Signal],
                           group: FiniteGroup) -> Kernel:
    """Two-wavelet kernel from class means of character magnitudes.

    Row 1 takes the class-A mean where it wins (ties go to A), row 2 takes
    the negated class-B mean elsewhere, and the low-pass row completes the
    Parseval condition.
    """
    if not train_a and not train_b:
        raise InvalidParameterError("both training sets are empty")
    c_a = _mean_char_magnitudes(train_a, group)
    c_b = _mean_char_magnitudes(train_b, group)
    a_wins = c_a >= c_b
    gamma1 = np.where(a_wins, c_a, 0.0)
    gamma2 = np.where(a_wins, 0.0, -c_b)
    used = np.abs(gamma1) ** 2 + np.abs(gamma2) ** 2
    if np.any(used >= 1.0):
        k_bad = int(np.argmax(used))
        raise PreconditionError(
            f"character coefficient energy {used[k_bad]:.6f} >= 1 at index "
            f"{k_bad}; training signals are not normalized to [-1/2, 1/2]")
    gamma0 = np.sqrt(1.0 - used)
    return Kernel(group, np.stack([gamma0, gamma1, gamma2]).astype(complex))


def distance_class_kernel(representatives: list[Signal], group: FiniteGroup,
                          scale: bool = True) -> Kernel:
    """One wavelet row per normalized class representative:
    ``gamma_j(r) = w |<d~_j, chi^r>|`` with w = 1/sqrt(J) when `scale` is
    set (the distance recipe) and w = 1 otherwise (the random-orbit recipe);
    the low-pass row completes Parseval."""
    if not representatives:
        raise InvalidParameterError("need at least one class representative")
    j_count = len(representatives)
    chi_elem = group.table.chi[:, group.class_of]
    w = 1.0 / np.sqrt(j_count) if scale else 1.0
    rows = [w * np.abs(np.conj(chi_elem) @ f.values / group.order)
            for f in representatives]
    used = np.sum(np.abs(np.stack(rows)) ** 2, axis=0)
    if np.any(used >= 1.0):
        r_bad = int(np.argmax(used))
        raise NumericalIntegrityError(
            f"wavelet coefficient energy {used[r_bad]:.6f} >= 1 at "
            f"irreducible {r_bad}")
    gamma0 = np.sqrt(1.0 - used)
    return Kernel(group, np.stack([gamma0] + rows).astype(complex))
