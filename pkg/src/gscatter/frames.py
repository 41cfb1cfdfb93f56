"""Wavelet kernels on a finite group: synthesis, frame checks, reconstruction,
admissibility, and the relaxed admissibility machinery.

A kernel is a (J+1) x k complex array `gamma`: row 0 parameterizes the
low-pass filter phi, rows 1..J the wavelets.  The wavelet of row j is the
class function ``psi_j(x) = sum_r d_r gamma[j, r] chi^r(x)``.  The Parseval
(tight-frame) condition is ``sum_j |gamma[j, r]|^2 = 1`` for every r.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, FormatError, InvalidParameterError,
                     NumericalIntegrityError, PreconditionError)
from .groups import TOL, FiniteGroup, group_from_descriptor
from .signals import Signal, apply_class_function, class_sums, norm

PARSEVAL_TOL = 1e-9


@dataclass(frozen=True)
class Kernel:
    """Coefficients {gamma_j(r)} for a low-pass filter and J wavelets."""

    group: FiniteGroup
    gamma: np.ndarray  # (J+1, k) complex

    def __post_init__(self):
        g = np.ascontiguousarray(self.gamma, dtype=complex)
        if g.ndim != 2 or g.shape[1] != self.group.k:
            raise InvalidParameterError(
                f"kernel must be (J+1) x {self.group.k}, got {g.shape}")
        if g.shape[0] < 1:
            raise InvalidParameterError("kernel needs at least the low-pass row")
        if not np.all(np.isfinite(g.view(float))):
            raise InvalidParameterError("kernel contains NaN or Inf")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def J(self) -> int:
        return self.gamma.shape[0] - 1

    def calderon_sums(self) -> np.ndarray:
        """C(r) = sum_j |gamma_j(r)|^2 for each irreducible r."""
        return np.sum(np.abs(self.gamma) ** 2, axis=0)

    def is_parseval(self, tol: float = PARSEVAL_TOL) -> bool:
        return bool(np.max(np.abs(self.calderon_sums() - 1.0)) <= tol)

    def class_values(self, j: int) -> np.ndarray:
        """Values of psi_j on each conjugacy class."""
        if not 0 <= j <= self.J:
            raise DomainError(f"kernel row {j} out of range 0..{self.J}")
        table = self.group.table
        return (table.degrees * self.gamma[j]) @ table.chi


@dataclass(frozen=True)
class RelaxedReport:
    """Admissibility data relative to an irrep subset S."""

    subset: tuple[int, ...]
    support: tuple[int, ...]  # T(S)
    degree: int               # deg(S) = sum of d_s^2 over S
    beta: float
    alpha: float


@dataclass(frozen=True)
class AdmissibilityReport:
    beta: float         # min_r |gamma_0(r)|^2
    alpha: float        # 1 - beta
    gamma0_max: float   # max_r |gamma_0(r)|^2
    relaxed: RelaxedReport | None = None


# ---------------------------------------------------------------------------
# synthesis and transform
# ---------------------------------------------------------------------------

def synthesize(kernel: Kernel, j: int) -> Signal:
    """The wavelet psi_j as a signal (always a class function)."""
    vals = kernel.class_values(j)[kernel.group.class_of]
    return Signal(kernel.group, vals, copy=False)


def analyze(kernel: Kernel, f: Signal) -> np.ndarray:
    """All wavelet coefficients: row j holds (psi_j * f) over the group."""
    if f.group is not kernel.group:
        raise DomainError("signal and kernel live on different groups")
    cs = class_sums(f)
    cls = np.stack([kernel.class_values(j) for j in range(kernel.J + 1)])
    return (cls @ cs) / kernel.group.order


def wavelet_convolve(kernel: Kernel, j: int, f: Signal,
                     cs: np.ndarray | None = None) -> Signal:
    """psi_j * f, via precomputed class sums when available."""
    return apply_class_function(kernel.class_values(j), f, cs)


def normalize_parseval(raw_gamma, group: FiniteGroup) -> Kernel:
    """Divide each column r by sqrt(sum_j |gamma_j(r)|^2); columns that vanish
    entirely fall back to pure low-pass (gamma_0(r) = 1, wavelet rows 0)."""
    g = np.array(raw_gamma, dtype=complex)
    sums = np.sum(np.abs(g) ** 2, axis=0)
    dead = sums <= 0.0
    safe = np.where(dead, 1.0, sums)
    g = g / np.sqrt(safe)
    if np.any(dead):
        g[:, dead] = 0.0
        g[0, dead] = 1.0
    return Kernel(group, g)


def kernel_from_prototype_signals(prototypes: list[Signal],
                                  group: FiniteGroup) -> Kernel:
    """Expand sampled prototype signals in characters and Parseval-normalize.

    Row j of the raw kernel is ``gamma~_j(r) = <prototype_j, chi^r>``.
    """
    if not prototypes:
        raise InvalidParameterError("need at least the low-pass prototype")
    chi_elem = group.table.chi[:, group.class_of]  # (k, |G|)
    raw = np.stack([
        np.conj(chi_elem) @ p.values / group.order for p in prototypes
    ])
    if np.all(np.abs(raw) < 1e-300):
        raise InvalidParameterError("all prototypes expand to zero")
    return normalize_parseval(raw, group)


# ---------------------------------------------------------------------------
# frame bounds / reconstruction
# ---------------------------------------------------------------------------

def frame_bounds(kernel: Kernel) -> tuple[float, float]:
    """(A, B) = (min_r C(r), max_r C(r)): the tight Calderon frame constants."""
    sums = kernel.calderon_sums()
    return float(np.min(sums)), float(np.max(sums))


def empirical_frame_check(kernel: Kernel, signals: list[Signal],
                          rel_slack: float = 1e-9) -> float:
    """Verify A ||f||^2 <= sum_j ||psi_j * f||^2 <= B ||f||^2 on each signal;
    returns the worst relative violation (<= 0 when all hold)."""
    a, b = frame_bounds(kernel)
    worst = -np.inf
    for f in signals:
        coeffs = analyze(kernel, f)
        total = float(np.sum(np.abs(coeffs) ** 2) / kernel.group.order)
        nf2 = norm(f) ** 2
        viol = max(a * nf2 - total, total - b * nf2) / max(nf2, 1e-300)
        worst = max(worst, viol)
        if viol > rel_slack:
            raise NumericalIntegrityError(
                f"frame inequality violated by relative {viol:.3e}")
    return worst


def reconstruct(kernel: Kernel, coefficients: np.ndarray,
                calderon_tol: float = 1e-6) -> Signal:
    """Invert `analyze`: f = sum_j (psi_j * f) * psi_j^dagger, valid when the
    Calderon sums are all 1."""
    sums = kernel.calderon_sums()
    bad = np.nonzero(np.abs(sums - 1.0) > calderon_tol)[0]
    if len(bad):
        raise PreconditionError(
            f"Calderon condition violated at irreducible(s) {bad.tolist()}: "
            f"sums {sums[bad].tolist()}")
    coefficients = np.asarray(coefficients, dtype=complex)
    if coefficients.shape != (kernel.J + 1, kernel.group.order):
        raise DomainError(
            f"coefficients must be (J+1, |G|) = "
            f"({kernel.J + 1}, {kernel.group.order})")
    group = kernel.group
    table = group.table
    out = np.zeros(group.order, dtype=complex)
    for j in range(kernel.J + 1):
        w = Signal(group, coefficients[j])
        dagger_cls = (table.degrees * np.conj(kernel.gamma[j])) @ table.chi
        out = out + apply_class_function(dagger_cls, w).values
    return Signal(group, out, copy=False)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def admissibility(kernel: Kernel) -> AdmissibilityReport:
    if not kernel.is_parseval():
        raise PreconditionError("admissibility is defined for Parseval kernels")
    low = np.abs(kernel.gamma[0]) ** 2
    beta = float(np.min(low))
    return AdmissibilityReport(beta=beta, alpha=1.0 - beta,
                               gamma0_max=float(np.max(low)))


def tensor_multiplicities(group: FiniteGroup, subset,
                          tol: float = 1e-6) -> np.ndarray:
    """Multiplicities n_S(r) of each irreducible in rho^S (x) (rho^S)^dagger,
    computed as the class-weighted inner product of |chi^{rho_S}|^2 with
    chi^r.  Values are provably integers; drift beyond `tol` raises."""
    s = sorted(set(int(r) for r in subset))
    if not s:
        raise DomainError("irrep subset must be nonempty")
    if any(not 0 <= r < group.k for r in s):
        raise DomainError("irrep index out of range")
    table = group.table
    chi_s = (table.degrees[s, None] * table.chi[s]).sum(axis=0)  # on classes
    theta = np.abs(chi_s) ** 2
    weights = group.class_sizes / group.order
    raw = (weights * theta) @ np.conj(table.chi.T)  # (k,)
    ints = np.round(raw.real)
    resid = np.max(np.abs(raw - ints))
    if resid > tol:
        raise NumericalIntegrityError(
            f"tensor multiplicities not integral (residual {resid:.3e})")
    return ints.astype(np.int64)


def tensor_support(group: FiniteGroup, subset) -> tuple[int, ...]:
    """T(S): the irreducibles appearing in rho^S (x) (rho^S)^dagger."""
    mult = tensor_multiplicities(group, subset)
    return tuple(int(r) for r in np.nonzero(mult)[0])


def relaxed_admissibility(kernel: Kernel, subset) -> AdmissibilityReport:
    if not kernel.is_parseval():
        raise PreconditionError("relaxed admissibility needs a Parseval kernel")
    group = kernel.group
    s = tuple(sorted(set(int(r) for r in subset)))
    if not s:
        raise DomainError("irrep subset must be nonempty")
    support = tensor_support(group, s)
    degree = int(np.sum(group.table.degrees[list(s)] ** 2))
    low = np.abs(kernel.gamma[0]) ** 2
    beta_s = degree / group.order * float(np.min(low[list(support)]))
    plain = admissibility(kernel)
    relaxed = RelaxedReport(subset=s, support=support, degree=degree,
                            beta=beta_s, alpha=1.0 - beta_s)
    return AdmissibilityReport(beta=plain.beta, alpha=plain.alpha,
                               gamma0_max=plain.gamma0_max, relaxed=relaxed)


def positivity_bound_check(f: Signal, subset,
                     tol: float = TOL) -> tuple[float, float, bool]:
    """For nonnegative f: sum of isotypic energies over T(S) must dominate
    (deg(S)/|G|) ||f||^2.  Returns (lhs, rhs, holds)."""
    vals = f.values
    if np.max(np.abs(vals.imag)) > tol or np.min(vals.real) < -tol:
        raise PreconditionError("signal must be real and nonnegative")
    group = f.group
    s = sorted(set(int(r) for r in subset))
    support = tensor_support(group, s)
    degree = int(np.sum(group.table.degrees[s] ** 2))
    cs = class_sums(f)
    table = group.table
    lhs = 0.0
    for r in support:
        proj = (table.degrees[r] * table.chi[r]) @ cs / group.order
        lhs += float(np.sum(np.abs(proj) ** 2) / group.order)
    rhs = degree / group.order * norm(f) ** 2
    return lhs, rhs, lhs >= rhs - tol


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def kernel_to_csv(kernel: Kernel) -> str:
    out = io.StringIO()
    out.write(f"J,{kernel.J},k,{kernel.group.k},group,{kernel.group.descriptor}\n")
    for j in range(kernel.J + 1):
        parts = []
        for v in kernel.gamma[j]:
            parts.append(f"{v.real:.17g}")
            parts.append(f"{v.imag:.17g}")
        out.write(",".join(parts) + "\n")
    return out.getvalue()


def kernel_from_csv(text: str, group: FiniteGroup | None = None) -> Kernel:
    lines = [line for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty kernel file")
    head = lines[0].split(",")
    if len(head) < 6 or head[0] != "J" or head[2] != "k" or head[4] != "group":
        raise FormatError("kernel CSV header must be 'J,<J>,k,<k>,group,<desc>'")
    j_count = int(head[1])
    k = int(head[3])
    desc = ",".join(head[5:])
    if group is None:
        group = group_from_descriptor(desc)
    if group.k != k:
        raise FormatError(f"kernel k={k} does not match group k={group.k}")
    if len(lines) != j_count + 2:
        raise FormatError(f"expected {j_count + 1} kernel rows, got {len(lines) - 1}")
    gamma = np.zeros((j_count + 1, k), dtype=complex)
    for j, line in enumerate(lines[1:]):
        nums = [float(tok) for tok in line.split(",")]
        if len(nums) != 2 * k:
            raise FormatError(f"kernel row {j} has {len(nums)} values, need {2 * k}")
        gamma[j] = np.array(nums[0::2]) + 1j * np.array(nums[1::2])
    return Kernel(group, gamma)


def random_parseval_kernel(group: FiniteGroup, J: int,
                           rng: np.random.Generator,
                           real: bool = False) -> Kernel:
    """A random kernel normalized to satisfy the Parseval condition."""
    shape = (J + 1, group.k)
    raw = rng.standard_normal(shape)
    if not real:
        raw = raw + 1j * rng.standard_normal(shape)
    return normalize_parseval(raw, group)
