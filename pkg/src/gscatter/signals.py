"""Complex-valued signals on a finite group with the normalized inner product.

A :class:`Signal` is a complex vector of length |G|; the inner product carries
the 1/|G| weight, so constants have norm equal to their modulus.  Convolution
is the direct O(|G|^2) double sum over the precomputed group tables.

The per-irreducible energy decomposition is matrix-free: the projection onto
the isotypic component of irrep r is convolution with ``d_r * chi^r``, which
is what :func:`isotypic_project` and :func:`spectral_energies` use.
"""

from __future__ import annotations

import io
import struct

import numpy as np

from .errors import DomainError, FormatError, InvalidParameterError
from .groups import FiniteGroup


class Signal:
    """A function G -> C stored as a dense complex array."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values, *, copy: bool = True):
        vals = np.array(values, dtype=complex,
                        copy=True if copy else None).reshape(-1)
        if len(vals) != group.order:
            raise DomainError(
                f"signal length {len(vals)} != group order {group.order}")
        if not np.all(np.isfinite(vals.view(float))):
            raise InvalidParameterError("signal contains NaN or Inf")
        vals.setflags(write=False)
        self.group = group
        self.values = vals

    def __add__(self, other):
        _same_group(self, other)
        return Signal(self.group, self.values + other.values, copy=False)

    def __sub__(self, other):
        _same_group(self, other)
        return Signal(self.group, self.values - other.values, copy=False)

    def __mul__(self, scalar):
        return Signal(self.group, self.values * complex(scalar), copy=False)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Signal(on {self.group.name}, norm={norm(self):.6g})"


def _same_group(f: Signal, g: Signal):
    if f.group is not g.group:
        raise DomainError("signals live on different groups")


def constant(group: FiniteGroup, value=1.0) -> Signal:
    return Signal(group, np.full(group.order, complex(value)), copy=False)


def delta(group: FiniteGroup, x: int | None = None) -> Signal:
    """Normalized point mass |G| * indicator(x): the convolution identity."""
    if x is None:
        x = group.identity
    vals = np.zeros(group.order, dtype=complex)
    vals[x] = group.order
    return Signal(group, vals, copy=False)


def random_signal(group: FiniteGroup, rng: np.random.Generator,
                  complex_valued: bool = True) -> Signal:
    vals = rng.standard_normal(group.order)
    if complex_valued:
        vals = vals + 1j * rng.standard_normal(group.order)
    return Signal(group, vals, copy=False)


def inner(f: Signal, g: Signal) -> complex:
    """(1/|G|) sum_x f(x) conj(g(x))."""
    _same_group(f, g)
    return complex(np.vdot(g.values, f.values) / f.group.order)


def norm(f: Signal) -> float:
    return float(np.linalg.norm(f.values)) / f.group.order ** 0.5


def convolve(f: Signal, g: Signal) -> Signal:
    """(f * g)(x) = (1/|G|) sum_y f(y) g(y^{-1} x)."""
    _same_group(f, g)
    shifted = g.values[f.group.left_inv_index()]  # row y: g(y^{-1} x)
    return Signal(f.group, f.values @ shifted / f.group.order, copy=False)


def translate_left(f: Signal, h: int) -> Signal:
    """(L_h f)(x) = f(h^{-1} x)."""
    _check_element(f.group, h)
    return Signal(f.group, f.values[f.group.mul[f.group.inv[h]]], copy=False)


def translate_right(f: Signal, h: int) -> Signal:
    """(R_h f)(x) = f(x h)."""
    _check_element(f.group, h)
    return Signal(f.group, f.values[f.group.mul[:, h]], copy=False)


def _check_element(group: FiniteGroup, h: int):
    if not 0 <= h < group.order:
        raise DomainError(f"element index {h} out of range 0..{group.order - 1}")


def involute(f: Signal) -> Signal:
    """f^dagger(x) = conj(f(x^{-1}))."""
    return Signal(f.group, np.conj(f.values[f.group.inv]), copy=False)


def modulus(f: Signal) -> Signal:
    return Signal(f.group, np.abs(f.values).astype(complex), copy=False)


# ---------------------------------------------------------------------------
# class sums: the workhorse for convolution against class functions
# ---------------------------------------------------------------------------

def class_sums(f: Signal) -> np.ndarray:
    """(k, |G|) array ``CS[c, x] = sum_{y in class c} f(y^{-1} x)``.

    Any convolution with a class function psi reduces to a k-term combination
    of these rows: ``(psi * f)(x) = (1/|G|) sum_c psi_c CS[c, x]``.
    """
    group = f.group
    shifted = f.values[group.left_inv_index()]  # row y: f(y^{-1} x)
    return group.class_indicator() @ shifted


def apply_class_function(class_values: np.ndarray, f: Signal,
                         cs: np.ndarray | None = None) -> Signal:
    """Convolve f with the class function whose value on class c is
    ``class_values[c]``; reuses precomputed class sums when given."""
    if cs is None:
        cs = class_sums(f)
    vals = (np.asarray(class_values, dtype=complex) @ cs) / f.group.order
    return Signal(f.group, vals, copy=False)


def isotypic_project(f: Signal, r: int, cs: np.ndarray | None = None) -> Signal:
    """P_r f = (d_r chi^r) * f, the component of f in the r-th isotypic block."""
    group = f.group
    if not 0 <= r < group.k:
        raise DomainError(f"irreducible index {r} out of range 0..{group.k - 1}")
    cls_vals = group.table.degrees[r] * group.table.chi[r]
    return apply_class_function(cls_vals, f, cs)


def spectral_energies(f: Signal) -> np.ndarray:
    """Per-irreducible energies (||P_1 f||^2, ..., ||P_k f||^2); they sum to
    ||f||^2 by Plancherel."""
    group = f.group
    cs = class_sums(f)
    cls_vals = group.table.degrees[:, None] * group.table.chi  # (k, k)
    projections = (cls_vals @ cs) / group.order  # (k, |G|)
    return np.sum(np.abs(projections) ** 2, axis=1) / group.order


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def signal_to_csv(f: Signal) -> str:
    lines = ["index,re,im"]
    for i, v in enumerate(f.values):
        lines.append(f"{i},{v.real:.17g},{v.imag:.17g}")
    return "\n".join(lines) + "\n"


def signal_from_csv(group: FiniteGroup, text: str) -> Signal:
    rows = [line for line in text.strip().splitlines() if line]
    if not rows or rows[0].strip().lower() != "index,re,im":
        raise FormatError("signal CSV must start with header 'index,re,im'")
    vals = np.zeros(group.order, dtype=complex)
    seen = np.zeros(group.order, dtype=bool)
    for line in rows[1:]:
        try:
            idx_s, re_s, im_s = line.split(",")
            idx = int(idx_s)
            vals[idx] = float(re_s) + 1j * float(im_s)
            seen[idx] = True
        except (ValueError, IndexError) as exc:
            raise FormatError(f"bad signal CSV row {line!r}") from exc
    if not np.all(seen):
        missing = int(np.argmin(seen))
        raise FormatError(f"signal CSV missing index {missing} "
                          f"(expected {group.order} rows)")
    return Signal(group, vals, copy=False)


_MAGIC = b"GSIG"


def signal_to_bytes(f: Signal) -> bytes:
    """Compact record: magic, little-endian u64 length, then (re, im) f64 pairs."""
    buf = io.BytesIO()
    buf.write(_MAGIC)
    buf.write(struct.pack("<Q", f.group.order))
    pairs = np.empty(2 * f.group.order)
    pairs[0::2] = f.values.real
    pairs[1::2] = f.values.imag
    buf.write(pairs.astype("<f8").tobytes())
    return buf.getvalue()


def signal_from_bytes(group: FiniteGroup, data: bytes) -> Signal:
    if data[:4] != _MAGIC:
        raise FormatError("bad signal record magic (offset 0)")
    (n,) = struct.unpack_from("<Q", data, 4)
    if n != group.order:
        raise FormatError(f"record length {n} != group order {group.order}")
    body = np.frombuffer(data, dtype="<f8", offset=12, count=2 * n)
    return Signal(group, body[0::2] + 1j * body[1::2])
