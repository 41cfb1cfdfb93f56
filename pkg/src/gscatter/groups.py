"""Finite groups as indexed element sets with exact character tables.

Elements are dense indices ``0..|G|-1`` with precomputed multiplication and
inverse tables, so all group operations are O(1) array lookups.  Each builder
attaches the exact character table of the group.  Conjugacy classes are
numbered ``0..k-1`` with class 0 always the class of the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (CapacityError, DomainError, InvalidParameterError,
                     NumericalIntegrityError)

DEFAULT_MAX_ORDER = 10_000

#: absolute tolerance for complex comparisons throughout the package
TOL = 1e-9


@dataclass(frozen=True)
class CharacterTable:
    """Exact character table: one row per irreducible, one column per class."""

    degrees: np.ndarray  # (k,) int
    chi: np.ndarray      # (k, k) complex, chi[r, c] = value of irrep r on class c

    @property
    def k(self) -> int:
        return len(self.degrees)


class FiniteGroup:
    """An element-indexed finite group with its conjugacy data and characters.

    Immutable after construction; all derived caches are read-only.
    """

    def __init__(self, name, mul, inv, class_of, class_reps, class_labels,
                 table, element_labels=None, descriptor=None):
        self.name = name
        self.mul = np.ascontiguousarray(mul, dtype=np.int32)
        self.inv = np.ascontiguousarray(inv, dtype=np.int32)
        self.order = len(self.inv)
        self.identity = 0
        self.class_of = np.ascontiguousarray(class_of, dtype=np.int32)
        self.class_reps = np.ascontiguousarray(class_reps, dtype=np.int32)
        self.class_sizes = np.bincount(self.class_of, minlength=len(class_reps))
        self.class_labels = list(class_labels)
        self.table = table
        self.element_labels = element_labels
        self.descriptor = descriptor or name
        for a in (self.mul, self.inv, self.class_of, self.class_reps,
                  self.class_sizes):
            a.setflags(write=False)
        self._left_inv_index = None
        self._conj_class_index = None
        self._class_indicator = None

    @property
    def k(self) -> int:
        return len(self.class_reps)

    @property
    def is_abelian(self) -> bool:
        return bool(np.all(self.table.degrees == 1))

    def character_values(self, r: int) -> np.ndarray:
        """Values of character r on every element, as a length-|G| array."""
        if not 0 <= r < self.k:
            raise DomainError(f"irreducible index {r} out of range 0..{self.k - 1}")
        return self.table.chi[r][self.class_of]

    def element_label(self, x: int) -> str:
        if self.element_labels is not None:
            return self.element_labels[x]
        return str(x)

    # -- cached index tables used by the convolution machinery ---------------

    def left_inv_index(self) -> np.ndarray:
        """Matrix ``I[y, x] = y^{-1} x`` (rows of `mul` permuted by `inv`)."""
        if self._left_inv_index is None:
            self._left_inv_index = self.mul[self.inv]
            self._left_inv_index.setflags(write=False)
        return self._left_inv_index

    def conj_class_index(self) -> np.ndarray:
        """Matrix ``C[x, z] = class_of(x z^{-1})``, used to build convolution
        operators of class functions."""
        if self._conj_class_index is None:
            idx = self.class_of[self.mul[:, self.inv]]
            self._conj_class_index = np.ascontiguousarray(idx, dtype=np.int16)
            self._conj_class_index.setflags(write=False)
        return self._conj_class_index

    def class_indicator(self) -> np.ndarray:
        """(k, |G|) 0/1 matrix with row c indicating membership in class c."""
        if self._class_indicator is None:
            K = np.zeros((self.k, self.order))
            K[self.class_of, np.arange(self.order)] = 1.0
            K.setflags(write=False)
            self._class_indicator = K
        return self._class_indicator

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order}, k={self.k})"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_cyclic(n: int) -> FiniteGroup:
    """Z/nZ with characters chi^a(x) = exp(2 pi i a x / n)."""
    if n < 1:
        raise InvalidParameterError(f"cyclic group order must be >= 1, got {n}")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    inv = (-idx) % n
    omega = np.exp(2j * np.pi / n)
    chi = omega ** (idx[:, None] * idx[None, :])
    table = CharacterTable(degrees=np.ones(n, dtype=np.int64), chi=chi)
    return FiniteGroup(
        name=f"Z/{n}", mul=mul, inv=inv,
        class_of=idx, class_reps=idx,
        class_labels=[str(x) for x in range(n)],
        table=table,
        element_labels=[str(x) for x in range(n)],
        descriptor=f"cyclic:{n}",
    )


def build_product(g1: FiniteGroup, g2: FiniteGroup,
                  max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Direct product; element index of (x1, x2) is ``x1 * |G2| + x2``."""
    n1, n2 = g1.order, g2.order
    if n1 * n2 > max_order:
        raise CapacityError(
            f"product order {n1 * n2} exceeds configured maximum {max_order}")
    i1 = np.arange(n1)
    i2 = np.arange(n2)
    # mul[(x1,x2),(y1,y2)] = (x1 y1, x2 y2)
    mul = (g1.mul[np.repeat(i1, n2)][:, np.repeat(i1, n2)] * n2
           + g2.mul[np.tile(i2, n1)][:, np.tile(i2, n1)])
    inv = g1.inv[np.repeat(i1, n2)] * n2 + g2.inv[np.tile(i2, n1)]
    class_of = g1.class_of[np.repeat(i1, n2)] * g2.k + g2.class_of[np.tile(i2, n1)]
    class_reps = (g1.class_reps[np.repeat(np.arange(g1.k), g2.k)] * n2
                  + g2.class_reps[np.tile(np.arange(g2.k), g1.k)])
    labels = [f"({a},{b})" for a in g1.class_labels for b in g2.class_labels]
    degrees = np.outer(g1.table.degrees, g2.table.degrees).reshape(-1)
    chi = np.einsum("ac,bd->abcd", g1.table.chi, g2.table.chi)
    chi = chi.reshape(g1.k * g2.k, g1.k * g2.k)
    table = CharacterTable(degrees=degrees, chi=chi)
    elem_labels = None
    if n1 * n2 <= 2000:
        elem_labels = [f"({g1.element_label(a)},{g2.element_label(b)})"
                       for a in range(n1) for b in range(n2)]
    return FiniteGroup(
        name=f"{g1.name}x{g2.name}", mul=mul, inv=inv,
        class_of=class_of, class_reps=class_reps, class_labels=labels,
        table=table, element_labels=elem_labels,
        descriptor=f"product:{g1.descriptor};{g2.descriptor}",
    )


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, int(p ** 0.5) + 1):
        if p % d == 0:
            return False
    return True


def primitive_root(p: int) -> int:
    """Smallest g >= 2 generating the multiplicative group mod p."""
    factors = set()
    m = p - 1
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise InvalidParameterError(f"no primitive root modulo {p}")  # p not prime


def build_affine(p: int) -> FiniteGroup:
    """Aff(F_p): maps x -> a x + b with a != 0, as pairs indexed (a-1)*p + b.

    Classes, in order: the identity, the translations {(1, b), b != 0}, and
    one class {(g^j, b)} of size p for each power j = 1..p-2 of the smallest
    primitive root g.
    """
    if not _is_prime(p):
        raise InvalidParameterError(f"affine group needs a prime, got {p}")
    n = p * (p - 1)
    a_of = np.arange(n) // p + 1
    b_of = np.arange(n) % p
    # (c,d)*(a,b) = (c a, c b + d): composition of x -> a x + b then x -> c x + d
    ca = (a_of[:, None] * a_of[None, :]) % p
    cb = (a_of[:, None] * b_of[None, :] + b_of[:, None]) % p
    mul = (ca - 1) * p + cb
    a_inv = np.array([pow(int(a), p - 2, p) for a in range(p)], dtype=np.int64)
    ia = a_inv[a_of]
    ib = (-(ia * b_of)) % p
    inv = (ia - 1) * p + ib

    g = primitive_root(p) if p > 2 else 1
    # discrete log base g of each nonzero residue
    dlog = np.zeros(p, dtype=np.int64)
    acc = 1
    for j in range(p - 1):
        dlog[acc] = j
        acc = (acc * g) % p
    class_of = np.empty(n, dtype=np.int64)
    for x in range(n):
        a, b = int(a_of[x]), int(b_of[x])
        if a == 1:
            class_of[x] = 0 if b == 0 else 1
        else:
            class_of[x] = 1 + dlog[a]  # class index 1 + j for a = g^j, j >= 1
    k = p
    class_reps = np.empty(k, dtype=np.int64)
    for c in range(k):
        class_reps[c] = int(np.nonzero(class_of == c)[0][0])
    labels = ["(1,0)", "(1,b)"] + [f"({pow(g, j, p)},*)" for j in range(1, p - 1)]

    degrees = np.concatenate([np.ones(p - 1, dtype=np.int64), [p - 1]])
    chi = np.zeros((k, k), dtype=complex)
    zeta = np.exp(2j * np.pi / (p - 1)) if p > 2 else 1.0
    for r in range(p - 1):
        chi[r, 0] = 1.0
        chi[r, 1] = 1.0
        for j in range(1, p - 1):
            chi[r, 1 + j] = zeta ** (r * j)
    chi[p - 1, 0] = p - 1
    chi[p - 1, 1] = -1.0
    table = CharacterTable(degrees=degrees, chi=chi)
    elem_labels = [f"[{a},{b}]" for a, b in zip(a_of, b_of)]
    return FiniteGroup(
        name=f"Aff(F_{p})", mul=mul, inv=inv,
        class_of=class_of, class_reps=class_reps, class_labels=labels,
        table=table, element_labels=elem_labels,
        descriptor=f"affine:{p}",
    )


# -- symmetric groups -------------------------------------------------------

def _partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n as descending tuples, in ascending lex order."""
    out = []

    def rec(remaining, maxpart, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(maxpart, remaining), 0, -1):
            rec(remaining - part, part, prefix + [part])

    rec(n, n, [])
    out.sort()
    return out


@lru_cache(maxsize=None)
def murnaghan_nakayama(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Exact character value of the irreducible labelled by partition `lam`
    on the conjugacy class of cycle type `mu`, via border-strip removal on
    beta numbers."""
    if sum(lam) == 0:
        return 1
    r = mu[0]
    rest = mu[1:]
    ell = len(lam)
    beta = [lam[i] + ell - 1 - i for i in range(ell)]
    bset = set(beta)
    total = 0
    for i, b in enumerate(beta):
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new_beta = sorted((nb if j == i else beta[j] for j in range(ell)),
                          reverse=True)
        new_lam = tuple(x - (ell - 1 - j) for j, x in enumerate(new_beta))
        new_lam = tuple(x for x in new_lam if x > 0)
        total += (-1) ** height * murnaghan_nakayama(new_lam, rest)
    return total


def cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    """Descending cycle type of a permutation in one-line notation (0-based)."""
    n = len(perm)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parts.append(length)
    return tuple(sorted(parts, reverse=True))


def _partition_label(lam: tuple[int, ...]) -> str:
    runs = []
    for part in sorted(set(lam), reverse=True):
        runs.append(f"{part}^{lam.count(part)}")
    return "[" + " ".join(runs) + "]"


MAX_SYMMETRIC_N = 8


def build_symmetric(n: int) -> FiniteGroup:
    """S_n for 1 <= n <= 8, elements in lexicographic one-line order.

    Character values come from the Murnaghan-Nakayama recursion in exact
    integer arithmetic; rows are sorted by (degree, value vector) so the
    table is reproducible.
    """
    if not 1 <= n <= MAX_SYMMETRIC_N:
        raise CapacityError(
            f"symmetric group supported for 1 <= n <= {MAX_SYMMETRIC_N}, got {n}")
    perms = list(itertools.permutations(range(n)))
    order = len(perms)
    index = {perm: i for i, perm in enumerate(perms)}
    parr = np.array(perms, dtype=np.int64)
    mul = np.empty((order, order), dtype=np.int64)
    inv = np.empty(order, dtype=np.int64)
    for i, sigma in enumerate(perms):
        # (sigma tau)(x) = sigma(tau(x)); row i over all tau, vectorized
        composed = parr[i][parr]
        mul[i] = [index[tuple(row)] for row in composed]
        invp = [0] * n
        for x, y in enumerate(sigma):
            invp[y] = x
        inv[i] = index[tuple(invp)]

    parts = _partitions(n)  # identity type (1,..,1) sorts first
    part_index = {lam: c for c, lam in enumerate(parts)}
    class_of = np.array([part_index[cycle_type(perm)] for perm in perms])
    k = len(parts)
    class_reps = np.empty(k, dtype=np.int64)
    for c in range(k):
        class_reps[c] = int(np.nonzero(class_of == c)[0][0])

    rows = []
    for lam in parts:
        vals = tuple(murnaghan_nakayama(lam, mu) for mu in parts)
        rows.append((vals[0], vals, lam))
    rows.sort(key=lambda t: (t[0], t[1]))
    degrees = np.array([deg for deg, _, _ in rows], dtype=np.int64)
    chi = np.array([vals for _, vals, _ in rows], dtype=complex)
    table = CharacterTable(degrees=degrees, chi=chi)
    g = FiniteGroup(
        name=f"S_{n}", mul=mul, inv=inv,
        class_of=class_of, class_reps=class_reps,
        class_labels=[_partition_label(lam) for lam in parts],
        table=table,
        element_labels=["(" + ",".join(str(x + 1) for x in perm) + ")"
                        for perm in perms],
        descriptor=f"symmetric:{n}",
    )
    g.perms = perms
    g.perm_index = index
    return g


def build_unit_group(p: int) -> FiniteGroup:
    """Multiplicative group (Z_p^*, *) for prime p, elements 1..p-1 indexed
    by value; cyclic of order p-1 with characters chi^k(g^j) = zeta^{kj}."""
    if not _is_prime(p):
        raise InvalidParameterError(f"unit group needs a prime, got {p}")
    n = p - 1
    vals = np.arange(1, p)
    mul = (vals[:, None] * vals[None, :]) % p - 1
    inv = np.array([pow(int(v), p - 2, p) - 1 for v in vals], dtype=np.int64)
    g = primitive_root(p) if p > 2 else 1
    dlog = np.zeros(p, dtype=np.int64)
    acc = 1
    for j in range(n):
        dlog[acc] = j
        acc = (acc * g) % p
    zeta = np.exp(2j * np.pi / n) if n > 0 else 1.0
    chi = zeta ** (np.arange(n)[:, None] * dlog[vals][None, :])
    table = CharacterTable(degrees=np.ones(n, dtype=np.int64), chi=chi)
    return FiniteGroup(
        name=f"Z_{p}^*", mul=mul, inv=inv,
        class_of=np.arange(n), class_reps=np.arange(n),
        class_labels=[str(v) for v in vals],
        table=table,
        element_labels=[str(v) for v in vals],
        descriptor=f"units:{p}",
    )


def group_from_descriptor(desc: str) -> FiniteGroup:
    """Rebuild a built-in group from its serialized descriptor string."""
    kind, _, rest = desc.partition(":")
    if kind == "cyclic":
        return build_cyclic(int(rest))
    if kind == "affine":
        return build_affine(int(rest))
    if kind == "symmetric":
        return build_symmetric(int(rest))
    if kind == "units":
        return build_unit_group(int(rest))
    if kind == "product":
        left, _, right = rest.partition(";")
        return build_product(group_from_descriptor(left),
                             group_from_descriptor(right))
    raise InvalidParameterError(f"unknown group descriptor {desc!r}")


# ---------------------------------------------------------------------------
# Cayley graph spectral check
# ---------------------------------------------------------------------------

def cayley_laplacian_check(group: FiniteGroup, generators,
                           tol: float = TOL) -> list[tuple[int, float]]:
    """Eigenvalues lambda_i = |S| - sum_{s in S} chi^i(s) of the Cayley-graph
    Laplacian of an abelian group, verified against the assembled matrix.

    Returns (character index, eigenvalue) pairs; raises if any residual
    ``||L v_i - lambda_i v_i||_inf`` exceeds `tol`.
    """
    if not group.is_abelian:
        raise DomainError("Cayley spectral formula requires an abelian group")
    gens = sorted(set(int(s) for s in generators))
    if any(not 0 <= s < group.order for s in gens):
        raise DomainError("generator index out of range")
    if sorted(int(group.inv[s]) for s in gens) != gens:
        raise InvalidParameterError("generator set is not closed under inverses")
    # closure under multiplication must reach the whole group
    reached = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(group.mul[s, x])
                if y not in reached:
                    reached.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(reached) != group.order:
        raise InvalidParameterError("generators do not generate the group")

    n = group.order
    lap = np.zeros((n, n))
    np.fill_diagonal(lap, len(gens))
    for s in gens:
        for y in range(n):
            lap[int(group.mul[s, y]), y] -= 1.0

    out = []
    for i in range(group.k):
        vec = group.character_values(i)
        lam = len(gens) - sum(group.table.chi[i, group.class_of[s]] for s in gens)
        residual = np.max(np.abs(lap @ vec - lam * vec))
        if residual > tol:
            raise NumericalIntegrityError(
                f"Cayley eigen residual {residual:.3e} for character {i}")
        out.append((i, float(lam.real)))
    return out
