"""Dataset ingestion: MNIST images, audio clips mapped onto the affine group
through a Morlet wavelet transform, and symmetric-group signal generators
(permutation-distance functions and random translation orbits).
"""

from __future__ import annotations

import struct
import wave
from dataclasses import dataclass

import numpy as np
from scipy.signal import resample_poly

from .errors import (DomainError, FormatError, InvalidParameterError,
                     PreconditionError)
from .groups import FiniteGroup
from .signals import Signal

TARGET_RATE = 16_000
CLIP_SECONDS = 2.0
CLIP_SAMPLES = int(TARGET_RATE * CLIP_SECONDS)  # T = 32000
NORM_EPS = 1e-6
MORLET_B = 3.5
MORLET_C = 1.5


# ---------------------------------------------------------------------------
# MNIST IDX files
# ---------------------------------------------------------------------------

IDX_IMAGE_MAGIC = 2051
IDX_LABEL_MAGIC = 2049


def _read_exact(fh, n: int, offset: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(
            f"file truncated at byte offset {offset + len(data)}, "
            f"expected {n} more bytes")
    return data


def load_mnist(image_path: str, label_path: str,
               count: int | None = None) -> list[tuple[Signal, int]]:
    """Parse big-endian IDX image/label files into signals on a group of
    order 784 (a 28x28 grid), pixels mapped from [0, 255] to [-1, 1]."""
    from .groups import build_cyclic, build_product
    grid = build_product(build_cyclic(28), build_cyclic(28))
    images, labels = load_mnist_arrays(image_path, label_path, count)
    return [(Signal(grid, img.reshape(-1).astype(complex), copy=False),
             int(lab)) for img, lab in zip(images, labels)]


def load_mnist_arrays(image_path: str, label_path: str,
                      count: int | None = None
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Raw form of :func:`load_mnist`: (n, rows, cols) floats in [-1, 1]
    and the (n,) integer labels."""
    with open(image_path, "rb") as fh:
        magic, n, rows, cols = struct.unpack(">iiii", _read_exact(fh, 16, 0))
        if magic != IDX_IMAGE_MAGIC:
            raise FormatError(
                f"bad image magic {magic} at byte offset 0, "
                f"expected {IDX_IMAGE_MAGIC}")
        take = n if count is None else min(count, n)
        raw = _read_exact(fh, take * rows * cols, 16)
    with open(label_path, "rb") as fh:
        magic, n_lab = struct.unpack(">ii", _read_exact(fh, 8, 0))
        if magic != IDX_LABEL_MAGIC:
            raise FormatError(
                f"bad label magic {magic} at byte offset 0, "
                f"expected {IDX_LABEL_MAGIC}")
        if n_lab != n:
            raise FormatError(
                f"label count {n_lab} != image count {n} (byte offset 4)")
        labels = np.frombuffer(_read_exact(fh, take, 8), dtype=np.uint8)
    pixels = np.frombuffer(raw, dtype=np.uint8).reshape(take, rows, cols)
    return pixels / 127.5 - 1.0, labels.astype(int)


def save_mnist_arrays(images: np.ndarray, labels: np.ndarray,
                      image_path: str, label_path: str):
    """Write the IDX pair back out; inverse of :func:`load_mnist_arrays`."""
    imgs = np.asarray(images)
    raw = np.round((imgs + 1.0) * 127.5).astype(np.uint8)
    n, rows, cols = raw.shape
    with open(image_path, "wb") as fh:
        fh.write(struct.pack(">iiii", IDX_IMAGE_MAGIC, n, rows, cols))
        fh.write(raw.tobytes())
    with open(label_path, "wb") as fh:
        fh.write(struct.pack(">ii", IDX_LABEL_MAGIC, n))
        fh.write(np.asarray(labels, dtype=np.uint8).tobytes())


# ---------------------------------------------------------------------------
# audio
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AudioClip:
    """Mono clip resampled to 16 kHz, exactly 2 s long, values in
    [-1/2, 1/2]."""

    samples: np.ndarray  # (CLIP_SAMPLES,) float
    rate: int = TARGET_RATE


def normalize_amplitude(x: np.ndarray) -> np.ndarray:
    """(x - min) / (max - min + eps) - 1/2, mapping any clip into
    [-1/2, 1/2]; an all-constant clip maps to -1/2."""
    x = np.asarray(x, dtype=float)
    lo = x.min()
    return (x - lo) / (x.max() - lo + NORM_EPS) - 0.5


def preprocess_samples(samples: np.ndarray, rate: int) -> AudioClip:
    """Resample to 16 kHz (polyphase filter, Kaiser beta 8.6 window),
    truncate or zero-pad to 2 s, then amplitude-normalize."""
    x = np.asarray(samples, dtype=float)
    if rate != TARGET_RATE:
        g = np.gcd(int(rate), TARGET_RATE)
        x = resample_poly(x, TARGET_RATE // g, int(rate) // g,
                          window=("kaiser", 8.6))
    if len(x) >= CLIP_SAMPLES:
        x = x[:CLIP_SAMPLES]
    else:
        x = np.pad(x, (0, CLIP_SAMPLES - len(x)))
    return AudioClip(samples=normalize_amplitude(x))


def load_wav_and_preprocess(path: str) -> AudioClip:
    """Read a 16-bit PCM WAV (stereo averaged to mono) and preprocess it."""
    with wave.open(path, "rb") as wav:
        if wav.getcomptype() != "NONE":
            raise FormatError(f"compressed WAV not supported: {path}")
        if wav.getsampwidth() != 2:
            raise FormatError(
                f"only 16-bit PCM supported, got sample width "
                f"{wav.getsampwidth()} in {path}")
        rate = wav.getframerate()
        n_frames = wav.getnframes()
        raw = wav.readframes(n_frames)
        data = np.frombuffer(raw, dtype="<i2").astype(float) / 32768.0
        channels = wav.getnchannels()
    if channels > 1:
        data = data.reshape(-1, channels).mean(axis=1)
    return preprocess_samples(data, rate)


def morlet_wavelet(t: np.ndarray, b: float = MORLET_B,
                   c: float = MORLET_C) -> np.ndarray:
    """(pi*b)^(-1/2) exp(-t^2/b) exp(2*pi*i*c*t)."""
    t = np.asarray(t, dtype=float)
    return (np.pi * b) ** -0.5 * np.exp(-t ** 2 / b) * np.exp(2j * np.pi * c * t)


def morlet_cwt_to_affine(clip: AudioClip, group: FiniteGroup,
                         b: float = MORLET_B,
                         c: float = MORLET_C) -> Signal:
    """Signal on Aff(F_p) from the p-downsampled Morlet wavelet transform.

    The element indexed (a, b') carries
    ``W f(a*step, b'*step) = (2/T) sum_t f(t) (1/sqrt(scale)) conj(Psi((t-shift)/scale))``
    with step = floor(T/p), so scales run over a*step for a = 1..p-1 and
    shifts over b'*step for b' = 0..p-1.
    """
    p = group.k  # the affine group over F_p has exactly p classes
    if group.order != p * (p - 1):
        raise DomainError(f"group {group.name} is not an affine group")
    f = clip.samples
    big_t = len(f)
    if big_t < p:
        raise InvalidParameterError(f"clip length {big_t} shorter than p={p}")
    step = big_t // p
    t = np.arange(big_t, dtype=float)
    shifts = np.arange(p, dtype=float) * step  # (p,)
    vals = np.empty(group.order, dtype=complex)
    for a in range(1, p):
        scale = a * step
        arg = (t[None, :] - shifts[:, None]) / scale  # (p, T)
        weights = np.conj(morlet_wavelet(arg, b, c)) / np.sqrt(scale)
        vals[(a - 1) * p:a * p] = (2.0 / big_t) * (weights @ f)
    return Signal(group, vals, copy=False)


# ---------------------------------------------------------------------------
# permutation distances
# ---------------------------------------------------------------------------

DISTANCE_NAMES = ("hamming", "cayley", "l2", "linf", "lee", "kendall", "ulam")


def _zero_based(pi: tuple[int, ...]) -> tuple[int, ...]:
    """Accept one-line notation on 0..n-1 or 1..n; return the 0-based form."""
    return tuple(v - 1 for v in pi) if 0 not in pi else tuple(pi)


def _compose_inverse(pi: tuple[int, ...], tau: tuple[int, ...]) -> tuple[int, ...]:
    """sigma = tau o pi^{-1}, all in 0-based one-line notation."""
    inv = [0] * len(pi)
    for i, v in enumerate(pi):
        inv[v] = i
    return tuple(tau[inv[v]] for v in range(len(pi)))


def _cycle_count(sigma: tuple[int, ...]) -> int:
    n = len(sigma)
    seen = [False] * n
    cycles = 0
    for i in range(n):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
    return cycles


def _inversions(sigma: tuple[int, ...]) -> int:
    return sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma))
               if sigma[i] > sigma[j])


def _lis_length(sigma: tuple[int, ...]) -> int:
    """Patience sorting: length of the longest increasing subsequence."""
    import bisect
    piles: list[int] = []
    for v in sigma:
        pos = bisect.bisect_left(piles, v)
        if pos == len(piles):
            piles.append(v)
        else:
            piles[pos] = v
    return len(piles)


def permutation_distance(metric: str, pi: tuple[int, ...],
                         tau: tuple[int, ...]) -> float:
    """One of the seven standard distances between permutations in one-line
    notation; the relative ones go through sigma = tau o pi^{-1}."""
    if metric not in DISTANCE_NAMES:
        raise DomainError(f"unknown metric {metric!r}; "
                          f"choose from {DISTANCE_NAMES}")
    pi = _zero_based(pi)
    tau = _zero_based(tau)
    n = len(pi)
    if metric == "hamming":
        return float(sum(a != b for a, b in zip(pi, tau)))
    if metric == "l2":
        return float(np.sqrt(sum((a - b) ** 2 for a, b in zip(pi, tau))))
    if metric == "linf":
        return float(max(abs(a - b) for a, b in zip(pi, tau)))
    if metric == "lee":
        return float(sum(min(abs(a - b), n - abs(a - b))
                         for a, b in zip(pi, tau)))
    sigma = _compose_inverse(pi, tau)
    if metric == "cayley":
        return float(n - _cycle_count(sigma))
    if metric == "kendall":
        return float(_inversions(sigma))
    return float(n - _lis_length(sigma))  # ulam


def distance_matrix(group: FiniteGroup, metric: str) -> np.ndarray:
    """D[i, j] = d(perm_i, perm_j) over all elements of a symmetric group."""
    perms = getattr(group, "perms", None)
    if perms is None:
        raise DomainError("distance signals need a symmetric group")
    n = group.order
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = permutation_distance(metric, perms[i],
                                                     perms[j])
    return d


def distance_signals(group: FiniteGroup, metric: str) -> list[Signal]:
    """One signal per permutation pi: tau -> d(pi, tau)."""
    d = distance_matrix(group, metric)
    return [Signal(group, row.astype(complex), copy=False) for row in d]


def normalized_identity_distance(group: FiniteGroup, metric: str) -> Signal:
    """d(identity, .) scaled by its maximum, the canonical representative
    used to build distance kernels."""
    perms = getattr(group, "perms", None)
    if perms is None:
        raise DomainError("distance signals need a symmetric group")
    ident = perms[group.identity]
    vals = np.array([permutation_distance(metric, ident, tau)
                     for tau in perms])
    peak = vals.max()
    if peak == 0.0:
        raise PreconditionError("degenerate metric: all distances zero")
    return Signal(group, (vals / peak).astype(complex), copy=False)


# ---------------------------------------------------------------------------
# random translation orbits
# ---------------------------------------------------------------------------

def random_orbit_signals(group: FiniteGroup, n_classes: int,
                         seed: int) -> tuple[np.ndarray, np.ndarray]:
    """n_classes random base functions with values uniform in [-1/2, 1/2];
    each class is the full left-translation orbit of its base function.
    Returns the (n_classes * |G|, |G|) value matrix and the labels."""
    if n_classes < 1:
        raise InvalidParameterError("need at least one class")
    rng = np.random.default_rng(seed)
    order = group.order
    values = np.empty((n_classes * order, order))
    labels = np.empty(n_classes * order, dtype=int)
    left_action = group.mul[group.inv]  # row tau: x -> tau^{-1} x
    for i in range(n_classes):
        base = rng.uniform(-0.5, 0.5, order)
        values[i * order:(i + 1) * order] = base[left_action]
        labels[i * order:(i + 1) * order] = i
    return values, labels
