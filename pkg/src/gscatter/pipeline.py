"""Feature extraction and classification on top of the scattering transform.

Feature vectors are flat real arrays: for each path, in breadth-first order,
the real parts then the imaginary parts of the windowed output over all group
elements.  Dimensionality reduction is a deterministic PCA (dense eigensolver
on whichever of the covariance or Gram matrix is smaller) and classification
is a one-vs-all linear SVM trained by seeded hinge-loss subgradient descent.
"""

from __future__ import annotations

import io
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, InvalidParameterError
from .scattering import Path, ScatteringOutput, paths_up_to


@dataclass
class FeatureMatrix:
    """Row-major real feature matrix with labels and the path manifest."""

    X: np.ndarray                 # (n_samples, n_features) float64
    labels: np.ndarray            # (n_samples,) int
    manifest: list[Path]

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.X.ndim != 2:
            raise DomainError("feature matrix must be 2-dimensional")
        if len(self.labels) != len(self.X):
            raise DomainError("labels and rows disagree in length")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def featurize(outputs: list[ScatteringOutput],
              labels: list[int] | np.ndarray) -> FeatureMatrix:
    """Flatten scattering outputs into rows: per path, real parts over |G|
    elements followed by imaginary parts."""
    if not outputs:
        raise DomainError("no scattering outputs given")
    manifest = outputs[0].paths
    rows = []
    for out in outputs:
        if out.paths != manifest:
            raise DomainError("scattering outputs have mismatched path sets")
        parts = []
        for p in manifest:
            v = out.features[p].values
            parts.append(v.real)
            parts.append(v.imag)
        rows.append(np.concatenate(parts))
    return FeatureMatrix(np.array(rows), np.asarray(labels, dtype=int),
                         manifest)


def featurize_tensor(features: np.ndarray, labels, J: int,
                     depth: int) -> FeatureMatrix:
    """Same flattening for the batched (n, n_paths, |G|) scattering tensor."""
    feats = np.asarray(features)
    n, n_paths, order = feats.shape
    manifest = paths_up_to(J, depth)
    if len(manifest) != n_paths:
        raise DomainError(
            f"tensor has {n_paths} paths but depth {depth}, J {J} "
            f"gives {len(manifest)}")
    X = np.concatenate([feats.real, feats.imag], axis=2).reshape(n, -1)
    return FeatureMatrix(X, np.asarray(labels, dtype=int), manifest)


def energy_featurize_tensor(features: np.ndarray, labels, group, J: int,
                            depth: int) -> FeatureMatrix:
    """Translation-insensitive features: per path, the energies of the
    windowed output in each isotypic component (n_features = n_paths * k).

    Translations of the input permute each path output, so these energies
    are exactly invariant under both left and right translation.
    """
    feats = np.asarray(features)
    n, n_paths, order = feats.shape
    manifest = paths_up_to(J, depth)
    if len(manifest) != n_paths or order != group.order:
        raise DomainError("tensor shape does not match (group, J, depth)")
    flat = feats.reshape(n * n_paths, order)
    table = group.table
    conj_idx = group.conj_class_index()
    cols = []
    for r in range(group.k):
        op = (table.degrees[r] * table.chi[r])[conj_idx] / order
        proj = flat @ op.T
        cols.append(np.sum(np.abs(proj) ** 2, axis=1) / order)
    X = np.stack(cols, axis=1).reshape(n, n_paths * group.k)
    return FeatureMatrix(X, np.asarray(labels, dtype=int), manifest)


# ---------------------------------------------------------------------------
# PCA
# ---------------------------------------------------------------------------

@dataclass
class PCABasis:
    mean: np.ndarray        # (n_features,)
    components: np.ndarray  # (d, n_features), orthonormal rows

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) @ self.components.T


def pca_fit_transform(fm: FeatureMatrix, d: int) -> tuple[FeatureMatrix, PCABasis]:
    """Center and project onto the top-d principal directions.

    Deterministic: dense symmetric eigensolve of the covariance matrix, or of
    the Gram matrix when there are fewer samples than features; component
    signs fixed so the largest-magnitude entry of each component is positive.
    """
    X = fm.X
    n, f = X.shape
    cap = min(n, f)
    if d > cap:
        warnings.warn(f"PCA dimension {d} clipped to {cap}")
        d = cap
    if d < 1:
        raise InvalidParameterError("PCA dimension must be >= 1")
    mean = X.mean(axis=0)
    Xc = X - mean
    if f <= n:
        cov = (Xc.T @ Xc) / n
        w, v = np.linalg.eigh(cov)
        comps = v[:, ::-1][:, :d].T
    else:
        gram = (Xc @ Xc.T) / n
        w, v = np.linalg.eigh(gram)
        w = w[::-1][:d]
        v = v[:, ::-1][:, :d]
        # lift Gram eigenvectors to feature space and renormalize
        comps = (Xc.T @ v).T
        norms = np.linalg.norm(comps, axis=1)
        norms[norms == 0.0] = 1.0
        comps = comps / norms[:, None]
    # fix signs for reproducibility
    pivot = np.argmax(np.abs(comps), axis=1)
    signs = np.sign(comps[np.arange(len(comps)), pivot])
    signs[signs == 0.0] = 1.0
    comps = comps * signs[:, None]
    basis = PCABasis(mean=mean, components=comps)
    return FeatureMatrix(basis.transform(X), fm.labels, fm.manifest), basis


# ---------------------------------------------------------------------------
# one-vs-all linear SVM
# ---------------------------------------------------------------------------

@dataclass
class LinearModel:
    classes: np.ndarray     # (C,) original label values
    weights: np.ndarray     # (C, n_features)
    biases: np.ndarray      # (C,)
    basis: PCABasis | None = None


def svm_train(fm: FeatureMatrix, c_reg: float = 1.0, epochs: int = 50,
              seed: int = 0, basis: PCABasis | None = None) -> LinearModel:
    """One binary hinge-loss classifier per class, trained by subgradient
    descent with step 1/(lambda*t) and a seeded per-epoch shuffle."""
    X = fm.X
    y = fm.labels
    if not np.all(np.isfinite(X)):
        raise InvalidParameterError("features contain NaN or Inf")
    classes = np.unique(y)
    if len(classes) < 2:
        raise DomainError("need at least two classes to train")
    n, f = X.shape
    lam = 1.0 / (c_reg * n)
    weights = np.zeros((len(classes), f))
    biases = np.zeros(len(classes))
    for ci, cls in enumerate(classes):
        target = np.where(y == cls, 1.0, -1.0)
        rng = np.random.default_rng(np.random.SeedSequence([seed, int(ci)]))
        w = np.zeros(f)
        b = 0.0
        t = 0
        cap = 1.0 / np.sqrt(lam)  # the optimum lies inside this ball
        for _ in range(epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lam * t)
                margin = target[i] * (X[i] @ w + b)
                if margin < 1.0:
                    w = (1.0 - eta * lam) * w + eta * target[i] * X[i]
                    b = b + eta * target[i]
                else:
                    w = (1.0 - eta * lam) * w
                wn = np.linalg.norm(w)
                if wn > cap:
                    w *= cap / wn
        weights[ci] = w
        biases[ci] = b
    return LinearModel(classes=classes, weights=weights, biases=biases,
                       basis=basis)


def svm_decision(model: LinearModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if model.basis is not None:
        X = model.basis.transform(X)
    return X @ model.weights.T + model.biases


def svm_predict(model: LinearModel, X: np.ndarray) -> np.ndarray:
    scores = svm_decision(model, X)
    return model.classes[np.argmax(scores, axis=1)]


def accuracy(model: LinearModel, X: np.ndarray, labels) -> float:
    pred = svm_predict(model, X)
    return float(np.mean(pred == np.asarray(labels)))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_MAGIC = b"GFMX"


def feature_matrix_to_bytes(fm: FeatureMatrix) -> bytes:
    """Binary record: magic, u64 n_samples, u64 n_features, label block
    (little-endian i64), then the row-major f64 matrix."""
    buf = io.BytesIO()
    buf.write(_MAGIC)
    buf.write(struct.pack("<QQ", fm.n_samples, fm.n_features))
    buf.write(fm.labels.astype("<i8").tobytes())
    buf.write(fm.X.astype("<f8").tobytes())
    return buf.getvalue()


def feature_matrix_from_bytes(data: bytes,
                              manifest: list[Path] | None = None) -> FeatureMatrix:
    if data[:4] != _MAGIC:
        raise FormatError("bad feature matrix magic (offset 0)")
    n, f = struct.unpack_from("<QQ", data, 4)
    off = 20
    labels = np.frombuffer(data, dtype="<i8", offset=off, count=n)
    off += 8 * n
    expect = off + 8 * n * f
    if len(data) < expect:
        raise FormatError(f"feature matrix truncated at offset {len(data)}, "
                          f"expected {expect} bytes")
    X = np.frombuffer(data, dtype="<f8", offset=off,
                      count=n * f).reshape(n, f)
    return FeatureMatrix(X.copy(), labels.copy(), manifest or [])


def feature_matrix_to_csv(fm: FeatureMatrix) -> str:
    lines = ["label," + ",".join(f"f{i}" for i in range(fm.n_features))]
    for lab, row in zip(fm.labels, fm.X):
        lines.append(str(int(lab)) + "," +
                     ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def model_to_csv(model: LinearModel) -> str:
    """Weight table: one row per class, bias first."""
    lines = ["class,bias," + ",".join(
        f"w{i}" for i in range(model.weights.shape[1]))]
    for cls, b, w in zip(model.classes, model.biases, model.weights):
        lines.append(f"{int(cls)},{b:.17g}," +
                     ",".join(f"{v:.17g}" for v in w))
    return "\n".join(lines) + "\n"


def model_from_csv(text: str) -> LinearModel:
    rows = [line for line in text.strip().splitlines() if line]
    if not rows or not rows[0].startswith("class,bias,"):
        raise FormatError("model CSV must start with header 'class,bias,...'")
    classes, biases, weights = [], [], []
    for line in rows[1:]:
        parts = line.split(",")
        try:
            classes.append(int(parts[0]))
            biases.append(float(parts[1]))
            weights.append([float(v) for v in parts[2:]])
        except (ValueError, IndexError) as exc:
            raise FormatError(f"bad model CSV row {line!r}") from exc
    return LinearModel(classes=np.array(classes),
                       weights=np.array(weights),
                       biases=np.array(biases))
