"""Command-line front end: group inspection, kernel checks, scattering runs,
the invariant verification suite, and the bundled experiments.

Experiment configs are flat ``key=value`` text files; outputs are CSV tables
with matplotlib figures rendered alongside them.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import datasets, learning, pipeline, plots
from .errors import GScatterError
from .frames import (admissibility, analyze, empirical_frame_check,
                     frame_bounds, kernel_from_csv, kernel_to_csv,
                     random_parseval_kernel, reconstruct)
from .groups import FiniteGroup, build_symmetric, group_from_descriptor
from .scattering import (check_approx_invariance, check_energy_preservation,
                         check_energy_split, check_equivariance, scatter,
                         scatter_matrix)
from .signals import Signal, norm, random_signal, signal_from_csv

# ---------------------------------------------------------------------------
# invariant suite
# ---------------------------------------------------------------------------

MAX_SUITE_ORDER = 1000


@dataclass
class SuiteResult:
    name: str
    worst: float
    passed: bool


def run_invariant_suite(group: FiniteGroup, seed: int = 0,
                        trials: int = 5) -> list[SuiteResult]:
    """Exercise every verifiable identity on random kernels and signals.

    Each entry reports the worst observed slack (negative or tiny means the
    identity held with margin).
    """
    if group.order > MAX_SUITE_ORDER:
        raise GScatterError(
            f"invariant suite limited to |G| <= {MAX_SUITE_ORDER}, "
            f"got {group.order}")
    rng = np.random.default_rng(seed)
    results: list[SuiteResult] = []

    def record(name: str, worst: float, tol: float = 1e-9):
        results.append(SuiteResult(name, float(worst), bool(worst <= tol)))

    table = group.table
    weights = group.class_sizes / group.order
    gram = (table.chi * weights) @ np.conj(table.chi.T)
    record("character orthogonality",
           np.max(np.abs(gram - np.eye(group.k))))
    record("degree sum equals group order",
           abs(int(np.sum(table.degrees ** 2)) - group.order))

    depth = 2
    j_count = 3
    worst = {key: 0.0 for key in
             ("tight frame bounds", "frame inequality", "reconstruction",
              "energy split", "non-expansivity", "stability",
              "energy decay tail", "equivariance", "approximate invariance")}
    for _ in range(trials):
        kern = random_parseval_kernel(group, j_count, rng)
        a, b = frame_bounds(kern)
        worst["tight frame bounds"] = max(worst["tight frame bounds"],
                                          abs(a - 1.0), abs(b - 1.0))
        sigs = [random_signal(group, rng) for _ in range(3)]
        worst["frame inequality"] = max(
            worst["frame inequality"], empirical_frame_check(kern, sigs))
        f, f2 = sigs[0], sigs[1]
        rec = reconstruct(kern, analyze(kern, f))
        worst["reconstruction"] = max(
            worst["reconstruction"], norm(rec - f) / max(norm(f), 1e-300))
        for m in range(depth + 1):
            um, um1, sm = check_energy_split(kern, f, m)
            worst["energy split"] = max(
                worst["energy split"], abs(um - um1 - sm) / max(um, 1e-300))
        out = scatter(kern, f, depth)
        worst["non-expansivity"] = max(
            worst["non-expansivity"],
            (out.feature_energy() - norm(f) ** 2) / max(norm(f) ** 2, 1e-300))
        out2 = scatter(kern, f2, depth)
        diff = sum(norm(out.features[p] - out2.features[p]) ** 2
                   for p in out.features)
        worst["stability"] = max(
            worst["stability"],
            (diff - norm(f - f2) ** 2) / max(norm(f - f2) ** 2, 1e-300))
        captured, bound = check_energy_preservation(kern, f, depth)
        tail = norm(f) ** 2 - captured
        worst["energy decay tail"] = max(
            worst["energy decay tail"],
            (tail - bound) / max(norm(f) ** 2, 1e-300))
        if group.order <= 24:
            elements = range(group.order)
        else:
            elements = rng.integers(0, group.order, size=4)
        for g_el in elements:
            worst["equivariance"] = max(
                worst["equivariance"],
                check_equivariance(kern, f, int(g_el), depth))
        g_el = int(rng.integers(0, group.order))
        for lhs, bnd in check_approx_invariance(kern, f, g_el, depth):
            worst["approximate invariance"] = max(
                worst["approximate invariance"],
                (lhs - bnd) / max(norm(f) ** 2, 1e-300))
    for name, value in worst.items():
        record(name, value)
    return results


# ---------------------------------------------------------------------------
# experiment configuration
# ---------------------------------------------------------------------------

def parse_config(text: str) -> dict:
    """Flat key=value lines; '#' starts a comment.  Values are parsed as int,
    then float, then kept as strings."""
    cfg: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise GScatterError(f"bad config line {raw!r}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        for cast in (int, float):
            try:
                cfg[key] = cast(value)
                break
            except ValueError:
                continue
        else:
            cfg[key] = value
    return cfg


def _standardize(train: np.ndarray, test: np.ndarray):
    """Center columns on the training mean and scale by the global spread."""
    mean = train.mean(axis=0)
    scale = train.std()
    if scale == 0.0:
        scale = 1.0
    return (train - mean) / scale, (test - mean) / scale


@dataclass
class ExperimentResult:
    label: str
    correct: int
    total: int
    layer_energies: np.ndarray | None = None

    @property
    def accuracy(self) -> float:
        return self.correct / self.total


def _layer_energy_profile(features: np.ndarray, j_count: int, depth: int,
                          order: int) -> np.ndarray:
    """Mean captured energy per layer from the batched feature tensor."""
    per_path = np.mean(np.sum(np.abs(features) ** 2, axis=2), axis=0) / order
    energies = np.zeros(depth + 1)
    pos = 0
    for m in range(depth + 1):
        width = j_count ** m
        energies[m] = np.sum(per_path[pos:pos + width])
        pos += width
    return energies


def _split_orbit(n_per_class: int, n_classes: int, rng: np.random.Generator,
                 keep_first: bool) -> tuple[np.ndarray, np.ndarray]:
    """Half/half split inside each contiguous class block; `keep_first`
    forces the block's first sample (the canonical representative) into
    the training half."""
    train_idx, test_idx = [], []
    half = n_per_class // 2
    for c in range(n_classes):
        base = c * n_per_class
        idx = np.arange(n_per_class)
        if keep_first:
            rest = rng.permutation(idx[1:])
            train = np.concatenate([[0], rest[:half - 1]])
            test = rest[half - 1:]
        else:
            perm = rng.permutation(idx)
            train, test = perm[:half], perm[half:]
        train_idx.extend(base + np.sort(train))
        test_idx.extend(base + np.sort(test))
    return np.array(train_idx), np.array(test_idx)


def _train_eval(values: np.ndarray, labels: np.ndarray, kernel, depth: int,
                train_idx: np.ndarray, test_idx: np.ndarray, seed: int,
                pca_dim: int = 0, chunk: int = 512, label: str = "",
                feature_mode: str = "energy", c_reg: float = 100.0,
                epochs: int = 200) -> ExperimentResult:
    """Scatter all samples, extract feature rows, optionally PCA, train the
    SVM on the training rows and report test accuracy.

    `feature_mode` picks the row layout: "energy" uses per-path isotypic
    energies (insensitive to translations of the input), "flat" the raw
    real/imaginary concatenation.
    """
    group = kernel.group
    feats = []
    for start in range(0, len(values), chunk):
        feats.append(scatter_matrix(kernel, values[start:start + chunk], depth))
    features = np.concatenate(feats, axis=0)
    energies = _layer_energy_profile(features, kernel.J, depth, group.order)
    if feature_mode == "energy":
        fm = pipeline.energy_featurize_tensor(features, labels, group,
                                              kernel.J, depth)
    else:
        fm = pipeline.featurize_tensor(features, labels, kernel.J, depth)
    x_train, x_test = _standardize(fm.X[train_idx], fm.X[test_idx])
    fm_train = pipeline.FeatureMatrix(x_train, labels[train_idx], fm.manifest)
    basis = None
    if pca_dim:
        fm_train, basis = pipeline.pca_fit_transform(fm_train, pca_dim)
        x_test = basis.transform(x_test)
    model = pipeline.svm_train(fm_train, c_reg=c_reg, epochs=epochs,
                               seed=seed)
    pred = pipeline.svm_predict(model, x_test)
    correct = int(np.sum(pred == labels[test_idx]))
    return ExperimentResult(label=label, correct=correct, total=len(test_idx),
                            layer_energies=energies)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

S3_METRICS = ("hamming", "cayley", "l2", "linf", "kendall", "ulam")


def run_sn_distances(n: int, depths=(0, 1, 2), seed: int = 0,
                     metrics: tuple[str, ...] | None = None
                     ) -> list[ExperimentResult]:
    """Classify permutation-distance functions d_j(pi, .) by metric j.

    On S_3 the Lee metric coincides with Hamming and is dropped; each class
    contributes |G| functions and the canonical representative d_j(id, .)
    always lands in the training half.
    """
    group = build_symmetric(n)
    if metrics is None:
        metrics = S3_METRICS if n == 3 else datasets.DISTANCE_NAMES
    order = group.order
    values = np.empty((len(metrics) * order, order))
    labels = np.empty(len(metrics) * order, dtype=int)
    for m, metric in enumerate(metrics):
        d = datasets.distance_matrix(group, metric)
        # put the identity's row first so _split_orbit can pin it to training
        rows = np.concatenate([[group.identity],
                               np.delete(np.arange(order), group.identity)])
        values[m * order:(m + 1) * order] = d[rows]
        labels[m * order:(m + 1) * order] = m
    reps = [datasets.normalized_identity_distance(group, met)
            for met in metrics]
    kernel = learning.distance_class_kernel(reps, group, scale=True)
    rng = np.random.default_rng(seed)
    train_idx, test_idx = _split_orbit(order, len(metrics), rng,
                                       keep_first=True)
    results = []
    for depth in depths:
        res = _train_eval(values, labels, kernel, depth, train_idx, test_idx,
                          seed, label=f"S_{n} distances depth {depth}")
        results.append(res)
    return results


def run_sn_random(n: int = 6, n_classes: int = 3, depth: int = 2,
                  seed: int = 0) -> ExperimentResult:
    """Classify full left-translation orbits of random base functions; the
    kernel is built from the (max-normalized) base functions themselves."""
    group = build_symmetric(n)
    values, labels = datasets.random_orbit_signals(group, n_classes, seed)
    order = group.order
    # base functions take values in [-1/2, 1/2], so each character
    # coefficient is at most 1/2 in modulus and the Parseval completion of
    # the low-pass row is always possible
    reps = [Signal(group, values[c * order].astype(complex), copy=False)
            for c in range(n_classes)]
    kernel = learning.distance_class_kernel(reps, group, scale=False)
    rng = np.random.default_rng(seed)
    train_idx, test_idx = _split_orbit(order, n_classes, rng, keep_first=False)
    return _train_eval(values, labels, kernel, depth, train_idx, test_idx,
                       seed, label=f"S_{n} random orbits depth {depth}")


def synthetic_audio_clips(n_per_class: int, seed: int
                          ) -> tuple[list[datasets.AudioClip], np.ndarray]:
    """Two spectrally separated synthetic classes of tone mixtures with
    noise, preprocessed like real audio.

    The downsampled wavelet transform analyzes scales a*floor(T/p) for
    a = 1..p-1, i.e. modulation frequencies of roughly 0.8 to 14 Hz at a
    16 kHz rate, so the class bands (0.8-2.5 Hz and 6-13 Hz) are chosen to
    sit in distinct parts of that range."""
    rng = np.random.default_rng(seed)
    t = np.arange(datasets.CLIP_SAMPLES) / datasets.TARGET_RATE
    clips, labels = [], []
    for label, (lo, hi) in enumerate(((0.8, 2.5), (6.0, 13.0))):
        for _ in range(n_per_class):
            x = np.zeros_like(t)
            for _ in range(4):
                freq = rng.uniform(lo, hi)
                phase = rng.uniform(0, 2 * np.pi)
                amp = rng.uniform(0.5, 1.0)
                x += amp * np.sin(2 * np.pi * freq * t + phase)
            x += 0.05 * rng.standard_normal(len(t))
            clips.append(datasets.AudioClip(
                samples=datasets.normalize_amplitude(x)))
            labels.append(label)
    return clips, np.array(labels)


def run_affine_audio(p: int = 19, depth: int = 2, n_per_class: int = 20,
                     seed: int = 0,
                     clips: list[datasets.AudioClip] | None = None,
                     labels: np.ndarray | None = None) -> ExperimentResult:
    """Two-class audio pipeline on Aff(F_p): Morlet features, trained
    two-wavelet kernel, depth-limited scattering, SVM."""
    from .groups import build_affine
    group = build_affine(p)
    if clips is None:
        clips, labels = synthetic_audio_clips(n_per_class, seed)
    signals = [datasets.morlet_cwt_to_affine(c, group) for c in clips]
    values = np.stack([s.values for s in signals])
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(values))
    half = len(values) // 2
    train_idx, test_idx = perm[:half], perm[half:]
    # class-balance guard: both classes must appear in training
    while len(np.unique(labels[train_idx])) < 2:
        perm = rng.permutation(len(values))
        train_idx, test_idx = perm[:half], perm[half:]
    kernel = learning.affine_twoclass_kernel(
        [signals[i] for i in train_idx if labels[i] == labels.min()],
        [signals[i] for i in train_idx if labels[i] == labels.max()],
        group)
    return _train_eval(values, labels, kernel, depth, train_idx, test_idx,
                       seed, label=f"Aff(F_{p}) audio depth {depth}")


def run_mnist(train_images: str, train_labels: str, test_images: str,
              test_labels: str, n_train: int = 4800, n_test: int = 2400,
              j_count: int = 8, depth: int = 2, pca_dim: int = 1000,
              seed: int = 0) -> list[ExperimentResult]:
    """Digit classification on the 28x28 grid group with a Shannon kernel,
    plus a raw-pixel SVM baseline."""
    from .groups import build_cyclic, build_product
    group = build_product(build_cyclic(28), build_cyclic(28))
    tr_imgs, tr_labs = datasets.load_mnist_arrays(train_images, train_labels,
                                                  n_train)
    te_imgs, te_labs = datasets.load_mnist_arrays(test_images, test_labels,
                                                  n_test)
    values = np.concatenate([tr_imgs.reshape(len(tr_imgs), -1),
                             te_imgs.reshape(len(te_imgs), -1)])
    labels = np.concatenate([tr_labs, te_labs])
    train_idx = np.arange(len(tr_imgs))
    test_idx = np.arange(len(tr_imgs), len(values))

    kernel = learning.prototype_kernel(learning.shannon_bank(j_count), group,
                                       (28, 28))
    scatter_res = _train_eval(values, labels, kernel, depth, train_idx,
                              test_idx, seed, pca_dim=pca_dim, chunk=128,
                              label=f"MNIST scattering J={j_count} "
                                    f"depth {depth}", feature_mode="flat")
    x_train, x_test = _standardize(values[train_idx], values[test_idx])
    fm = pipeline.FeatureMatrix(x_train, labels[train_idx], [])
    model = pipeline.svm_train(fm, seed=seed)
    pred = pipeline.svm_predict(model, x_test)
    baseline = ExperimentResult(
        label="MNIST raw-pixel baseline",
        correct=int(np.sum(pred == labels[test_idx])),
        total=len(test_idx))
    return [scatter_res, baseline]


def run_experiment(cfg: dict, outdir: str | None = None
                   ) -> list[ExperimentResult]:
    """Dispatch on cfg['experiment'] and write the CSV/figure outputs."""
    tag = cfg.get("experiment")
    seed = int(cfg.get("seed", 0))
    depth = int(cfg.get("depth", 2))
    if tag == "sn_distances":
        results = run_sn_distances(int(cfg.get("n", 3)),
                                   depths=tuple(range(depth + 1)), seed=seed)
    elif tag == "sn_random":
        results = [run_sn_random(int(cfg.get("n", 6)),
                                 int(cfg.get("n_classes", 3)), depth, seed)]
    elif tag == "affine_audio":
        results = [run_affine_audio(int(cfg.get("p", 19)), depth,
                                    int(cfg.get("n_per_class", 20)), seed)]
    elif tag == "mnist":
        for key in ("train_images", "train_labels", "test_images",
                    "test_labels"):
            path = cfg.get(key)
            if not path or not os.path.exists(str(path)):
                raise FileNotFoundError(
                    f"mnist experiment needs config key '{key}' pointing at "
                    f"an existing IDX file (got {path!r})")
        results = run_mnist(str(cfg["train_images"]), str(cfg["train_labels"]),
                            str(cfg["test_images"]), str(cfg["test_labels"]),
                            int(cfg.get("n_train", 4800)),
                            int(cfg.get("n_test", 2400)),
                            int(cfg.get("j", 8)), depth,
                            int(cfg.get("pca_dim", 1000)), seed)
    else:
        raise GScatterError(
            f"unknown experiment {tag!r}; choose mnist, affine_audio, "
            "sn_distances, or sn_random")
    if outdir:
        write_experiment_outputs(results, outdir)
    return results


def write_experiment_outputs(results: list[ExperimentResult], outdir: str):
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "accuracy.csv"), "w") as fh:
        fh.write("label,correct,total,accuracy\n")
        for r in results:
            fh.write(f"{r.label},{r.correct},{r.total},{r.accuracy:.6f}\n")
    with open(os.path.join(outdir, "energies.csv"), "w") as fh:
        fh.write("label,layer,mean_captured_energy\n")
        for r in results:
            if r.layer_energies is None:
                continue
            for m, e in enumerate(r.layer_energies):
                fh.write(f"{r.label},{m},{e:.17g}\n")
    plots.plot_accuracy_table([(r.label, r.accuracy) for r in results],
                              os.path.join(outdir, "accuracy.png"))
    for r in results:
        if r.layer_energies is not None:
            safe = r.label.replace(" ", "_").replace("(", "").replace(")", "")
            plots.plot_layer_energies(
                r.layer_energies, r.layer_energies,
                os.path.join(outdir, f"energies_{safe}.png"),
                title=r.label)


# ---------------------------------------------------------------------------
# argparse front end
# ---------------------------------------------------------------------------

def _cmd_group_table(args) -> int:
    group = group_from_descriptor(args.group)
    print(f"# {group.name}: order {group.order}, {group.k} classes")
    print("class," + ",".join(group.class_labels))
    print("size," + ",".join(str(int(s)) for s in group.class_sizes))
    for r in range(group.k):
        row = ",".join(
            f"{v.real:.6g}" if abs(v.imag) < 1e-12 else f"{v:.6g}"
            for v in group.table.chi[r])
        print(f"chi^{r}(deg {int(group.table.degrees[r])}),{row}")
    return 0


def _cmd_wavelet_check(args) -> int:
    with open(args.kernel) as fh:
        kernel = kernel_from_csv(fh.read())
    a, b = frame_bounds(kernel)
    print(f"J={kernel.J} k={kernel.group.k} group={kernel.group.name}")
    print(f"frame bounds: A={a:.12g} B={b:.12g}")
    print(f"parseval: {kernel.is_parseval()}")
    rng = np.random.default_rng(args.seed)
    sigs = [random_signal(kernel.group, rng) for _ in range(args.trials)]
    try:
        worst = empirical_frame_check(kernel, sigs)
    except GScatterError as exc:
        print(f"FAIL frame inequality: {exc}")
        return 1
    print(f"empirical frame check: worst relative violation {worst:.3e}")
    rep = admissibility(kernel) if kernel.is_parseval() else None
    if rep is not None:
        print(f"admissibility: beta={rep.beta:.12g} alpha={rep.alpha:.12g}")
    return 0


def _cmd_scatter(args) -> int:
    with open(args.kernel) as fh:
        kernel = kernel_from_csv(fh.read())
    with open(args.signal) as fh:
        f = signal_from_csv(kernel.group, fh.read())
    out = scatter(kernel, f, args.depth)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "features.csv"), "w") as fh:
        fh.write("path,index,re,im\n")
        for p in out.paths:
            tag = "-".join(str(s) for s in p) or "root"
            for i, v in enumerate(out.features[p].values):
                fh.write(f"{tag},{i},{v.real:.17g},{v.imag:.17g}\n")
    with open(os.path.join(args.out, "energies.csv"), "w") as fh:
        fh.write("layer,captured,propagated\n")
        for m in range(args.depth + 1):
            fh.write(f"{m},{out.layer_feature_energies[m]:.17g},"
                     f"{out.layer_propagated_energies[m]:.17g}\n")
        fh.write(f"{args.depth + 1},,"
                 f"{out.layer_propagated_energies[args.depth + 1]:.17g}\n")
    plots.plot_layer_energies(out.layer_feature_energies,
                              out.layer_propagated_energies,
                              os.path.join(args.out, "energies.png"))
    print(f"wrote features.csv, energies.csv, energies.png to {args.out}")
    return 0


def _cmd_kernel_learn(args) -> int:
    group = group_from_descriptor(args.group)
    if args.recipe == "prototype":
        n, _, m = args.grid.partition("x")
        kernel = learning.prototype_kernel(
            learning.shannon_bank(args.j), group, (int(n), int(m)))
    elif args.recipe == "distance":
        metrics = (S3_METRICS if group.order == 6
                   else datasets.DISTANCE_NAMES)
        reps = [datasets.normalized_identity_distance(group, met)
                for met in metrics]
        kernel = learning.distance_class_kernel(reps, group)
    elif args.recipe == "random":
        kernel = random_parseval_kernel(group, args.j,
                                        np.random.default_rng(args.seed))
    else:
        print(f"unknown recipe {args.recipe}", file=sys.stderr)
        return 2
    with open(args.out, "w") as fh:
        fh.write(kernel_to_csv(kernel))
    if args.plot:
        plots.plot_kernel(kernel, args.plot)
    print(f"wrote kernel (J={kernel.J}) to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    group = group_from_descriptor(args.group)
    results = run_invariant_suite(group, seed=args.seed)
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: worst slack {r.worst:.3e}")
    if failed:
        print(f"FAILED: {', '.join(r.name for r in failed)}", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed on {group.name}")
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        cfg = parse_config(fh.read())
    outdir = args.out or str(cfg.get("out", "experiment_out"))
    results = run_experiment(cfg, outdir)
    for r in results:
        print(f"{r.label}: {r.correct}/{r.total} = {r.accuracy:.4f}")
    print(f"outputs written to {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gscatter",
        description="Wavelet scattering on finite groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p_group = sub.add_parser("group", help="group inspection")
    group_sub = p_group.add_subparsers(dest="subcommand", required=True)
    p_table = group_sub.add_parser("table", help="print the character table")
    p_table.add_argument("--group", required=True,
                         help="descriptor, e.g. cyclic:6 or symmetric:3")
    p_table.set_defaults(func=_cmd_group_table)

    p_wav = sub.add_parser("wavelet", help="kernel checks")
    wav_sub = p_wav.add_subparsers(dest="subcommand", required=True)
    p_check = wav_sub.add_parser("check", help="frame/Parseval report")
    p_check.add_argument("--kernel", required=True)
    p_check.add_argument("--trials", type=int, default=10)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(func=_cmd_wavelet_check)

    p_scat = sub.add_parser("scatter", help="scatter one signal")
    p_scat.add_argument("--kernel", required=True)
    p_scat.add_argument("--signal", required=True)
    p_scat.add_argument("--depth", type=int, default=2)
    p_scat.add_argument("--out", required=True)
    p_scat.set_defaults(func=_cmd_scatter)

    p_kern = sub.add_parser("kernel", help="kernel construction")
    kern_sub = p_kern.add_subparsers(dest="subcommand", required=True)
    p_learn = kern_sub.add_parser("learn", help="build a kernel")
    p_learn.add_argument("--group", required=True)
    p_learn.add_argument("--recipe", required=True,
                         choices=("prototype", "distance", "random"))
    p_learn.add_argument("--grid", default="28x28",
                         help="nxm grid for the prototype recipe")
    p_learn.add_argument("--j", type=int, default=4)
    p_learn.add_argument("--seed", type=int, default=0)
    p_learn.add_argument("--out", required=True)
    p_learn.add_argument("--plot", default=None,
                         help="optional PNG path for the kernel figure")
    p_learn.set_defaults(func=_cmd_kernel_learn)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("group", help="group descriptor")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=_cmd_verify)

    p_exp = sub.add_parser("experiment", help="run a configured experiment")
    p_exp.add_argument("config", help="flat key=value config file")
    p_exp.add_argument("--out", default=None)
    p_exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GScatterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
