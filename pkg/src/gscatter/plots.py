"""Figure rendering for CLI report paths.  All figures are written straight
to files through the Agg backend; nothing here opens a window."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .frames import Kernel


def plot_layer_energies(layer_feature: np.ndarray, layer_propagated: np.ndarray,
                        path: str, title: str = "Scattering energy by layer"):
    """Bar chart of captured (feature) and propagated energy per layer."""
    fig, ax = plt.subplots(figsize=(6, 4))
    m_feat = np.arange(len(layer_feature))
    m_prop = np.arange(len(layer_propagated))
    ax.bar(m_feat - 0.2, layer_feature, width=0.4, label="captured")
    ax.bar(m_prop + 0.2, layer_propagated, width=0.4, label="propagated")
    ax.set_xlabel("layer")
    ax.set_ylabel("energy")
    ax.set_yscale("log")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_kernel(kernel: Kernel, path: str,
                title: str = "Kernel coefficients"):
    """Heatmap of |gamma_j(r)| plus the per-irreducible Calderon sums."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 4))
    im = ax0.imshow(np.abs(kernel.gamma), aspect="auto", cmap="viridis")
    ax0.set_xlabel("irreducible r")
    ax0.set_ylabel("filter j (0 = low-pass)")
    ax0.set_title(title)
    fig.colorbar(im, ax=ax0)
    sums = kernel.calderon_sums()
    ax1.plot(sums, marker="o")
    ax1.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
    ax1.set_xlabel("irreducible r")
    ax1.set_ylabel("sum_j |gamma_j(r)|^2")
    ax1.set_title("Calderon sums")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_accuracy_table(rows: list[tuple[str, float]], path: str,
                        title: str = "Accuracy"):
    """Horizontal bar chart of labeled accuracies in [0, 1]."""
    fig, ax = plt.subplots(figsize=(6, 1.0 + 0.5 * len(rows)))
    names = [r[0] for r in rows]
    accs = [r[1] for r in rows]
    ax.barh(np.arange(len(rows)), accs)
    ax.set_yticks(np.arange(len(rows)), names)
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("accuracy")
    ax.set_title(title)
    for i, a in enumerate(accs):
        ax.text(min(a + 0.01, 0.9), i, f"{a:.3f}", va="center")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
