"""Matplotlib figures for verification reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .verifier import VerificationReport  # noqa: E402


def plot_margins(report: VerificationReport, path) -> Path:
    """Per-trial margins on a log scale, failures marked in red.

    The format follows the file suffix (png, svg or pdf).  Metadata that
    would embed dates or library versions is dropped so reruns give the
    same bytes.
    """
    path = Path(path)
    margins = np.asarray(report.margins, dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=100)
    idx = np.arange(len(margins))
    ok = margins > 0
    ax.scatter(idx[ok], margins[ok], s=4, color="#1f3b73", label="pass")
    if (~ok).any():
        ax.scatter(idx[~ok], np.abs(margins[~ok]) + 1e-300, s=10, color="#b22222", label="fail (|margin|)")
    if ok.any():
        ax.set_yscale("log")
    ax.set_xlabel("trial")
    ax.set_ylabel("margin")
    ax.set_title(f"{report.proposition}: {report.trials} trials, seed {report.seed}, "
                 f"{report.failures} failures")
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    suffix = path.suffix.lower().lstrip(".") or "png"
    metadata = {"png": {"Software": None}, "svg": {"Date": None, "Creator": None},
                "pdf": {"CreationDate": None, "Creator": None, "Producer": None}}.get(suffix)
    with matplotlib.rc_context({"svg.hashsalt": "postulatum"}):
        fig.savefig(path, format=suffix, metadata=metadata)
    plt.close(fig)
    return path
