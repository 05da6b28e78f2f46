"""Scatter-matrix SVG rendering of designs."""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from sfdesign.errors import InvalidDimensionError
from sfdesign.modules.design import DesignMatrix, JitterMode, LevelMatrix, to_unit_cube

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "sfdesign"


def _points(design) -> np.ndarray:
    if isinstance(design, LevelMatrix):
        return to_unit_cube(design, JitterMode.MIDPOINT).values
    if isinstance(design, DesignMatrix):
        return design.values
    return np.asarray(design, dtype=float)


def scatter_matrix(design, path: str | Path, grid: int | None = None,
                   title: str | None = None, panel_size: float = 2.0) -> Path:
    """Write a k x k scatter matrix of the design's columns as SVG.

    Off-diagonal panel (i, j) plots column j against column i; the diagonal
    carries the column name. Level matrices are drawn at cell midpoints.

    Args:
        design: LevelMatrix, DesignMatrix or n x k array in the unit cube
        path: Output SVG path
        grid: When given, draws lines at i/grid on both axes of every panel
        title: Optional figure title
        panel_size: Panel edge length in inches

    Returns:
        The written path

    Raises:
        InvalidDimensionError: The design has fewer than two columns
    """
    X = _points(design)
    if X.ndim != 2 or X.shape[1] < 2:
        raise InvalidDimensionError("a scatter matrix needs at least 2 columns")
    k = X.shape[1]
    path = Path(path)
    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, axes = plt.subplots(k, k, figsize=(panel_size * k, panel_size * k), squeeze=False)
        for i in range(k):
            for j in range(k):
                ax = axes[i, j]
                ax.set_xlim(0.0, 1.0)
                ax.set_ylim(0.0, 1.0)
                ax.set_xticks([])
                ax.set_yticks([])
                if i == j:
                    ax.text(0.5, 0.5, f"col{i + 1}", ha="center", va="center", fontsize=12)
                    continue
                if grid:
                    for line in np.arange(1, grid) / grid:
                        ax.axvline(line, color="lightgray", linewidth=0.6)
                        ax.axhline(line, color="lightgray", linewidth=0.6)
                ax.scatter(X[:, j], X[:, i], s=12, c="tab:blue")
                ax.set_aspect("equal")
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info("Wrote %dx%d scatter matrix to %s", k, k, path)
    return path
