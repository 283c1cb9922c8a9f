"""Concordance correlation coefficient (CCC) and its use as a training loss.

CCC rewards reproduction of both the shape and the level of a signal:

    rho_c = 2*cov(x, y) / (var(x) + var(y) + (mean(x) - mean(y))^2)

with population (1/N) statistics.  Unlike Pearson correlation it is not
scale- or shift-invariant, which is what makes ``1 - rho_c`` a useful
reconstruction loss for normalized audio.

Both functions accept plain numpy arrays or tape ``Tensor`` operands, so the
loss is differentiable when fed a recorded forward pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nn.tape import Tensor, mean

# Guards the all-constant case (both variances and the mean gap are zero).
CCC_EPS = 1e-12


@dataclass
class CccComponents:
    """Population statistics entering the CCC formula."""

    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    cov_xy: float

    def validate(self) -> None:
        if self.var_x < 0 or self.var_y < 0:
            raise ValueError("variances must be non-negative")
        if abs(self.cov_xy) > np.sqrt(self.var_x * self.var_y) + 1e-12:
            raise ValueError("covariance exceeds Cauchy-Schwarz bound")


def ccc_components(x: np.ndarray, y: np.ndarray) -> CccComponents:
    """Population statistics of two equal-length sequences (numpy only)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_lengths(x, y)
    comp = CccComponents(
        mean_x=float(np.mean(x)),
        mean_y=float(np.mean(y)),
        var_x=float(np.var(x)),
        var_y=float(np.var(y)),
        cov_xy=float(np.mean((x - np.mean(x)) * (y - np.mean(y)))),
    )
    comp.validate()
    return comp


def _check_lengths(x, y) -> None:
    nx = x.value.size if isinstance(x, Tensor) else np.asarray(x).size
    ny = y.value.size if isinstance(y, Tensor) else np.asarray(y).size
    if nx != ny:
        raise ValueError(f"length mismatch: {nx} vs {ny}")
    if nx < 2:
        raise ValueError(f"need at least 2 samples, got {nx}")


def ccc(x, y):
    """Concordance correlation coefficient in [-1, 1].

    Symmetric in its arguments; 1 only for y = x (up to numerical noise).
    """
    _check_lengths(x, y)
    mx = mean(x)
    my = mean(y)
    dx = x - mx
    dy = y - my
    var_x = mean(dx * dx)
    var_y = mean(dy * dy)
    cov = mean(dx * dy)
    mean_gap = mx - my
    return 2.0 * cov / (var_x + var_y + mean_gap * mean_gap + CCC_EPS)


def ccc_loss(x, y):
    """1 - ccc(x, y); zero for perfect reproduction, up to 2 for y = -x."""
    return 1.0 - ccc(x, y)
