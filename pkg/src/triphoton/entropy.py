"""Shannon and differential entropy kernels, all in bits (log base 2).

Conventions used throughout:

* 0 * log(0) = 0, so zero-probability outcomes never contribute.
* A Gaussian of standard deviation sigma has differential entropy
  (1/2) log2(2 pi e sigma^2); it vanishes at sigma = 1/sqrt(2 pi e).
* A histogram with normalized counts p_j and bin width w estimates the
  differential entropy of the underlying density as H(p) + log2(w).
  Flattening a density within bins can only raise its continuous entropy,
  so the histogram value is an over-estimate of the true differential
  entropy in the large-sample limit.  Witness formulas subtract these
  entropies, which is what keeps the resulting bounds conservative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SUM_TOL = 1e-12


def _xlog2x(p: np.ndarray) -> np.ndarray:
    # p assumed >= 0; returns p*log2(p) with 0 at p == 0
    out = np.zeros_like(p, dtype=float)
    nz = p > 0.0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


@dataclass(frozen=True)
class DiscretePMF:
    """Joint probability mass function over 1 to 3 outcome axes.

    probabilities: flat, non-negative, sums to 1 within 1e-12 (renormalized
    on construction so downstream arithmetic sees an exact unit sum).
    shape: per-axis outcome cardinalities.
    """

    probabilities: np.ndarray
    shape: tuple[int, ...]

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).ravel()
        shape = tuple(int(n) for n in self.shape)
        if not 1 <= len(shape) <= 3:
            raise ValueError(f"PMF must have 1 to 3 axes, got shape {shape}")
        if any(n < 1 for n in shape):
            raise ValueError(f"axis cardinalities must be >= 1, got {shape}")
        if p.size != int(np.prod(shape)):
            raise ValueError(f"{p.size} probabilities do not fill shape {shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite")
        if np.any(p < 0.0):
            raise ValueError("probabilities must be non-negative")
        total = p.sum()
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {_SUM_TOL}")
        object.__setattr__(self, "probabilities", p / total)
        object.__setattr__(self, "shape", shape)

    @property
    def n_axes(self) -> int:
        return len(self.shape)

    def as_array(self) -> np.ndarray:
        return self.probabilities.reshape(self.shape)

    def marginal(self, axes: tuple[int, ...]) -> "DiscretePMF":
        """Marginal PMF over the listed axes (summing out the rest)."""
        axes = tuple(axes)
        for ax in axes:
            if not 0 <= ax < self.n_axes:
                raise ValueError(f"axis {ax} out of range for {self.n_axes}-axis PMF")
        if len(set(axes)) != len(axes):
            raise ValueError("duplicate axes in marginal request")
        keep = sorted(axes)
        drop = tuple(ax for ax in range(self.n_axes) if ax not in keep)
        arr = self.as_array().sum(axis=drop) if drop else self.as_array()
        return DiscretePMF(arr.ravel(), arr.shape)


@dataclass(frozen=True)
class Histogram1D:
    """Count histogram with uniform bin width.

    bin_width: > 0, same units as the binned variable.
    counts: non-negative integers per bin.
    origin: coordinate of the left edge of bin 0.
    """

    bin_width: float
    counts: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.bin_width) or self.bin_width <= 0.0:
            raise ValueError(f"bin width must be positive, got {self.bin_width!r}")
        c = np.asarray(self.counts)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("counts must be a non-empty 1-D array")
        if np.any(c < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", c.astype(np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def shannon_entropy(pmf: DiscretePMF) -> float:
    """H = -sum p log2 p over all joint outcomes, in bits."""
    return float(-_xlog2x(pmf.probabilities).sum())


def conditional_entropy(pmf: DiscretePMF, target_axis: int) -> float:
    """H(target | rest) = H(joint) - H(rest), in bits.

    Requires at least two axes; 'rest' is every axis except target_axis.
    """
    if pmf.n_axes < 2:
        raise ValueError("conditional entropy needs a joint PMF with >= 2 axes")
    if not 0 <= target_axis < pmf.n_axes:
        raise ValueError(f"target axis {target_axis} out of range for {pmf.n_axes}-axis PMF")
    rest = tuple(ax for ax in range(pmf.n_axes) if ax != target_axis)
    return shannon_entropy(pmf) - shannon_entropy(pmf.marginal(rest))


def mutual_information(pmf: DiscretePMF) -> float:
    """I(A:B) = H(A) + H(B) - H(AB) for a two-axis PMF, in bits."""
    if pmf.n_axes != 2:
        raise ValueError("mutual information is defined here for exactly 2 axes")
    ha = shannon_entropy(pmf.marginal((0,)))
    hb = shannon_entropy(pmf.marginal((1,)))
    return ha + hb - shannon_entropy(pmf)


def binary_entropy(lam: float) -> float:
    """h2(lam) = -lam log2 lam - (1-lam) log2(1-lam), for lam in [0, 1]."""
    if not np.isfinite(lam) or not 0.0 <= lam <= 1.0:
        raise ValueError(f"binary entropy argument must be in [0, 1], got {lam!r}")
    if lam == 0.0 or lam == 1.0:
        return 0.0
    # log1p keeps the (1-lam) term accurate for very small lam
    return float(-lam * np.log2(lam) - (1.0 - lam) * np.log1p(-lam) / np.log(2.0))


def gaussian_differential_entropy(sigma: float) -> float:
    """Differential entropy (bits) of a Gaussian with standard deviation sigma."""
    if not np.isfinite(sigma) or sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    return float(0.5 * np.log2(2.0 * np.pi * np.e * sigma * sigma))


def differential_entropy_from_histogram(hist: Histogram1D) -> float:
    """H(normalized counts) + log2(bin width), in bits.

    Over-estimates the differential entropy of the sampled density (bin
    flattening cannot lower continuous entropy), which is the conservative
    direction for every witness built on top of it.
    """
    total = hist.total
    if total == 0:
        raise ValueError("histogram has no counts")
    p = hist.counts / total
    return float(-_xlog2x(p).sum() + np.log2(hist.bin_width))
