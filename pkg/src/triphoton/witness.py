"""Entropic entanglement witnesses for triplet statistics.

Continuous form, for linear combinations of the three photon positions
(coefficients eta) and momenta (coefficients beta):

    E3F >= log2(2 pi |eta-bar||beta-bar|) - h(eta.x) - h(beta.k)   [gebits]

with |eta-bar||beta-bar| = min_i |eta_i|*|beta_i| over the three parties.
Histogram entropy estimates only ever over-estimate h, so a witness built
from measured or simulated samples under-estimates the entanglement and
never falsely certifies it.

Discrete form, for three-party outcome tables Q (one basis) and R (a second
basis per party, inverse overlap Omega_i):

    E3F >= sum_i [log2 Omega_i - H(Q_i|Q_rest) - H(R_i|R_rest)] - 2 log2 Dmax

which evaluates to exactly 1 gebit for GHZ statistics in the Z/X bases.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .entropy import (
    DiscretePMF,
    Histogram1D,
    conditional_entropy,
    differential_entropy_from_histogram,
    mutual_information,
)
from .report import EntanglementReport
from .states import SampleSet

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class WitnessCoefficients:
    """Linear-combination coefficients: eta for positions, beta for momenta.

    All six components must be nonzero (the witness log term pairs them per
    party).  An overall rescaling of either vector leaves the witness value
    unchanged, so only relative magnitudes and sign patterns matter.
    """

    eta: tuple[float, float, float]
    beta: tuple[float, float, float]

    def __post_init__(self):
        for name in ("eta", "beta"):
            vec = tuple(float(v) for v in getattr(self, name))
            if len(vec) != 3:
                raise ValueError(f"{name} must have 3 components")
            if not all(np.isfinite(v) and v != 0.0 for v in vec):
                raise ValueError(f"{name} components must be finite and nonzero, got {vec}")
            object.__setattr__(self, name, vec)

    @property
    def min_pair_product(self) -> float:
        return min(abs(e) * abs(b) for e, b in zip(self.eta, self.beta))


# Coefficients matched to the triple-Gaussian correlation structure:
# eta.x = x1 - (x2+x3)/2 picks the narrow position combination, beta.k the
# conserved total transverse momentum.
SPDC_COEFFICIENTS = WitnessCoefficients(eta=(1.0, -0.5, -0.5), beta=(1.0, 1.0, 1.0))


def continuous_witness(coeffs: WitnessCoefficients, h_x_bits: float, h_k_bits: float) -> float:
    """Witness (gebits) from the two combination entropies (bits)."""
    for name, val in (("h_x_bits", h_x_bits), ("h_k_bits", h_k_bits)):
        if not np.isfinite(val):
            raise ValueError(f"{name} must be finite, got {val!r}")
    return float(math.log2(2.0 * math.pi * coeffs.min_pair_product) - h_x_bits - h_k_bits)


def _combination_histogram(values: np.ndarray, bin_width: float) -> Histogram1D:
    origin = float(values.min()) - 0.5 * bin_width
    idx = np.floor((values - origin) / bin_width).astype(np.int64)
    return Histogram1D(bin_width=bin_width, counts=np.bincount(idx), origin=origin)


def _witness_bootstrap_se(
    hist_x: Histogram1D,
    hist_k: Histogram1D,
    resamples: int,
    rng: np.random.Generator,
) -> float:
    """Bootstrap sd of (h_x + h_k) under multinomial count resampling."""
    vals = np.empty(resamples)
    px = hist_x.counts / hist_x.total
    pk = hist_k.counts / hist_k.total
    for i in range(resamples):
        cx = rng.multinomial(hist_x.total, px)
        ck = rng.multinomial(hist_k.total, pk)
        hx = differential_entropy_from_histogram(
            Histogram1D(hist_x.bin_width, cx, hist_x.origin)
        )
        hk = differential_entropy_from_histogram(
            Histogram1D(hist_k.bin_width, ck, hist_k.origin)
        )
        vals[i] = hx + hk
    return float(vals.std(ddof=1))


def witness_from_samples(
    samples_x: SampleSet,
    samples_k: SampleSet,
    coeffs: WitnessCoefficients,
    bin_width_x: float,
    bin_width_k: float,
    bootstrap_resamples: int = 64,
) -> EntanglementReport:
    """Estimate the witness from position and momentum sample sets.

    Histograms the two linear combinations at the given widths and applies
    the continuous witness to the (over-estimated) histogram entropies.
    """
    if samples_x.kind != "position":
        raise ValueError(f"samples_x must be position samples, got {samples_x.kind!r}")
    if samples_k.kind != "momentum":
        raise ValueError(f"samples_k must be momentum samples, got {samples_k.kind!r}")
    if len(samples_x) == 0 or len(samples_k) == 0:
        raise ValueError("sample sets must be non-empty")
    for name, w in (("bin_width_x", bin_width_x), ("bin_width_k", bin_width_k)):
        if not np.isfinite(w) or w <= 0.0:
            raise ValueError(f"{name} must be positive, got {w!r}")

    vx = samples_x.values @ np.asarray(coeffs.eta)
    vk = samples_k.values @ np.asarray(coeffs.beta)
    hist_x = _combination_histogram(vx, bin_width_x)
    hist_k = _combination_histogram(vk, bin_width_k)
    h_x = differential_entropy_from_histogram(hist_x)
    h_k = differential_entropy_from_histogram(hist_k)
    value = continuous_witness(coeffs, h_x, h_k)
    se = _witness_bootstrap_se(
        hist_x, hist_k, bootstrap_resamples, np.random.default_rng(0)
    )
    return EntanglementReport(
        inputs={
            "eta": list(coeffs.eta),
            "beta": list(coeffs.beta),
            "n_samples_x": len(samples_x),
            "n_samples_k": len(samples_k),
            "bin_width_x": float(bin_width_x),
            "bin_width_k": float(bin_width_k),
            "bootstrap_resamples": bootstrap_resamples,
        },
        witness_gebits=value,
        entropy_x_bits=h_x,
        entropy_k_bits=h_k,
        bootstrap_se=se,
    )


# --- coefficient search -----------------------------------------------------

_MAG_LO, _MAG_HI = 1.0 / 8.0, 8.0  # magnitude ratio search range per coordinate
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_BINS_PER_SIGMA = 8  # self-scaling histogram resolution for the objective


def sampled_witness_objective(
    samples_x: SampleSet, samples_k: SampleSet, coeffs: WitnessCoefficients
) -> float:
    """Witness value with self-scaling bins (sd/8 of each combination).

    This is the objective optimize_coefficients maximizes; -inf marks a
    degenerate (zero-variance) combination.
    """
    vx = samples_x.values @ np.asarray(coeffs.eta)
    vk = samples_k.values @ np.asarray(coeffs.beta)
    sx, sk = float(vx.std()), float(vk.std())
    if sx == 0.0 or sk == 0.0:
        return -math.inf
    h_x = differential_entropy_from_histogram(
        _combination_histogram(vx, sx / _BINS_PER_SIGMA)
    )
    h_k = differential_entropy_from_histogram(
        _combination_histogram(vk, sk / _BINS_PER_SIGMA)
    )
    return continuous_witness(coeffs, h_x, h_k)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-3) -> tuple[float, float]:
    """Golden-section maximization of f on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_coefficients(
    samples_x: SampleSet,
    samples_k: SampleSet,
    init: WitnessCoefficients = SPDC_COEFFICIENTS,
) -> WitnessCoefficients:
    """Search coefficients maximizing the sampled witness.

    Exhausts the 4 sign patterns per vector (modulo the irrelevant global
    sign), then refines the four free magnitude ratios (second and third
    components relative to the first) by coordinate-wise golden section on
    log-magnitude within [1/8, 8].  The returned coefficients never score
    below the initial guess.
    """
    eta0 = np.abs(np.asarray(init.eta))
    beta0 = np.abs(np.asarray(init.beta))

    def build(signs_e, signs_b, mags) -> WitnessCoefficients:
        e2, e3, b2, b3 = mags
        return WitnessCoefficients(
            eta=(eta0[0], signs_e[0] * eta0[0] * e2, signs_e[1] * eta0[0] * e3),
            beta=(beta0[0], signs_b[0] * beta0[0] * b2, signs_b[1] * beta0[0] * b3),
        )

    def score(c: WitnessCoefficients) -> float:
        val = sampled_witness_objective(samples_x, samples_k, c)
        if val == -math.inf and not score.warned:
            warnings.warn(
                "degenerate (zero-variance) combination met during coefficient "
                "search; affected axis left at its initial value",
                RuntimeWarning,
            )
            score.warned = True
        return val

    score.warned = False

    init_mags = np.array(
        [eta0[1] / eta0[0], eta0[2] / eta0[0], beta0[1] / beta0[0], beta0[2] / beta0[0]]
    )
    init_mags = np.clip(init_mags, _MAG_LO, _MAG_HI)
    patterns = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]

    best, best_val = None, -math.inf
    for se in patterns:
        for sb in patterns:
            cand = build(se, sb, init_mags)
            val = score(cand)
            if val > best_val:
                best, best_val, best_signs = cand, val, (se, sb)
    if best is None:  # every combination degenerate; nothing to refine
        return init

    mags = init_mags.copy()
    log_lo, log_hi = math.log(_MAG_LO), math.log(_MAG_HI)
    for _sweep in range(2):
        for axis in range(4):
            def along(lm, axis=axis):
                trial = mags.copy()
                trial[axis] = math.exp(lm)
                return score(build(*best_signs, trial))

            lm_best, val = _golden_max(along, log_lo, log_hi)
            if val > best_val and np.isfinite(val):
                mags[axis] = math.exp(lm_best)
                best_val = val
            # degenerate or no improvement: keep the incumbent value

    refined = build(*best_signs, mags)
    if score(refined) >= score(init):
        return refined
    return init


# --- discrete-outcome witness ----------------------------------------------


@dataclass(frozen=True)
class DiscreteWitnessInput:
    """Outcome statistics for two measurement bases per party.

    pmf_q, pmf_r : three-axis joint PMFs with identical shapes
    omegas       : per-party minimum inverse squared basis overlap, each in
                   [1, D_i] (equals D_i for mutually unbiased bases, 1 when
                   the two bases commute)
    d_max        : maximum axis cardinality (validated against the shapes)
    """

    pmf_q: DiscretePMF
    pmf_r: DiscretePMF
    omegas: tuple[float, float, float]
    d_max: int

    def __post_init__(self):
        if self.pmf_q.n_axes != 3 or self.pmf_r.n_axes != 3:
            raise ValueError("discrete witness needs three-axis PMFs")
        if self.pmf_q.shape != self.pmf_r.shape:
            raise ValueError(
                f"basis PMF shapes differ: {self.pmf_q.shape} vs {self.pmf_r.shape}"
            )
        omegas = tuple(float(o) for o in self.omegas)
        if len(omegas) != 3:
            raise ValueError("need one omega per party")
        for o, dim in zip(omegas, self.pmf_q.shape):
            if not np.isfinite(o) or o < 1.0 or o > dim + 1e-9:
                raise ValueError(f"omega {o!r} outside [1, {dim}]")
        if self.d_max != max(self.pmf_q.shape):
            raise ValueError(
                f"d_max {self.d_max!r} != max axis cardinality {max(self.pmf_q.shape)}"
            )
        object.__setattr__(self, "omegas", omegas)


def discrete_witness(inp: DiscreteWitnessInput) -> float:
    """Discrete entropic witness, gebits.

    sum_i [log2 Omega_i - H(Q_i|Q_rest) - H(R_i|R_rest)] - 2 log2 d_max.
    """
    total = 0.0
    for i in range(3):
        total += math.log2(inp.omegas[i])
        total -= conditional_entropy(inp.pmf_q, i)
        total -= conditional_entropy(inp.pmf_r, i)
    return float(total - 2.0 * math.log2(inp.d_max))


# --- correlation relation check --------------------------------------------


@dataclass(frozen=True)
class CorrelationCheckReport:
    """Result of the measured-correlation vs entanglement-entropy check."""

    dim: int
    trials: int
    seed: int
    max_violation: float
    max_mutual_information_bits: float


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    # fix phases so the distribution is uniform over the unitary group
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def _vn_entropy_bits(rho: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(rho)
    evals = np.clip(evals.real, 0.0, 1.0)
    nz = evals[evals > 1e-16]
    return float(-(nz * np.log2(nz)).sum())


def verify_correlation_relation(dim: int, trials: int, seed: int) -> CorrelationCheckReport:
    """Check H(Q_A:Q_B) <= E_F + min(S(AB), S(A), S(B)) on random pure states.

    Random bipartite pure states of local dimension dim (normalized complex
    Gaussian vectors) measured in independent random product bases.  For pure
    states E_F equals the reduced von Neumann entropy and S(AB) = 0, so the
    bound reads: measured mutual information never exceeds the entanglement
    entropy.  Returns the maximum violation over trials (<= 0 up to float
    round-off when the relation holds).
    """
    if dim < 2:
        raise ValueError(f"local dimension must be >= 2, got {dim}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    max_violation = -math.inf
    max_mi = 0.0
    for _ in range(trials):
        psi = rng.standard_normal(dim * dim) + 1j * rng.standard_normal(dim * dim)
        psi /= np.linalg.norm(psi)
        m = psi.reshape(dim, dim)
        ent_formation = _vn_entropy_bits(m @ m.conj().T)  # = S(A) = S(B), S(AB) = 0
        u_a = _haar_unitary(dim, rng)
        u_b = _haar_unitary(dim, rng)
        amps = u_a.conj().T @ m @ u_b.conj()
        p = np.abs(amps) ** 2
        p /= p.sum()
        mi = mutual_information(DiscretePMF(p.ravel(), (dim, dim)))
        max_mi = max(max_mi, mi)
        max_violation = max(max_violation, mi - ent_formation)
    return CorrelationCheckReport(
        dim=dim,
        trials=trials,
        seed=seed,
        max_violation=float(max_violation),
        max_mutual_information_bits=float(max_mi),
    )


# --- sample file ingestion --------------------------------------------------


def _load_samples(path: str | Path, header: tuple[str, str, str], kind: str) -> SampleSet:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty sample file") from None
        if tuple(col.strip() for col in first) != header:
            raise ValueError(
                f"{path}: expected header {','.join(header)!r}, got {first!r}"
            )
        try:
            rows = np.array([[float(c) for c in row] for row in reader if row])
        except ValueError as exc:
            raise ValueError(f"{path}: non-numeric sample value ({exc})") from exc
    if rows.size == 0:
        raise ValueError(f"{path}: no sample rows")
    if rows.ndim != 2 or rows.shape[1] != 3:
        raise ValueError(f"{path}: expected 3 columns, got shape {rows.shape}")
    if not np.all(np.isfinite(rows)):
        raise ValueError(f"{path}: non-finite sample values")
    return SampleSet(values=rows, kind=kind)


def load_position_samples(path: str | Path) -> SampleSet:
    """Read a position sample CSV with header x1,x2,x3 (meters)."""
    return _load_samples(path, ("x1", "x2", "x3"), "position")


def load_momentum_samples(path: str | Path) -> SampleSet:
    """Read a momentum sample CSV with header k1,k2,k3 (rad/m)."""
    return _load_samples(path, ("k1", "k2", "k3"), "momentum")
