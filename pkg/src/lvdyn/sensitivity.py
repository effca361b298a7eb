"""Variance-based global sensitivity of the interior equilibrium.

The equilibrium (x*, y*) is a closed-form function of the six ODE
coefficients.  Each coefficient is varied independently and uniformly inside
a box around its baseline, the model is evaluated on a Saltelli design built
from a scrambled Sobol' sequence, and first-order / total-order variance
shares are estimated per output.  Parameter draws whose equilibrium is
non-finite or leaves the first quadrant are rejected; rejection removes the
whole base-index triple so estimator pairings stay aligned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import InvalidN, TooManyRejections, ValidationError, ZeroBaseline
from .params import PARAM_NAMES, ContinuousParams
from .dynamics import INTERIOR_DENOM_EPS

__all__ = [
    "ParamBounds",
    "SaltelliDesign",
    "SobolResult",
    "bounds_from_baseline",
    "saltelli_sample",
    "evaluate_equilibria",
    "sobol_indices",
    "analyze_sensitivity",
    "OUTPUT_NAMES",
]

N_PARAMS = 6
OUTPUT_NAMES = ("x_star", "y_star")

#: Minimum fraction of base-sample triples that must survive rejection.
MIN_RETAINED_FRACTION = 0.5


@dataclass(frozen=True)
class ParamBounds:
    """Per-parameter sampling intervals for (a1, b11, b12, a2, b21, b22)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != (N_PARAMS,) or hi.shape != (N_PARAMS,):
            raise ValidationError(f"bounds must have shape ({N_PARAMS},)")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValidationError("bounds must be finite")
        if not np.all(lo < hi):
            bad = [PARAM_NAMES[i] for i in range(N_PARAMS) if lo[i] >= hi[i]]
            raise ValidationError(f"lower must be < upper for every parameter: {bad}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


def bounds_from_baseline(cp: ContinuousParams, fraction: float) -> ParamBounds:
    """Symmetric relative box [v - |v|*fraction, v + |v|*fraction].

    The box never crosses zero for fraction < 1, so every parameter keeps its
    baseline sign.  An exactly-zero baseline collapses the interval and is
    rejected.
    """
    if not 0 < fraction < 1:
        raise ValidationError(f"fraction must be in (0, 1), got {fraction}")
    theta = np.array(cp.as_tuple())
    if np.any(theta == 0):
        zero = [PARAM_NAMES[i] for i in range(N_PARAMS) if theta[i] == 0]
        raise ZeroBaseline(f"baseline is exactly zero for {zero}; box collapses")
    half = np.abs(theta) * fraction
    return ParamBounds(lower=theta - half, upper=theta + half)


@dataclass(frozen=True)
class SaltelliDesign:
    """Saltelli sample of N*(2D+2) rows for D=6 parameters.

    Rows are grouped per base index j in blocks of 2D+2: the A-row, the D
    rows where column i is swapped in from B, the D rows where column i is
    swapped into B from A, and the B-row.  The layout is deterministic for a
    given (bounds, n_base, seed).
    """

    matrix: np.ndarray   # (n_base*(2D+2), D)
    n_base: int
    seed: int

    @property
    def block_size(self) -> int:
        return 2 * N_PARAMS + 2

    def rows_a(self) -> np.ndarray:
        return self.matrix[0::self.block_size]

    def rows_b(self) -> np.ndarray:
        return self.matrix[self.block_size - 1::self.block_size]

    def rows_ab(self, i: int) -> np.ndarray:
        """Rows equal to A except column i comes from B."""
        return self.matrix[1 + i::self.block_size]

    def rows_ba(self, i: int) -> np.ndarray:
        """Rows equal to B except column i comes from A."""
        return self.matrix[1 + N_PARAMS + i::self.block_size]


def saltelli_sample(bounds: ParamBounds, n_base: int, seed: int) -> SaltelliDesign:
    """Draw the Saltelli design from a scrambled Sobol' sequence.

    The base matrices A and B are the first and last six columns of a
    12-dimensional low-discrepancy sample of size n_base, mapped affinely
    into the bounds; n_base must be a power of two >= 64.
    """
    if n_base < 64 or n_base & (n_base - 1) != 0:
        raise InvalidN(f"base sample size must be a power of two >= 64, got {n_base}")
    engine = qmc.Sobol(d=2 * N_PARAMS, scramble=True, seed=seed)
    unit = engine.random(n_base)
    width = bounds.upper - bounds.lower
    a = bounds.lower + unit[:, :N_PARAMS] * width
    b = bounds.lower + unit[:, N_PARAMS:] * width

    block = 2 * N_PARAMS + 2
    matrix = np.empty((n_base * block, N_PARAMS))
    matrix[0::block] = a
    matrix[block - 1::block] = b
    for i in range(N_PARAMS):
        ab = a.copy()
        ab[:, i] = b[:, i]
        matrix[1 + i::block] = ab
        ba = b.copy()
        ba[:, i] = a[:, i]
        matrix[1 + N_PARAMS + i::block] = ba
    return SaltelliDesign(matrix=matrix, n_base=n_base, seed=seed)


def evaluate_equilibria(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form interior equilibrium for every sample row.

    Returns (outputs, valid): outputs has columns (x*, y*); a row is invalid
    when the nullclines are parallel, the result is non-finite, or either
    component is negative.  Invalid rows carry NaN outputs.
    """
    theta = np.asarray(samples, dtype=float)
    a1, b11, b12, a2, b21, b22 = (theta[:, i] for i in range(N_PARAMS))
    den = b12 * b21 - b11 * b22
    scale = np.maximum(np.maximum(np.abs(b12 * b21), np.abs(b11 * b22)), 1e-300)
    ok = np.abs(den) >= INTERIOR_DENOM_EPS * scale
    out = np.full((len(theta), 2), np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[ok, 0] = (a1[ok] * b22[ok] - b12[ok] * a2[ok]) / den[ok]
        out[ok, 1] = (b11[ok] * a2[ok] - a1[ok] * b21[ok]) / den[ok]
    valid = ok & np.all(np.isfinite(out), axis=1) & np.all(out >= 0, axis=1)
    out[~valid] = np.nan
    return out, valid


@dataclass(frozen=True)
class SobolResult:
    """First- and total-order indices for both equilibrium outputs.

    Index arrays are (2, 6): rows follow OUTPUT_NAMES, columns PARAM_NAMES.
    Raw estimator values are kept unclipped; ``clipped()`` gives a [0, 1]
    view for display.  Counts record per-row sample accounting over the full
    design; ``retained_triples`` is the number of base indices that survived
    whole-triple rejection.
    """

    first_order: np.ndarray
    total_order: np.ndarray
    total_variance: np.ndarray   # (2,)
    accepted_count: int
    rejected_count: int
    retained_triples: int
    n_base: int
    seed: int

    def clipped(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.clip(self.first_order, 0.0, 1.0),
                np.clip(self.total_order, 0.0, 1.0))


def sobol_indices(
    design: SaltelliDesign, outputs: np.ndarray, valid: np.ndarray
) -> SobolResult:
    """Estimate variance shares from an evaluated Saltelli design.

    First-order indices use the cross-matrix covariance estimator
    V_i ~ mean(f(B) * (f(A_B^i) - f(A))); total-order indices use the
    squared-difference estimator V_~i-complement ~ mean((f(A) - f(A_B^i))^2)/2.
    A base index is dropped whole when its A-row, B-row or any A_B^i row is
    invalid; at least half the base sample must survive.
    """
    block = design.block_size
    n = design.n_base
    if outputs.shape != (n * block, 2) or valid.shape != (n * block,):
        raise ValidationError("outputs/valid do not match the design shape")

    valid_blocks = valid.reshape(n, block)
    # Triple = A-row (offset 0), B-row (last offset) and the D A_B rows.
    triple_cols = [0] + list(range(1, N_PARAMS + 1)) + [block - 1]
    keep = np.all(valid_blocks[:, triple_cols], axis=1)
    retained = int(np.count_nonzero(keep))
    if retained < MIN_RETAINED_FRACTION * n:
        raise TooManyRejections(
            f"only {retained} of {n} sample triples valid; need at least "
            f"{MIN_RETAINED_FRACTION:.0%}")

    out_blocks = outputs.reshape(n, block, 2)[keep]
    f_a = out_blocks[:, 0, :]                    # (retained, 2)
    f_b = out_blocks[:, block - 1, :]
    f_ab = out_blocks[:, 1:N_PARAMS + 1, :]      # (retained, D, 2)

    pooled = np.concatenate([f_a, f_b], axis=0)
    variance = pooled.var(axis=0)                # (2,)

    first = np.empty((2, N_PARAMS))
    total = np.empty((2, N_PARAMS))
    for i in range(N_PARAMS):
        diff = f_ab[:, i, :] - f_a
        first[:, i] = np.mean(f_b * diff, axis=0) / variance
        total[:, i] = np.mean((f_a - f_ab[:, i, :]) ** 2, axis=0) / (2.0 * variance)

    return SobolResult(
        first_order=first,
        total_order=total,
        total_variance=variance,
        accepted_count=int(np.count_nonzero(valid)),
        rejected_count=int(np.count_nonzero(~valid)),
        retained_triples=retained,
        n_base=n,
        seed=design.seed,
    )


def analyze_sensitivity(
    cp: ContinuousParams, fraction: float, n_base: int, seed: int
) -> SobolResult:
    """End-to-end driver: bounds, sampling, evaluation, indices."""
    bounds = bounds_from_baseline(cp, fraction)
    design = saltelli_sample(bounds, n_base, seed)
    outputs, valid = evaluate_equilibria(design.matrix)
    return sobol_indices(design, outputs, valid)
