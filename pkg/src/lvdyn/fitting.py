"""Estimation of the discrete-map coefficients from annual paired series.

The ratio x(k)/x(k+1) is linear in the current states, so each species'
equation reduces to a two-regressor least-squares problem.  Slopes come from
a through-origin fit; the intercept of the ratio equation is recovered
post hoc as half the mean absolute gap between the slope-only fitted ratios
and the empirical ones.  Fitted trajectories are produced either one step
ahead (empirical states on the right-hand side) or free-running (the map
feeds on its own output), and accuracy is summarised by MAPE.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DenominatorNearZero,
    IllConditioned,
    InsufficientData,
    LengthMismatch,
    NonPositiveValue,
    SingularDesign,
    TrajectoryOverflow,
    ValidationError,
    ZeroObserved,
)
from .params import DiscreteParams, RegressionCoeffs

__all__ = [
    "TimeSeries",
    "RatioSystem",
    "EquationFit",
    "FitDiagnostics",
    "FitMode",
    "FitReport",
    "build_ratio_rows",
    "fit_details",
    "fit_zero_intercept",
    "one_step_predictions",
    "free_run",
    "mape",
    "make_fit_report",
]

#: Condition-number threshold above which the normal equations trigger an
#: IllConditioned warning.
COND_WARN_THRESHOLD = 1e12

#: Discrete-map denominators smaller than this in magnitude abort evaluation.
DENOM_EPS = 1e-12

#: Iterated states larger than this abort a free run.
OVERFLOW_LIMIT = 1e300


@dataclass(frozen=True)
class TimeSeries:
    """Paired annual observations of two interacting factors.

    Years must be consecutive integers, observations strictly positive, and
    at least four points are required so each two-slope regression keeps a
    residual degree of freedom on the n-1 ratio rows.
    """

    label_x: str
    label_y: str
    unit: str
    years: tuple[int, ...]
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        n = len(self.years)
        if len(self.xs) != n or len(self.ys) != n:
            raise LengthMismatch(
                f"years/xs/ys lengths differ: {n}/{len(self.xs)}/{len(self.ys)}")
        if n < 4:
            raise InsufficientData(f"need at least 4 annual observations, got {n}")
        for i in range(1, n):
            if self.years[i] != self.years[i - 1] + 1:
                raise ValidationError(
                    f"years must be consecutive: {self.years[i - 1]} -> {self.years[i]}")
        for name, vals in (("x", self.xs), ("y", self.ys)):
            for year, v in zip(self.years, vals):
                if not np.isfinite(v) or v <= 0:
                    raise NonPositiveValue(
                        f"{name} observation in {year} must be finite and > 0, got {v}")

    @property
    def n(self) -> int:
        return len(self.years)


@dataclass(frozen=True)
class RatioSystem:
    """The two ratio-regression problems extracted from a series.

    Row k pairs the states at year k with the ratio formed against year k+1;
    there is no row for the final year.
    """

    years: np.ndarray          # (n-1,) year of the current state
    regressors: np.ndarray     # (n-1, 2) columns: x(k), y(k)
    response_x: np.ndarray     # (n-1,) x(k)/x(k+1)
    response_y: np.ndarray     # (n-1,) y(k)/y(k+1)


def build_ratio_rows(ts: TimeSeries) -> RatioSystem:
    """Assemble the ratio responses and state regressors from a series."""
    xs = np.asarray(ts.xs, dtype=float)
    ys = np.asarray(ts.ys, dtype=float)
    return RatioSystem(
        years=np.asarray(ts.years[:-1], dtype=int),
        regressors=np.column_stack([xs[:-1], ys[:-1]]),
        response_x=xs[:-1] / xs[1:],
        response_y=ys[:-1] / ys[1:],
    )


def _solve_through_origin(X: np.ndarray, resp: np.ndarray) -> np.ndarray:
    """Two-slope least squares without intercept via the normal equations.

    Raises SingularDesign on a rank-deficient design and warns when the
    normal matrix is ill conditioned.
    """
    gram = X.T @ X
    svals = np.linalg.svd(X, compute_uv=False)
    if svals[-1] <= svals[0] * np.finfo(float).eps * max(X.shape):
        raise SingularDesign("regressor columns are collinear")
    cond = (svals[0] / svals[-1]) ** 2
    if cond > COND_WARN_THRESHOLD:
        warnings.warn(
            f"normal equations condition number {cond:.3e} exceeds "
            f"{COND_WARN_THRESHOLD:.0e}", IllConditioned, stacklevel=3)
    return np.linalg.solve(gram, X.T @ resp)


@dataclass(frozen=True)
class EquationFit:
    """Per-equation estimates and diagnostics."""

    self_slope: float
    cross_slope: float
    intercept: float            # half the mean absolute slope-only residual
    mean_residual: float        # mean slope-only residual (alternative intercept)
    adj_r2_origin: float        # no-intercept convention, slope-only fit
    adj_r2_full: float          # centered convention, intercept included
    residuals: np.ndarray       # slope-only residuals, one per ratio row


def _fit_equation(X: np.ndarray, resp: np.ndarray, self_col: int) -> EquationFit:
    slopes = _solve_through_origin(X, resp)
    residuals = resp - X @ slopes
    n = len(resp)
    p = 2

    intercept = float(np.mean(np.abs(residuals)) / 2.0)
    mean_residual = float(np.mean(residuals))

    # Through-origin convention: uncentered total SS, df_total = n.
    r2_origin = 1.0 - float(np.sum(residuals**2) / np.sum(resp**2))
    adj_origin = 1.0 - (1.0 - r2_origin) * n / (n - p)

    # Centered convention for the full three-term model.
    full_res = residuals - intercept
    ss_tot = float(np.sum((resp - resp.mean()) ** 2))
    r2_full = 1.0 - float(np.sum(full_res**2)) / ss_tot
    adj_full = 1.0 - (1.0 - r2_full) * (n - 1) / (n - 3)

    return EquationFit(
        self_slope=float(slopes[self_col]),
        cross_slope=float(slopes[1 - self_col]),
        intercept=intercept,
        mean_residual=mean_residual,
        adj_r2_origin=float(adj_origin),
        adj_r2_full=float(adj_full),
        residuals=residuals,
    )


@dataclass(frozen=True)
class FitDiagnostics:
    """Both equations' fits plus the assembled coefficient object."""

    eq_x: EquationFit
    eq_y: EquationFit
    coeffs: RegressionCoeffs


def fit_details(ts: TimeSeries) -> FitDiagnostics:
    """Fit both ratio equations and keep per-equation diagnostics."""
    rows = build_ratio_rows(ts)
    eq_x = _fit_equation(rows.regressors, rows.response_x, self_col=0)
    eq_y = _fit_equation(rows.regressors, rows.response_y, self_col=1)
    coeffs = RegressionCoeffs(
        intercept1=eq_x.intercept,
        self_slope1=eq_x.self_slope,
        cross_slope1=eq_x.cross_slope,
        intercept2=eq_y.intercept,
        self_slope2=eq_y.self_slope,
        cross_slope2=eq_y.cross_slope,
        adj_r2_1=eq_x.adj_r2_origin,
        adj_r2_2=eq_y.adj_r2_origin,
    )
    return FitDiagnostics(eq_x=eq_x, eq_y=eq_y, coeffs=coeffs)


def fit_zero_intercept(ts: TimeSeries) -> RegressionCoeffs:
    """Estimate the ratio-regression coefficients for both species."""
    return fit_details(ts).coeffs


def _map_step(dp: DiscreteParams, x: float, y: float) -> tuple[float, float]:
    d1 = 1.0 - dp.self1 * x - dp.cross1 * y
    d2 = 1.0 - dp.self2 * y - dp.cross2 * x
    if abs(d1) < DENOM_EPS or abs(d2) < DENOM_EPS:
        raise DenominatorNearZero(
            f"map denominator vanished at state ({x:g}, {y:g})")
    return dp.alpha1 * x / d1, dp.alpha2 * y / d2


def one_step_predictions(dp: DiscreteParams, ts: TimeSeries) -> tuple[np.ndarray, np.ndarray]:
    """Fitted trajectories driven by the empirical states.

    Entry 0 of each trajectory equals the first observation; entry k+1 is the
    map applied to the OBSERVED state at year k.
    """
    n = ts.n
    fx = np.empty(n)
    fy = np.empty(n)
    fx[0], fy[0] = ts.xs[0], ts.ys[0]
    for k in range(n - 1):
        fx[k + 1], fy[k + 1] = _map_step(dp, ts.xs[k], ts.ys[k])
    return fx, fy


def free_run(dp: DiscreteParams, x0: tuple[float, float], steps: int) -> np.ndarray:
    """Iterate the map from x0, feeding each output back in.

    Returns an array of shape (steps+1, 2) whose first row is x0.
    """
    if steps < 0:
        raise ValidationError(f"steps must be >= 0, got {steps}")
    traj = np.empty((steps + 1, 2))
    traj[0] = x0
    x, y = float(x0[0]), float(x0[1])
    for k in range(steps):
        x, y = _map_step(dp, x, y)
        if abs(x) > OVERFLOW_LIMIT or abs(y) > OVERFLOW_LIMIT:
            raise TrajectoryOverflow(f"state exceeded {OVERFLOW_LIMIT:g} at step {k + 1}")
        traj[k + 1] = (x, y)
    return traj


def mape(observed, fitted) -> float:
    """Mean absolute percentage error, in percent."""
    obs = np.asarray(observed, dtype=float)
    fit = np.asarray(fitted, dtype=float)
    if obs.shape != fit.shape:
        raise LengthMismatch(f"series lengths differ: {obs.shape} vs {fit.shape}")
    if np.any(obs == 0):
        raise ZeroObserved("observed series contains zero; relative error undefined")
    return float(np.mean(np.abs((obs - fit) / obs)) * 100.0)


class FitMode(Enum):
    ONE_STEP_AHEAD = "one_step_ahead"
    FREE_RUNNING = "free_running"


@dataclass(frozen=True)
class FitReport:
    """Coefficients plus fitted trajectories and their MAPE.

    Trajectories have length n with the first entry pinned to the first
    observation, so MAPE is taken over the predicted entries (indices 1..n-1)
    to avoid a trivially exact first point.
    """

    coeffs: RegressionCoeffs
    fitted_x: np.ndarray
    fitted_y: np.ndarray
    mape_x: float
    mape_y: float
    mode: FitMode


def fitted_trajectories(
    dp: DiscreteParams, ts: TimeSeries, mode: FitMode
) -> tuple[np.ndarray, np.ndarray]:
    if mode is FitMode.ONE_STEP_AHEAD:
        return one_step_predictions(dp, ts)
    traj = free_run(dp, (ts.xs[0], ts.ys[0]), ts.n - 1)
    return traj[:, 0].copy(), traj[:, 1].copy()


def make_fit_report(
    ts: TimeSeries,
    mode: FitMode = FitMode.ONE_STEP_AHEAD,
    dp: DiscreteParams | None = None,
    coeffs: RegressionCoeffs | None = None,
) -> FitReport:
    """Build a FitReport, fitting the series unless dp/coeffs are injected."""
    if coeffs is None:
        coeffs = fit_zero_intercept(ts)
    if dp is None:
        from .params import regression_to_discrete

        dp = regression_to_discrete(coeffs)
    fx, fy = fitted_trajectories(dp, ts, mode)
    obs_x = np.asarray(ts.xs)[1:]
    obs_y = np.asarray(ts.ys)[1:]
    return FitReport(
        coeffs=coeffs,
        fitted_x=fx,
        fitted_y=fy,
        mape_x=mape(obs_x, fx[1:]),
        mape_y=mape(obs_y, fy[1:]),
        mode=mode,
    )
