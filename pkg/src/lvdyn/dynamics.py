"""Equilibria, linear stability and phase-plane geometry of the ODE system.

The vector field is

    f1(x, y) = a1*x + b11*x^2 + b12*x*y
    f2(x, y) = a2*y + b21*y*x + b22*y^2

Setting each factor in x*(a1 + b11 x + b12 y) and y*(a2 + b21 x + b22 y) to
zero gives the axis equilibria and, where the two interior nullclines meet,
the interior equilibrium in closed form.  Stability at a point follows from
the eigenvalues of the Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidBBox, NegativeState, StepTooLarge, ValidationError
from .params import ContinuousParams

__all__ = [
    "EquilibriumSet",
    "Stability",
    "StabilityReport",
    "BBox",
    "PhaseGeometry",
    "Trajectory",
    "vector_field",
    "interior_equilibrium",
    "equilibrium_set",
    "jacobian_at",
    "eigenvalues",
    "classify_stability",
    "stability_at",
    "phase_geometry",
    "integrate_ode",
]

#: Relative threshold below which the interior-equilibrium denominator is
#: treated as zero (no interior point).
INTERIOR_DENOM_EPS = 1e-15

#: Default per-step relative error tolerance for the step-doubling estimate.
RK4_ERROR_TOL = 1e-3

#: States below this are considered to have left the meaningful domain.
NEGATIVE_STATE_TOL = -1e-9


def vector_field(cp: ContinuousParams, x: float, y: float) -> tuple[float, float]:
    """Evaluate (dx/dt, dy/dt) at a point."""
    f1 = cp.a1 * x + cp.b11 * x * x + cp.b12 * x * y
    f2 = cp.a2 * y + cp.b21 * y * x + cp.b22 * y * y
    return f1, f2


def interior_equilibrium(cp: ContinuousParams) -> tuple[float, float] | None:
    """Closed-form intersection of the two interior nullclines.

    Returns None when the nullclines are (numerically) parallel, judged
    against the magnitude of the coefficient products involved.
    """
    den = cp.b12 * cp.b21 - cp.b11 * cp.b22
    scale = max(abs(cp.b12 * cp.b21), abs(cp.b11 * cp.b22), 1e-300)
    if abs(den) < INTERIOR_DENOM_EPS * scale:
        return None
    x = (cp.a1 * cp.b22 - cp.b12 * cp.a2) / den
    y = (cp.b11 * cp.a2 - cp.a1 * cp.b21) / den
    return (x, y)


@dataclass(frozen=True)
class EquilibriumSet:
    """All equilibria of the system; axis entries are None when undefined."""

    origin: tuple[float, float]
    axial_x: tuple[float, float] | None
    axial_y: tuple[float, float] | None
    interior: tuple[float, float] | None


def equilibrium_set(cp: ContinuousParams) -> EquilibriumSet:
    axial_x = (-cp.a1 / cp.b11, 0.0) if cp.b11 != 0 else None
    axial_y = (0.0, -cp.a2 / cp.b22) if cp.b22 != 0 else None
    return EquilibriumSet(
        origin=(0.0, 0.0),
        axial_x=axial_x,
        axial_y=axial_y,
        interior=interior_equilibrium(cp),
    )


def jacobian_at(cp: ContinuousParams, point: tuple[float, float]) -> np.ndarray:
    """Jacobian of the vector field at a point."""
    x, y = point
    return np.array([
        [cp.a1 + 2.0 * cp.b11 * x + cp.b12 * y, cp.b12 * x],
        [cp.b21 * y, cp.a2 + cp.b21 * x + 2.0 * cp.b22 * y],
    ])


def eigenvalues(m: np.ndarray) -> tuple[complex, complex]:
    """Roots of the characteristic polynomial of a 2x2 matrix.

    Ordered by real part descending, then imaginary part descending.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2) or not np.all(np.isfinite(m)):
        raise ValidationError("expected a finite 2x2 matrix")
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        root = np.sqrt(disc)
        lam = (complex((tr + root) / 2.0), complex((tr - root) / 2.0))
    else:
        root = np.sqrt(-disc)
        lam = (complex(tr / 2.0, root / 2.0), complex(tr / 2.0, -root / 2.0))
    return tuple(sorted(lam, key=lambda z: (-z.real, -z.imag)))  # type: ignore[return-value]


class Stability(Enum):
    STABLE_NODE = "stable_node"
    UNSTABLE_NODE = "unstable_node"
    SADDLE = "saddle"
    STABLE_FOCUS = "stable_focus"
    UNSTABLE_FOCUS = "unstable_focus"
    CENTER = "center"
    DEGENERATE = "degenerate"


def classify_stability(eigs: tuple[complex, complex], tol: float = 1e-9) -> Stability:
    """Classify an equilibrium from the eigenvalues of its linearization.

    Boundary cases (a real part within tol of zero, or a repeated real pair
    within tol) are reported as DEGENERATE rather than forced into a named
    class; a purely imaginary pair is a CENTER, for which the linearization
    is inconclusive about the nonlinear system.
    """
    if tol < 0:
        raise ValidationError(f"tol must be >= 0, got {tol}")
    lam1, lam2 = eigs
    if abs(lam1.imag) > tol or abs(lam2.imag) > tol:
        re = lam1.real
        if re < -tol:
            return Stability.STABLE_FOCUS
        if re > tol:
            return Stability.UNSTABLE_FOCUS
        return Stability.CENTER
    r1, r2 = lam1.real, lam2.real
    if r1 > tol and r2 < -tol:
        return Stability.SADDLE
    if abs(r1 - r2) <= tol:
        return Stability.DEGENERATE
    if r1 < -tol and r2 < -tol:
        return Stability.STABLE_NODE
    if r1 > tol and r2 > tol:
        return Stability.UNSTABLE_NODE
    return Stability.DEGENERATE


@dataclass(frozen=True)
class StabilityReport:
    jacobian: np.ndarray
    eigenvalues: tuple[complex, complex]
    classification: Stability


def stability_at(cp: ContinuousParams, point: tuple[float, float],
                 tol: float = 1e-9) -> StabilityReport:
    """Linearize at a point and classify it."""
    jac = jacobian_at(cp, point)
    eigs = eigenvalues(jac)
    return StabilityReport(jacobian=jac, eigenvalues=eigs,
                           classification=classify_stability(eigs, tol))


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in the open first quadrant."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (np.isfinite([self.x_min, self.x_max, self.y_min, self.y_max]).all()
                and 0 < self.x_min < self.x_max and 0 < self.y_min < self.y_max):
            raise InvalidBBox(
                f"bbox must satisfy 0 < x_min < x_max and 0 < y_min < y_max, got "
                f"({self.x_min}, {self.x_max}, {self.y_min}, {self.y_max})")


@dataclass(frozen=True)
class PhaseGeometry:
    """Sampled phase-plane geometry over a bounding box.

    Nullcline coefficients are in A + B*x + C*y = 0 form.  The grids are
    indexed [i, j] for the point (xs[i], ys[j]); sign entries are -1, 0 or +1.
    """

    nullcline_x: tuple[float, float, float]
    nullcline_y: tuple[float, float, float]
    bbox: BBox
    xs: np.ndarray            # (gridN,)
    ys: np.ndarray            # (gridN,)
    sign_dx: np.ndarray       # (gridN, gridN) int
    sign_dy: np.ndarray       # (gridN, gridN) int
    dx: np.ndarray            # (gridN, gridN) float
    dy: np.ndarray            # (gridN, gridN) float


def phase_geometry(cp: ContinuousParams, bbox: BBox, grid_n: int) -> PhaseGeometry:
    """Sample the vector field and its sign pattern over a grid."""
    if grid_n < 2:
        raise ValidationError(f"grid_n must be >= 2, got {grid_n}")
    xs = np.linspace(bbox.x_min, bbox.x_max, grid_n)
    ys = np.linspace(bbox.y_min, bbox.y_max, grid_n)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    dx = cp.a1 * xg + cp.b11 * xg**2 + cp.b12 * xg * yg
    dy = cp.a2 * yg + cp.b21 * yg * xg + cp.b22 * yg**2
    return PhaseGeometry(
        nullcline_x=(cp.a1, cp.b11, cp.b12),
        nullcline_y=(cp.a2, cp.b21, cp.b22),
        bbox=bbox,
        xs=xs,
        ys=ys,
        sign_dx=np.sign(dx).astype(int),
        sign_dy=np.sign(dy).astype(int),
        dx=dx,
        dy=dy,
    )


@dataclass(frozen=True)
class Trajectory:
    """Integrated states at uniformly spaced times."""

    t: np.ndarray       # (m+1,)
    states: np.ndarray  # (m+1, 2)


def _rk4_step(cp: ContinuousParams, state: np.ndarray, h: float) -> np.ndarray:
    def f(s):
        return np.array(vector_field(cp, s[0], s[1]))

    k1 = f(state)
    k2 = f(state + 0.5 * h * k1)
    k3 = f(state + 0.5 * h * k2)
    k4 = f(state + h * k3)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_ode(
    cp: ContinuousParams,
    x0: tuple[float, float],
    t_end: float,
    dt: float = 0.001,
    error_tol: float = RK4_ERROR_TOL,
) -> Trajectory:
    """Classical fixed-step RK4 integration of the system.

    Each step is checked by step doubling: the full step is compared with
    two half steps and the run aborts with StepTooLarge when the relative
    discrepancy exceeds ``error_tol`` (the estimate never adapts the step).
    A state component falling below -1e-9 aborts with NegativeState.
    """
    if dt <= 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    if t_end < 0:
        raise ValidationError(f"t_end must be >= 0, got {t_end}")
    if x0[0] < 0 or x0[1] < 0:
        raise ValidationError(f"x0 must lie in the closed first quadrant, got {x0}")

    n_steps = int(round(t_end / dt))
    t = np.linspace(0.0, n_steps * dt, n_steps + 1)
    states = np.empty((n_steps + 1, 2))
    states[0] = x0
    s = np.array(x0, dtype=float)
    for k in range(n_steps):
        full = _rk4_step(cp, s, dt)
        half = _rk4_step(cp, _rk4_step(cp, s, dt / 2.0), dt / 2.0)
        err = np.max(np.abs(full - half)) / max(float(np.max(np.abs(half))), 1.0)
        if err > error_tol:
            raise StepTooLarge(
                f"step-doubling estimate {err:.3e} exceeds {error_tol:g} at t={t[k]:g}")
        s = full
        if np.min(s) < NEGATIVE_STATE_TOL:
            raise NegativeState(f"state left the first quadrant at t={t[k + 1]:g}: {s}")
        states[k + 1] = s
    return Trajectory(t=t, states=states)
