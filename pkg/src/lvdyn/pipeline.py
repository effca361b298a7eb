"""Data ingestion, the analysis pipeline, and report/file generation.

``run_pipeline`` chains loading, fitting (or baseline injection),
interaction classification, equilibrium and stability analysis, phase
geometry, MAPE evaluation and Sobol sensitivity into a single Report.
Reports serialize to JSON deterministically: fixed field order, no
timestamps, floats rounded half-even to nine significant digits, so two
runs with identical inputs are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import BASELINES, SubsystemBaseline, baseline_for_labels
from .dynamics import (
    BBox,
    EquilibriumSet,
    PhaseGeometry,
    StabilityReport,
    Trajectory,
    equilibrium_set,
    integrate_ode,
    phase_geometry,
    stability_at,
    vector_field,
)
from .errors import (
    IoError,
    ParseError,
    PipelineStageError,
    ValidationError,
)
from .fitting import (
    FitDiagnostics,
    FitMode,
    TimeSeries,
    fit_details,
    fitted_trajectories,
    free_run,
    mape,
)
from .params import (
    PARAM_NAMES,
    ContinuousParams,
    DiscreteParams,
    InteractionType,
    RegressionCoeffs,
    classify_interaction,
    continuous_to_discrete,
    discrete_to_continuous,
    discrete_to_regression,
    regression_to_discrete,
)
from .sensitivity import OUTPUT_NAMES, SobolResult, analyze_sensitivity

__all__ = [
    "AnalysisConfig",
    "Report",
    "load_series",
    "run_pipeline",
    "export_phase_data",
    "write_report",
    "report_json_text",
    "fixture_path",
]

_DATA_DIR = Path(__file__).parent / "data"


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture CSV (e.g. ``cn_ai_physical.csv``)."""
    return _DATA_DIR / name


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything a pipeline run needs; validated before any work starts."""

    input_path: str | Path
    year_col: str = "year"
    x_col: str = "ai_capital"
    y_col: str = "physical_capital"
    label_x: str | None = None          # defaults to the column name
    label_y: str | None = None
    unit: str = "billion yuan"
    mode: FitMode = FitMode.ONE_STEP_AHEAD
    classify_tol: float = 0.0
    sobol_n: int = 1024
    fraction: float = 0.1
    seed: int = 1024
    params_from_paper: bool = False
    baseline_key: str | None = None     # explicit published-baseline choice
    out_dir: str | Path | None = None
    formats: tuple[str, ...] = ("json",)
    grid_n: int = 41
    ode_t_end: float = 10.0
    ode_dt: float = 0.001
    free_run_steps: int = 20

    def validate(self) -> None:
        if self.sobol_n < 64 or self.sobol_n & (self.sobol_n - 1) != 0:
            raise ValidationError(
                f"sobol_n must be a power of two >= 64, got {self.sobol_n}")
        if not 0 < self.fraction < 1:
            raise ValidationError(f"fraction must be in (0, 1), got {self.fraction}")
        if self.classify_tol < 0:
            raise ValidationError(f"classify_tol must be >= 0, got {self.classify_tol}")
        for fmt in self.formats:
            if fmt not in ("json", "csv"):
                raise ValidationError(f"unknown report format {fmt!r}")
        if self.baseline_key is not None and self.baseline_key not in BASELINES:
            raise ValidationError(
                f"unknown baseline {self.baseline_key!r}; choose from {sorted(BASELINES)}")
        if self.grid_n < 2:
            raise ValidationError(f"grid_n must be >= 2, got {self.grid_n}")
        if self.ode_dt <= 0 or self.ode_t_end < 0 or self.free_run_steps < 0:
            raise ValidationError("ode_t_end/ode_dt/free_run_steps out of range")


def load_series(path: str | Path, mapping: dict[str, str] | None = None,
                label_x: str | None = None, label_y: str | None = None,
                unit: str = "billion yuan") -> TimeSeries:
    """Read a headered CSV into a validated TimeSeries.

    ``mapping`` names the year/x/y columns (defaults: year, ai_capital,
    physical_capital).  Columns are matched by name, so column order in the
    file is irrelevant.  Parse failures carry the row and column location.
    """
    mapping = mapping or {}
    year_col = mapping.get("year", "year")
    x_col = mapping.get("x", "ai_capital")
    y_col = mapping.get("y", "physical_capital")

    path = Path(path)
    if not path.is_file():
        raise IoError(f"input file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    reader = csv.DictReader(text.splitlines())
    header = reader.fieldnames or []
    for col in (year_col, x_col, y_col):
        if col not in header:
            raise ParseError(f"{path}: missing column {col!r} (header: {header})")

    years: list[int] = []
    xs: list[float] = []
    ys: list[float] = []
    for rownum, row in enumerate(reader, start=2):
        for col, target, cast in ((year_col, years, int), (x_col, xs, float),
                                  (y_col, ys, float)):
            raw = (row.get(col) or "").strip()
            try:
                target.append(cast(raw))
            except (TypeError, ValueError) as exc:
                raise ParseError(
                    f"{path}: row {rownum}, column {col!r}: "
                    f"cannot parse {raw!r}") from exc

    return TimeSeries(
        label_x=label_x or x_col,
        label_y=label_y or y_col,
        unit=unit,
        years=tuple(years),
        xs=tuple(xs),
        ys=tuple(ys),
    )


@dataclass
class Report:
    """Assembled pipeline results; ``to_dict`` fixes the JSON layout."""

    config: AnalysisConfig
    series: TimeSeries | None = None
    input_sha256: str | None = None
    regression: RegressionCoeffs | None = None
    discrete: DiscreteParams | None = None
    continuous: ContinuousParams | None = None
    params_source: str | None = None
    fit_diag: FitDiagnostics | None = None
    interaction: InteractionType | None = None
    equilibria: EquilibriumSet | None = None
    stability: StabilityReport | None = None
    mape_one_step: tuple[float, float] | None = None
    mape_free_running: tuple[float, float] | None = None
    phase: PhaseGeometry | None = None
    region_signs: dict[str, dict] | None = None
    ode_trajectory: Trajectory | None = None
    discrete_trajectory: np.ndarray | None = None
    convergence: dict | None = None
    sobol: SobolResult | None = None
    reference: SubsystemBaseline | None = None
    incomplete: bool = False
    failed_stage: str | None = None
    error: str | None = None
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return _report_dict(self)


def _round9(v: float) -> float:
    """Round half-even to nine significant digits for byte-stable output."""
    if v == 0 or not math.isfinite(v):
        return v
    return float(f"{v:.9g}")


def _num(v) -> float | None:
    return None if v is None else _round9(float(v))


def _point(p) -> list[float] | None:
    return None if p is None else [_round9(float(p[0])), _round9(float(p[1]))]


def _params_dict(names, values) -> dict:
    return {name: _num(v) for name, v in zip(names, values)}


def _report_dict(r: Report) -> dict:
    cfg = r.config
    out: dict = {
        "config": {
            "input": str(cfg.input_path),
            "columns": {"year": cfg.year_col, "x": cfg.x_col, "y": cfg.y_col},
            "mode": cfg.mode.value,
            "classify_tol": _num(cfg.classify_tol),
            "sobol_n": cfg.sobol_n,
            "fraction": _num(cfg.fraction),
            "seed": cfg.seed,
            "params_from_paper": cfg.params_from_paper,
            "formats": list(cfg.formats),
        },
    }
    if r.series is not None:
        ts = r.series
        out["series"] = {
            "label_x": ts.label_x,
            "label_y": ts.label_y,
            "unit": ts.unit,
            "years": list(ts.years),
            "x": [_round9(v) for v in ts.xs],
            "y": [_round9(v) for v in ts.ys],
        }
    if r.continuous is not None:
        rc, dp, cp = r.regression, r.discrete, r.continuous
        out["parameters"] = {
            "source": r.params_source,
            "regression": {
                "intercept1": _num(rc.intercept1),
                "self_slope1": _num(rc.self_slope1),
                "cross_slope1": _num(rc.cross_slope1),
                "adj_r2_1": _num(rc.adj_r2_1),
                "intercept2": _num(rc.intercept2),
                "self_slope2": _num(rc.self_slope2),
                "cross_slope2": _num(rc.cross_slope2),
                "adj_r2_2": _num(rc.adj_r2_2),
            },
            "discrete": _params_dict(
                ("alpha1", "self1", "cross1", "alpha2", "self2", "cross2"),
                (dp.alpha1, dp.self1, dp.cross1, dp.alpha2, dp.self2, dp.cross2)),
            "continuous": _params_dict(PARAM_NAMES, cp.as_tuple()),
        }
    if r.fit_diag is not None:
        d = r.fit_diag
        out["fit_diagnostics"] = {
            "adj_r2_origin": [_num(d.eq_x.adj_r2_origin), _num(d.eq_y.adj_r2_origin)],
            "adj_r2_full": [_num(d.eq_x.adj_r2_full), _num(d.eq_y.adj_r2_full)],
            "mean_residual": [_num(d.eq_x.mean_residual), _num(d.eq_y.mean_residual)],
        }
    if r.interaction is not None:
        ia = r.interaction
        prey_label = None
        if ia.prey is not None and r.series is not None:
            prey_label = r.series.label_x if ia.prey == "x" else r.series.label_y
        out["interaction"] = {"kind": ia.kind.value, "prey": ia.prey,
                              "prey_label": prey_label}
    if r.equilibria is not None:
        eq = r.equilibria
        out["equilibria"] = {
            "origin": _point(eq.origin),
            "axial_x": _point(eq.axial_x),
            "axial_y": _point(eq.axial_y),
            "interior": _point(eq.interior),
        }
    if r.stability is not None:
        st = r.stability
        out["stability"] = {
            "jacobian": [[_round9(float(v)) for v in row] for row in st.jacobian],
            "eigenvalues": [{"re": _round9(z.real), "im": _round9(z.imag)}
                            for z in st.eigenvalues],
            "classification": st.classification.value,
        }
    if r.mape_one_step is not None or r.mape_free_running is not None:
        out["mape"] = {
            "mode": r.config.mode.value,
            "one_step_ahead": _point(r.mape_one_step),
            "free_running": _point(r.mape_free_running),
        }
    if r.phase is not None:
        pg = r.phase
        out["phase"] = {
            "nullcline_x": [_round9(v) for v in pg.nullcline_x],
            "nullcline_y": [_round9(v) for v in pg.nullcline_y],
            "bbox": [_round9(pg.bbox.x_min), _round9(pg.bbox.x_max),
                     _round9(pg.bbox.y_min), _round9(pg.bbox.y_max)],
            "grid_n": len(pg.xs),
            "region_signs": r.region_signs,
        }
    if r.convergence is not None:
        out["convergence"] = r.convergence
    if r.sobol is not None:
        sr = r.sobol
        outputs = {}
        for oi, oname in enumerate(OUTPUT_NAMES):
            outputs[oname] = {
                "total_variance": _num(sr.total_variance[oi]),
                "first_order": _params_dict(PARAM_NAMES, sr.first_order[oi]),
                "total_order": _params_dict(PARAM_NAMES, sr.total_order[oi]),
                "sum_first_order": _num(sr.first_order[oi].sum()),
            }
        out["sobol"] = {
            "n_base": sr.n_base,
            "seed": sr.seed,
            "fraction": _num(r.config.fraction),
            "accepted_count": sr.accepted_count,
            "rejected_count": sr.rejected_count,
            "retained_triples": sr.retained_triples,
            "outputs": outputs,
        }
    if r.reference is not None:
        ref = r.reference
        out["reference"] = {
            "baseline": ref.key,
            "continuous": _params_dict(PARAM_NAMES, ref.params.as_tuple()),
            "ci95": {k: [_round9(lo), _round9(hi)] for k, (lo, hi) in ref.ci.items()},
        }
    out["provenance"] = {
        "package": "lvdyn",
        "version": __version__,
        "input_sha256": r.input_sha256,
        "seed": r.config.seed,
    }
    if r.warnings:
        out["warnings"] = list(r.warnings)
    if r.incomplete:
        out["incomplete"] = True
        out["failed_stage"] = r.failed_stage
        out["error"] = r.error
    return out


def report_json_text(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def _region_signs(cp: ContinuousParams, interior: tuple[float, float]) -> dict | None:
    """Sign pattern of the vector field just off the interior equilibrium.

    The two nullcline gradients are inverted to find displacement directions
    that realize each sign combination of (dx/dt, dy/dt); the four sampled
    points label the quadrants the nullclines cut around the equilibrium.
    """
    grad = np.array([[cp.b11, cp.b12], [cp.b21, cp.b22]])
    try:
        inv = np.linalg.inv(grad)
    except np.linalg.LinAlgError:
        return None
    eps = 0.05 * np.array([max(abs(cp.a1), 1e-12), max(abs(cp.a2), 1e-12)])
    regions = {}
    labels = {(-1, 1): "I", (-1, -1): "II", (1, -1): "III", (1, 1): "IV"}
    for sig, label in labels.items():
        d = inv @ (np.array(sig) * eps)
        px, py = interior[0] + d[0], interior[1] + d[1]
        if px <= 0 or py <= 0:
            continue
        f1, f2 = vector_field(cp, px, py)
        regions[f"region_{label}"] = {
            "point": [_round9(px), _round9(py)],
            "sign_dx": int(np.sign(f1)),
            "sign_dy": int(np.sign(f2)),
        }
    return regions or None


def _default_bbox(interior: tuple[float, float] | None, ts: TimeSeries | None) -> BBox:
    if interior is not None and interior[0] > 0 and interior[1] > 0:
        return BBox(interior[0] / 50.0, 2.2 * interior[0],
                    interior[1] / 50.0, 1.6 * interior[1])
    if ts is not None:
        return BBox(min(ts.xs) * 0.5, max(ts.xs) * 1.5,
                    min(ts.ys) * 0.5, max(ts.ys) * 1.5)
    raise ValidationError("no interior equilibrium and no series to size the bbox")


def _resolve_baseline(cfg: AnalysisConfig, ts: TimeSeries) -> SubsystemBaseline:
    if cfg.baseline_key is not None:
        return BASELINES[cfg.baseline_key]
    ref = baseline_for_labels(ts.label_y)
    if ref is None:
        raise ValidationError(
            f"no published baseline matches series label {ts.label_y!r}; "
            f"pass an explicit baseline key from {sorted(BASELINES)}")
    return ref


#: Stage names accepted by run_pipeline's ``stages`` filter; loading and
#: parameter resolution always run.
PIPELINE_STAGES = ("classify", "equilibrium", "stability", "phase", "mape",
                   "trajectories", "sobol")


def run_pipeline(cfg: AnalysisConfig, stages: set[str] | None = None) -> Report:
    """Execute the analysis chain and (optionally) write output files.

    ``stages`` restricts which analysis stages run (loading and parameter
    resolution are unconditional); None runs everything.  Stage failures are
    wrapped in PipelineStageError carrying the stage name; when an output
    directory is configured, the partially filled report is still written
    with an explicit ``incomplete`` marker before the error propagates.
    """
    cfg.validate()
    if stages is None:
        stages = set(PIPELINE_STAGES)
    else:
        unknown = stages.difference(PIPELINE_STAGES)
        if unknown:
            raise ValidationError(f"unknown pipeline stages: {sorted(unknown)}")
        stages = set(stages)
        # Stability, phase and trajectory analysis all need the equilibria.
        if stages & {"stability", "phase", "trajectories"}:
            stages.add("equilibrium")
    report = Report(config=cfg)

    def run_stage(name: str, fn):
        try:
            return fn()
        except Exception as exc:
            report.incomplete = True
            report.failed_stage = name
            report.error = f"{type(exc).__name__}: {exc}"
            if cfg.out_dir is not None:
                try:
                    write_report(report, cfg.out_dir)
                except Exception:
                    pass
            raise PipelineStageError(name, exc) from exc

    def stage_load():
        path = Path(cfg.input_path)
        ts = load_series(
            path,
            {"year": cfg.year_col, "x": cfg.x_col, "y": cfg.y_col},
            label_x=cfg.label_x, label_y=cfg.label_y, unit=cfg.unit)
        report.series = ts
        report.input_sha256 = hashlib.sha256(path.read_bytes()).hexdigest()

    run_stage("load", stage_load)
    ts = report.series

    def stage_params():
        if cfg.params_from_paper:
            ref = _resolve_baseline(cfg, ts)
            report.reference = ref
            report.continuous = ref.params
            report.discrete = continuous_to_discrete(ref.params)
            report.regression = discrete_to_regression(report.discrete)
            report.params_source = "published_baseline"
        else:
            diag = fit_details(ts)
            report.fit_diag = diag
            report.regression = diag.coeffs
            report.discrete = regression_to_discrete(diag.coeffs)
            report.continuous = discrete_to_continuous(report.discrete)
            report.params_source = "fitted"
            ref = baseline_for_labels(ts.label_y)
            if ref is not None:
                report.reference = ref

    run_stage("fit" if not cfg.params_from_paper else "inject-params", stage_params)

    def stage_classify():
        report.interaction = classify_interaction(report.continuous, cfg.classify_tol)

    if "classify" in stages:
        run_stage("classify", stage_classify)

    def stage_equilibria():
        report.equilibria = equilibrium_set(report.continuous)

    if "equilibrium" in stages:
        run_stage("equilibrium", stage_equilibria)

    def stage_stability():
        interior = report.equilibria.interior
        if interior is not None:
            report.stability = stability_at(report.continuous, interior)

    if "stability" in stages:
        run_stage("stability", stage_stability)

    def stage_phase():
        interior = report.equilibria.interior
        bbox = _default_bbox(interior, ts)
        report.phase = phase_geometry(report.continuous, bbox, cfg.grid_n)
        if interior is not None:
            report.region_signs = _region_signs(report.continuous, interior)

    if "phase" in stages:
        run_stage("phase", stage_phase)

    def stage_mape():
        for mode, attr in ((FitMode.ONE_STEP_AHEAD, "mape_one_step"),
                           (FitMode.FREE_RUNNING, "mape_free_running")):
            fx, fy = fitted_trajectories(report.discrete, ts, mode)
            setattr(report, attr, (
                mape(np.asarray(ts.xs)[1:], fx[1:]),
                mape(np.asarray(ts.ys)[1:], fy[1:]),
            ))

    if "mape" in stages:
        run_stage("mape", stage_mape)

    def stage_trajectories():
        x0 = (ts.xs[0], ts.ys[0])
        report.ode_trajectory = integrate_ode(
            report.continuous, x0, cfg.ode_t_end, cfg.ode_dt)
        report.discrete_trajectory = free_run(
            report.discrete, x0, cfg.free_run_steps)
        interior = report.equilibria.interior
        if interior is not None:
            ode_end = report.ode_trajectory.states[-1]
            disc_end = report.discrete_trajectory[-1]
            report.convergence = {
                "interior": _point(interior),
                "ode_terminal": _point(ode_end),
                "discrete_terminal": _point(disc_end),
                "ode_rel_error": _point(
                    (abs(ode_end[0] - interior[0]) / abs(interior[0]),
                     abs(ode_end[1] - interior[1]) / abs(interior[1]))),
                "discrete_rel_error": _point(
                    (abs(disc_end[0] - interior[0]) / abs(interior[0]),
                     abs(disc_end[1] - interior[1]) / abs(interior[1]))),
            }

    if "trajectories" in stages:
        run_stage("trajectories", stage_trajectories)

    def stage_sobol():
        report.sobol = analyze_sensitivity(
            report.continuous, cfg.fraction, cfg.sobol_n, cfg.seed)

    if "sobol" in stages:
        run_stage("sobol", stage_sobol)

    if cfg.out_dir is not None:
        run_stage("write", lambda: write_report(report, cfg.out_dir))

    return report


# --------------------------------------------------------------------------
# File outputs
# --------------------------------------------------------------------------

def _ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {path}: {exc}") from exc
    if not path.is_dir():
        raise IoError(f"output path is not a directory: {path}")
    return path


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_report(report: Report, out_dir: str | Path) -> list[Path]:
    """Write report.json (and report.csv / sobol.csv / phase files)."""
    out = _ensure_dir(Path(out_dir))
    written: list[Path] = []

    if "json" in report.config.formats:
        p = out / "report.json"
        _write_text(p, report_json_text(report))
        written.append(p)
    if "csv" in report.config.formats:
        p = out / "report.csv"
        _write_text(p, _report_csv_text(report))
        written.append(p)
    if report.sobol is not None:
        p = out / "sobol.csv"
        _write_text(p, _sobol_csv_text(report.sobol))
        written.append(p)
    if report.phase is not None:
        trajectories = []
        if report.ode_trajectory is not None:
            trajectories.append(("ode", report.ode_trajectory))
        written.extend(export_phase_data(report.phase, trajectories, out / "phase"))
        if report.discrete_trajectory is not None:
            p = out / "phase" / "trajectory_discrete.csv"
            rows = ["step,x,y"] + [
                f"{k},{_round9(x):.9g},{_round9(y):.9g}"
                for k, (x, y) in enumerate(report.discrete_trajectory)]
            _write_text(p, "\n".join(rows) + "\n")
            written.append(p)
    return written


def _flatten(prefix: str, obj, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix, ";".join("" if v is None else str(v) for v in obj)))
    else:
        rows.append((prefix, "" if obj is None else str(obj)))


def _report_csv_text(report: Report) -> str:
    rows: list[tuple[str, str]] = []
    _flatten("", report.to_dict(), rows)
    lines = ["key,value"]
    for key, value in rows:
        value = value.replace('"', '""')
        lines.append(f'{key},"{value}"')
    return "\n".join(lines) + "\n"


def _sobol_csv_text(sr: SobolResult) -> str:
    lines = ["parameter,output,S_i,S_Ti"]
    for oi, oname in enumerate(OUTPUT_NAMES):
        for pi, pname in enumerate(PARAM_NAMES):
            lines.append(f"{pname},{oname},{_round9(sr.first_order[oi, pi]):.9g},"
                         f"{_round9(sr.total_order[oi, pi]):.9g}")
    return "\n".join(lines) + "\n"


_PHASE_README = """\
Phase-plane data files
======================

nullclines.csv   line coefficients (A + B*x + C*y = 0) and sampled points of
                 the two interior nullclines (kind = x or y).
signgrid.csv     sign of dx/dt and dy/dt on the sampling grid.
vectorfield.csv  raw (dx/dt, dy/dt) values on the sampling grid.
trajectory_*.csv integrated trajectories; `t` is model time for the ODE
                 solution, `step` an iteration count for the discrete map.

All files are plain UTF-8 CSV with a single header row.
"""


def export_phase_data(
    pg: PhaseGeometry,
    trajectories: list[tuple[str, Trajectory]],
    out_dir: str | Path,
) -> list[Path]:
    """Write plot-ready CSVs for nullclines, sign grid, field and trajectories."""
    out = _ensure_dir(Path(out_dir))
    written: list[Path] = []

    lines = ["kind,A,B,C,x,y"]
    for kind, (ca, cb, cc) in (("x", pg.nullcline_x), ("y", pg.nullcline_y)):
        for x in pg.xs:
            if cc == 0:
                continue
            y = -(ca + cb * x) / cc
            if pg.bbox.y_min <= y <= pg.bbox.y_max:
                lines.append(f"{kind},{ca:.9g},{cb:.9g},{cc:.9g},"
                             f"{_round9(x):.9g},{_round9(y):.9g}")
        for y in pg.ys:
            if cb == 0:
                continue
            x = -(ca + cc * y) / cb
            if pg.bbox.x_min <= x <= pg.bbox.x_max:
                lines.append(f"{kind},{ca:.9g},{cb:.9g},{cc:.9g},"
                             f"{_round9(x):.9g},{_round9(y):.9g}")
    p = out / "nullclines.csv"
    _write_text(p, "\n".join(lines) + "\n")
    written.append(p)

    lines = ["x,y,sign_dx,sign_dy"]
    for i, x in enumerate(pg.xs):
        for j, y in enumerate(pg.ys):
            lines.append(f"{_round9(x):.9g},{_round9(y):.9g},"
                         f"{pg.sign_dx[i, j]},{pg.sign_dy[i, j]}")
    p = out / "signgrid.csv"
    _write_text(p, "\n".join(lines) + "\n")
    written.append(p)

    lines = ["x,y,dxdt,dydt"]
    for i, x in enumerate(pg.xs):
        for j, y in enumerate(pg.ys):
            lines.append(f"{_round9(x):.9g},{_round9(y):.9g},"
                         f"{_round9(pg.dx[i, j]):.9g},{_round9(pg.dy[i, j]):.9g}")
    p = out / "vectorfield.csv"
    _write_text(p, "\n".join(lines) + "\n")
    written.append(p)

    for name, traj in trajectories:
        lines = ["t,x,y"]
        for t, (x, y) in zip(traj.t, traj.states):
            lines.append(f"{_round9(t):.9g},{_round9(x):.9g},{_round9(y):.9g}")
        p = out / f"trajectory_{name}.csv"
        _write_text(p, "\n".join(lines) + "\n")
        written.append(p)

    p = out / "README.md"
    _write_text(p, _PHASE_README)
    written.append(p)
    return written
