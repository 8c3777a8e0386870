"""Single-point reports, detuning sweeps, detuning optimization and plot data.

These are the library functions behind the ``dopedom`` command; each sweep
point is an independent pure computation, so sweeps may run in a process
pool without changing any value.
"""
from __future__ import annotations

import csv
import logging
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from functools import partial
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analytics import (RegimeReport, StandardOMParams, StandardOMResult, regime_report,
                        standard_om_nf)
from .config import params_to_dict
from .errors import ConfigError, DopedOMError, SolverError, ValidationError
from .model import UNITS, ModelParams, SteadyState, linearize, solve_steady_state
from .spectral import SpectrumResult, kernel, effective_damping, spectrum
from .stability import CovarianceResult, StabilityVerdict, check_stability, solve_lyapunov

log = logging.getLogger(__name__)

AXES = ("delta_a", "delta_c", "delta_polariton")
ROUTES = ("lyapunov", "spectral", "both")
MAX_POINTS = 100_000


def at_axis(p: ModelParams, axis: str, value: float) -> ModelParams:
    """Parameters with the swept detuning set to ``value``."""
    if axis == "delta_a":
        return p.replace(delta_a=value)
    if axis == "delta_c":
        return p.replace(delta_c=value)
    if axis == "delta_polariton":
        return p.replace(delta_a=value, delta_c=value)
    raise ValidationError("axis", f"must be one of {AXES}, got {axis!r}")


# --------------------------------------------------------------------------
# single point
# --------------------------------------------------------------------------

@dataclass
class PointReport:
    params: ModelParams
    steady: SteadyState
    verdict: StabilityVerdict
    gamma_eff: float
    regime: RegimeReport
    covariance: Optional[CovarianceResult] = None
    spectrum: Optional[SpectrumResult] = None
    standard: Optional[StandardOMResult] = None

    @property
    def stable(self) -> bool:
        return self.verdict.stable

    def to_text(self) -> str:
        s, v = self.steady, self.verdict
        out = [f"# units: {UNITS}", "[steady_state]"]
        if s.a_bar is not None:
            out += [f"a_bar = {s.a_bar:.12g}", f"c_bar = {s.c_bar:.12g}"]
        out += [f"q_bar = {s.q_bar:.12g}", f"g_eff = {s.g_eff:.12g}", f"G = {s.G:.12g}",
                f"branch_count = {s.branch_count}", f"selected_branch = {s.selected_branch}",
                "", "[stability]", f"stable = {str(v.stable).lower()}",
                f"spectral_abscissa = {v.spectral_abscissa:.12g}"]
        out += [f"eigenvalue_{i} = {z.real:.12g}{z.imag:+.12g}j"
                for i, z in enumerate(v.eigenvalues)]
        out += ["", "[occupation]", f"gamma_eff = {self.gamma_eff:.12g}"]
        if self.covariance is not None:
            c = self.covariance
            out += [f"n_f_lyapunov = {c.n_f_q:.12g}", f"n_f_lyapunov_sym = {c.n_f_sym:.12g}",
                    f"lyapunov_residual = {c.lyapunov_residual:.3e}"]
            out += [f"warning = {w}" for w in c.warnings]
        if self.spectrum is not None:
            out += [f"n_f_spectral = {self.spectrum.n_f_spectral:.12g}",
                    f"spectral_rel_error = {self.spectrum.rel_error:.3e}"]
        if self.standard is not None and self.standard.n_f is not None:
            out.append(f"n_f_standard = {self.standard.n_f:.12g}")
        out += ["", "[regime]", self.regime.to_text()]
        return "\n".join(out) + "\n"


def evaluate_point(p: ModelParams, routes: str = "both",
                   compare_standard: bool = False) -> PointReport:
    """Steady state, stability, occupation by the requested routes, regime report.

    Unstable points carry no occupation numbers.
    """
    if routes not in ROUTES:
        raise ValidationError("routes", f"must be one of {ROUTES}")
    s = solve_steady_state(p)
    L = linearize(p, s)
    verdict = check_stability(L)
    k = kernel(p, s)
    report = PointReport(params=p, steady=s, verdict=verdict, gamma_eff=effective_damping(k),
                         regime=regime_report(p))
    if compare_standard:
        report.standard = standard_om_nf(StandardOMParams.comparable_to(p, s.G))
    if verdict.stable:
        if routes in ("lyapunov", "both"):
            report.covariance = solve_lyapunov(L, verdict)
        if routes in ("spectral", "both"):
            report.spectrum = spectrum(k, p.n_m)
    return report


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    axis: str
    lo: float
    hi: float
    points: int
    compare_standard: bool = False
    routes: str = "lyapunov"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValidationError("axis", f"must be one of {AXES}, got {self.axis!r}")
        if not self.lo < self.hi:
            raise ValidationError("range", f"need lo < hi, got {self.lo}:{self.hi}")
        if not 2 <= self.points <= MAX_POINTS:
            raise ValidationError("points", f"must be in [2, {MAX_POINTS}]")
        if self.routes not in ROUTES:
            raise ValidationError("routes", f"must be one of {ROUTES}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    stable: bool
    n_f_lyapunov: Optional[float] = None
    n_f_spectral: Optional[float] = None
    gamma_eff: Optional[float] = None
    n_f_standard: Optional[float] = None
    branch_count: Optional[int] = None
    error: str = ""


COLUMNS = tuple(f.name for f in fields(SweepRow))


def sweep_point(p: ModelParams, spec: SweepSpec, value: float) -> SweepRow:
    """One sweep row. Numerical failures are recorded in the row, not raised."""
    q = at_axis(p, spec.axis, float(value))
    standard = None
    if spec.compare_standard:
        try:
            G = solve_steady_state(q).G
            res = standard_om_nf(StandardOMParams.comparable_to(q.replace(delta_c=float(value)), G))
            standard = res.n_f
        except DopedOMError as exc:
            log.debug("standard comparator failed at %s: %s", value, exc)
    try:
        r = evaluate_point(q, spec.routes)
    except (DopedOMError, ValueError) as exc:
        return SweepRow(axis_value=float(value), stable=False, n_f_standard=standard,
                        error=f"{type(exc).__name__}: {exc}")
    return SweepRow(
        axis_value=float(value),
        stable=r.stable,
        n_f_lyapunov=r.covariance.n_f_q if r.covariance is not None else None,
        n_f_spectral=r.spectrum.n_f_spectral if r.spectrum is not None else None,
        gamma_eff=r.gamma_eff,
        n_f_standard=standard,
        branch_count=r.steady.branch_count,
    )


def run_sweep(p: ModelParams, spec: SweepSpec, workers: int = 1) -> list:
    """Evaluate every sweep point; rows come back in axis order.

    With ``workers > 1`` points are spread over a process pool.
    """
    values = spec.values()
    task = partial(sweep_point, p, spec)
    if workers and workers > 1:
        chunk = max(1, len(values) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(task, values, chunksize=chunk))
    return [task(v) for v in values]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def sweep_metadata(p: ModelParams, spec: SweepSpec, timestamp: Optional[str] = None) -> list:
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta = [("tool", f"dopedom {__version__}"), ("timestamp", timestamp), ("units", UNITS),
            ("sweep.axis", spec.axis), ("sweep.range", f"{spec.lo!r}:{spec.hi!r}"),
            ("sweep.points", spec.points), ("sweep.routes", spec.routes),
            ("sweep.compare_standard", str(spec.compare_standard).lower())]
    meta += [(f"config.{k}", repr(v) if isinstance(v, float) else v)
             for k, v in params_to_dict(p).items()]
    if p.defaulted:
        meta.append(("config.defaults_applied", ",".join(p.defaulted)))
    return meta


def write_sweep_csv(path, rows, p: ModelParams, spec: SweepSpec,
                    timestamp: Optional[str] = None) -> None:
    """Write sweep rows: ``#``-prefixed metadata, the header, then one line per point.

    ``path`` may also be an open text stream.
    """
    if hasattr(path, "write"):
        _write_sweep(path, rows, p, spec, timestamp)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_sweep(fh, rows, p, spec, timestamp)


def _write_sweep(fh, rows, p, spec, timestamp):
    for key, value in sweep_metadata(p, spec, timestamp):
        fh.write(f"# {key}: {value}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_cell(getattr(row, c)) for c in COLUMNS])


def read_sweep_csv(path):
    """Parse a sweep CSV into ``(metadata, rows)``; rows are dicts of floats/None.

    Raises
    ------
    ConfigError
        the file does not follow the sweep CSV layout.
    """
    meta, lines = {}, []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition(":")
                if sep:
                    meta[key.strip()] = value.strip()
            elif line.strip():
                lines.append((lineno, line))
    if not lines:
        raise ConfigError("no header row found", line=None)
    reader = csv.reader([l for _, l in lines])
    header = next(reader)
    missing = [c for c in ("axis_value", "stable") if c not in header]
    if missing:
        raise ConfigError(f"header lacks columns {missing}", line=lines[0][0])
    rows = []
    for (lineno, _), cells in zip(lines[1:], reader):
        if len(cells) != len(header):
            raise ConfigError(f"expected {len(header)} cells, got {len(cells)}", line=lineno)
        row = {}
        for name, cell in zip(header, cells):
            if name == "stable":
                if cell not in ("true", "false"):
                    raise ConfigError(f"bad stable flag {cell!r}", line=lineno, field=name)
                row[name] = cell == "true"
            elif name == "error":
                row[name] = cell
            elif cell == "":
                row[name] = None
            else:
                try:
                    row[name] = float(cell)
                except ValueError:
                    raise ConfigError(f"not a number: {cell!r}", line=lineno, field=name) from None
        rows.append(row)
    return meta, rows


def emit_plot_data(csv_path, out_dir=None) -> dict:
    """Split a sweep CSV into per-curve two-column files (stable points only).

    Writes ``<stem>.doped.dat`` and ``<stem>.standard.dat``; values are
    written with ``repr`` so reloading reproduces them exactly. Returns a
    mapping ``curve -> path``.
    """
    csv_path = Path(csv_path)
    meta, rows = read_sweep_csv(csv_path)
    out_dir = Path(out_dir) if out_dir is not None else csv_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    axis = meta.get("sweep.axis", "axis_value")
    curves = {"doped": [], "standard": []}
    for row in rows:
        if row["stable"]:
            y = row.get("n_f_lyapunov")
            if y is None:
                y = row.get("n_f_spectral")
            if y is not None:
                curves["doped"].append((row["axis_value"], y))
        if row.get("n_f_standard") is not None:
            curves["standard"].append((row["axis_value"], row["n_f_standard"]))
    if not curves["doped"]:
        warnings.warn(f"{csv_path}: no stable points, doped curve is empty", stacklevel=2)
    paths = {}
    for name, pts in curves.items():
        path = out_dir / f"{csv_path.stem}.{name}.dat"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# curve: {name}\n# x: {axis}\n# y: n_f\n# yscale: log\n")
            for x, y in pts:
                fh.write(f"{x!r} {y!r}\n")
        paths[name] = path
    return paths


def read_plot_data(path) -> np.ndarray:
    """Load a curve file written by :func:`emit_plot_data` as an ``(n, 2)`` array."""
    with open(path, encoding="utf-8") as fh:
        pts = [line.split() for line in fh if line.strip() and not line.startswith("#")]
    return np.array(pts, dtype=float).reshape(-1, 2)


# --------------------------------------------------------------------------
# optimization
# --------------------------------------------------------------------------

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section(f, lo: float, hi: float, tol: float = 1e-9, max_iter: int = 200):
    """Minimize ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x), evaluations)`` for the best point seen, which for a
    non-unimodal ``f`` is still never worse than any evaluated point.
    """
    seen = []

    def ev(x):
        y = f(x)
        seen.append((y, x))
        return y

    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = ev(x1), ev(x2)
    for _ in range(max_iter):
        if hi - lo <= tol * max(1.0, abs(lo) + abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = ev(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = ev(x2)
    y, x = min(seen)
    return x, y, len(seen)


@dataclass(frozen=True)
class OptimizeResult:
    x: float
    n_f: float
    scan_x: np.ndarray
    scan_n_f: np.ndarray
    evaluations: int
    standard: bool = False


def _objective(p: ModelParams, axis: str, standard: bool, value: float) -> float:
    try:
        if standard:
            q = p.replace(delta_c=value)
            G = solve_steady_state(q).G
            r = standard_om_nf(StandardOMParams.comparable_to(q, G))
            return r.n_f if r.n_f is not None else math.inf
        q = at_axis(p, axis, value)
        L = linearize(q)
        verdict = check_stability(L)
        if not verdict.stable:
            return math.inf
        return solve_lyapunov(L, verdict).n_f_q
    except DopedOMError:
        return math.inf


def optimize_detuning(p: ModelParams, axis: str, lo: float, hi: float,
                      scan_points: int = 201, standard: bool = False,
                      tol: float = 1e-9) -> OptimizeResult:
    """Detuning minimizing the Lyapunov final occupation on ``[lo, hi]``.

    A coarse scan keeps only stable points; golden-section search then
    refines within the two scan cells around the best one. With
    ``standard=True`` the bare optomechanical comparator is optimized over
    the cavity detuning instead.

    Raises
    ------
    SolverError
        no stable point on the coarse scan.
    """
    if not lo < hi:
        raise ValidationError("range", "need lo < hi")
    if axis not in AXES:
        raise ValidationError("axis", f"must be one of {AXES}")
    f = partial(_objective, p, axis, standard)
    xs = np.linspace(lo, hi, scan_points)
    ys = np.array([f(x) for x in xs])
    if not np.isfinite(ys).any():
        raise SolverError(f"no stable point for {axis} in [{lo}, {hi}]")
    i = int(np.argmin(ys))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, scan_points - 1)]
    x, y, n = golden_section(f, a, b, tol=tol)
    if not y <= ys[i]:
        x, y = float(xs[i]), float(ys[i])
    return OptimizeResult(x=float(x), n_f=float(y), scan_x=xs, scan_n_f=ys,
                          evaluations=scan_points + n, standard=standard)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
