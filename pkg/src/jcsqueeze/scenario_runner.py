"""Scenario configuration, time-series runs, parameter sweeps and file output."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import EngineDisagreementError, InvalidParameterError
from .field_states import DEFAULT_TAIL_EPS, CatFieldSpec, cat_amplitudes, choose_truncation
from .jc_evolution import (
    CONSISTENCY_THRESHOLD,
    QubitSpec,
    ValidationReport,
    closed_form_density,
    cross_validate,
    oracle_density,
)
from .squeezing_metrics import SqueezingSample, samples_from_table, squeezing_table

POINTS_PER_UNIT_TAU = 100


class Engine(str, Enum):
    ORACLE = "oracle"
    CLOSED_FORM = "closed_form"
    BOTH = "both"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class ScenarioConfig:
    qubit: QubitSpec
    field: CatFieldSpec
    tau_start: float = 0.0
    tau_end: float = 50.0
    n_points: int | None = None
    engine: Engine = Engine.ORACLE
    tail_eps: float = DEFAULT_TAIL_EPS
    output_path: str | None = None
    output_format: OutputFormat = OutputFormat.CSV
    agreement_threshold: float = CONSISTENCY_THRESHOLD
    n_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "engine", Engine(self.engine))
        object.__setattr__(self, "output_format", OutputFormat(self.output_format))
        if not (math.isfinite(self.tau_start) and math.isfinite(self.tau_end)):
            raise InvalidParameterError("tau bounds must be finite")
        if not self.tau_end > self.tau_start:
            raise InvalidParameterError(
                f"tau_end ({self.tau_end}) must exceed tau_start ({self.tau_start})"
            )
        if self.n_points is None:
            span = self.tau_end - self.tau_start
            object.__setattr__(self, "n_points", int(round(span * POINTS_PER_UNIT_TAU)) + 1)
        if self.n_points < 2:
            raise InvalidParameterError(f"need at least 2 grid points, got {self.n_points}")
        if not 0.0 < self.tail_eps < 1e-3:
            raise InvalidParameterError(f"tail_eps must lie in (0, 1e-3), got {self.tail_eps!r}")
        if not self.agreement_threshold > 0:
            raise InvalidParameterError("agreement threshold must be positive")
        if self.n_max is not None and self.n_max < 0:
            raise InvalidParameterError("n_max must be >= 0")

    def with_(self, **changes) -> "ScenarioConfig":
        """Copy with top-level fields or qubit/field parameters replaced.

        Accepts theta, phi, n_bar, beta, rho_c besides the dataclass fields.
        """
        qubit = {k: changes.pop(k) for k in ("theta", "phi") if k in changes}
        fld = {k: changes.pop(k) for k in ("n_bar", "beta", "rho_c") if k in changes}
        if qubit:
            changes["qubit"] = replace(self.qubit, **qubit)
        if fld:
            changes["field"] = replace(self.field, **fld)
        if ("tau_start" in changes or "tau_end" in changes) and "n_points" not in changes:
            changes["n_points"] = None
        return replace(self, **changes)

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_start, self.tau_end, self.n_points)

    def resolved_n_max(self) -> int:
        if self.n_max is not None:
            return self.n_max
        return choose_truncation(self.field.n_bar, self.tail_eps)

    def to_dict(self) -> dict:
        return {
            "theta": self.qubit.theta,
            "phi": self.qubit.phi,
            "n_bar": self.field.n_bar,
            "beta": self.field.beta,
            "rho_c": self.field.rho_c,
            "tau_start": self.tau_start,
            "tau_end": self.tau_end,
            "n_points": self.n_points,
            "engine": self.engine.value,
            "tail_eps": self.tail_eps,
            "n_max": self.resolved_n_max(),
            "agreement_threshold": self.agreement_threshold,
        }


@dataclass
class TimeSeries:
    config: ScenarioConfig
    samples: list[SqueezingSample]
    table: dict[str, np.ndarray] = field(repr=False)
    validation: ValidationReport | None = None
    closed_form_table: dict[str, np.ndarray] | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, name) -> np.ndarray:
        return self.table[name]

    @property
    def taus(self) -> np.ndarray:
        return self.table["tau"]

    def check_agreement(self):
        """Raise EngineDisagreementError if the attached report is DISCREPANT."""
        if self.validation is not None and not self.validation.consistent:
            raise EngineDisagreementError(
                "closed-form series disagrees with the exact evolution "
                f"(max |d rho_ee| = {self.validation.max_dev_ee:.3e}, "
                f"max |d rho_eg| = {self.validation.max_dev_eg:.3e})",
                report=self.validation,
            )


def run_time_series(config: ScenarioConfig) -> TimeSeries:
    taus = config.taus()
    n_max = config.resolved_n_max()

    if config.engine is Engine.CLOSED_FORM:
        rho = closed_form_density(config.qubit, config.field, taus, n_max)
        table = squeezing_table(rho, taus)
        return TimeSeries(config, samples_from_table(table), table)

    field_amps = cat_amplitudes(config.field, n_max)
    table = squeezing_table(oracle_density(config.qubit, field_amps, taus), taus)
    series = TimeSeries(config, samples_from_table(table), table)
    if config.engine is Engine.BOTH:
        # The closed form may be unphysical when it is wrong; keep it for forensics.
        rho = closed_form_density(config.qubit, config.field, taus, n_max)
        series.closed_form_table = squeezing_table(rho, taus, strict=False)
        series.validation = cross_validate(
            config.qubit, config.field, taus, n_max, threshold=config.agreement_threshold
        )
    return series


def run_theta_sweep(base: ScenarioConfig, thetas) -> list[TimeSeries]:
    return [run_time_series(base.with_(theta=float(t))) for t in thetas]


def run_nbar_sweep(base: ScenarioConfig, nbars) -> list[TimeSeries]:
    return [run_time_series(base.with_(n_bar=float(n))) for n in nbars]


@dataclass(frozen=True)
class RhoCDeviation:
    rho_c: float
    max_dev_e_x: float
    max_dev_e_y: float


def run_rho_c_compare(base: ScenarioConfig, rho_cs) -> list[RhoCDeviation]:
    """Largest pointwise change of E_x and E_y relative to the rho_c = 0 run."""
    reference = run_time_series(base.with_(rho_c=0.0, engine=Engine.ORACLE))
    rows = []
    for rho_c in rho_cs:
        series = run_time_series(base.with_(rho_c=float(rho_c), engine=Engine.ORACLE))
        rows.append(RhoCDeviation(
            float(rho_c),
            float(np.max(np.abs(series["e_x"] - reference["e_x"]))),
            float(np.max(np.abs(series["e_y"] - reference["e_y"]))),
        ))
    return rows


CSV_COLUMNS = (
    ("tau", "tau"),
    ("E_x", "e_x"),
    ("E_y", "e_y"),
    ("H_x", "h_x"),
    ("H_y", "h_y"),
    ("H_z", "h_z"),
    ("V_x", "v_x"),
    ("V_y", "v_y"),
    ("exp_x", "exp_x"),
    ("exp_y", "exp_y"),
    ("exp_z", "exp_z"),
    ("rho_ee", "rho_ee"),
    ("re_rho_eg", None),
    ("im_rho_eg", None),
    ("entropy_sum_slack", "entropy_sum_slack"),
)


def _output_columns(table) -> list[tuple[str, np.ndarray]]:
    out = []
    for header, key in CSV_COLUMNS:
        if header == "re_rho_eg":
            out.append((header, np.real(table["rho_eg"])))
        elif header == "im_rho_eg":
            out.append((header, np.imag(table["rho_eg"])))
        else:
            out.append((header, np.asarray(table[key], dtype=float)))
    return out


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _json_number(x: float) -> str:
    return _fmt(x) if math.isfinite(x) else "null"


def render_csv(table) -> str:
    cols = _output_columns(table)
    lines = [",".join(h for h, _ in cols)]
    for row in zip(*(c.tolist() for _, c in cols)):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(table, config: ScenarioConfig, validation: ValidationReport | None = None) -> str:
    cols = _output_columns(table)
    names = [h for h, _ in cols]
    body = []
    for row in zip(*(c.tolist() for _, c in cols)):
        body.append("{" + ", ".join(f'"{n}": {_json_number(v)}' for n, v in zip(names, row)) + "}")
    head = {"config": config.to_dict()}
    if validation is not None:
        report = asdict(validation)
        report["offending_terms"] = list(report["offending_terms"])
        head["validation"] = report
    text = json.dumps(head, indent=2, sort_keys=True)
    return text[:-2] + ',\n  "samples": [\n    ' + ",\n    ".join(body) + "\n  ]\n}\n"


def companion_path(path, tag: str, suffix: str | None = None) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}{suffix if suffix is not None else path.suffix}")


def emit(series: TimeSeries, path, fmt=OutputFormat.CSV) -> list[Path]:
    """Write the series to ``path``; returns every file written.

    With both engines the closed-form series and the validation report go to
    companion files next to ``path``.
    """
    fmt = OutputFormat(fmt)
    path = Path(path)

    def render(table, validation=None):
        if fmt is OutputFormat.CSV:
            return render_csv(table)
        return render_json(table, series.config, validation)

    written = [path]
    path.write_text(render(series.table, series.validation))
    if series.closed_form_table is not None:
        cf_path = companion_path(path, "closed_form")
        cf_path.write_text(render(series.closed_form_table))
        written.append(cf_path)
    if series.validation is not None:
        report_path = companion_path(path, "validation", ".txt")
        report_path.write_text(series.validation.render() + "\n")
        written.append(report_path)
    return written


def render_rho_c_table(rows: list[RhoCDeviation]) -> str:
    lines = ["rho_c,max_dev_E_x,max_dev_E_y"]
    lines += [f"{_fmt(r.rho_c)},{_fmt(r.max_dev_e_x)},{_fmt(r.max_dev_e_y)}" for r in rows]
    return "\n".join(lines) + "\n"


PI = math.pi

# Named parameter regimes. Long-time views use [0, 50], short-time ones [0, 5].
_FIG_BASE = dict(theta=PI / 2, phi=PI / 2, n_bar=25.0, beta=PI / 4, rho_c=PI / 6)
FIG3_THETAS = (0.0, PI / 6, 2 * PI / 6, 5 * PI / 6, PI)
FIG4_NBARS = (15.0, 5.0, 0.5, 0.05)


def _preset(theta, phi, n_bar, beta, rho_c, tau_end=50.0) -> ScenarioConfig:
    return ScenarioConfig(QubitSpec(theta, phi), CatFieldSpec(n_bar, beta, rho_c), 0.0, tau_end)


def _build_presets() -> dict[str, ScenarioConfig]:
    presets = {
        "fig1_caption": _preset(**_FIG_BASE),
        "fig1_caption_short": _preset(**_FIG_BASE, tau_end=5.0),
        # Alternative reading of the same regime: qubit in |e>, beta = 0.
        "fig1_text": _preset(**{**_FIG_BASE, "theta": 0.0, "beta": 0.0}),
        "fig2": _preset(**{**_FIG_BASE, "rho_c": 0.0}, tau_end=5.0),
    }
    for letter, theta in zip("abcde", FIG3_THETAS):
        presets[f"fig3{letter}"] = _preset(**{**_FIG_BASE, "theta": theta})
    for letter, n_bar in zip("abcd", FIG4_NBARS):
        presets[f"fig4{letter}"] = _preset(**{**_FIG_BASE, "n_bar": n_bar})
    return presets


PRESETS = _build_presets()
