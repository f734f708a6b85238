"""End-to-end test pipeline and report emission.

The pipeline differences a loaded series, prewhitens it with an OLS
autoregression, and runs the uncorrected (Q_std) and variance-profile-
corrected (Q_mod) statistics on the residuals.  Reports expose every
choice made along the way (difference order, AR order and coefficients,
polynomial order and coefficients, window, threshold) so a run can be
audited or replicated from its output alone.
"""

from __future__ import annotations

import dataclasses
import io
import json
from dataclasses import dataclass, field

from varbreak.armodel import ArFit, default_max_order, fit_ar_ols, select_ar_order
from varbreak.cusum import statistic_corrected, statistic_subsample
from varbreak.dataio import SeriesFile, difference
from varbreak.errors import VarbreakError
from varbreak.mc import McResult, SimulationTable
from varbreak.nulldist import DecisionRule, pvalue
from varbreak.series import ResidualSeries, SubsampleWindow
from varbreak.variance_poly import (
    VariancePolyFit,
    check_positivity,
    fit_variance_poly,
    select_poly_order_aic,
)

REPORT_SCHEMA_VERSION = 1
MIN_PIPELINE_LENGTH = 10

FORMATS = ("human", "json", "csv")

_EXPERIMENT_CSV_HEADER = (
    "dgp,n,alpha,kappa,replications,seed,rate_std,se_std,rate_mod,se_mod,"
    "n_valid_std,n_valid_mod,critical_value,rule,failures"
)


@dataclass(frozen=True)
class PipelineConfig:
    """Choices of the end-to-end pipeline; all recorded in the reports."""

    diff_order: int = 1
    ar_order: int | None = None  # None selects by AIC
    ar_max_order: int | None = None  # None uses the frequency default
    ar_intercept: bool = True
    ar_demean: bool = False
    p_max: int = 5
    gamma: float | None = None  # None analyses the full residual sample
    offset_fraction: float = 0.0
    rule: DecisionRule = field(default_factory=DecisionRule.asymptotic)
    clamp: bool = False
    pos_floor_frac: float = 0.01


@dataclass(frozen=True)
class TestReport:
    """Outcome of one statistic on one series."""

    __test__ = False  # not a pytest class, despite the name

    kind: str  # "Q_std" | "Q_mod"
    statistic: float
    critical_value: float
    rule_source: str
    level: float | None
    p_value: float
    reject: bool
    source_id: str
    n_input: int
    diff_order: int
    dropped_missing: int
    ar_order: int
    ar_coefficients: tuple[float, ...]
    ar_intercept: float | None
    ar_demeaned: bool
    n_effective: int
    window_offset: int
    window_length: int
    window_gamma: float
    window_center: float
    poly_order: int | None = None
    poly_coefficients: tuple[float, ...] | None = None
    poly_rss: float | None = None
    poly_aic_scores: tuple[tuple[int, float], ...] | None = None
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def summary(self) -> str:
        lines = [
            f"{self.kind} on {self.source_id or 'series'} "
            f"(n={self.n_input}, diff={self.diff_order}, AR({self.ar_order}), "
            f"effective n={self.n_effective})",
            f"  statistic      {self.statistic:.6f}",
            f"  critical value {self.critical_value:.6f} [{self.rule_source}]",
            f"  p-value        {self.p_value:.6g}",
            f"  decision       {'reject' if self.reject else 'do not reject'} the no-break null",
        ]
        if self.poly_order is not None:
            lines.append(f"  variance poly  order {self.poly_order}, rss {self.poly_rss:.6g}")
        if self.warnings:
            lines.extend(f"  warning        {w}" for w in self.warnings)
        return "\n".join(lines)


def _stage(name: str, exc: VarbreakError) -> VarbreakError:
    return type(exc)(f"{name}: {exc}")


def run_test_pipeline(series: SeriesFile, config: PipelineConfig) -> tuple[TestReport, TestReport]:
    """Difference, prewhiten, and test a series; returns (Q_std, Q_mod) reports.

    Raises
    ------
    ValueError
        If the series is shorter than 10 observations or the
        configuration is inconsistent.
    VarbreakError
        Propagated from the failing stage with a stage label.
    """
    if series.n < MIN_PIPELINE_LENGTH:
        raise ValueError(
            f"need at least {MIN_PIPELINE_LENGTH} observations to run the tests, got {series.n}"
        )
    worked = difference(series, config.diff_order) if config.diff_order > 0 else series
    values = worked.values

    try:
        if config.ar_order is None:
            cap = (
                config.ar_max_order
                if config.ar_max_order is not None
                else default_max_order(values.size, worked.frequency)
            )
            order = select_ar_order(
                values, cap, demean=config.ar_demean, intercept=config.ar_intercept
            )
        else:
            order = config.ar_order
        ar_fit: ArFit = fit_ar_ols(
            values, order, demean=config.ar_demean, intercept=config.ar_intercept
        )
    except VarbreakError as exc:
        raise _stage("ar-fit", exc) from exc
    residuals: ResidualSeries = ar_fit.residuals

    if config.gamma is None:
        window = SubsampleWindow.full(residuals.n)
    else:
        window = SubsampleWindow.from_exponent(residuals.n, config.gamma, config.offset_fraction)

    try:
        q_std = statistic_subsample(residuals, window)
    except VarbreakError as exc:
        raise _stage("statistic-std", exc) from exc

    warnings: list[str] = []
    try:
        selection = select_poly_order_aic(residuals, window, config.p_max)
        poly_fit: VariancePolyFit = fit_variance_poly(residuals, window, selection.chosen_p)
    except VarbreakError as exc:
        raise _stage("variance-fit", exc) from exc
    positivity = check_positivity(poly_fit, config.pos_floor_frac)
    if not positivity.passed and config.clamp:
        warnings.append(
            f"variance profile floored at {positivity.floor:.6g} "
            f"(minimum {positivity.min_value:.6g} at t={positivity.t_min})"
        )
    try:
        q_mod = statistic_corrected(
            residuals,
            window,
            poly_fit,
            positivity="clamp" if config.clamp else "error",
            pos_floor_frac=config.pos_floor_frac,
        )
    except VarbreakError as exc:
        raise _stage("statistic-mod", exc) from exc

    common = dict(
        rule_source=config.rule.source,
        critical_value=config.rule.critical_value,
        level=config.rule.level,
        source_id=series.source_id,
        n_input=series.n,
        diff_order=config.diff_order,
        dropped_missing=series.dropped_missing,
        ar_order=ar_fit.order,
        ar_coefficients=ar_fit.coefficients,
        ar_intercept=ar_fit.intercept if ar_fit.with_intercept else None,
        ar_demeaned=ar_fit.demeaned,
        n_effective=residuals.n,
        window_offset=window.offset,
        window_length=window.length,
        window_gamma=window.gamma,
        window_center=window.center,
    )
    report_std = TestReport(
        kind="Q_std",
        statistic=q_std,
        p_value=pvalue(q_std),
        reject=config.rule.rejects(q_std),
        **common,
    )
    report_mod = TestReport(
        kind="Q_mod",
        statistic=q_mod,
        p_value=pvalue(q_mod),
        reject=config.rule.rejects(q_mod),
        poly_order=poly_fit.order,
        poly_coefficients=poly_fit.coefficients,
        poly_rss=poly_fit.rss,
        poly_aic_scores=selection.scores,
        warnings=tuple(warnings),
        **common,
    )
    return report_std, report_mod


def _experiment_row(result: McResult) -> str:
    spec = result.spec
    cells = [
        spec.dgp,
        str(spec.n),
        repr(float(spec.path.alpha)),
        repr(float(spec.path.kappa)),
        str(spec.replications),
        str(spec.seed),
        repr(result.rejection_rate_std),
        repr(result.se_std),
        repr(result.rejection_rate_mod),
        repr(result.se_mod),
        str(result.n_valid_std),
        str(result.n_valid_mod),
        repr(spec.decision.critical_value),
        spec.decision.source,
        ";".join(f"{name}:{count}" for name, count in result.failures),
    ]
    return ",".join(cells)


def _table_csv(table: SimulationTable) -> str:
    out = io.StringIO()
    columns = ",".join(f"n={n}" for n in table.ns)
    if table.kind == "size":
        out.write(f"statistic,{columns}\n")
        std = [repr(table.cell(n, 0.0).rejection_rate_std) for n in table.ns]
        mod = [repr(table.cell(n, 0.0).rejection_rate_mod) for n in table.ns]
        out.write("Q_std," + ",".join(std) + "\n")
        out.write("Q_mod," + ",".join(mod) + "\n")
    else:
        out.write(f"alpha,{columns}\n")
        for alpha in table.alphas:
            row = [repr(table.cell(n, alpha).rejection_rate_mod) for n in table.ns]
            out.write(f"{alpha:g}," + ",".join(row) + "\n")
    return out.getvalue()


def _table_dict(table: SimulationTable) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "simulation_table",
        "table": table.table,
        "table_kind": table.kind,
        "dgp": table.dgp,
        "ns": list(table.ns),
        "alphas": list(table.alphas),
        "decision": {
            "critical_value": table.results[0].spec.decision.critical_value,
            "source": table.results[0].spec.decision.source,
        },
        "cells": [
            {
                "n": r.spec.n,
                "alpha": r.spec.path.alpha,
                "seed": r.spec.seed,
                "replications": r.spec.replications,
                "rate_std": r.rejection_rate_std,
                "se_std": r.se_std,
                "rate_mod": r.rejection_rate_mod,
                "se_mod": r.se_mod,
                "n_valid_std": r.n_valid_std,
                "n_valid_mod": r.n_valid_mod,
                "failures": [list(f) for f in r.failures],
            }
            for r in table.results
        ],
    }


def _table_human(table: SimulationTable) -> str:
    lines = [
        f"table {table.table} ({table.kind}, {table.dgp}), "
        f"decision {table.results[0].spec.decision.label}",
    ]
    header = "".join(f"{'n=' + str(n):>12}" for n in table.ns)
    if table.kind == "size":
        lines.append(f"{'statistic':<10}{header}")
        for kind, attr in (("Q_std", "rejection_rate_std"), ("Q_mod", "rejection_rate_mod")):
            row = "".join(f"{getattr(table.cell(n, 0.0), attr):>12.1f}" for n in table.ns)
            lines.append(f"{kind:<10}{row}")
    else:
        lines.append(f"{'alpha':<10}{header}")
        for alpha in table.alphas:
            row = "".join(f"{table.cell(n, alpha).rejection_rate_mod:>12.1f}" for n in table.ns)
            lines.append(f"{alpha:<10g}{row}")
    return "\n".join(lines) + "\n"


def emit_report(reports, fmt: str = "human") -> str:
    """Serialize test reports, experiment results, or a whole grid.

    ``reports`` may be a :class:`SimulationTable`, a sequence of
    :class:`TestReport`, or a sequence of :class:`McResult` (an empty
    sequence is treated as experiment results).  Output is
    deterministic: the same inputs give byte-identical text, and JSON
    numbers round-trip losslessly.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    if isinstance(reports, SimulationTable):
        if fmt == "csv":
            return _table_csv(reports)
        if fmt == "json":
            return json.dumps(_table_dict(reports), sort_keys=True, indent=2) + "\n"
        return _table_human(reports)

    items = list(reports)
    if items and isinstance(items[0], TestReport):
        if fmt == "json":
            payload = {
                "schema_version": REPORT_SCHEMA_VERSION,
                "kind": "test_reports",
                "reports": [r.to_dict() for r in items],
            }
            return json.dumps(payload, sort_keys=True, indent=2) + "\n"
        if fmt == "csv":
            header = "kind,statistic,critical_value,rule,p_value,reject,ar_order,poly_order"
            rows = [
                ",".join(
                    [
                        r.kind,
                        repr(r.statistic),
                        repr(r.critical_value),
                        r.rule_source,
                        repr(r.p_value),
                        str(r.reject),
                        str(r.ar_order),
                        "" if r.poly_order is None else str(r.poly_order),
                    ]
                )
                for r in items
            ]
            return "\n".join([header] + rows) + "\n"
        return "\n\n".join(r.summary() for r in items) + "\n"

    # experiment results (possibly empty)
    if fmt == "csv":
        return "\n".join([_EXPERIMENT_CSV_HEADER] + [_experiment_row(r) for r in items]) + "\n"
    if fmt == "json":
        payload = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "experiments",
            "experiments": [
                {
                    "dgp": r.spec.dgp,
                    "n": r.spec.n,
                    "alpha": r.spec.path.alpha,
                    "kappa": r.spec.path.kappa,
                    "replications": r.spec.replications,
                    "seed": r.spec.seed,
                    "rate_std": r.rejection_rate_std,
                    "se_std": r.se_std,
                    "rate_mod": r.rejection_rate_mod,
                    "se_mod": r.se_mod,
                    "n_valid_std": r.n_valid_std,
                    "n_valid_mod": r.n_valid_mod,
                    "critical_value": r.spec.decision.critical_value,
                    "rule": r.spec.decision.source,
                    "failures": [list(f) for f in r.failures],
                }
                for r in items
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    lines = []
    for r in items:
        spec = r.spec
        lines.append(
            f"{spec.dgp} n={spec.n} alpha={spec.path.alpha:g}: "
            f"Q_std {r.rejection_rate_std:.1f}% (se {r.se_std:.2f}), "
            f"Q_mod {r.rejection_rate_mod:.1f}% (se {r.se_mod:.2f}) "
            f"[crit {spec.decision.critical_value:g}, N={spec.replications}]"
        )
    return "\n".join(lines) + "\n"
