"""Report assembly and serialization (CSV and JSON).

Serialization is deterministic on purpose: floats are written with
repr (shortest round-trip form), rows follow the input order of the
configuration, and CSV uses a bare "\n" terminator.  Two runs with the
same configuration and seed must produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .analysis import (
    CoefficientCheck,
    CorrelationReport,
    LowLevelMassReport,
    TrendTable,
    correlation_report,
    degree_pattern_checks,
    low_level_mass,
    trend_table,
)
from .arithmetic import (
    PairCorrelationMax,
    VonMangoldtTable,
    chebyshev_psi,
    pair_correlation_max,
)
from .config import RunConfig
from .cube import LevelProfile, level_profile, wht_forward
from .monotone import TailReport, materialize, parse_spec, tail_report
from .smoothing import (
    MeanConstantCheck,
    SmoothedMoments,
    mean_constant_check,
    smooth_von_mangoldt,
    smoothed_moments,
)

CORRELATION_COLUMNS = (
    "n",
    "spec",
    "mean_f",
    "sum_lambda_f",
    "theorem_ratio",
    "pairing_tilde",
    "mean_term",
    "low_term",
    "high_term",
    "K",
)

TAIL_COLUMNS = (
    "n",
    "spec",
    "K",
    "cutoff",
    "tail",
    "bound",
    "total_influence_fw",
    "degree1_sum",
)

MOMENT_COLUMNS = (
    "n",
    "psi_ratio",
    "mean",
    "l1",
    "l2",
    "l2_ratio",
    "residual_vs_half_n_plus_1",
    "residual_vs_half_n_minus_1",
    "supported_constant",
    "pair_corr_max",
    "pair_corr_j",
    "pair_corr_k",
)

LOW_MASS_COLUMNS = (
    "n",
    "n0",
    "mass",
    "largest_coeff",
    "largest_mask",
    "level_mass",
)

COEFFICIENT_COLUMNS = ("n", "label", "observed", "predicted", "max_abs_err")

TREND_COLUMNS = ("metric", "n", "value", "flag", "detail")


@dataclass(frozen=True)
class RunResult:
    """Everything computed for one cube dimension."""

    n: int
    psi_ratio: float
    moments: SmoothedMoments
    mean_check: MeanConstantCheck
    pair_max: PairCorrelationMax | None
    coefficient_checks: tuple[CoefficientCheck, ...]
    low_mass: LowLevelMassReport
    correlations: tuple[CorrelationReport, ...]
    tails: tuple[tuple[str, TailReport], ...]
    lam_profile: LevelProfile
    smoothed_profile: LevelProfile
    zoo_profiles: tuple[tuple[str, LevelProfile], ...]


@dataclass(frozen=True)
class ReportBundle:
    config: dict
    runs: tuple[RunResult, ...]
    trends: tuple[TrendTable, ...]


def build_report(
    cfg: RunConfig,
    table_provider: Callable[[int], VonMangoldtTable],
) -> ReportBundle:
    """Assemble every table of the report; writes nothing."""
    cfg.validate()
    sizes = sorted(set(cfg.n_values))
    runs: list[RunResult] = []
    for n in sizes:
        table = table_provider(n)
        lam_hat = wht_forward(table.vector)
        smoothed = smooth_von_mangoldt(table)
        smoothed_hat = wht_forward(smoothed)
        zoo_specs = [parse_spec(text, n, default_seed=cfg.seed) for text in cfg.zoo]

        correlations: list[CorrelationReport] = []
        tails: list[tuple[str, TailReport]] = []
        profiles: list[tuple[str, LevelProfile]] = []
        for spec in zoo_specs:
            f = materialize(spec, max_n=cfg.max_n)
            f_hat = wht_forward(f)
            label = spec.describe()
            correlations.append(
                correlation_report(
                    f,
                    table,
                    smoothed,
                    cfg.K,
                    description=label,
                    f_hat=f_hat,
                    smoothed_hat=smoothed_hat,
                    verify_seed=cfg.seed,
                )
            )
            tails.append((label, tail_report(f_hat, cfg.K)))
            profiles.append((label, level_profile(f_hat)))

        runs.append(
            RunResult(
                n=n,
                psi_ratio=chebyshev_psi(table, table.size - 1) / table.size,
                moments=smoothed_moments(smoothed),
                mean_check=mean_constant_check(smoothed),
                pair_max=pair_correlation_max(table) if n >= 2 else None,
                coefficient_checks=degree_pattern_checks(smoothed_hat),
                low_mass=low_level_mass(lam_hat, min(cfg.n0, n)),
                correlations=tuple(correlations),
                tails=tuple(tails),
                lam_profile=level_profile(lam_hat),
                smoothed_profile=level_profile(smoothed_hat),
                zoo_profiles=tuple(profiles),
            )
        )

    trends: list[TrendTable] = []
    if len(sizes) >= 2:
        for metric in ("low_level_mass", "l2_ratio", "pair_correlation_max"):
            trends.append(
                trend_table(metric, sizes, n0=cfg.n0, table_provider=table_provider)
            )
        if cfg.zoo:
            trends.append(
                trend_table(
                    "theorem_ratio",
                    sizes,
                    zoo_spec=cfg.zoo[0],
                    K=cfg.K,
                    table_provider=table_provider,
                )
            )

    return ReportBundle(config=_config_summary(cfg), runs=tuple(runs), trends=tuple(trends))


def _config_summary(cfg: RunConfig) -> dict:
    return {
        "n_values": list(sorted(set(cfg.n_values))),
        "zoo": list(cfg.zoo),
        "K": cfg.K,
        "n0": cfg.n0,
        "format": cfg.fmt,
        "seed": cfg.seed,
        "max_n": cfg.max_n,
    }


def _cell(value) -> str:
    # repr keeps the shortest decimal that round-trips, giving stable
    # bytes without truncating precision.
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_rows(path: Path, columns: tuple[str, ...], rows: list[tuple]) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def correlation_rows(bundle: ReportBundle) -> list[tuple]:
    rows = []
    for run in bundle.runs:
        for rep in run.correlations:
            rows.append(
                (
                    run.n,
                    rep.description,
                    rep.mean_f,
                    rep.sum_lambda_f,
                    rep.theorem_ratio,
                    rep.pairing_tilde,
                    rep.mean_term,
                    rep.low_term,
                    rep.high_term,
                    rep.K,
                )
            )
    return rows


def write_csv(bundle: ReportBundle, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    written.append(
        _write_rows(out_dir / "correlation.csv", CORRELATION_COLUMNS, correlation_rows(bundle))
    )

    tail_rows = []
    for run in bundle.runs:
        for label, rep in run.tails:
            tail_rows.append(
                (run.n, label, rep.K, rep.cutoff, rep.tail, rep.bound,
                 rep.total_influence_fw, rep.degree1_sum)
            )
    written.append(_write_rows(out_dir / "tails.csv", TAIL_COLUMNS, tail_rows))

    moment_rows = []
    for run in bundle.runs:
        pm = run.pair_max
        moment_rows.append(
            (
                run.n,
                run.psi_ratio,
                run.moments.mean,
                run.moments.l1,
                run.moments.l2,
                run.moments.l2_ratio,
                run.mean_check.residual_upper,
                run.mean_check.residual_lower,
                run.mean_check.supported,
                pm.ratio if pm else None,
                pm.j if pm else None,
                pm.k if pm else None,
            )
        )
    written.append(_write_rows(out_dir / "moments.csv", MOMENT_COLUMNS, moment_rows))

    mass_rows = []
    for run in bundle.runs:
        lm = run.low_mass
        mass_rows.append(
            (
                lm.n,
                lm.n0,
                lm.mass,
                lm.largest_coeff,
                lm.largest_mask,
                ";".join(repr(v) for v in lm.level_mass),
            )
        )
    written.append(_write_rows(out_dir / "low_level_mass.csv", LOW_MASS_COLUMNS, mass_rows))

    coeff_rows = []
    for run in bundle.runs:
        for check in run.coefficient_checks:
            coeff_rows.append((run.n, check.label, check.observed, check.predicted, check.max_abs_err))
    written.append(_write_rows(out_dir / "coefficients.csv", COEFFICIENT_COLUMNS, coeff_rows))

    trend_rows = []
    for trend in bundle.trends:
        for n, value in trend.rows:
            trend_rows.append((trend.metric, n, value, trend.flag, trend.detail))
    written.append(_write_rows(out_dir / "trends.csv", TREND_COLUMNS, trend_rows))

    return written


def _correlation_dict(n: int, rep: CorrelationReport) -> dict:
    return {
        "n": n,
        "spec": rep.description,
        "mean_f": rep.mean_f,
        "sum_lambda_f": rep.sum_lambda_f,
        "theorem_ratio": rep.theorem_ratio,
        "pairing_tilde": rep.pairing_tilde,
        "mean_term": rep.mean_term,
        "low_term": rep.low_term,
        "high_term": rep.high_term,
        "K": rep.K,
        "high_term_bound": rep.high_term_bound,
        "f_tail_mass": rep.f_tail_mass,
        "smoothed_l2": rep.smoothed_l2,
        "pairing_lhs": rep.pairing_lhs,
        "pairing_rhs": rep.pairing_rhs,
        "warnings": list(rep.warnings),
    }


def write_json(bundle: ReportBundle, out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {
        "config": bundle.config,
        "runs": [],
        "trends": [
            {
                "metric": t.metric,
                "rows": [{"n": n, "value": v} for n, v in t.rows],
                "flag": t.flag,
                "detail": t.detail,
            }
            for t in bundle.trends
        ],
    }
    for run in bundle.runs:
        doc["runs"].append(
            {
                "n": run.n,
                "psi_ratio": run.psi_ratio,
                "moments": {
                    "mean": run.moments.mean,
                    "l1": run.moments.l1,
                    "l2": run.moments.l2,
                    "l2_ratio": run.moments.l2_ratio,
                },
                "mean_constant": {
                    "mean": run.mean_check.mean,
                    "residual_vs_half_n_plus_1": run.mean_check.residual_upper,
                    "residual_vs_half_n_minus_1": run.mean_check.residual_lower,
                    "supported": run.mean_check.supported,
                },
                "pair_correlation_max": (
                    {"ratio": run.pair_max.ratio, "j": run.pair_max.j, "k": run.pair_max.k}
                    if run.pair_max
                    else None
                ),
                "coefficient_checks": [
                    {
                        "label": c.label,
                        "observed": c.observed,
                        "predicted": c.predicted,
                        "max_abs_err": c.max_abs_err,
                    }
                    for c in run.coefficient_checks
                ],
                "low_level_mass": {
                    "n0": run.low_mass.n0,
                    "mass": run.low_mass.mass,
                    "level_mass": list(run.low_mass.level_mass),
                    "largest_coeff": run.low_mass.largest_coeff,
                    "largest_mask": run.low_mass.largest_mask,
                },
                "correlations": [_correlation_dict(run.n, rep) for rep in run.correlations],
                "tails": [
                    {
                        "spec": label,
                        "K": rep.K,
                        "cutoff": rep.cutoff,
                        "tail": rep.tail,
                        "bound": rep.bound,
                        "total_influence_fw": rep.total_influence_fw,
                        "degree1_sum": rep.degree1_sum,
                    }
                    for label, rep in run.tails
                ],
                "level_profiles": {
                    "von_mangoldt": run.lam_profile.mass.tolist(),
                    "smoothed": run.smoothed_profile.mass.tolist(),
                    "zoo": {label: p.mass.tolist() for label, p in run.zoo_profiles},
                },
            }
        )
    path = out_dir / "report.json"
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return path
