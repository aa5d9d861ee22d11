"""Tabular output: front CSV/JSON, percentile summaries, sensitivity tables."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .config import RunConfig, SensitivitySpec, config_to_dict
from .economics import LITERAL, NO_IN_CONTROL_COST, cost_breakdown
from .moea import FrontRow, MoeaConfig, ParetoFront, evolve
from .run_length import arl_profile

__all__ = [
    "FRONT_HEADER",
    "PERCENTILES",
    "SensitivityRow",
    "front_csv",
    "front_json",
    "metadata",
    "percentile_summary",
    "plot_csv",
    "run_optimize",
    "run_sensitivity",
    "sensitivity_csv",
    "summary_csv",
]

FRONT_HEADER = ("C_E", "ARL_delta", "n", "h", "H")
PERCENTILES = (1,) + tuple(range(5, 101, 5))
SUMMARY_ORDERING = "ascending C_E, nearest-rank percentile"


def metadata(cfg: RunConfig) -> dict[str, Any]:
    return {
        "package": f"cusumopt {__version__}",
        "numpy": np.__version__,
        "seed": cfg.moea.rng_seed,
        "variant": cfg.variant.name,
        "constraint_policy": cfg.constraints.policy.value,
        "config": {k: v for k, v in config_to_dict(cfg).items() if k != "output"},
    }


def run_optimize(cfg: RunConfig, on_generation=None) -> ParetoFront:
    return evolve(cfg.problem(), cfg.moea, on_generation=on_generation)


def percentile_summary(front: ParetoFront,
                       percentiles: Sequence[int] = PERCENTILES) -> list[tuple[int, FrontRow]]:
    """Rows at nearest-rank percentiles of the front ordered by C_E.

    Neighbouring percentiles may land on the same row; it is repeated.
    """
    m = len(front)
    if m == 0:
        return []
    return [(p, front[max(math.ceil(p / 100 * m) - 1, 0)]) for p in percentiles]


def _fmt_row(row: FrontRow) -> list[str]:
    d = row.design
    return [f"{row.objectives[0]:.2f}", f"{row.objectives[1]:.2f}", str(d.n),
            f"{d.h:.2f}", f"{d.decision_interval:.2f}"]


def _comment_block(meta: dict[str, Any]) -> str:
    lines = []
    for key, value in meta.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"# {key}: {value}\n")
    return "".join(lines)


def _csv_text(meta: dict[str, Any] | None, header: Iterable[str],
              rows: Iterable[Iterable[Any]]) -> str:
    buf = io.StringIO()
    if meta is not None:
        buf.write(_comment_block(meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def front_csv(front: ParetoFront, meta: dict[str, Any] | None = None) -> str:
    """Full front, two decimals, header ``C_E,ARL_delta,n,h,H`` after a ``#`` metadata block."""
    return _csv_text(meta, FRONT_HEADER, (_fmt_row(r) for r in front))


def summary_csv(front: ParetoFront, meta: dict[str, Any] | None = None) -> str:
    if meta is not None:
        meta = {**meta, "ordering": SUMMARY_ORDERING}
    rows = ([str(p)] + _fmt_row(r) for p, r in percentile_summary(front))
    return _csv_text(meta, ("percentile",) + FRONT_HEADER, rows)


def plot_csv(front: ParetoFront, meta: dict[str, Any] | None = None) -> str:
    return _csv_text(meta, ("C_E", "ARL_delta"),
                     ([repr(r.objectives[0]), repr(r.objectives[1])] for r in front))


def _row_dict(row: FrontRow, cfg: RunConfig) -> dict[str, Any]:
    d = row.design
    rl = arl_profile(cfg.process.delta, d.decision_interval)
    return {
        "C_E": row.objectives[0],
        "ARL_delta": row.objectives[1],
        "n": d.n,
        "h": d.h,
        "H": d.decision_interval,
        "feasible": row.feasible,
        "ARL_0": rl.arl0,
        "C_E_literal": cost_breakdown(d, cfg.process, cfg.costs, rl, LITERAL).total,
        "C_E_no_in_control_cost": cost_breakdown(d, cfg.process, cfg.costs, rl,
                                                 NO_IN_CONTROL_COST).total,
    }


def front_json(front: ParetoFront, cfg: RunConfig) -> str:
    """Full-precision front, percentile summary and plot data in one document."""
    rows = [_row_dict(r, cfg) for r in front]
    doc = {
        "metadata": {**metadata(cfg), "ordering": SUMMARY_ORDERING},
        "rows": rows,
        "summary": [{"percentile": p, **_row_dict(r, cfg)} for p, r in percentile_summary(front)],
        "plot": [[r["C_E"], r["ARL_delta"]] for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class SensitivityRow:
    factor: str
    level: str
    value: float
    endpoint: str
    row: FrontRow | None
    error: str = ""


def run_sensitivity(cfg: RunConfig, specs: Sequence[SensitivitySpec],
                    moea: MoeaConfig | None = None) -> list[SensitivityRow]:
    """Re-optimize with each factor at its low and high level, all else at ``cfg``.

    Each level contributes its min-C_E and max-C_E front endpoints.  Runs with
    identical configurations are shared.  A failing factor yields rows with
    ``error`` set and the sweep moves on.
    """
    if moea is not None:
        cfg = RunConfig(cfg.process, cfg.costs, cfg.space, cfg.constraints, moea, cfg.variant,
                        cfg.output)
    cache: dict[str, ParetoFront] = {}
    out: list[SensitivityRow] = []
    for spec in specs:
        for level, value in (("low", spec.low), ("high", spec.high)):
            try:
                run_cfg = cfg.with_factor(spec.factor, value)
                key = json.dumps(config_to_dict(run_cfg), sort_keys=True)
                if key not in cache:
                    cache[key] = run_optimize(run_cfg)
                front = cache[key]
                if len(front) == 0:
                    raise RuntimeError("optimizer returned an empty front")
                lo, hi = front.endpoints()
                out.append(SensitivityRow(spec.factor, level, value, "min_C_E", lo))
                out.append(SensitivityRow(spec.factor, level, value, "max_C_E", hi))
            except (ValueError, RuntimeError, ArithmeticError) as exc:
                out.append(SensitivityRow(spec.factor, level, value, "error", None, str(exc)))
    return out


def sensitivity_csv(rows: Sequence[SensitivityRow], meta: dict[str, Any] | None = None) -> str:
    header = ("factor", "level", "value", "endpoint") + FRONT_HEADER + ("error",)
    body = []
    for r in rows:
        cells = _fmt_row(r.row) if r.row is not None else [""] * len(FRONT_HEADER)
        body.append([r.factor, r.level, repr(r.value), r.endpoint] + cells + [r.error])
    return _csv_text(meta, header, body)
