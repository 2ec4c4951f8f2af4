"""Parameter sweeps, figure-reproduction packs, and CSV emission.

A sweep scans one witness across a parameter grid (mean photon number for
thermal states, amplitude for even coherent states) for a list of state
variants and collects one value series per variant. Figure packs bundle the
exact (l, p, q) combinations of the reference plots:

    fig1 / fig2    Mandel function vs parameter        (thermal / even cat)
    fig3 / fig4    higher-order antibunching
    fig5 / fig6    higher-order sub-Poissonian
    fig7 / fig8    Husimi Q grids over the beta plane
    fig9 / fig10   Hong-Mandel squeezing
    fig11 / fig12  Agarwal-Tara A3

All output is deterministic: identical configuration gives byte-identical
CSV files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import oracle as oracle_mod
from . import states as states_mod
from . import witnesses as witnesses_mod
from .errors import DegenerateState, SingularDenominator
from .states import EngineeringOp, StateSpec

# Defaults reconstructed from the plots' visual ranges (not ground truth).
RBAR_WINDOW = (0.01, 5.0)
ALPHA_WINDOW = (0.01, 3.0)
BETA_WINDOW = (-4.0, 4.0)
SWEEP_STEPS = 200
HUSIMI_STEPS = 121

FIGURE_IDS = tuple(f"fig{i}" for i in range(1, 13))

# (order l, p, q) per panel for the moment-based figure rows
_PANEL_COMBOS = {
    "mandel": ((2, 1, 1), (3, 1, 2), (4, 2, 1)),
    "hoa": ((2, 1, 1), (3, 1, 2), (4, 2, 1)),
    "hosps": ((2, 1, 1), (3, 1, 2), (4, 2, 1)),
    "hos": ((2, 1, 1), (4, 1, 2), (6, 2, 1)),
}

_A3_PANEL_OPS = ((1, 1), (1, 2), (2, 1), (0, 0))

# (p, q, parameter) per Husimi panel; the bare panel reuses the first
# captioned parameter value
_HUSIMI_PANELS = ((2, 4, 2.0), (4, 2, 4.0))


@dataclass
class SweepTable:
    """One witness series per variant over a common parameter grid."""

    parameter_name: str
    parameter_values: list[float]
    series: dict[str, list[float]]
    metadata: dict = field(default_factory=dict)


@dataclass
class HusimiGrid:
    """Q values on a rectangular grid in the complex beta plane."""

    label: str
    re_values: list[float]
    im_values: list[float]
    q_values: list[list[float]]  # q_values[i][j] at beta = re[j] + i*im[i]
    metadata: dict = field(default_factory=dict)


@dataclass
class FigurePack:
    figure_id: str
    panels: list[tuple[str, object]]  # (panel name, SweepTable | HusimiGrid)


def _grid(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    h = (hi - lo) / (steps - 1)
    return [lo + i * h for i in range(steps)]


def _spec_for(family: str, op: EngineeringOp, value: float) -> StateSpec:
    if family == states_mod.FAMILY_THERMAL:
        return StateSpec.thermal(value, op)
    return StateSpec.even_coherent(value, op)


def _parameter_name(family: str) -> str:
    return "rbar" if family == states_mod.FAMILY_THERMAL else "alpha"


def _witness_value(spec: StateSpec, witness_id: str, order: int, engine: str) -> float:
    result = witnesses_mod.evaluate_witness(spec, witness_id, order=order, engine=engine)
    return result.value


def sweep(
    witness_id: str,
    order: int,
    variants: list[EngineeringOp],
    family: str,
    param_range: dict | None = None,
    engine: str = "analytic",
    include_bare: bool = False,
) -> SweepTable:
    """Scan one witness over a parameter grid for several state variants.

    param_range is {"min": .., "max": .., "steps": ..}; defaults follow the
    plotted windows. engine may be "analytic", "oracle", or "both"; "both"
    emits a paired `label@oracle` series per variant and records the maximum
    analytic/oracle relative deviation in the metadata. A DegenerateState or
    an indeterminate determinant witness at a single grid point records a
    NaN gap, not a failure.
    """
    if engine not in ("analytic", "oracle", "both"):
        raise ValueError(f"unknown engine {engine!r}")
    lo, hi = RBAR_WINDOW if family == states_mod.FAMILY_THERMAL else ALPHA_WINDOW
    steps = SWEEP_STEPS
    if param_range:
        lo = float(param_range.get("min", lo))
        hi = float(param_range.get("max", hi))
        steps = int(param_range.get("steps", steps))
    if lo < 0 or hi <= lo:
        raise ValueError("parameter range must be non-negative and increasing")
    values = _grid(lo, hi, steps)

    ops = list(variants)
    if include_bare and not any(op.order == states_mod.ORDER_NONE for op in ops):
        ops.append(EngineeringOp.bare())

    engines = ("analytic", "oracle") if engine == "both" else (engine,)
    series: dict[str, list[float]] = {}
    for op in ops:
        for eng in engines:
            label = op.label() if eng == engines[0] else f"{op.label()}@oracle"
            out = []
            for value in values:
                try:
                    out.append(_witness_value(_spec_for(family, op, value), witness_id, order, eng))
                except (DegenerateState, SingularDenominator):
                    out.append(math.nan)
            series[label] = out

    metadata = {
        "witness": witness_id,
        "order": order,
        "family": family,
        "engine": engine,
        "variants": [op.label() for op in ops],
    }
    if engine == "both":
        # relative above magnitude 1, absolute below (witness values near the
        # classical boundary are legitimately zero on both engines)
        deviations = {}
        for op in ops:
            pairs = zip(series[op.label()], series[f"{op.label()}@oracle"])
            deviations[op.label()] = max(
                (
                    abs(a - b) / max(abs(b), 1.0)
                    for a, b in pairs
                    if not (math.isnan(a) or math.isnan(b))
                ),
                default=0.0,
            )
        metadata["max_deviation"] = deviations
    return SweepTable(_parameter_name(family), values, series, metadata)


def husimi_grid(
    spec: StateSpec,
    label: str,
    window: tuple[float, float] = BETA_WINDOW,
    steps: int = HUSIMI_STEPS,
    engine: str = "analytic",
) -> HusimiGrid:
    """Husimi Q on a square grid; rows scan Im(beta), columns Re(beta)."""
    axis = _grid(window[0], window[1], steps)
    state = None
    if engine in ("oracle", "both"):
        corner = max(abs(window[0]), abs(window[1]))
        state = oracle_mod.build_truncated(spec, min_cutoff=int(8 * corner ** 2) + 8)
    rows = []
    max_dev = 0.0
    for im in axis:
        row = []
        for re in axis:
            beta = complex(re, im)
            if engine == "oracle":
                q = oracle_mod.oracle_husimi(state, beta)
            else:
                q = states_mod.husimi(spec, beta)
                if engine == "both":
                    q_o = oracle_mod.oracle_husimi(state, beta)
                    max_dev = max(max_dev, abs(q - q_o) / max(abs(q_o), 1.0))
            row.append(q)
        rows.append(row)
    metadata = {"spec": spec.canonical(), "engine": engine}
    if engine == "both":
        metadata["max_deviation"] = max_dev
    return HusimiGrid(label, list(axis), list(axis), rows, metadata)


def figure_pack(
    figure_id: str,
    steps: int | None = None,
    grid_steps: int | None = None,
    engine: str = "analytic",
) -> FigurePack:
    """Reproduce the panel set of one reference figure.

    Sweep figures carry one sub-table per (l, p, q) panel with PAS and PSA
    series (Mandel panels also carry the bare series; A3 panels include the
    bare variant as its own panel). Husimi figures carry five grids.
    """
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}")
    index = int(figure_id[3:])
    family = states_mod.FAMILY_THERMAL if index % 2 else states_mod.FAMILY_EVEN_COHERENT
    sweep_steps = steps or SWEEP_STEPS
    husimi_steps = grid_steps or HUSIMI_STEPS
    prange = None if steps is None else {"steps": sweep_steps}

    if index in (1, 2, 3, 4, 5, 6, 9, 10):
        witness_id = {1: "mandel", 3: "hoa", 5: "hosps", 9: "hos"}[index if index % 2 else index - 1]
        include_bare = witness_id == "mandel"
        panels = []
        for panel_letter, (order, p, q) in zip("abc", _PANEL_COMBOS[witness_id]):
            table = sweep(
                witness_id,
                order,
                [EngineeringOp.pas(p, q), EngineeringOp.psa(p, q)],
                family,
                param_range=prange,
                engine=engine,
                include_bare=include_bare,
            )
            panels.append((panel_letter, table))
        return FigurePack(figure_id, panels)

    if index in (7, 8):
        if family == states_mod.FAMILY_THERMAL:
            make_spec = lambda op, v: StateSpec.thermal(v, op)
        else:
            make_spec = lambda op, v: StateSpec.even_coherent(v, op)
        panels = []
        letters = iter("abcde")
        for p, q, value in _HUSIMI_PANELS:
            for op in (EngineeringOp.pas(p, q), EngineeringOp.psa(p, q)):
                spec = make_spec(op, value)
                panels.append(
                    (next(letters), husimi_grid(spec, op.label(), steps=husimi_steps, engine=engine))
                )
        bare_value = _HUSIMI_PANELS[0][2]
        spec = make_spec(EngineeringOp.bare(), bare_value)
        panels.append((next(letters), husimi_grid(spec, "bare", steps=husimi_steps, engine=engine)))
        return FigurePack(figure_id, panels)

    # A3 figures: one panel per (p, q) including the bare (0, 0) panel
    panels = []
    for panel_letter, (p, q) in zip("abcd", _A3_PANEL_OPS):
        if p == 0 and q == 0:
            ops = [EngineeringOp.bare()]
        else:
            ops = [EngineeringOp.pas(p, q), EngineeringOp.psa(p, q)]
        table = sweep("agarwal_tara", 0, ops, family, param_range=prange, engine=engine)
        panels.append((panel_letter, table))
    return FigurePack(figure_id, panels)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    """Shortest representation that round-trips, 17 significant digits max."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def sweep_table_csv(table: SweepTable) -> str:
    labels = list(table.series)
    lines = [",".join(["param"] + labels)]
    for i, value in enumerate(table.parameter_values):
        row = [format_float(value)] + [format_float(table.series[k][i]) for k in labels]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def husimi_grid_csv(grid: HusimiGrid) -> str:
    lines = ["re,im,q_value"]
    for i, im in enumerate(grid.im_values):
        for j, re in enumerate(grid.re_values):
            lines.append(
                ",".join([format_float(re), format_float(im), format_float(grid.q_values[i][j])])
            )
    return "\n".join(lines) + "\n"


def panel_csv(panel) -> str:
    if isinstance(panel, SweepTable):
        return sweep_table_csv(panel)
    if isinstance(panel, HusimiGrid):
        return husimi_grid_csv(panel)
    raise TypeError(f"cannot serialize {type(panel).__name__}")


def write_figure_pack(pack: FigurePack, out_dir) -> list[tuple[str, str]]:
    """Write one CSV per panel; returns (panel name, file path) manifest."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    manifest = []
    for name, panel in pack.panels:
        path = os.path.join(out_dir, f"{pack.figure_id}_{name}.csv")
        with open(path, "w", newline="\n") as fh:
            fh.write(panel_csv(panel))
        manifest.append((name, path))
    return manifest
