"""Presets for the three example families and CSV sweep generation.

Each figure fixes a state set and a solver; each panel sweeps one target
parameter (``a``, ``k`` or ``phi``) for four values of a second one while
the third stays fixed.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .bloch import bloch_of_pure, target_from_params
from .closed_form import pauli_states, solve_pair, solve_pauli_quad, solve_triple
from .oracle import GridSpec, default_spec, grid_search

PI = math.pi
DOMAIN = {"a": (0.0, 1.0), "k": (0.0, 1.0), "phi": (0.0, 2 * PI)}

PAIR_FIXTURE = [
    [0.5143, 0.8317 + 0.2091j],
    [0.6950 + 0.5523j, 0.3633 + 0.2827j],
]
TRIPLE_FIXTURE = [
    [0.5063 + 0.3025j, 0.6829 + 0.4310j],
    [0.1275 + 0.5888j, 0.5452 + 0.5829j],
    [0.0780 + 0.6594j, 0.1059 + 0.7402j],
]
QUARTERS = [0.2, 0.4, 0.6, 0.8]

PRESETS = {
    "fig1": {
        "a": dict(fixed={"phi": 0.4613 * PI}, curve="k", values=QUARTERS, span=(0.0, 1.0)),
        "k": dict(fixed={"a": 0.8468}, curve="phi", values=[0.0, PI / 2, PI, 3 * PI / 2], span=(0.0, 1.0)),
        "phi": dict(fixed={"k": 0.0131}, curve="a", values=QUARTERS, span=(0.0, 2 * PI)),
    },
    "fig2": {
        "a": dict(fixed={"k": 0.85}, curve="phi", values=[0.0, PI / 2, 3 * PI / 2, 2 * PI], span=(0.0, 1.0)),
        "k": dict(fixed={"phi": 0.5318 * PI}, curve="a", values=QUARTERS, span=(0.0, 1.0)),
        "phi": dict(fixed={"a": 0.63}, curve="k", values=QUARTERS, span=(0.0, 2 * PI)),
    },
    "fig3": {
        "a": dict(fixed={"k": 0.5910}, curve="phi", values=[0.0, PI / 4, PI / 3, PI / 2], span=(0.0, 1.0)),
        "k": dict(fixed={"phi": 0.4047 * PI}, curve="a", values=QUARTERS, span=(0.0, 1.0)),
        "phi": dict(fixed={"a": 0.1145}, curve="k", values=QUARTERS, span=(0.0, PI / 2)),
    },
}
FIGURES = tuple(PRESETS)
PANELS = ("a", "k", "phi")


class FigureSpecError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    panel: str
    fixed: Dict[str, float] = field(default_factory=dict)
    sweep: Tuple[float, float, int] = (0.0, 1.0, 101)
    curves: Tuple[float, ...] = ()
    with_oracle: bool = False
    oracle_step: Optional[float] = None


def make_spec(figure, panel, count=101, start=None, stop=None, fixed=None,
              curves=None, with_oracle=False, oracle_step=None) -> FigureSpec:
    """Fill a :class:`FigureSpec` from the preset, applying overrides."""
    if figure not in PRESETS:
        raise FigureSpecError(f"unknown figure {figure!r}; choose from {FIGURES}")
    if panel not in PANELS:
        raise FigureSpecError(f"unknown panel {panel!r}; choose from {PANELS}")
    preset = PRESETS[figure][panel]
    lo, hi = preset["span"]
    start = lo if start is None else float(start)
    stop = hi if stop is None else float(stop)
    if count < 1:
        raise FigureSpecError("sweep count must be >= 1")
    dlo, dhi = DOMAIN[panel]
    if not (dlo <= start <= dhi and dlo <= stop <= dhi):
        raise FigureSpecError(f"sweep range [{start}, {stop}] leaves the domain of {panel}")
    merged = dict(preset["fixed"])
    for name, value in (fixed or {}).items():
        if name not in DOMAIN or name in (panel, preset["curve"]):
            raise FigureSpecError(f"cannot fix {name!r} in panel {panel!r}")
        merged[name] = float(value)
    values = tuple(preset["values"] if curves is None else (float(v) for v in curves))
    curve = preset["curve"]
    for name, value in list(merged.items()) + [(curve, v) for v in values]:
        clo, chi = DOMAIN[name]
        if not (clo <= value <= chi):
            raise FigureSpecError(f"{name}={value!r} outside [{clo}, {chi}]")
    if oracle_step is not None and not (0.0 < oracle_step <= 0.5):
        raise FigureSpecError("oracle step must be in (0, 0.5]")
    return FigureSpec(figure, panel, merged, (start, stop, int(count)), values,
                      bool(with_oracle), oracle_step)


def figure_states(figure):
    if figure == "fig1":
        return [bloch_of_pure(v) for v in PAIR_FIXTURE]
    if figure == "fig2":
        return [bloch_of_pure(v) for v in TRIPLE_FIXTURE]
    return pauli_states(("x", "z"))


def _solve(figure, target, states):
    if figure == "fig1":
        return solve_pair(target, *states)
    if figure == "fig2":
        return solve_triple(target, *states)
    return solve_pauli_quad(target, ("x", "z"))


def figure_rows(spec: FigureSpec):
    """Yield ``(sweep_value, curve_value, closed[, grid])`` tuples."""
    states = figure_states(spec.figure)
    curve = PRESETS[spec.figure][spec.panel]["curve"]
    start, stop, count = spec.sweep
    grid_spec = default_spec(len(states))
    if spec.oracle_step is not None:
        grid_spec = GridSpec(spec.oracle_step, grid_spec.refine_rounds, grid_spec.refine_factor)
    for cv in spec.curves:
        for sv in np.linspace(start, stop, count):
            params = dict(spec.fixed)
            params[curve] = cv
            params[spec.panel] = float(sv)
            target = target_from_params(params["a"], params["k"], params["phi"])
            closed = _solve(spec.figure, target, states).distance
            if spec.with_oracle:
                yield float(sv), cv, closed, grid_search(target, states, grid_spec).distance
            else:
                yield float(sv), cv, closed


def render_csv(spec: FigureSpec) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["sweep_param", "curve_param", "distance_closed"]
    if spec.with_oracle:
        header.append("distance_grid")
    writer.writerow(header)
    for row in figure_rows(spec):
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def write_atomic(path, text: str):
    path = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
