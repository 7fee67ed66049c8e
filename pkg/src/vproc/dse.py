"""Design-space exploration: sweeps, Pareto filtering and projections."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import core, resources
from .core import CoreConfig
from .fixedpoint import Fixed64
from .isa import Program
from .resources import Calibration, DEFAULT_CALIBRATION


@dataclass(frozen=True)
class DesignPoint:
    label: str
    n_add: int | None
    n_mul: int | None
    n_div: int | None
    latency_cycles: int
    slices: int


@dataclass(frozen=True)
class Projection:
    slices_budget: int
    cores: int
    clock_mhz: float
    calls_per_second: float
    amdahl_fraction: float
    overall_speedup: float


def sweep(p: Program, configs: list[CoreConfig],
          cal: Calibration = DEFAULT_CALIBRATION,
          inputs: list[tuple[int, list[Fixed64]]] | None = None
          ) -> list[DesignPoint]:
    """One design point per configuration, in input order."""
    points = []
    for cfg in configs:
        try:
            report = core.run(p, cfg, inputs=inputs)
        except core.ValidationError as exc:
            raise core.ValidationError(
                [f"config {cfg.mix_label}: {d}" for d in exc.diagnostics])
        est = resources.estimate_vector(cfg, cal)
        points.append(DesignPoint(label=cfg.mix_label, n_add=cfg.n_add,
                                  n_mul=cfg.n_mul, n_div=cfg.n_div,
                                  latency_cycles=report.total_cycles,
                                  slices=est.slices))
    return points


def pareto(points: list[DesignPoint]) -> list[DesignPoint]:
    """Non-dominated subset in (latency, slices); exact ties are kept.

    Sort-and-scan, O(n log n): a point is dominated iff a strictly cheaper
    point is at least as fast, or an equally cheap point is strictly faster.
    """
    if not points:
        return []
    by_slices: dict[int, int] = {}
    for p in points:
        if p.slices not in by_slices or p.latency_cycles < by_slices[p.slices]:
            by_slices[p.slices] = p.latency_cycles
    best_cheaper: dict[int, int] = {}   # slices -> min latency at strictly fewer slices
    running = math.inf
    for s in sorted(by_slices):
        best_cheaper[s] = running
        running = min(running, by_slices[s])
    frontier = []
    for p in points:
        if p.latency_cycles < best_cheaper[p.slices] \
                and p.latency_cycles <= by_slices[p.slices]:
            frontier.append(p)
    return frontier


def throughput_projection(point: DesignPoint, slices_budget: int,
                          clock_mhz: float,
                          amdahl_fraction: float = 0.0,
                          kernel_speedup: float = 1.0) -> Projection:
    """Replicate independent cores under a slice budget."""
    if slices_budget < point.slices:
        raise ValueError(f"budget {slices_budget} below one core "
                         f"({point.slices} slices)")
    cores = slices_budget // point.slices
    calls = cores * clock_mhz * 1e6 / point.latency_cycles
    return Projection(slices_budget=slices_budget, cores=cores,
                      clock_mhz=clock_mhz, calls_per_second=calls,
                      amdahl_fraction=amdahl_fraction,
                      overall_speedup=amdahl(amdahl_fraction, kernel_speedup))


def amdahl(fraction: float, kernel_speedup: float) -> float:
    """Whole-application speedup when `fraction` of time is accelerated."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    if kernel_speedup < 1.0:
        raise ValueError("kernel speedup must be >= 1")
    if math.isinf(kernel_speedup):
        if fraction == 1.0:
            raise ValueError("unbounded speedup of the whole application "
                             "is undefined")
        return 1.0 / (1.0 - fraction)
    return 1.0 / ((1.0 - fraction) + fraction / kernel_speedup)
