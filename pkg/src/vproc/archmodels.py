"""Analytic models of the two baseline architectures.

The fully tiled option maps every operation of a dataflow kernel to its own
hardware unit, so latency is the critical path of the graph plus a final
synchronisation barrier.  The fully sequential option is the degenerate
vector core with one unit per arithmetic class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CoreConfig
from .isa import OpClass


@dataclass
class DataflowKernel:
    """Acyclic operation graph, replicated R times in parallel."""

    nodes: list[tuple[str, OpClass]]
    edges: list[tuple[str, str]]
    replication: int = 24

    def op_counts(self) -> dict[OpClass, int]:
        counts: dict[OpClass, int] = {}
        for _, cls in self.nodes:
            counts[cls] = counts.get(cls, 0) + 1
        return counts


class CyclicGraphError(Exception):
    pass


def _node_latency(cls: OpClass, cfg: CoreConfig) -> int:
    if cls is OpClass.ADD_CLASS:
        return cfg.lat_add
    if cls is OpClass.MUL_CLASS:
        return cfg.lat_mul
    if cls is OpClass.DIV_CLASS:
        return cfg.lat_div
    raise ValueError(f"dataflow nodes must be arithmetic, got {cls}")


def tiled_latency(k: DataflowKernel, cfg: CoreConfig, barrier_cost: int = 1) -> int:
    """Critical-path latency of the fully tiled circuit.

    Replication does not appear: replicas run in parallel.  The tiled
    circuit has no controller, so no per-instruction issue cost is charged.
    """
    weight = {nid: _node_latency(cls, cfg) for nid, cls in k.nodes}
    succs: dict[str, list[str]] = {nid: [] for nid, _ in k.nodes}
    indeg: dict[str, int] = {nid: 0 for nid, _ in k.nodes}
    for src, dst in k.edges:
        succs[src].append(dst)
        indeg[dst] += 1

    # Kahn topological order with longest-path DP.
    ready = [nid for nid, d in indeg.items() if d == 0]
    finish = {nid: weight[nid] for nid in ready}
    order = 0
    while ready:
        nid = ready.pop()
        order += 1
        for nxt in succs[nid]:
            cand = finish[nid] + weight[nxt]
            if cand > finish.get(nxt, 0):
                finish[nxt] = cand
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if order != len(k.nodes):
        raise CyclicGraphError("dataflow graph contains a cycle")
    return max(finish.values()) + barrier_cost


def sequential_config(base: CoreConfig) -> CoreConfig:
    """The fully sequential architecture: one unit per arithmetic class."""
    return base.with_mix(1, 1, 1)
