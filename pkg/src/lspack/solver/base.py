from __future__ import annotations

import os
from dataclasses import dataclass

from ..placement import Layout, format_layout

DEFAULT_SEED = 0


def default_seed() -> int:
    """Seed from ``LSPACK_SEED`` if set, else 0."""
    raw = os.environ.get("LSPACK_SEED")
    return int(raw) if raw else DEFAULT_SEED


@dataclass(frozen=True)
class SolverBudget:
    max_nodes: int = 5_000_000
    max_seconds: float = 120.0
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budget limits must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SolveResult:
    layout: Layout
    area: int
    proven_optimal: bool
    nodes_explored: int
    wall_time: float
    method: str = ""

    def stats_trailer(self) -> str:
        # wall time is left out on purpose: the trailer must be reproducible
        return f"# area={self.area}  proven_optimal={int(self.proven_optimal)}  nodes={self.nodes_explored}"

    def to_text(self) -> str:
        return format_layout(self.layout, self.stats_trailer())


class BudgetExhausted(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes
