"""Simulated annealing over column stacks and qubit-run rows."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from ..circuit import BoxSet
from ..placement import Layout, area, canonical_row_placement, optimal_patch_count, patch, validate
from .base import SolveResult, SolverBudget


@dataclass(frozen=True)
class AnnealConfig:
    cooling: float = 0.995
    initial_temperature: float | None = None  # None: mean box size
    penalty: float | None = None  # per violation; None: twice the tallest box
    reheat_below: float = 0.01
    max_iterations: int = 20_000


class _State:
    __slots__ = ("columns", "run_row")

    def __init__(self, columns: list[list[int]], run_row: dict[int, int]):
        self.columns = columns
        self.run_row = run_row

    def copy(self) -> "_State":
        return _State([list(c) for c in self.columns], dict(self.run_row))


def decode(b: BoxSet, st: _State) -> Layout:
    """Stack each column top-down; shared members sit on their run rows.

    Private members fill free rows inside the box's shared span, then above it
    (down to the column cursor), then below, skipping rows crossed by a run.
    The result may be invalid; the caller scores it with ``validate``.
    """
    columns = [c for c in st.columns if c]
    col_of = {bid: x for x, col in enumerate(columns) for bid in col}
    spans: dict[int, tuple[int, int]] = {}
    for q, occ in b.occurrence_index.items():
        if len(occ) > 1:
            xs = [col_of[bid] for bid, _ in occ]
            spans[q] = (min(xs), max(xs))
    patches = []
    for x, col in enumerate(columns):
        here = {q for bid in col for q in b.boxes[bid].members}
        reserved = {st.run_row[q] for q, (lo, hi) in spans.items() if lo < x < hi and q not in here}
        cursor = 0
        for bid in col:
            members = b.boxes[bid].members
            fixed = {q: st.run_row[q] for q in members if q in spans}
            private = [q for q in members if q not in spans]
            taken = set(fixed.values()) | reserved
            rows: list[int] = []
            if fixed:
                lo, hi = min(fixed.values()), max(fixed.values())
                free_inside = [r for r in range(lo + 1, hi) if r not in taken]
                above = [r for r in range(lo - 1, cursor - 1, -1) if r not in taken]
                rows = (free_inside + above)[: len(private)]
                r = hi + 1
            else:
                r = cursor
            while len(rows) < len(private):
                if r not in taken:
                    rows.append(r)
                r += 1
            for q, row in fixed.items():
                patches.append(patch(x, row, bid, q))
            for q, row in zip(private, rows):
                patches.append(patch(x, row, bid, q))
            used = list(fixed.values()) + rows
            cursor = max(used) + 1
    return Layout(tuple(patches))


def _initial_state(b: BoxSet) -> _State:
    shared = b.shared_qubits()
    return _State([[bid] for bid in range(len(b))], {q: i for i, q in enumerate(shared)})


def _neighbour(st: _State, rng: random.Random, max_row: int) -> _State:
    new = st.copy()
    cols = [c for c in new.columns if c]
    new.columns = cols
    move = rng.randrange(4)
    if move == 3 and not new.run_row:
        move = rng.randrange(3)
    if move == 0:
        # move one box to another (possibly new) column at a random depth
        src = rng.randrange(len(cols))
        bid = cols[src].pop(rng.randrange(len(cols[src])))
        dst = rng.randrange(len(cols) + 1)
        if dst == len(cols):
            cols.insert(rng.randrange(len(cols) + 1), [bid])
        else:
            cols[dst].insert(rng.randrange(len(cols[dst]) + 1), bid)
    elif move == 1:
        # swap two boxes, across columns or within one
        slots = [(x, i) for x, c in enumerate(cols) for i in range(len(c))]
        if len(slots) >= 2:
            (x1, i1), (x2, i2) = rng.sample(slots, 2)
            cols[x1][i1], cols[x2][i2] = cols[x2][i2], cols[x1][i1]
    elif move == 2:
        x = rng.randrange(len(cols))
        if len(cols[x]) >= 2:
            bid = cols[x].pop(rng.randrange(len(cols[x])))
            cols[x].insert(rng.randrange(len(cols[x]) + 1), bid)
        else:
            # lone box: swap whole columns instead
            y = rng.randrange(len(cols))
            cols[x], cols[y] = cols[y], cols[x]
    else:
        q = rng.choice(sorted(new.run_row))
        if rng.random() < 0.7:
            new.run_row[q] = max(0, new.run_row[q] + rng.choice((-1, 1)))
        else:
            new.run_row[q] = rng.randrange(max_row + 1)
    new.columns = [c for c in cols if c]
    return new


def solve_anneal(b: BoxSet, budget: SolverBudget | None = None, config: AnnealConfig | None = None) -> SolveResult:
    """Deterministic for a fixed seed as long as the iteration cap binds first."""
    budget = budget or SolverBudget()
    config = config or AnnealConfig()
    t0 = time.perf_counter()
    if not b.boxes:
        return SolveResult(Layout(), 0, True, 0, 0.0, "anneal")
    rng = random.Random(budget.seed)
    sizes = [box.size for box in b.boxes]
    t_start = config.initial_temperature or sum(sizes) / len(sizes)
    penalty = config.penalty if config.penalty is not None else 2.0 * max(sizes)
    lower = optimal_patch_count(b)
    max_row = sum(sizes)

    def score(st: _State) -> tuple[float, Layout, bool]:
        lay = decode(b, st)
        n_bad = len(validate(lay, b).violations)
        return area(lay) + penalty * n_bad, lay, n_bad == 0

    cur = _initial_state(b)
    cur_e, lay, ok = score(cur)
    best = lay if ok else canonical_row_placement(b)
    best_key = (area(best), best.normalized().encoding())
    temp = t_start
    iterations = min(budget.max_nodes, config.max_iterations)
    deadline = t0 + budget.max_seconds
    done = 0
    for done in range(1, iterations + 1):
        if best_key[0] == lower or time.perf_counter() > deadline:
            break
        cand = _neighbour(cur, rng, max_row)
        e, lay, ok = score(cand)
        if e <= cur_e or rng.random() < math.exp((cur_e - e) / temp):
            cur, cur_e = cand, e
        if ok:
            key = (area(lay), lay.normalized().encoding())
            if key < best_key:
                best, best_key = lay, key
        temp *= config.cooling
        if temp < config.reheat_below:
            temp = t_start
    best = best.normalized()
    a = area(best)
    return SolveResult(best, a, a == lower, done, time.perf_counter() - t0, "anneal")
