"""First-fit-decreasing construction.

Boxes linked through shared qubits form components. Each component gets a
block of adjacent columns, one box per column, with a private band of rows
(one per shared qubit) at the top; private members go below the band. Boxes
with no shared qubit are then packed first-fit-decreasing under a height cap,
first into the free space below component columns, then into new columns.
Every height cap from the tallest requirement upward is tried and the
smallest area wins; the row-per-qubit placement is the fallback.
"""

from __future__ import annotations

import time

from ..circuit import BoxSet
from ..placement import Layout, area, canonical_row_placement, optimal_patch_count, patch
from .base import SolveResult


def _components(b: BoxSet) -> list[list[int]]:
    parent = list(range(len(b)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for occ in b.occurrence_index.values():
        first = occ[0][0]
        for bid, _ in occ[1:]:
            ra, rb = find(first), find(bid)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in range(len(b)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _anchored_columns(b: BoxSet, comp: list[int], shared: set[int]):
    """Per-box column contents (list of (row, qubit)) and the next free row."""
    comp_shared = sorted({q for bid in comp for q in b.boxes[bid].members if q in shared})
    row_of = {q: i for i, q in enumerate(comp_shared)}
    band = len(comp_shared)
    cols = []
    for bid in comp:
        members = b.boxes[bid].members
        cells = [(row_of[q], q) for q in members if q in row_of]
        private = [q for q in members if q not in row_of]
        cells += [(band + i, q) for i, q in enumerate(private)]
        fill = max(r for r, _ in cells) + 1
        cols.append((bid, cells, fill))
    return cols


def _ffd_layout(b: BoxSet, comps, free: list[int], shared: set[int], cap: int) -> Layout:
    patches = []
    fills: list[int] = []
    for comp in comps:
        for bid, cells, fill in _anchored_columns(b, comp, shared):
            col = len(fills)
            patches += [patch(col, r, bid, q) for r, q in cells]
            fills.append(fill)
    order = sorted(free, key=lambda bid: (-b.boxes[bid].size, bid))
    for bid in order:
        size = b.boxes[bid].size
        col = next((i for i, f in enumerate(fills) if f + size <= cap), None)
        if col is None:
            col = len(fills)
            fills.append(0)
        top = fills[col]
        patches += [patch(col, top + i, bid, q) for i, q in enumerate(b.boxes[bid].members)]
        fills[col] = top + size
    return Layout(tuple(patches))


def greedy_layout(b: BoxSet) -> Layout:
    if not b.boxes:
        return Layout()
    shared = set(b.shared_qubits())
    comps = [c for c in _components(b) if len(c) > 1 or any(q in shared for q in b.boxes[c[0]].members)]
    anchored = {bid for c in comps for bid in c}
    free = [i for i in range(len(b)) if i not in anchored]

    need = max(box.size for box in b.boxes)
    for comp in comps:
        for _, _, fill in _anchored_columns(b, comp, shared):
            need = max(need, fill)
    upper = need + sum(b.boxes[i].size for i in free)
    best = canonical_row_placement(b)
    best_key = (area(best), best.encoding())
    for cap in range(need, upper + 1):
        lay = _ffd_layout(b, comps, free, shared, cap)
        key = (area(lay), lay.encoding())
        if key < best_key:
            best, best_key = lay, key
    return best.normalized()


def solve_greedy(b: BoxSet) -> SolveResult:
    t0 = time.perf_counter()
    lay = greedy_layout(b)
    a = area(lay) if lay.patches else 0
    return SolveResult(lay, a, a == optimal_patch_count(b), 0, time.perf_counter() - t0, "greedy")
