"""Exact minimum-area placement by frame enumeration and cell-scan backtracking.

Candidate frames ``W x H`` are tried in increasing area. For one frame the
search scans cells column-major and decides, cell by cell, whether the cell
stays empty or receives the next patch. The scan enforces validity directly:

* only one box is "open" per column at a time, so a box's patches are
  consecutive in that column;
* a shared qubit's row is fixed by its first patch, and while its run is open
  every later cell in that row must be empty or hold that qubit.

Boxes with the same shared qubits and the same number of private members are
interchangeable, so each such class is placed in id order. Failed states at
box boundaries are memoised. Options are tried in (box id, qubit) order with
"empty" last, so the first layout found in a frame is the lexicographically
smallest column-major patch list.
"""

from __future__ import annotations

import sys
import time
from collections import defaultdict

from ..circuit import BoxSet
from ..placement import Layout, area, bounding_box, optimal_patch_count, patch
from .base import BudgetExhausted, SolveResult, SolverBudget


class _Found(Exception):
    def __init__(self, patches):
        super().__init__()
        self.patches = patches


class FrameSearch:
    """Feasibility of placing every box of ``b`` inside a fixed frame."""

    def __init__(self, b: BoxSet, node_limit: int, deadline: float | None):
        self.b = b
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0

        shared = b.shared_qubits()
        self.shared = shared
        sidx = {q: i for i, q in enumerate(shared)}
        self.occ_total = [len(b.occurrence_index[q]) for q in shared]
        self.n_patches = b.occurrence_count

        self.box_shared: list[list[int]] = []  # shared indices, ascending qubit
        self.box_unshared: list[list[int]] = []  # private qubits, ascending
        self.box_mask: list[int] = []
        self.box_size: list[int] = []
        classes: dict[tuple, list[int]] = defaultdict(list)
        for box in b.boxes:
            sh = sorted(sidx[q] for q in box.members if q in sidx)
            sh.sort(key=lambda i: shared[i])
            un = sorted(q for q in box.members if q not in sidx)
            mask = 0
            for i in sh:
                mask |= 1 << i
            self.box_shared.append(sh)
            self.box_unshared.append(un)
            self.box_mask.append(mask)
            self.box_size.append(box.size)
            classes[(mask, len(un))].append(box.box_id)
        self.class_boxes = sorted(classes.values(), key=lambda ids: ids[0])

    def search(self, width: int, height: int, tight: bool = True) -> Layout | None:
        """Return the lexicographically first layout inside the frame, or None.

        ``tight`` forbids an all-empty column; only sound when every frame of
        smaller area has already been refuted.
        """
        W, H = width, height
        holes0 = W * H - self.n_patches
        if holes0 < 0 or max(self.box_size) > H:
            return None
        if self.occ_total and max(self.occ_total) > W:
            return None

        n_shared = len(self.shared)
        shared = self.shared
        occ_total = self.occ_total
        box_shared, box_unshared = self.box_shared, self.box_unshared
        box_size, box_mask = self.box_size, self.box_mask
        class_boxes = self.class_boxes
        N = self.n_patches
        n_cells = W * H
        deadline = self.deadline
        limit = self.node_limit

        class_placed = [0] * len(class_boxes)
        run_row = [-1] * n_shared
        placed_of = [0] * n_shared
        row_owner = [-1] * H
        stack: list[tuple[int, int, int, int]] = []
        dead: set = set()

        def rows_ok(mask: int, r: int) -> bool:
            # every still-unplaced shared member with a fixed row must lie below r
            si = 0
            while mask:
                if mask & 1 and 0 <= run_row[si] <= r:
                    return False
                mask >>= 1
                si += 1
            return True

        def put(k, c, r, bid, q, si, nxt_ob, nxt_mask, nxt_urem, holes):
            if si >= 0:
                prev_row, prev_owner = run_row[si], row_owner[r]
                run_row[si] = r
                placed_of[si] += 1
                row_owner[r] = si if placed_of[si] < occ_total[si] else -1
            stack.append((c, r, bid, q))
            try:
                dfs(k + 1, nxt_ob, nxt_mask, nxt_urem, holes, True, False)
            finally:
                stack.pop()
                if si >= 0:
                    placed_of[si] -= 1
                    run_row[si] = prev_row
                    row_owner[r] = prev_owner

        def dfs(k, ob, ob_mask, ob_urem, holes, colpat, movable_hole):
            # movable_hole: the cell above is empty and no run crosses it, so a
            # private patch here could be swapped upward; such layouts are skipped.
            if len(stack) == N:
                raise _Found(list(stack))
            if k >= n_cells:
                return
            self.nodes += 1
            if self.nodes > limit or (deadline is not None and not self.nodes & 1023 and time.perf_counter() > deadline):
                raise BudgetExhausted(self.nodes)

            c, r = divmod(k, H)
            if r == 0 and k:
                if tight and not colpat:
                    return
                cols_left = W - c
                for si in range(n_shared):
                    if occ_total[si] - placed_of[si] > cols_left:
                        return
                colpat = movable_hole = False

            owner = row_owner[r]
            rows_after = H - r - 1

            if ob >= 0:
                remaining = ob_urem + bin(ob_mask).count("1")
                if remaining - 1 > rows_after:
                    return
                options = []
                for si in box_shared[ob]:
                    if ob_mask >> si & 1 and (run_row[si] < 0 or run_row[si] == r) and (owner < 0 or owner == si):
                        options.append((shared[si], si))
                if ob_urem and owner < 0 and not movable_hole:
                    options.append((box_unshared[ob][len(box_unshared[ob]) - ob_urem], -1))
                options.sort()
                for q, si in options:
                    if si >= 0:
                        mask, urem = ob_mask & ~(1 << si), ob_urem
                    else:
                        mask, urem = ob_mask, ob_urem - 1
                    if not rows_ok(mask, r):
                        continue
                    if mask or urem:
                        put(k, c, r, ob, q, si, ob, mask, urem, holes)
                    else:
                        put(k, c, r, ob, q, si, -1, 0, 0, holes)
                if holes and remaining <= rows_after and rows_ok(ob_mask, r):
                    dfs(k + 1, ob, ob_mask, ob_urem, holes - 1, colpat, owner < 0)
                return

            key = (k, tuple(class_placed),
                   tuple(run_row[i] if placed_of[i] < occ_total[i] else -1 for i in range(n_shared)),
                   colpat, movable_hole)
            if key in dead:
                return
            candidates = sorted((ids[class_placed[ci]], ci) for ci, ids in enumerate(class_boxes)
                                if class_placed[ci] < len(ids))
            for bid, ci in candidates:
                if box_size[bid] - 1 > rows_after:
                    continue
                full = box_mask[bid]
                if not rows_ok(full, r - 1):
                    continue
                options = []
                for si in box_shared[bid]:
                    if (run_row[si] < 0 or run_row[si] == r) and (owner < 0 or owner == si):
                        options.append((shared[si], si))
                if box_unshared[bid] and owner < 0 and not movable_hole:
                    options.append((box_unshared[bid][0], -1))
                options.sort()
                n_private = len(box_unshared[bid])
                class_placed[ci] += 1
                try:
                    for q, si in options:
                        if si >= 0:
                            mask, urem = full & ~(1 << si), n_private
                        else:
                            mask, urem = full, n_private - 1
                        if not rows_ok(mask, r):
                            continue
                        if mask or urem:
                            put(k, c, r, bid, q, si, bid, mask, urem, holes)
                        else:
                            put(k, c, r, bid, q, si, -1, 0, 0, holes)
                finally:
                    class_placed[ci] -= 1
            if holes:
                dfs(k + 1, -1, 0, 0, holes - 1, colpat, owner < 0)
            dead.add(key)

        old_limit = sys.getrecursionlimit()
        need = n_cells + 500
        if need > old_limit:
            sys.setrecursionlimit(need)
        try:
            dfs(0, -1, 0, 0, holes0, False, False)
        except _Found as hit:
            return Layout(tuple(patch(*p) for p in hit.patches))
        finally:
            if need > old_limit:
                sys.setrecursionlimit(old_limit)
        return None


def candidate_frames(b: BoxSet, upper_area: int, max_width: int | None = None) -> list[tuple[int, int]]:
    """All frames worth trying, ordered by (area, width)."""
    n = optimal_patch_count(b)
    h_min = max(box.size for box in b.boxes)
    w_min = max([len(v) for v in b.occurrence_index.values()] + [1])
    w_max = len(b)
    if max_width is not None:
        w_max = min(w_max, max_width)
    frames = []
    for w in range(w_min, w_max + 1):
        h_lo = max(h_min, -(-n // w))
        for h in range(h_lo, upper_area // w + 1):
            frames.append((w, h))
    frames.sort(key=lambda f: (f[0] * f[1], f[0]))
    return frames


def _incumbent(b: BoxSet, max_width: int | None) -> Layout | None:
    from .greedy import greedy_layout

    lay = greedy_layout(b)
    if max_width is not None and bounding_box(lay).width > max_width:
        return None
    return lay


def solve_exact(b: BoxSet, budget: SolverBudget | None = None, max_width: int | None = None) -> SolveResult:
    """Minimum-area valid layout; ``proven_optimal`` iff the search finished."""
    if not b.boxes:
        raise ValueError("solve_exact needs at least one box")
    budget = budget or SolverBudget()
    t0 = time.perf_counter()
    incumbent = _incumbent(b, max_width)
    upper = area(incumbent) if incumbent is not None else optimal_patch_count(b) * len(b) * max(box.size for box in b.boxes)
    searcher = FrameSearch(b, budget.max_nodes, t0 + budget.max_seconds)

    best: Layout | None = None
    best_area = None
    try:
        for w, h in candidate_frames(b, upper, max_width):
            if best_area is not None and w * h > best_area:
                break
            found = searcher.search(w, h)
            if found is None:
                continue
            found = found.normalized()
            a = area(found)
            if best is None or (a, found.encoding()) < (best_area, best.encoding()):
                best, best_area = found, a
    except BudgetExhausted:
        fallback = best if best is not None else incumbent
        if fallback is None:
            raise
        return SolveResult(fallback, area(fallback), False, searcher.nodes, time.perf_counter() - t0, "exact")
    if best is None:
        if incumbent is None:
            raise ValueError(f"no valid layout with width <= {max_width}")
        best = incumbent
    return SolveResult(best, area(best), True, searcher.nodes, time.perf_counter() - t0, "exact")


def fits_area(b: BoxSet, target_area: int, budget: SolverBudget | None = None,
              max_width: int | None = None) -> tuple[Layout | None, int]:
    """Search only frames of exactly ``target_area`` cells.

    Returns ``(layout or None, nodes)``; raises BudgetExhausted when undecided.
    """
    budget = budget or SolverBudget()
    searcher = FrameSearch(b, budget.max_nodes, time.perf_counter() + budget.max_seconds)
    for w, h in candidate_frames(b, target_area, max_width):
        if w * h != target_area:
            continue
        # tight=False: smaller frames were not refuted here
        found = searcher.search(w, h, tight=False)
        if found is not None:
            return found.normalized(), searcher.nodes
    return None, searcher.nodes
