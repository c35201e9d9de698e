"""Patch lattice, neighbour semantics, validity and area bounds.

Coordinates are ``(col, row)`` with rows growing downward. A neighbour is the
next *nonempty* cell in the given direction, so empty cells may sit inside a
box chain or a qubit run without breaking it.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .circuit import BoxSet


class Cell(NamedTuple):
    col: int
    row: int


class Patch(NamedTuple):
    cell: Cell
    box_id: int
    qubit: int

    @property
    def col(self) -> int:
        return self.cell.col

    @property
    def row(self) -> int:
        return self.cell.row

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.cell.col, self.cell.row, self.box_id, self.qubit)


def patch(col: int, row: int, box_id: int, qubit: int) -> Patch:
    return Patch(Cell(col, row), box_id, qubit)


@dataclass(frozen=True)
class Layout:
    """A sparse set of patches; stored sorted so equal layouts compare equal."""

    patches: tuple[Patch, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "patches", tuple(sorted(self.patches, key=Patch.sort_key)))

    @classmethod
    def of(cls, items: Iterable[tuple[int, int, int, int]]) -> "Layout":
        return cls(tuple(patch(*it) for it in items))

    @cached_property
    def occupancy(self) -> dict[Cell, Patch]:
        # On collision the first patch in sorted order wins; validate reports it.
        occ: dict[Cell, Patch] = {}
        for p in self.patches:
            occ.setdefault(p.cell, p)
        return occ

    @cached_property
    def _columns(self) -> dict[int, list[Patch]]:
        cols: dict[int, list[Patch]] = defaultdict(list)
        for p in self.occupancy.values():
            cols[p.col].append(p)
        for ps in cols.values():
            ps.sort(key=lambda p: p.row)
        return dict(cols)

    @cached_property
    def _rows(self) -> dict[int, list[Patch]]:
        rows: dict[int, list[Patch]] = defaultdict(list)
        for p in self.occupancy.values():
            rows[p.row].append(p)
        for ps in rows.values():
            ps.sort(key=lambda p: p.col)
        return dict(rows)

    def __len__(self) -> int:
        return len(self.patches)

    def encoding(self) -> tuple[tuple[int, int, int, int], ...]:
        return tuple(p.sort_key() for p in self.patches)

    def translated(self, dcol: int, drow: int) -> "Layout":
        return Layout(tuple(patch(p.col + dcol, p.row + drow, p.box_id, p.qubit) for p in self.patches))

    def normalized(self) -> "Layout":
        """Translate so the bounding box starts at (0, 0)."""
        if not self.patches:
            return self
        bb = bounding_box(self)
        return self.translated(-bb.min_col, -bb.min_row)

    def mirrored(self, horizontal: bool = True) -> "Layout":
        if horizontal:
            return Layout(tuple(patch(-p.col, p.row, p.box_id, p.qubit) for p in self.patches))
        return Layout(tuple(patch(p.col, -p.row, p.box_id, p.qubit) for p in self.patches))


@dataclass(frozen=True)
class BoundingBox:
    min_col: int
    max_col: int
    min_row: int
    max_row: int

    @property
    def width(self) -> int:
        return self.max_col - self.min_col + 1

    @property
    def height(self) -> int:
        return self.max_row - self.min_row + 1

    @property
    def area(self) -> int:
        return self.width * self.height


class ViolationKind(str, enum.Enum):
    MISSING_OCCURRENCE = "MISSING_OCCURRENCE"
    CELL_COLLISION = "CELL_COLLISION"
    BOX_NOT_SINGLE_COLUMN = "BOX_NOT_SINGLE_COLUMN"
    BOX_CHAIN_BROKEN = "BOX_CHAIN_BROKEN"
    QUBIT_NOT_SINGLE_ROW = "QUBIT_NOT_SINGLE_ROW"
    QUBIT_RUN_BROKEN = "QUBIT_RUN_BROKEN"


class Violation(NamedTuple):
    kind: ViolationKind
    details: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return "\n".join(f"{v.kind.value}: {v.details}" for v in self.violations)


def vertical_neighbor(l: Layout, c: Cell, direction: str) -> Patch | None:
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
    column = l._columns.get(c.col, [])
    if direction == "down":
        return next((p for p in column if p.row > c.row), None)
    return next((p for p in reversed(column) if p.row < c.row), None)


def horizontal_neighbor(l: Layout, c: Cell, direction: str) -> Patch | None:
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")
    row = l._rows.get(c.row, [])
    if direction == "right":
        return next((p for p in row if p.col > c.col), None)
    return next((p for p in reversed(row) if p.col < c.col), None)


def _is_contiguous_run(line: list[Patch], key, members: set) -> bool:
    """True iff the patches in ``members`` are consecutive within ``line``."""
    idx = [i for i, p in enumerate(line) if key(p) in members]
    return bool(idx) and idx[-1] - idx[0] + 1 == len(idx)


def validate(l: Layout, b: BoxSet) -> ValidationReport:
    """Check both validity criteria and the occurrence bijection.

    Every problem is reported; nothing is raised.
    """
    out: list[Violation] = []
    expected = {(bid, q) for bid, q in b.occurrences()}

    seen: dict[tuple[int, int], Patch] = {}
    for p in l.patches:
        key = (p.box_id, p.qubit)
        if key not in expected:
            out.append(Violation(ViolationKind.MISSING_OCCURRENCE, f"patch {tuple(p.cell)} has no occurrence box {p.box_id} qubit {p.qubit}"))
        elif key in seen:
            out.append(Violation(ViolationKind.MISSING_OCCURRENCE, f"occurrence box {p.box_id} qubit {p.qubit} placed twice"))
        else:
            seen[key] = p
    for bid, q in b.occurrences():
        if (bid, q) not in seen:
            out.append(Violation(ViolationKind.MISSING_OCCURRENCE, f"box {bid} qubit {q} not placed"))

    by_cell: dict[Cell, list[Patch]] = defaultdict(list)
    for p in l.patches:
        by_cell[p.cell].append(p)
    for cell, ps in sorted(by_cell.items()):
        if len(ps) > 1:
            out.append(Violation(ViolationKind.CELL_COLLISION, f"{len(ps)} patches at {tuple(cell)}"))

    placed = list(seen.values())
    by_box: dict[int, list[Patch]] = defaultdict(list)
    by_qubit: dict[int, list[Patch]] = defaultdict(list)
    for p in placed:
        by_box[p.box_id].append(p)
        by_qubit[p.qubit].append(p)

    for bid in sorted(by_box):
        ps = by_box[bid]
        cols = {p.col for p in ps}
        if len(cols) > 1:
            out.append(Violation(ViolationKind.BOX_NOT_SINGLE_COLUMN, f"box {bid} spans columns {sorted(cols)}"))
            continue
        column = l._columns.get(ps[0].col, [])
        if not _is_contiguous_run(column, lambda p: p.box_id, {bid}):
            out.append(Violation(ViolationKind.BOX_CHAIN_BROKEN, f"box {bid} interleaved with other patches in column {ps[0].col}"))

    for q in sorted(by_qubit):
        ps = by_qubit[q]
        if len(ps) < 2:
            continue
        rows = {p.row for p in ps}
        if len(rows) > 1:
            out.append(Violation(ViolationKind.QUBIT_NOT_SINGLE_ROW, f"qubit {q} spans rows {sorted(rows)}"))
            continue
        line = l._rows.get(ps[0].row, [])
        if not _is_contiguous_run(line, lambda p: p.qubit, {q}):
            out.append(Violation(ViolationKind.QUBIT_RUN_BROKEN, f"qubit {q} run interrupted in row {ps[0].row}"))

    return ValidationReport(tuple(out))


def bounding_box(l: Layout) -> BoundingBox:
    if not l.patches:
        raise ValueError("bounding box of an empty layout")
    cols = [p.col for p in l.patches]
    rows = [p.row for p in l.patches]
    return BoundingBox(min(cols), max(cols), min(rows), max(rows))


def area(l: Layout) -> int:
    return bounding_box(l).area if l.patches else 0


def optimal_patch_count(b: BoxSet) -> int:
    """Patches needed when no ancillary patch is required: sum of (targets + 1)."""
    return b.occurrence_count


def worst_case_patch_count(b: BoxSet, n_qubits: int) -> int:
    """Patches when every qubit keeps its own row: N_Q times the CNOT count."""
    if b.qubits and n_qubits <= max(b.qubits):
        raise ValueError(f"n_qubits={n_qubits} does not cover qubit {max(b.qubits)}")
    return n_qubits * len(b)


def is_theoretically_optimal(l: Layout, b: BoxSet) -> bool:
    if not l.patches or not validate(l, b).valid:
        return False
    return bounding_box(l).area == optimal_patch_count(b)


def canonical_row_placement(b: BoxSet, n_qubits: int | None = None) -> Layout:
    """Box ``i`` in column ``i``, qubit ``q`` in row ``q``. Always valid."""
    if n_qubits is not None and b.qubits and n_qubits <= max(b.qubits):
        raise ValueError(f"n_qubits={n_qubits} does not cover qubit {max(b.qubits)}")
    return Layout(tuple(patch(box.box_id, q, box.box_id, q) for box in b.boxes for q in box.members))


class LayoutError(ValueError):
    pass


def parse_layout(text: str) -> Layout:
    """Read ``layout <w> <h>`` followed by ``patch <col> <row> <box> <qubit>`` lines."""
    header = None
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "layout" and header is None and len(parts) == 3:
                header = (int(parts[1]), int(parts[2]))
            elif parts[0] == "patch" and header is not None and len(parts) == 5:
                items.append(tuple(int(x) for x in parts[1:]))
            else:
                raise LayoutError(f"line {lineno}: unexpected {line!r}")
        except ValueError as exc:
            if isinstance(exc, LayoutError):
                raise
            raise LayoutError(f"line {lineno}: bad integer in {line!r}") from None
    if header is None:
        raise LayoutError("missing 'layout <width> <height>' header")
    layout = Layout.of(items)
    if layout.patches:
        bb = bounding_box(layout)
        if (bb.width, bb.height) != header:
            raise LayoutError(f"header says {header[0]}x{header[1]}, patches span {bb.width}x{bb.height}")
    elif header != (0, 0):
        raise LayoutError("empty layout must declare 'layout 0 0'")
    return layout


def format_layout(l: Layout, trailer: str | None = None) -> str:
    if l.patches:
        bb = bounding_box(l)
        lines = [f"layout {bb.width} {bb.height}"]
    else:
        lines = ["layout 0 0"]
    lines += [f"patch {p.col} {p.row} {p.box_id} {p.qubit}" for p in l.patches]
    if trailer:
        lines.append(trailer)
    return "\n".join(lines) + "\n"
