"""ICM circuits (initialisation + CNOT slice) and their abstract box model.

A circuit is a qubit count plus an ordered list of (multi-target) CNOTs.
Translation to lattice surgery first merges every CNOT that shares a control
into one multi-target CNOT; each merged gate then becomes one *box* whose
members (control first, then targets) are the patches of one vertical chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping


class CircuitError(ValueError):
    """Raised for malformed circuit files or invalid circuit contents."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Cnot:
    control: int
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets:
            raise CircuitError("cnot needs at least one target")
        if self.control in self.targets:
            raise CircuitError(f"control {self.control} is also a target")
        if len(set(self.targets)) != len(self.targets):
            raise CircuitError(f"duplicate target in cnot on control {self.control}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, *self.targets)


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    gates: tuple[Cnot, ...] = ()
    labels: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        if self.qubit_count < 1:
            raise CircuitError("qubit count must be positive")
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.qubit_count:
                    raise CircuitError(f"qubit {q} out of range (circuit has {self.qubit_count})")
        for q in self.labels:
            if not 0 <= q < self.qubit_count:
                raise CircuitError(f"label on qubit {q} out of range")

    def __hash__(self):
        return hash((self.qubit_count, self.gates, tuple(sorted(self.labels.items()))))

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.qubit_count, self.gates, dict(self.labels)) == (
            other.qubit_count,
            other.gates,
            dict(other.labels),
        )

    def qubits_with_label(self, text: str) -> list[int]:
        return sorted(q for q, lab in self.labels.items() if lab == text)


@dataclass(frozen=True)
class PatchBox:
    box_id: int
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a box needs at least one member")
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"box {self.box_id} repeats a qubit")

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class BoxSet:
    """Boxes plus the inverse index ``qubit -> [(box_id, position), ...]``."""

    boxes: tuple[PatchBox, ...]
    occurrence_index: Mapping[int, tuple[tuple[int, int], ...]] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        for i, box in enumerate(self.boxes):
            if box.box_id != i:
                raise ValueError(f"box at position {i} has id {box.box_id}")
        index: dict[int, list[tuple[int, int]]] = {}
        for box in self.boxes:
            for pos, q in enumerate(box.members):
                index.setdefault(q, []).append((box.box_id, pos))
        object.__setattr__(
            self,
            "occurrence_index",
            MappingProxyType({q: tuple(v) for q, v in sorted(index.items())}),
        )

    @classmethod
    def from_members(cls, members: Iterable[Iterable[int]]) -> "BoxSet":
        return cls(tuple(PatchBox(i, tuple(m)) for i, m in enumerate(members)))

    def __len__(self) -> int:
        return len(self.boxes)

    @property
    def occurrence_count(self) -> int:
        return sum(box.size for box in self.boxes)

    @property
    def qubits(self) -> list[int]:
        return list(self.occurrence_index)

    def shared_qubits(self) -> list[int]:
        """Qubits occurring in more than one box (they must form a horizontal run)."""
        return [q for q, occ in self.occurrence_index.items() if len(occ) > 1]

    def occurrences(self) -> list[tuple[int, int]]:
        """Every ``(box_id, qubit)`` pair, in box order."""
        return [(box.box_id, q) for box in self.boxes for q in box.members]


def merge_cnots(c: Circuit) -> Circuit:
    """Merge all CNOTs sharing a control into one multi-target CNOT.

    Gates are treated as mutually commuting (stabiliser-state preparation), so
    grouping ignores gate order. Controls keep their first-occurrence order,
    targets are unioned in first-occurrence order and a repeated target is
    kept once.
    """
    merged: dict[int, list[int]] = {}
    for gate in c.gates:
        targets = merged.setdefault(gate.control, [])
        for t in gate.targets:
            if t not in targets:
                targets.append(t)
    gates = tuple(Cnot(ctrl, tuple(ts)) for ctrl, ts in merged.items())
    return Circuit(c.qubit_count, gates, c.labels)


def is_merged(c: Circuit) -> bool:
    controls = [g.control for g in c.gates]
    return len(set(controls)) == len(controls)


def to_boxes(c: Circuit, include_idle: bool = False) -> BoxSet:
    """One box per multi-target CNOT, members ``[control, *targets]``.

    With ``include_idle`` every qubit untouched by any CNOT also gets a
    single-member box: it still needs one patch on the lattice.
    """
    if not is_merged(c):
        c = merge_cnots(c)
    members = [gate.qubits for gate in c.gates]
    if include_idle:
        used = {q for gate in c.gates for q in gate.qubits}
        members.extend((q,) for q in range(c.qubit_count) if q not in used)
    return BoxSet.from_members(members)


_MEASURE_BASES = {"X", "Z", "Y", "A"}
_INIT_STATES = {"+", "0"}


def _int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise CircuitError(f"expected integer {what}, got {token!r}", lineno) from None
    if value < 0:
        raise CircuitError(f"{what} must be non-negative, got {value}", lineno)
    return value


def parse_circuit(text: str) -> Circuit:
    """Parse the line-oriented circuit format.

    ``init``/``measure`` lines are validated and kept as qubit labels but emit
    no gates; an explicit ``label`` line wins over them.
    """
    qubit_count: int | None = None
    gates: list[Cnot] = []
    labels: dict[int, str] = {}
    explicit: set[int] = set()

    def check(q: int, lineno: int) -> int:
        if q >= qubit_count:  # type: ignore[operator]
            raise CircuitError(f"qubit {q} out of range (declared {qubit_count})", lineno)
        return q

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if qubit_count is None:
            if head != "qubits" or len(rest) != 1:
                raise CircuitError("first statement must be 'qubits <N>'", lineno)
            qubit_count = _int(rest[0], lineno, "qubit count")
            if qubit_count < 1:
                raise CircuitError("qubit count must be positive", lineno)
            continue
        if head == "cnot":
            if len(rest) < 2:
                raise CircuitError("cnot needs a control and at least one target", lineno)
            control = check(_int(rest[0], lineno, "control"), lineno)
            targets = [check(_int(t, lineno, "target"), lineno) for t in rest[1:]]
            if control in targets:
                raise CircuitError(f"control {control} is also a target", lineno)
            if len(set(targets)) != len(targets):
                raise CircuitError("duplicate target in one cnot line", lineno)
            gates.append(Cnot(control, tuple(targets)))
        elif head == "init":
            if len(rest) != 2 or rest[1] not in _INIT_STATES:
                raise CircuitError("expected 'init <q> <+|0>'", lineno)
            q = check(_int(rest[0], lineno, "qubit"), lineno)
            if q not in explicit:
                labels[q] = f"init {rest[1]}"
        elif head == "measure":
            if len(rest) != 2 or rest[1] not in _MEASURE_BASES:
                raise CircuitError("expected 'measure <q> <X|Z|Y|A>'", lineno)
            q = check(_int(rest[0], lineno, "qubit"), lineno)
            if q not in explicit:
                labels[q] = f"measure {rest[1]}"
        elif head == "label":
            if len(rest) < 2:
                raise CircuitError("expected 'label <q> <text>'", lineno)
            q = check(_int(rest[0], lineno, "qubit"), lineno)
            labels[q] = " ".join(rest[1:])
            explicit.add(q)
        elif head == "qubits":
            raise CircuitError("'qubits' declared twice", lineno)
        else:
            raise CircuitError(f"unknown statement {head!r}", lineno)

    if qubit_count is None:
        raise CircuitError("missing 'qubits <N>' declaration")
    return Circuit(qubit_count, tuple(gates), labels)


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.qubit_count}"]
    for q, text in sorted(c.labels.items()):
        lines.append(f"label {q} {text}")
    for gate in c.gates:
        lines.append("cnot " + " ".join(str(q) for q in gate.qubits))
    return "\n".join(lines) + "\n"
