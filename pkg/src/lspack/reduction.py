"""3-partition instances, their gadget circuits, and brute-force partition search.

The gadget has three parts:

* one CNOT per number ``a_i`` over ``a_i`` fresh qubits (a block of height
  ``a_i``), no qubit shared;
* a width chain of ``s`` CNOTs with distinct controls all targeting one link
  qubit ``t``, so ``t`` needs ``s + 1`` columns once the height CNOT joins;
* a height CNOT with a fresh control and ``L + 1`` targets: ``t`` plus ``L``
  fillers, forcing ``L + 2`` rows.

Part-b qubit order is: height control, chain controls, link, fillers; the link
is therefore the (s+2)-nd part-b qubit. A hole-free layout is exactly
``(s + 1) x (L + 2)`` and its ``s`` chain columns hold ``L`` cells of number
blocks each.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .circuit import BoxSet, Circuit, Cnot, to_boxes
from .placement import BoundingBox, Layout, is_theoretically_optimal, optimal_patch_count
from .solver.base import BudgetExhausted, SolverBudget
from .solver.exact import fits_area


class InstanceError(ValueError):
    pass


class Undecided(RuntimeError):
    """The placement search ran out of budget before answering."""

    def __init__(self, nodes: int):
        super().__init__(f"undecided: search budget exhausted after {nodes} nodes")
        self.nodes = nodes


@dataclass(frozen=True)
class ThreePartitionInstance:
    s: int
    L: int
    a: tuple[int, ...]
    strict_bounds: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))


@dataclass(frozen=True)
class InstanceReport:
    violations: tuple[tuple[str, str], ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {k for k, _ in self.violations}

    def __str__(self) -> str:
        return "valid" if self.valid else "\n".join(f"{k}: {d}" for k, d in self.violations)


def validate_instance(inst: ThreePartitionInstance) -> InstanceReport:
    out = []
    if inst.s < 1 or inst.L < 1:
        out.append(("NONPOSITIVE", f"s={inst.s}, L={inst.L} must be positive"))
    if len(inst.a) != 3 * inst.s:
        out.append(("CARDINALITY", f"{len(inst.a)} numbers given, need 3s={3 * inst.s}"))
    bad = [x for x in inst.a if x < 1]
    if bad:
        out.append(("NONPOSITIVE", f"numbers must be positive, got {bad}"))
    if sum(inst.a) != inst.s * inst.L:
        out.append(("SUM", f"sum {sum(inst.a)} != s*L = {inst.s * inst.L}"))
    if inst.strict_bounds:
        loose = [x for x in inst.a if not (4 * x >= inst.L and 3 * x <= inst.L)]
        if loose:
            out.append(("BOUND", f"values {loose} outside [L/4, L/3] = [{inst.L / 4:g}, {inst.L / 3:g}]"))
    return InstanceReport(tuple(out))


@dataclass(frozen=True)
class Partition:
    """``s`` disjoint 1-based index sets covering ``1..3s``."""

    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(sorted(tuple(sorted(g)) for g in self.sets)))

    def sums(self, inst: ThreePartitionInstance) -> list[int]:
        return [sum(inst.a[i - 1] for i in g) for g in self.sets]

    def is_valid_for(self, inst: ThreePartitionInstance) -> bool:
        flat = sorted(i for g in self.sets for i in g)
        if flat != list(range(1, len(inst.a) + 1)) or len(self.sets) != inst.s:
            return False
        if inst.strict_bounds and any(len(g) != 3 for g in self.sets):
            return False
        return all(x == inst.L for x in self.sums(inst))


@dataclass(frozen=True)
class GadgetCircuit:
    instance: ThreePartitionInstance
    circuit: Circuit
    boxes: BoxSet = field(repr=False)
    part_a_boxes: tuple[int, ...]
    width_boxes: tuple[int, ...]
    height_box: int
    link_qubit: int
    compute_area: BoundingBox

    @property
    def optimal_area(self) -> int:
        return (self.instance.L + 2) * (self.instance.s + 1)


def instance_to_circuit(inst: ThreePartitionInstance) -> GadgetCircuit:
    report = validate_instance(inst)
    if not report.valid:
        raise InstanceError(str(report))
    s, L = inst.s, inst.L
    gates: list[Cnot] = []
    labels: dict[int, str] = {}
    controls: list[int] = []
    q = 0
    for i, ai in enumerate(inst.a, start=1):
        block = list(range(q, q + ai))
        for x in block:
            labels[x] = f"a{i}"
        controls.append(block[0])
        if ai > 1:
            gates.append(Cnot(block[0], tuple(block[1:])))
        q += ai
    height_ctrl = q
    chain = list(range(q + 1, q + 1 + s))
    link = q + 1 + s
    fillers = list(range(link + 1, link + 1 + L))
    n_qubits = fillers[-1] + 1
    labels[height_ctrl] = "height"
    labels.update({c: "chain" for c in chain})
    labels[link] = "link"
    labels.update({f: "filler" for f in fillers})
    gates += [Cnot(c, (link,)) for c in chain]
    gates.append(Cnot(height_ctrl, (link, *fillers)))
    circuit = Circuit(n_qubits, tuple(gates), labels)

    # blocks of a single qubit have no CNOT; they still occupy one patch
    boxes = to_boxes(circuit, include_idle=True)
    box_of_lead = {box.members[0]: box.box_id for box in boxes.boxes}
    return GadgetCircuit(
        instance=inst,
        circuit=circuit,
        boxes=boxes,
        part_a_boxes=tuple(box_of_lead[c] for c in controls),
        width_boxes=tuple(box_of_lead[c] for c in chain),
        height_box=box_of_lead[height_ctrl],
        link_qubit=link,
        compute_area=BoundingBox(0, s - 1, 0, L - 1),
    )


def decide_via_placement(inst: ThreePartitionInstance, budget: SolverBudget | None = None) -> bool:
    """Yes iff the gadget reaches the hole-free optimum; raises Undecided otherwise."""
    g = instance_to_circuit(inst)
    target = optimal_patch_count(g.boxes)
    try:
        layout, _ = fits_area(g.boxes, target, budget)
    except BudgetExhausted as exc:
        raise Undecided(exc.nodes) from None
    if layout is None:
        return False
    assert is_theoretically_optimal(layout, g.boxes)
    return True


def optimal_gadget_layout(inst: ThreePartitionInstance, budget: SolverBudget | None = None) -> Layout | None:
    g = instance_to_circuit(inst)
    try:
        layout, _ = fits_area(g.boxes, optimal_patch_count(g.boxes), budget)
    except BudgetExhausted as exc:
        raise Undecided(exc.nodes) from None
    return layout


def _triples(values: tuple[int, ...], target: int):
    def rec(left: tuple[int, ...]):
        if not left:
            yield []
            return
        head, rest = left[0], left[1:]
        for j, k in itertools.combinations(range(len(rest)), 2):
            if values[head] + values[rest[j]] + values[rest[k]] != target:
                continue
            leftover = tuple(x for n, x in enumerate(rest) if n not in (j, k))
            for tail in rec(leftover):
                yield [(head, rest[j], rest[k])] + tail

    yield from rec(tuple(range(len(values))))


def _subsets(values: tuple[int, ...], n_sets: int, target: int):
    """Assign indices in order to blocks (restricted growth), pruning by sum."""
    n = len(values)
    blocks: list[list[int]] = []
    sums: list[int] = []

    def rec(i: int):
        if i == n:
            if len(blocks) == n_sets and all(x == target for x in sums):
                yield [tuple(b) for b in blocks]
            return
        v = values[i]
        for j in range(len(blocks)):
            if sums[j] + v <= target:
                blocks[j].append(i)
                sums[j] += v
                yield from rec(i + 1)
                sums[j] -= v
                blocks[j].pop()
        if len(blocks) < n_sets and v <= target:
            blocks.append([i])
            sums.append(v)
            yield from rec(i + 1)
            sums.pop()
            blocks.pop()

    yield from rec(0)


def brute_force_partition(inst: ThreePartitionInstance, max_items: int = 15) -> Partition | None:
    """Exhaustive search for ``s`` sets summing to ``L``.

    Strict instances are split into unordered triples; relaxed ones into any
    ``s`` subsets, since a hole-free gadget column may then hold any number of
    blocks. The first hit in enumeration order is returned.
    """
    if len(inst.a) > max_items:
        raise InstanceError(f"{len(inst.a)} numbers exceeds brute-force guard of {max_items}")
    if len(inst.a) != 3 * inst.s or sum(inst.a) != inst.s * inst.L:
        return None
    gen = _triples(inst.a, inst.L) if inst.strict_bounds else _subsets(inst.a, inst.s, inst.L)
    for sets in gen:
        return Partition(tuple(tuple(i + 1 for i in g) for g in sets))
    return None


class LayoutNotOptimal(ValueError):
    pass


def partition_from_layout(l: Layout, g: GadgetCircuit) -> Partition:
    """Read the partition off a hole-free gadget layout: one set per column."""
    if not is_theoretically_optimal(l, g.boxes):
        raise LayoutNotOptimal("layout is not theoretically optimal for this gadget")
    col_of = {p.box_id: p.col for p in l.patches}
    index_of = {bid: i for i, bid in enumerate(g.part_a_boxes, start=1)}
    helpers = set(g.width_boxes)
    by_col: dict[int, list[int]] = {}
    chain_in: dict[int, int] = {}
    for bid, col in col_of.items():
        if bid in index_of:
            by_col.setdefault(col, []).append(index_of[bid])
        elif bid in helpers:
            chain_in[col] = chain_in.get(col, 0) + 1
    height_col = col_of[g.height_box]
    for col in by_col:
        if col == height_col or chain_in.get(col, 0) > 1:
            raise LayoutNotOptimal(f"column {col} mixes number blocks with gadget boxes")
    part = Partition(tuple(tuple(v) for v in by_col.values()))
    if len(part.sets) != g.instance.s or any(x != g.instance.L for x in part.sums(g.instance)):
        raise LayoutNotOptimal("columns do not split the numbers into s sets of sum L")
    return part


def strict_instances(s: int, L: int):
    """Every multiset (as a non-increasing tuple) meeting both 3-partition conditions."""
    lo, hi = -(-L // 4), L // 3
    for combo in itertools.combinations_with_replacement(range(hi, lo - 1, -1), 3 * s):
        if sum(combo) == s * L:
            yield ThreePartitionInstance(s, L, combo, True)


def relaxed_no_instances(s: int, L: int, max_value: int | None = None):
    """Positive multisets summing to ``sL`` that admit no split into s sets of sum L."""
    top = L if max_value is None else max_value
    for combo in itertools.combinations_with_replacement(range(top, 0, -1), 3 * s):
        if sum(combo) != s * L:
            continue
        inst = ThreePartitionInstance(s, L, combo, False)
        if brute_force_partition(inst) is None:
            yield inst


def random_instance(rng: random.Random, s: int, L: int, strict: bool = True) -> ThreePartitionInstance:
    """Uniformly spread the surplus over ``3s`` values held inside the bounds."""
    lo, hi = (-(-L // 4), L // 3) if strict else (1, L)
    n = 3 * s
    surplus = s * L - n * lo
    if lo > hi or surplus < 0 or surplus > n * (hi - lo):
        raise InstanceError(f"no valid instance exists for s={s}, L={L} (strict={int(strict)})")
    a = [lo] * n
    open_slots = list(range(n))
    for _ in range(surplus):
        j = rng.randrange(len(open_slots))
        i = open_slots[j]
        a[i] += 1
        if a[i] == hi:
            open_slots[j] = open_slots[-1]
            open_slots.pop()
    return ThreePartitionInstance(s, L, tuple(a), strict)


def parse_instance(text: str) -> ThreePartitionInstance:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("3partition"):
        raise InstanceError("instance must start with '3partition s=<s> L=<L> strict=<0|1>'")
    fields = {}
    for tok in lines[0].split()[1:]:
        key, _, val = tok.partition("=")
        fields[key] = val
    try:
        s, L, strict = int(fields["s"]), int(fields["L"]), fields.get("strict", "1")
    except (KeyError, ValueError):
        raise InstanceError(f"bad header {lines[0]!r}") from None
    if strict not in ("0", "1"):
        raise InstanceError(f"strict must be 0 or 1, got {strict!r}")
    a = []
    for n, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2 or parts[0] != "a":
            raise InstanceError(f"statement {n}: expected 'a <value>', got {ln!r}")
        try:
            a.append(int(parts[1]))
        except ValueError:
            raise InstanceError(f"statement {n}: bad value {parts[1]!r}") from None
    return ThreePartitionInstance(s, L, tuple(a), strict == "1")


def format_instance(inst: ThreePartitionInstance) -> str:
    head = f"3partition s={inst.s} L={inst.L} strict={int(inst.strict_bounds)}"
    return "\n".join([head] + [f"a {x}" for x in inst.a]) + "\n"
