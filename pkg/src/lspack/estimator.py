"""Back-of-the-envelope resource arithmetic.

Counts labelled 3-element set assignments, turns a count into enumeration
time at a given check rate, and works the double |Y> distillation example
through the patch-count bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from math import factorial

from .circuit import Circuit, Cnot, to_boxes
from .placement import optimal_patch_count, worst_case_patch_count

CLOCK_RATE_HZ = 3.5e9


@dataclass(frozen=True)
class ConfigCount:
    n_sets: int
    count: int
    unlabeled: bool = False


def config_count(n: int, unlabeled: bool = False) -> ConfigCount:
    """Ways to assign 3N labelled elements to N sets of exactly three.

    Sets are labelled, giving (3N)! / (3!)^N; ``unlabeled`` divides by N!.
    """
    if n < 1:
        raise ValueError("need at least one set")
    count = factorial(3 * n) // 6**n
    if unlabeled:
        count //= factorial(n)
    return ConfigCount(n, count, unlabeled)


SECONDS_PER_HOUR = 3600


def estimate_enumeration_time(count: ConfigCount | int, rate_hz: float = CLOCK_RATE_HZ) -> Decimal:
    """Seconds to check every configuration at ``rate_hz`` checks per second."""
    if rate_hz <= 0:
        raise ValueError("rate must be positive")
    n = count.count if isinstance(count, ConfigCount) else count
    with localcontext() as ctx:
        ctx.prec = 40
        return Decimal(n) / Decimal(repr(float(rate_hz)))


def seconds_to_hours(seconds: Decimal) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 40
        return seconds / SECONDS_PER_HOUR


# One Steane-code distillation block on 8 qubits: three stabiliser fan-outs
# plus one weight-3 logical fan-out from the eighth qubit.
STEANE_BLOCK = ((3, (4, 5, 6)), (1, (2, 5, 6)), (0, (2, 4, 6)), (7, (0, 1, 2)))
BLOCK_QUBITS = 8
FIRST_ROUND_BLOCKS = 7
INJECTIONS_PER_BLOCK = 7


def distillation_circuit() -> Circuit:
    """Two rounds of |Y> distillation: 7 blocks, their injection qubits, 1 final block.

    Injection qubits carry the label ``injection`` and take part in no CNOT.
    """
    gates = []
    labels = {}
    for blk in range(FIRST_ROUND_BLOCKS):
        base = blk * BLOCK_QUBITS
        gates += [Cnot(base + c, tuple(base + t for t in ts)) for c, ts in STEANE_BLOCK]
    inj_base = FIRST_ROUND_BLOCKS * BLOCK_QUBITS
    n_inj = FIRST_ROUND_BLOCKS * INJECTIONS_PER_BLOCK
    for q in range(inj_base, inj_base + n_inj):
        labels[q] = "injection"
    final = inj_base + n_inj
    gates += [Cnot(final + c, tuple(final + t for t in ts)) for c, ts in STEANE_BLOCK]
    return Circuit(final + BLOCK_QUBITS, tuple(gates), labels)


@dataclass(frozen=True)
class ResourceReport:
    n_qubits: int
    eq1_patches: int
    extra_injection_patches: int
    total_optimal: int
    eq2_patches: int
    ratio: float


def resource_report(c: Circuit, injection_label: str = "injection") -> ResourceReport:
    boxes = to_boxes(c)
    eq1 = optimal_patch_count(boxes)
    extra = len(c.qubits_with_label(injection_label))
    eq2 = worst_case_patch_count(boxes, c.qubit_count)
    total = eq1 + extra
    return ResourceReport(c.qubit_count, eq1, extra, total, eq2, eq2 / total if total else float("inf"))


def distillation_case_study() -> ResourceReport:
    return resource_report(distillation_circuit())

