from decimal import Decimal
from math import comb, factorial

import pytest

from lspack.circuit import to_boxes
from lspack.estimator import (
    CLOCK_RATE_HZ,
    config_count,
    distillation_case_study,
    distillation_circuit,
    estimate_enumeration_time,
    resource_report,
    seconds_to_hours,
)
from oracles import config_count_formula_product, labeled_triple_assignments, unordered_triple_count


def test_small_counts_match_enumeration():
    for n in (1, 2, 3):
        assert config_count(n).count == labeled_triple_assignments(n)
        assert config_count(n, unlabeled=True).count == unordered_triple_count(n)


def test_two_sets():
    assert config_count(2).count == 20


def test_fifteen():
    c = config_count(15).count
    assert c == factorial(45) // 6**15
    assert 10**44 <= c < 10**45


def test_recurrence():
    for n in range(2, 21):
        assert config_count(n).count == comb(3 * n, 3) * config_count(n - 1).count
        assert config_count(n).count == config_count_formula_product(n)


def test_rejects_zero():
    with pytest.raises(ValueError):
        config_count(0)


def test_time():
    secs = estimate_enumeration_time(config_count(15))
    assert isinstance(secs, Decimal)
    assert float(secs) == pytest.approx(config_count(15).count / CLOCK_RATE_HZ, rel=1e-12)
    assert float(seconds_to_hours(secs)) == pytest.approx(float(secs) / 3600, rel=1e-12)
    assert estimate_enumeration_time(7, 7.0) == 1


def test_time_bad_rate():
    with pytest.raises(ValueError):
        estimate_enumeration_time(5, 0)


def test_distillation_shape():
    c = distillation_circuit()
    assert c.qubit_count == 113
    assert len(c.gates) == 32
    assert len(c.qubits_with_label("injection")) == 49
    assert all(box.size == 4 for box in to_boxes(c).boxes)


def test_case_study():
    rep = distillation_case_study()
    assert (rep.n_qubits, rep.eq1_patches, rep.extra_injection_patches) == (113, 128, 49)
    assert rep.total_optimal == 177 and rep.eq2_patches == 3616
    assert 20 <= rep.ratio <= 21


def test_report_without_injections():
    from lspack.circuit import parse_circuit
    rep = resource_report(parse_circuit("qubits 3\ncnot 0 1 2\n"))
    assert (rep.eq1_patches, rep.extra_injection_patches, rep.eq2_patches) == (3, 0, 3)
