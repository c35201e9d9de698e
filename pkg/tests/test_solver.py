import random

import pytest

from conftest import random_boxset, single_box
from lspack.circuit import BoxSet, to_boxes
from lspack.estimator import distillation_circuit
from lspack.placement import area, canonical_row_placement, optimal_patch_count, validate
from lspack.reduction import ThreePartitionInstance, instance_to_circuit
from lspack.solver import (
    AnnealConfig,
    BudgetExhausted,
    SolverBudget,
    solve_anneal,
    solve_exact,
    solve_greedy,
)
from lspack.solver.exact import FrameSearch, candidate_frames, fits_area
from oracles import brute_force_min_area

# small box sets with minima checked by full cell-map enumeration
FROZEN = [
    ([(0, 1), (1, 2), (2, 0)], 9),
    ([(0, 1), (0, 2), (0, 3)], 6),
    ([(2, 0, 1), (0,), (0,)], 9),
    ([(1, 3), (0, 1, 4), (1,)], 9),
    ([(2,), (2, 3), (2, 1, 3)], 9),
]


class TestExact:
    def test_single_box(self):
        r = solve_exact(single_box(4))
        assert (r.area, r.proven_optimal) == (4, True)

    def test_disjoint_pair(self):
        r = solve_exact(BoxSet.from_members([(0, 1, 2), (3, 4, 5)]))
        assert r.area == 6 and r.proven_optimal

    def test_shared_pair(self):
        r = solve_exact(BoxSet.from_members([(0, 2), (1, 2)]))
        assert r.area == 4
        assert validate(r.layout, BoxSet.from_members([(0, 2), (1, 2)])).valid

    @pytest.mark.parametrize("members,expected", FROZEN)
    def test_frozen_minima(self, members, expected):
        b = BoxSet.from_members(members)
        r = solve_exact(b)
        assert r.area == expected and r.proven_optimal
        assert validate(r.layout, b).valid

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_cell_map_oracle(self, seed):
        rng = random.Random(seed)
        b = random_boxset(rng, max_boxes=3, max_size=3, max_shared=2)
        while b.occurrence_count > 6:
            b = random_boxset(rng, max_boxes=3, max_size=3, max_shared=2)
        r = solve_exact(b)
        assert r.area == brute_force_min_area(b, r.area)

    def test_gadget_yes_reaches_optimum(self):
        g = instance_to_circuit(ThreePartitionInstance(2, 12, (4,) * 6))
        r = solve_exact(g.boxes)
        assert r.area == 42 == g.optimal_area and r.proven_optimal

    def test_gadget_no_stays_above(self):
        g = instance_to_circuit(ThreePartitionInstance(2, 10, (3, 3, 3, 3, 3, 5), strict_bounds=False))
        r = solve_exact(g.boxes)
        assert r.proven_optimal and r.area > g.optimal_area == 36

    def test_budget_falls_back(self):
        g = instance_to_circuit(ThreePartitionInstance(2, 12, (4,) * 6))
        r = solve_exact(g.boxes, SolverBudget(max_nodes=10))
        assert not r.proven_optimal
        assert validate(r.layout, g.boxes).valid

    def test_max_width(self):
        b = BoxSet.from_members([(0, 1), (2, 3), (4, 5)])
        assert solve_exact(b, max_width=1).area == 6
        assert solve_exact(b).area == 6

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            solve_exact(BoxSet(()))

    def test_frames_sorted(self):
        fr = candidate_frames(BoxSet.from_members([(0, 1), (2, 3)]), 8)
        assert fr == sorted(fr, key=lambda f: (f[0] * f[1], f[0]))
        assert all(h >= 2 for _, h in fr)

    def test_frame_search_lexmin(self):
        b = BoxSet.from_members([(0, 1), (2, 3)])
        lay = FrameSearch(b, 10**6, None).search(1, 4)
        assert [(p.row, p.box_id, p.qubit) for p in lay.patches] == [(0, 0, 0), (1, 0, 1), (2, 1, 2), (3, 1, 3)]

    def test_fits_area(self):
        b = BoxSet.from_members([(0, 1, 2), (3,)])
        lay, _ = fits_area(b, 4)
        assert lay is not None and area(lay) == 4
        assert fits_area(BoxSet.from_members([(0, 1), (1, 2), (2, 0)]), 6)[0] is None

    def test_fits_area_budget(self):
        g = instance_to_circuit(ThreePartitionInstance(2, 10, (3, 3, 3, 3, 3, 5), strict_bounds=False))
        with pytest.raises(BudgetExhausted):
            fits_area(g.boxes, 36, SolverBudget(max_nodes=5))


class TestGreedy:
    def test_disjoint_equal(self):
        b = BoxSet.from_members([(0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)])
        assert solve_greedy(b).area == 12

    def test_distillation_in_bounds(self):
        c = distillation_circuit()
        b = to_boxes(c)
        r = solve_greedy(b)
        assert validate(r.layout, b).valid
        assert 128 <= r.area <= 3616

    def test_valid_on_random(self):
        rng = random.Random(7)
        for _ in range(30):
            b = random_boxset(rng)
            r = solve_greedy(b)
            assert validate(r.layout, b).valid
            assert r.area <= area(canonical_row_placement(b))


class TestAnneal:
    def test_gadget_success_rate(self):
        g = instance_to_circuit(ThreePartitionInstance(2, 12, (4,) * 6))
        hits = sum(solve_anneal(g.boxes, SolverBudget(seed=s)).area == 42 for s in range(20))
        assert hits >= 18

    def test_valid_on_random(self):
        rng = random.Random(11)
        for n in range(15):
            b = random_boxset(rng)
            r = solve_anneal(b, SolverBudget(seed=n), AnnealConfig(max_iterations=2000))
            assert validate(r.layout, b).valid
            assert r.area >= optimal_patch_count(b)

    def test_deterministic(self):
        b = random_boxset(random.Random(3))
        cfg = AnnealConfig(max_iterations=3000)
        r1 = solve_anneal(b, SolverBudget(seed=5), cfg)
        r2 = solve_anneal(b, SolverBudget(seed=5), cfg)
        assert r1.to_text() == r2.to_text()


def test_result_trailer():
    r = solve_exact(single_box(3))
    text = r.to_text()
    assert text.splitlines()[-1].startswith("# area=3")
    assert "proven_optimal=1" in text
