import json
import math
import random

import pytest

from causalstruct import (
    Bbn,
    BbnNode,
    CycleError,
    FormatError,
    InvalidBbnError,
    ThresholdEquation,
    ThresholdEquationSystem,
    bbn_to_sem,
    check_equivalence,
    evaluate,
    joint_probability,
    roundtrip_check,
    sample,
    sem_from_dict,
    sem_joint,
    sem_structure,
    sem_to_dict,
)

from generators import random_bbn


@pytest.fixture
def xy_sem(xy_bbn):
    return bbn_to_sem(xy_bbn)


class TestConstruction:
    def test_paper_network_thresholds(self, xy_sem):
        assert xy_sem.equations[0].thresholds == ((0.4, 1.0),)
        assert xy_sem.equations[1].thresholds == ((0.7, 1.0), (0.2, 1.0))
        assert xy_sem.equations[1].parents == (0,)

    def test_deterministic_row_keeps_empty_interval(self):
        bbn = Bbn(
            (BbnNode("x", ("t", "f"), (), ((0.0, 1.0),)),)
        )
        sem = bbn_to_sem(bbn)
        assert sem.equations[0].thresholds == ((0.0, 1.0),)
        # outcome 0 has an empty interval: no latent in (0,1] selects it
        for u in (1e-12, 0.5, 1.0):
            assert evaluate(sem, {0: u}) == (1,)

    def test_ternary_prior_cumulative(self):
        bbn = Bbn(
            (BbnNode("x", ("a", "b", "c"), (), ((0.2, 0.3, 0.5),)),)
        )
        sem = bbn_to_sem(bbn)
        row = sem.equations[0].thresholds[0]
        assert row == pytest.approx((0.2, 0.5, 1.0), abs=1e-15)
        assert row[-1] == 1.0

    def test_final_threshold_clamped_exactly(self):
        # nine entries of 1/9 accumulate to slightly off 1.0 before clamping
        bbn = Bbn(
            (BbnNode("x", tuple("abcdefghi"), (), ((1.0 / 9,) * 9,)),)
        )
        sem = bbn_to_sem(bbn)
        assert sem.equations[0].thresholds[0][-1] == 1.0

    def test_invalid_network_rejected(self):
        bbn = Bbn((BbnNode("x", ("t", "f"), (), ((0.7, 0.2),)),))
        with pytest.raises(InvalidBbnError):
            bbn_to_sem(bbn)

    def test_bad_final_threshold_rejected(self):
        with pytest.raises(ValueError, match="ends at"):
            ThresholdEquation(target=0, parents=(), thresholds=((0.4, 0.9),))

    def test_decreasing_row_rejected(self):
        with pytest.raises(ValueError, match="non-decreasing"):
            ThresholdEquation(target=0, parents=(), thresholds=((0.5, 0.4, 1.0),))


class TestEvaluate:
    def test_both_latents_low(self, xy_sem):
        assert evaluate(xy_sem, {0: 0.3, 1: 0.65}) == (0, 0)

    def test_boundary_is_right_closed(self, xy_sem):
        # 0.41 > 0.4 pushes x to its second outcome; y's row for that case
        # has threshold 0.2 and the latent sits exactly on it
        assert evaluate(xy_sem, {0: 0.41, 1: 0.2}) == (1, 0)

    def test_all_latents_one_take_last_nonempty_interval(self):
        bbn = Bbn(
            (
                BbnNode("x", ("a", "b", "c"), (), ((0.3, 0.7, 0.0),)),
                BbnNode("y", ("t", "f"), (0,), ((0.5, 0.5), (1.0, 0.0), (0.25, 0.75))),
            )
        )
        sem = bbn_to_sem(bbn)
        got = evaluate(sem, {0: 1.0, 1: 1.0})
        # x: last non-empty interval is outcome 1 (outcome 2 has length 0);
        # y given x=b: row (1.0, 1.0) ends its mass at outcome 0
        assert got == (1, 0)

    def test_latent_out_of_range(self, xy_sem):
        with pytest.raises(ValueError, match="outside"):
            evaluate(xy_sem, {0: 0.0, 1: 0.5})
        with pytest.raises(ValueError, match="outside"):
            evaluate(xy_sem, {0: 0.5, 1: 1.5})

    def test_deterministic(self, xy_sem):
        latents = {0: 0.123456, 1: 0.654321}
        assert evaluate(xy_sem, latents) == evaluate(xy_sem, latents)

    def test_cyclic_system_rejected(self):
        sem = ThresholdEquationSystem(
            ("x", "y"),
            (
                ThresholdEquation(0, (1,), ((0.5, 1.0), (0.5, 1.0))),
                ThresholdEquation(1, (0,), ((0.5, 1.0), (0.5, 1.0))),
            ),
        )
        with pytest.raises(CycleError):
            evaluate(sem, {0: 0.5, 1: 0.5})


class TestSemJoint:
    def test_matches_network_values(self, xy_sem):
        assert sem_joint(xy_sem, (0, 0)) == pytest.approx(0.28, abs=1e-15)
        assert sem_joint(xy_sem, (1, 0)) == pytest.approx(0.12, abs=1e-15)

    def test_normalization(self, xy_sem):
        total = math.fsum(
            sem_joint(xy_sem, (i, j)) for i in range(2) for j in range(2)
        )
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_partial_assignment_rejected(self, xy_sem):
        with pytest.raises(ValueError):
            sem_joint(xy_sem, (0,))

    def test_interval_lengths_reproduce_conditional_entries(self):
        rng = random.Random(11)
        for _ in range(20):
            bbn = random_bbn(rng)
            sem = bbn_to_sem(bbn)
            for node, eq in zip(bbn.nodes, sem.equations):
                for cpt_row, thr_row in zip(node.cpt, eq.thresholds):
                    previous = 0.0
                    for p, c in zip(cpt_row, thr_row):
                        assert c - previous == pytest.approx(p, abs=1e-12)
                        previous = c


class TestCheckEquivalence:
    def test_own_construction_is_equivalent(self, xy_bbn, xy_sem):
        assert check_equivalence(xy_bbn, xy_sem) <= 1e-12

    def test_perturbed_threshold_detected(self, xy_bbn, xy_sem):
        perturbed = ThresholdEquationSystem(
            xy_sem.variable_names,
            (
                xy_sem.equations[0],
                ThresholdEquation(1, (0,), ((0.71, 1.0), (0.2, 1.0))),
            ),
        )
        deviation = check_equivalence(xy_bbn, perturbed)
        assert deviation == pytest.approx(abs(0.4 * 0.71 - 0.4 * 0.70), abs=1e-12)
        assert deviation == pytest.approx(0.004, abs=1e-12)

    def test_single_uniform_binary_node_exact(self):
        bbn = Bbn((BbnNode("x", ("t", "f"), (), ((0.5, 0.5),)),))
        assert check_equivalence(bbn, bbn_to_sem(bbn)) == 0.0

    def test_configuration_bound(self):
        nodes = tuple(
            BbnNode(f"n{i}", ("a", "b", "c", "d"), (), ((0.25,) * 4,))
            for i in range(11)  # 4^11 > 2^20
        )
        bbn = Bbn(nodes)
        with pytest.raises(ValueError, match="enumeration bound"):
            check_equivalence(bbn, bbn_to_sem(bbn))

    def test_mismatched_names_rejected(self, xy_bbn):
        other = Bbn(
            (
                BbnNode("u", ("t", "f"), (), ((0.4, 0.6),)),
                BbnNode("y", ("t", "f"), (0,), ((0.7, 0.3), (0.2, 0.8))),
            )
        )
        with pytest.raises(ValueError, match="different variables"):
            check_equivalence(xy_bbn, bbn_to_sem(other))


class TestSample:
    def test_same_seed_same_tallies(self, xy_sem):
        a = sample(xy_sem, seed=7, count=2000)
        b = sample(xy_sem, seed=7, count=2000)
        assert a == b

    def test_single_draw(self, xy_sem):
        counts = sample(xy_sem, seed=1, count=1)
        assert sum(counts.values()) == 1
        assert len(counts) == 1

    def test_count_must_be_positive(self, xy_sem):
        with pytest.raises(ValueError):
            sample(xy_sem, seed=1, count=0)

    def test_empirical_matches_exact(self, xy_sem):
        draws = 200_000
        counts = sample(xy_sem, seed=42, count=draws)
        assert counts[(0, 0)] / draws == pytest.approx(0.28, abs=0.01)

    def test_total_variation_small(self):
        rng = random.Random(5)
        bbn = random_bbn(rng, max_nodes=3, max_outcomes=4)  # at most 64 outcomes
        sem = bbn_to_sem(bbn)
        draws = 200_000
        counts = sample(sem, seed=99, count=draws)
        outcome_space = [range(k) for k in sem.outcome_counts()]
        import itertools

        tv = 0.5 * math.fsum(
            abs(counts.get(a, 0) / draws - sem_joint(sem, a))
            for a in itertools.product(*outcome_space)
        )
        assert tv < 0.02


class TestSemStructure:
    def test_paper_structure(self, xy_sem):
        matrix = sem_structure(xy_sem)
        assert matrix.rows == (frozenset({0}), frozenset({0, 1}))
        assert matrix.variable_names == ("x", "y")

    def test_parentless_nodes_give_identity_pattern(self):
        bbn = Bbn(
            tuple(BbnNode(f"n{i}", ("t", "f"), (), ((0.5, 0.5),)) for i in range(3))
        )
        matrix = sem_structure(bbn_to_sem(bbn))
        assert matrix.rows == (frozenset({0}), frozenset({1}), frozenset({2}))

    def test_diamond_rows(self):
        bbn = Bbn(
            (
                BbnNode("a", ("t", "f"), (), ((0.5, 0.5),)),
                BbnNode("b", ("t", "f"), (0,), ((0.5, 0.5),) * 2),
                BbnNode("c", ("t", "f"), (0,), ((0.5, 0.5),) * 2),
                BbnNode("d", ("t", "f"), (1, 2), ((0.5, 0.5),) * 4),
            )
        )
        matrix = sem_structure(bbn_to_sem(bbn))
        assert matrix.rows == (
            frozenset({0}),
            frozenset({0, 1}),
            frozenset({0, 2}),
            frozenset({1, 2, 3}),
        )


class TestRoundTrip:
    def test_paper_network(self, xy_bbn):
        assert roundtrip_check(xy_bbn)

    @pytest.mark.parametrize("seed", range(30))
    def test_random_networks(self, seed):
        assert roundtrip_check(random_bbn(random.Random(seed)))


class TestFileFormat:
    def test_round_trip(self, xy_sem):
        doc = sem_to_dict(xy_sem)
        again = sem_from_dict(json.loads(json.dumps(doc)))
        assert again == xy_sem
        assert sem_to_dict(again) == doc

    def test_unknown_key_rejected(self):
        with pytest.raises(FormatError, match="unknown keys"):
            sem_from_dict({"equations": [], "comment": "hi"})

    def test_unknown_parent_named(self):
        doc = {
            "equations": [
                {"target": "x", "parents": ["nope"], "thresholds": [[0.5, 1.0]]}
            ]
        }
        with pytest.raises(FormatError, match="'x'.*'nope'"):
            sem_from_dict(doc)

    def test_bad_row_named(self):
        doc = {
            "equations": [
                {"target": "x", "parents": [], "thresholds": [[0.9, 0.5]]}
            ]
        }
        with pytest.raises(FormatError, match="'x'"):
            sem_from_dict(doc)

    def test_row_count_checked_against_parents(self):
        doc = {
            "equations": [
                {"target": "x", "parents": [], "thresholds": [[0.4, 1.0]]},
                {"target": "y", "parents": ["x"], "thresholds": [[0.7, 1.0]]},
            ]
        }
        with pytest.raises(FormatError, match="needs 2 threshold rows"):
            sem_from_dict(doc)
