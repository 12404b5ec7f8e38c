import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest

from classes import ALL_PERMUTATIONS, apply_permutation, enumerate_ball_configs
from group import IDENTITY, CayleyTree, GroupWord
from model import (BallConfig, ClassSignature, ConstantBackground, Coupling,
                   FiniteConfiguration, InvalidSignatureError, InvalidSpinError,
                   NotAlmostEverywhereEqualError, all_signatures,
                   ball_energy_closed, ball_energy_direct, disagreement_set,
                   energy_coefficients, relative_hamiltonian_balls,
                   relative_hamiltonian_direct, signature_of)
from peierls import random_perturbation


def random_rational(rng):
    return Fraction(rng.randint(-20, 20), rng.randint(1, 9))


@pytest.mark.parametrize("center, leaves, expected", [
    (1, (1, 1, 1), ClassSignature(1, (3, 0, 0, 0))),
    (1, (1, 1, 2), ClassSignature(1, (2, 1, 0, 0))),
    (4, (2, 3, 4), ClassSignature(4, (0, 1, 1, 1))),
])
def test_signature_of(center, leaves, expected):
    assert signature_of(BallConfig(center, leaves)) == expected


def test_direct_energy_examples():
    assert ball_energy_direct(BallConfig(1, (1, 1, 2)), Coupling(1, 1)) == 2
    assert ball_energy_direct(BallConfig(1, (2, 3, 4)), Coupling(5, -7)) == 0
    assert ball_energy_direct(BallConfig(1, (1, 1, 1)), Coupling(-1, -1)) == Fraction(-9, 2)


def test_closed_energy_examples(ferro):
    assert ball_energy_closed(ClassSignature(1, (3, 0, 0, 0)), ferro, k=2) == Fraction(-9, 2)
    assert ball_energy_closed(ClassSignature(1, (0, 1, 1, 1)), Coupling(3, 5), k=2) == 0
    assert ball_energy_closed(ClassSignature(2, (3, 0, 0, 0)), ferro, k=2) == -3


def test_closed_energy_counts_center_four():
    # the fourth edge term is delta_{4i} r
    assert ball_energy_closed(ClassSignature(4, (0, 0, 0, 3)), Coupling(1, 0)) == Fraction(3, 2)


def test_closed_energy_rejects_wrong_leaf_total():
    with pytest.raises(InvalidSignatureError):
        ball_energy_closed(ClassSignature(1, (2, 1, 0, 0)), Coupling(1, 1), k=3)


def test_signature_validation():
    with pytest.raises(InvalidSignatureError):
        ClassSignature(1, (2, -1, 1, 1))
    with pytest.raises(InvalidSpinError):
        ClassSignature(5, (1, 1, 1, 0))
    with pytest.raises(InvalidSpinError):
        BallConfig(1, (1, 0, 2))


def test_coupling_is_exact():
    assert Coupling("-3/2", 1).j1 == Fraction(-3, 2)
    with pytest.raises(TypeError):
        Coupling(0.5, 1)
    assert Coupling(0, 0).is_zero


@pytest.mark.parametrize("k", [1, 2, 3])
def test_direct_and_closed_energies_agree(k):
    rng = random.Random(100 + k)
    configs = enumerate_ball_configs(k)
    for _ in range(50):
        J = Coupling(random_rational(rng), random_rational(rng))
        for b in configs:
            assert ball_energy_direct(b, J) == ball_energy_closed(signature_of(b), J, k)


def test_energy_is_invariant_under_relabeling(rng):
    J = Coupling(random_rational(rng), random_rational(rng))
    for b in enumerate_ball_configs(2):
        energy = ball_energy_direct(b, J)
        for pi in ALL_PERMUTATIONS:
            assert ball_energy_direct(apply_permutation(pi, b), J) == energy


def test_energy_is_linear_in_coupling(rng):
    for s in all_signatures(2):
        edge = ball_energy_closed(s, Coupling(1, 0))
        pair = ball_energy_closed(s, Coupling(0, 1))
        assert (edge, pair) == energy_coefficients(s)
        J = Coupling(random_rational(rng), random_rational(rng))
        assert ball_energy_closed(s, J) == edge * J.j1 + pair * J.j2


def test_signature_count():
    # 4 centers times the compositions of k+1 into four parts
    assert len(all_signatures(2)) == 4 * 20
    assert len(set(all_signatures(3))) == 4 * 35


def test_identical_configurations_have_zero_relative_energy(single_flip, ferro):
    assert relative_hamiltonian_direct(single_flip, single_flip, ferro) == 0
    assert relative_hamiltonian_balls(single_flip, single_flip, ferro) == 0


def test_single_flip_relative_energy(single_flip, ferro):
    phi = single_flip.unperturbed()
    assert relative_hamiltonian_direct(single_flip, phi, ferro) == 9
    assert relative_hamiltonian_balls(single_flip, phi, ferro) == 9
    # four affected balls: the flipped center and its three neighbors
    assert relative_hamiltonian_balls(single_flip, phi, ferro) == (-3 - Fraction(-9, 2)) + 3 * (-2 - Fraction(-9, 2))


def test_single_flip_nearest_neighbor_only(single_flip):
    phi = single_flip.unperturbed()
    assert relative_hamiltonian_direct(single_flip, phi, Coupling(1, 0)) == -3
    assert relative_hamiltonian_balls(single_flip, phi, Coupling(1, 0)) == -3


def test_ball_sum_equals_pair_sum_on_random_perturbations():
    rng = random.Random(7)
    for _ in range(200):
        J = Coupling(random_rational(rng), random_rational(rng))
        sigma = random_perturbation(ConstantBackground(rng.choice((1, 2, 3, 4))), 2, rng, 5, 3)
        phi = sigma.unperturbed()
        assert relative_hamiltonian_direct(sigma, phi, J) == relative_hamiltonian_balls(sigma, phi, J)


def test_override_equal_to_background_is_not_a_disagreement():
    sigma = FiniteConfiguration(2, ConstantBackground(1), {IDENTITY: 1, GroupWord((2,)): 3})
    assert disagreement_set(sigma, sigma.unperturbed()) == {GroupWord((2,))}


def test_different_backgrounds_are_not_almost_everywhere_equal(ferro):
    sigma = FiniteConfiguration(2, ConstantBackground(1))
    phi = FiniteConfiguration(2, ConstantBackground(2))
    with pytest.raises(NotAlmostEverywhereEqualError):
        relative_hamiltonian_direct(sigma, phi, ferro)


def test_override_outside_tree_rejected():
    with pytest.raises(InvalidSignatureError):
        FiniteConfiguration(2, ConstantBackground(1), {GroupWord((4,)): 2})


def test_edges_lie_in_two_balls_and_distance_two_pairs_in_one(tree2):
    balls = {x: {x, *tree2.neighbors(x)} for x in tree2.words_up_to(3)}
    graph = tree2.to_graph(4)
    for u, v in itertools.combinations(list(tree2.words_up_to(2)), 2):
        d = nx.shortest_path_length(graph, str(u), str(v))
        containing = sum(1 for members in balls.values() if u in members and v in members)
        if d == 1:
            assert containing == 2
        elif d == 2:
            assert containing == 1
        else:
            assert containing == 0
