import random
from fractions import Fraction

import pytest

from classes import (ALL_PERMUTATIONS, IDENTITY_PERMUTATION, KLEIN_PERMUTATIONS,
                     PI_1, SizeGuardError, all_orbits, apply_permutation,
                     enumerate_ball_configs, klein_relabeling, multinomial,
                     omega_class, orbit_of, permute_signature)
from model import (BallConfig, ClassSignature, Coupling, InvalidSignatureError,
                   all_signatures, ball_energy_closed, signature_of)


@pytest.mark.parametrize("k, count", [(1, 64), (2, 256), (3, 1024)])
def test_enumeration_size(k, count):
    configs = enumerate_ball_configs(k)
    assert len(configs) == count
    assert len(set(configs)) == count
    assert configs == sorted(configs, key=lambda b: (b.center, b.leaves))


@pytest.mark.parametrize("k", [0, 5])
def test_enumeration_size_guard(k):
    with pytest.raises(SizeGuardError):
        enumerate_ball_configs(k)


@pytest.mark.parametrize("counts, size", [((3, 0, 0), 1), ((2, 1, 0), 3), ((1, 1, 1), 6)])
def test_omega_class_sizes(counts, size):
    members = omega_class(1, *counts, k=2)
    assert len(members) == size
    assert all(signature_of(b) == ClassSignature(1, counts + (3 - sum(counts),)) for b in members)
    assert multinomial(signature_of(members[0])) == size


def test_omega_class_rejects_negative_remainder():
    with pytest.raises(InvalidSignatureError):
        omega_class(1, 2, 2, 0, k=2)


def test_omega_classes_partition_ball_configs():
    members = [b for s in all_signatures(2) for b in omega_class(s.i, *s.counts[:3], k=2)]
    assert len(members) == 256
    assert set(members) == set(enumerate_ball_configs(2))


def test_identity_permutation_changes_nothing():
    b = BallConfig(3, (1, 4, 4))
    assert apply_permutation(IDENTITY_PERMUTATION, b) == b


def test_pi1_relabels_pointwise():
    assert apply_permutation(PI_1, BallConfig(1, (1, 2, 3))) == BallConfig(2, (2, 1, 4))


def test_relabeling_permutes_signature():
    for b in enumerate_ball_configs(2):
        for pi in ALL_PERMUTATIONS:
            assert signature_of(apply_permutation(pi, b)) == permute_signature(pi, signature_of(b))


def test_orbit_of_all_equal_ball():
    orbit = orbit_of(ClassSignature(1, (3, 0, 0, 0)))
    assert orbit.members == {
        ClassSignature(1, (3, 0, 0, 0)),
        ClassSignature(2, (0, 3, 0, 0)),
        ClassSignature(3, (0, 0, 3, 0)),
        ClassSignature(4, (0, 0, 0, 3)),
    }


def test_orbit_of_all_distinct_mismatched_ball():
    assert orbit_of(ClassSignature(1, (0, 1, 1, 1))).size == 4


def test_orbits_partition_signatures():
    orbits = all_orbits(2)
    assert sum(orbit.size for orbit in orbits) == len(all_signatures(2))
    seen = set()
    for orbit in orbits:
        assert 24 % orbit.size == 0
        assert not (orbit.members & seen)
        seen |= orbit.members
        assert orbit_of(orbit.representative) == orbit
    assert seen == set(all_signatures(2))


def test_orbit_members_share_energy():
    rng = random.Random(3)
    for _ in range(50):
        J = Coupling(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        for orbit in all_orbits(2):
            assert len({ball_energy_closed(s, J) for s in orbit.members}) == 1


def test_klein_permutations_form_a_subgroup():
    for a in KLEIN_PERMUTATIONS:
        assert a.compose(a) == IDENTITY_PERMUTATION
        assert a.inverse() == a
        for b in KLEIN_PERMUTATIONS:
            assert a.compose(b) in KLEIN_PERMUTATIONS


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_klein_relabeling_sends_center_to_one(i):
    assert klein_relabeling(i)(i) == 1
