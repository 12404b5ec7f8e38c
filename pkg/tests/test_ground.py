import random
from fractions import Fraction

import pytest

from classes import enumerate_ball_configs, orbit_of
from group import IDENTITY, CayleyTree, FSets, GroupWord
from ground import (PeriodicGroundState, all_energy_forms, brute_force_minimum,
                    canonical_ball, direction_of, extend_periodic,
                    grid_labels, ground_state_set, is_ground_state, minimal_ball_count, minimize,
                    orbit_label, phase_region, region_fan, verify_extension)
from model import (BallConfig, ClassSignature, ConstantBackground, Coupling,
                   all_signatures, ball_at, ball_energy_direct, signature_of)

SAMPLE_WORDS = [GroupWord(letters) for letters in [(), (1,), (2, 3), (3, 1, 2), (1, 2, 1, 3)]]


def random_coupling(rng):
    while True:
        J = Coupling(Fraction(rng.randint(-12, 12), rng.randint(1, 6)), Fraction(rng.randint(-12, 12), rng.randint(1, 6)))
        if not J.is_zero:
            return J


def forms_by_signature(k):
    return {form.signature: form.coefficients for form in all_energy_forms(k)}


def test_energy_form_coefficients():
    forms = forms_by_signature(2)
    assert forms[ClassSignature(1, (3, 0, 0, 0))] == (Fraction(3, 2), 3)
    assert forms[ClassSignature(1, (0, 1, 1, 1))] == (0, 0)
    assert forms[ClassSignature(1, (2, 1, 0, 0))] == (1, 1)


def test_energy_form_value_set_k2():
    values = {form.coefficients for form in all_energy_forms(2)}
    assert values == {(Fraction(3, 2), 3), (0, 3), (1, 1), (Fraction(1, 2), 1), (0, 1), (Fraction(1, 2), 0), (0, 0)}


def test_zero_coupling_minimized_by_everything():
    minimum = minimize(Coupling(0, 0), 2)
    assert minimum.u_min == 0
    assert minimum.minimizers == set(all_signatures(2))


def test_ferromagnetic_minimizers(ferro):
    minimum = minimize(ferro, 2)
    assert minimum.u_min == Fraction(-9, 2)
    assert minimum.minimizers == orbit_of(ClassSignature(1, (3, 0, 0, 0))).members


def test_mixed_coupling_minimizers():
    minimum = minimize(Coupling(-1, 1), 2)
    assert minimum.u_min == Fraction(-1, 2)
    assert len(minimum.minimizers) == 12
    for s in minimum.minimizers:
        assert s.counts[s.i - 1] == 1
        assert sorted(s.counts) == [0, 1, 1, 1]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_minimize_matches_brute_force(k):
    rng = random.Random(11 * k)
    for _ in range(100):
        J = random_coupling(rng)
        assert minimize(J, k) == brute_force_minimum(J, k)


def test_minimal_ball_count_matches_enumeration(rng):
    configs = enumerate_ball_configs(2)
    assert minimal_ball_count(Coupling(-1, 1), 2) == 72
    for _ in range(20):
        J = random_coupling(rng)
        minimum = minimize(J, 2)
        expected = sum(1 for b in configs if ball_energy_direct(b, J) == minimum.u_min)
        assert minimal_ball_count(J, 2) == expected == ground_state_set(J, 2).minimal_ball_count


def test_minimizer_sets_are_closed_under_relabeling(rng):
    for _ in range(50):
        minimizers = minimize(random_coupling(rng), 2).minimizers
        for s in minimizers:
            assert orbit_of(s).members <= minimizers


def test_phase_region_membership_matches_minimize(rng):
    regions = [phase_region(s, 2) for s in all_signatures(2)]
    for _ in range(30):
        J = random_coupling(rng)
        minimizers = minimize(J, 2).minimizers
        for region in regions:
            assert region.contains(J) == (region.signature in minimizers)


def test_fan_lookup_examples():
    fan = region_fan(2)
    assert fan.lookup(Coupling(-1, -1)) == orbit_of(ClassSignature(1, (3, 0, 0, 0))).members
    distinct_leaves = {s for s in all_signatures(2) if max(s.counts) == 1}
    assert fan.lookup(Coupling(0, 1)) == distinct_leaves
    assert fan.lookup(Coupling(0, 0)) == set(all_signatures(2))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fan_lookup_matches_minimize(k):
    fan = region_fan(k)
    rng = random.Random(k)
    for _ in range(100):
        J = random_coupling(rng)
        assert fan.lookup(J) == minimize(J, k).minimizers
    for sector in fan.sectors:
        assert sector.minimizers == minimize(Coupling(*sector.interior), k).minimizers


def test_fan_regions_are_cones(rng):
    fan = region_fan(2)
    for _ in range(30):
        J = random_coupling(rng)
        scale = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        assert fan.lookup(Coupling(J.j1 * scale, J.j2 * scale)) == fan.lookup(J)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fan_structure(k):
    fan = region_fan(k)
    assert len(fan.rays) == len(fan.sectors) >= 2
    for index, ray in enumerate(fan.rays):
        x, y = ray.direction
        assert isinstance(x, int) and isinstance(y, int)
        before, after = fan.sectors[index - 1].minimizers, fan.sectors[index].minimizers
        assert before != after
        assert before | after <= ray.minimizers
        assert fan.sectors[index].start == ray.direction


def test_boundary_ray_can_hold_extra_minimizers():
    # along J2 = 0, J1 > 0 every form without matched edges ties, including the
    # pair-coefficient-1 forms that win in neither neighboring sector
    fan = region_fan(2)
    index = next(index for index, ray in enumerate(fan.rays) if ray.direction == (1, 0))
    neighbors = fan.sectors[index - 1].minimizers | fan.sectors[index].minimizers
    assert neighbors < fan.rays[index].minimizers


def test_direction_of_is_primitive():
    assert direction_of(Fraction(-3, 2), 3) == (-1, 2)
    assert direction_of(0, Fraction(5, 7)) == (0, 1)
    assert direction_of(0, 0) == (0, 0)


def test_grid_labels_agree_with_minimize():
    rows = grid_labels(2, 5, 2)
    assert len(rows) == 25
    labels = {(j1, j2): label for j1, j2, label in rows}
    assert labels[(0, 0)] == "ALL"
    for (j1, j2), label in labels.items():
        if (j1, j2) != (0, 0):
            assert label == orbit_label(minimize(Coupling(j1, j2), 2).minimizers, 2)


def test_constant_extension():
    state = extend_periodic(BallConfig(1, (1, 1, 1)))
    assert state.period() == 1
    for x in SAMPLE_WORDS:
        assert state.value(x) == 1
    assert verify_extension(state, 6).passed


def test_mixed_extension_is_period_four():
    b = BallConfig(1, (1, 2, 3))
    state = extend_periodic(b)
    assert state.fsets == FSets((1, 2, 3))
    assert state.period() == 4
    assert state.is_bijective
    target = orbit_of(ClassSignature(1, (1, 1, 1, 0))).members
    tree = CayleyTree(2)
    for x in tree.words_up_to(4):
        assert signature_of(ball_at(state, x, tree)) in target
    report = verify_extension(state, 4)
    assert report.passed
    assert report.exact_center_ball


def test_period_two_extension():
    assert extend_periodic(BallConfig(1, (1, 1, 2))).period() == 2


@pytest.mark.parametrize("b", enumerate_ball_configs(2))
def test_every_ball_extends(b):
    state = extend_periodic(b)
    assert state.value(IDENTITY) == b.center
    assert state.coset_values[0] == b.center
    report = verify_extension(state, 4, samples=100, seed=1)
    assert report.passed, report.counterexamples
    assert report.exact_center_ball


def test_corrupted_extension_fails():
    b = BallConfig(1, (1, 2, 3))
    corrupted = PeriodicGroundState(FSets((1, 2, 3)), (1, 1, 3, 4), b)
    report = verify_extension(corrupted, 4)
    assert not report.passed
    assert not report.bijective
    assert report.counterexamples[0]["kind"] == "orbit"


def test_ground_state_set_at_zero_coupling():
    gs = ground_state_set(Coupling(0, 0), 2)
    assert gs.all_configurations
    assert gs.to_dict()["gs"] == "ALL"


def test_ferromagnetic_ground_states_are_constants(ferro):
    gs = ground_state_set(ferro, 2)
    assert len(gs.witnesses) == 4
    assert gs.minimal_ball_count == 4
    constants = set()
    for witness in gs.witnesses:
        values = {witness.value(x) for x in SAMPLE_WORDS}
        assert len(values) == 1
        constants |= values
    assert constants == {1, 2, 3, 4}


def test_mixed_ground_states_verify():
    gs = ground_state_set(Coupling(-1, 1), 2)
    assert gs.u_min == Fraction(-1, 2)
    assert len(gs.witnesses) == 12
    assert gs.minimal_ball_count == 72
    for witness in gs.witnesses:
        assert witness.source_ball == canonical_ball(signature_of(witness.source_ball))
        assert verify_extension(witness, 4).passed
        assert is_ground_state(witness, Coupling(-1, 1), 2)


def test_is_ground_state_rejects_non_minimal_background(ferro):
    assert is_ground_state(ConstantBackground(3), ferro, 2)
    assert not is_ground_state(ConstantBackground(3), Coupling(1, 1), 2)


def test_canonical_ball():
    assert canonical_ball(ClassSignature(2, (1, 0, 2, 0))) == BallConfig(2, (1, 3, 3))
