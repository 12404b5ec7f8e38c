"""
Verification Module

This module runs the computational checks behind the `verify` command, in
order: group invariants, the agreement of the two ball-energy formulas, the
ball decomposition of the relative Hamiltonian, the periodic extension of
every ball configuration, the ground-state spot checks with the phase fan,
and the Peierls suite. Each suite returns a SuiteResult with its
counterexamples.
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from classes import (ALL_PERMUTATIONS, KLEIN_PERMUTATIONS, apply_permutation,
                     enumerate_ball_configs, omega_class, orbit_of,
                     permute_signature)
from ground import (brute_force_minimum, extend_periodic, ground_state_set,
                    minimize, region_fan, verify_extension)
from group import IDENTITY, CayleyTree, FSets, permute_profile, reduce_letters
from model import (Coupling, ConstantBackground, FiniteConfiguration,
                   ball_energy_closed, ball_energy_direct,
                   relative_hamiltonian_balls, relative_hamiltonian_direct,
                   signature_of)
from peierls import (lambda0, peierls_check, peierls_suite, random_coupling,
                     random_perturbation)

logger = logging.getLogger(__name__)

MAX_FAILURES = 10


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, condition: bool, detail) -> None:
        self.checks += 1
        if not condition and len(self.failures) < MAX_FAILURES:
            self.failures.append(detail)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks, "failures": self.failures}


def sweep_orders(k: int) -> list[int]:
    """The orders every sweep covers: 1, 2, 3 and the requested k."""
    return sorted({1, 2, 3, k})


def random_fsets(rng: random.Random, k: int) -> FSets:
    return FSets(tuple(rng.choice((1, 2, 3, 4)) for _ in range(k + 1)))


def group_suite(k: int, seed: int) -> SuiteResult:
    """Word reduction, homomorphism of coset_class, sphere sizes, Q(x) table, Klein closure."""
    result = SuiteResult("group invariants")
    rng = random.Random(seed)
    for order in sweep_orders(k):
        tree = CayleyTree(order)
        words = list(tree.words_up_to(6))
        for w in words:
            result.check(reduce_letters(w.letters) == w.letters, {"k": order, "idempotence": str(w)})
            result.check(tree.multiply(w, w.inverse()) == IDENTITY, {"k": order, "involution": str(w)})

        graph = tree.to_graph(4)
        depths = nx.single_source_shortest_path_length(graph, "")
        for n in range(1, 5):
            expected = (order + 1) * order ** (n - 1)
            words_at_n = sum(1 for _ in tree.sphere(n))
            bfs_at_n = sum(1 for d in depths.values() if d == n)
            result.check(words_at_n == bfs_at_n == expected,
                         {"k": order, "sphere": n, "words": words_at_n, "bfs": bfs_at_n, "expected": expected})

        for _ in range(1000):
            f = random_fsets(rng, order)
            x = tree.random_word(rng, rng.randint(0, 6))
            y = tree.random_word(rng, rng.randint(0, 6))
            result.check(tree.coset_class(tree.multiply(x, y), f) == tree.coset_class(x, f) ^ tree.coset_class(y, f),
                         {"k": order, "homomorphism": [str(x), str(y)], "fsets": list(f.assignment)})

        for assignment in itertools.product((1, 2, 3, 4), repeat=order + 1):
            f = FSets(assignment)
            base = tree.coset_profile(IDENTITY, f)
            for x in tree.words_up_to(4 if order <= 3 else 2):
                profile = tree.coset_profile(x, f)
                result.check(profile == permute_profile(base, tree.coset_class(x, f)),
                             {"k": order, "profile": str(x), "fsets": list(assignment), "got": list(profile)})

    for a, b in itertools.product(KLEIN_PERMUTATIONS, repeat=2):
        result.check(a.compose(b) in KLEIN_PERMUTATIONS, {"klein_closure": [str(a), str(b)]})
    for pi in KLEIN_PERMUTATIONS:
        result.check(pi.compose(pi) == KLEIN_PERMUTATIONS[0], {"klein_involution": str(pi)})
    return result


def energy_suite(k: int, seed: int, couplings: int = 50) -> SuiteResult:
    """The coincidence count and the closed form agree on every ball configuration."""
    result = SuiteResult("ball energy formulas")
    rng = random.Random(seed)
    for order in sweep_orders(k):
        configs = enumerate_ball_configs(order)
        for _ in range(couplings):
            J = Coupling(Fraction(rng.randint(-20, 20), rng.randint(1, 7)),
                         Fraction(rng.randint(-20, 20), rng.randint(1, 7)))
            for b in configs:
                result.check(ball_energy_direct(b, J) == ball_energy_closed(signature_of(b), J, order),
                             {"k": order, "ball": b.to_dict(), "coupling": J.to_dict()})
        for b in configs:
            for pi in ALL_PERMUTATIONS:
                moved = apply_permutation(pi, b)
                result.check(signature_of(moved) == permute_signature(pi, signature_of(b)),
                             {"k": order, "relabel": str(pi), "ball": b.to_dict()})
        partition = sorted((b for m in range(order + 2) for n in range(order + 2 - m)
                            for l in range(order + 2 - m - n) for i in (1, 2, 3, 4)
                            for b in omega_class(i, m, n, l, order)),
                           key=lambda b: (b.center, b.leaves))
        result.check(partition == configs, {"k": order, "omega_partition": len(partition)})
    return result


def single_flip(k: int) -> FiniteConfiguration:
    """The constant configuration 1 with spin 2 at e."""
    return FiniteConfiguration(k, ConstantBackground(1), {IDENTITY: 2})


def decomposition_suite(k: int, seed: int, trials: int = 200) -> SuiteResult:
    """The ball sum equals the pair-by-pair relative Hamiltonian."""
    result = SuiteResult("relative Hamiltonian decomposition")
    rng = random.Random(seed)
    tree = CayleyTree(k)

    J = Coupling(-1, -1)
    sigma = single_flip(k)
    expected = (k + 1) + (k + 1) * k
    for route in (relative_hamiltonian_direct, relative_hamiltonian_balls):
        value = route(sigma, sigma.unperturbed(), J)
        result.check(value == expected, {"single_flip": route.__name__, "got": str(value), "expected": expected})

    for trial in range(trials):
        J = random_coupling(rng)
        sigma = random_perturbation(ConstantBackground(rng.choice((1, 2, 3, 4))), k, rng, 5, 3)
        phi = sigma.unperturbed()
        direct = relative_hamiltonian_direct(sigma, phi, J)
        balls = relative_hamiltonian_balls(sigma, phi, J)
        result.check(direct == balls, {"trial": trial, "direct": str(direct), "balls": str(balls)})

    # every edge lies in two unit balls and every distance-2 pair in exactly one
    balls = {x: {x, *tree.neighbors(x)} for x in tree.words_up_to(3)}
    graph = tree.to_graph(4)
    inner = list(tree.words_up_to(2))
    for u, v in itertools.combinations(inner, 2):
        d = nx.shortest_path_length(graph, str(u), str(v))
        if d in (1, 2):
            containing = sum(1 for members in balls.values() if u in members and v in members)
            result.check(containing == 3 - d, {"pair": [str(u), str(v)], "distance": d, "balls": containing})
    return result


def extension_suite(k: int, seed: int, depth: int = 4, samples: int = 100) -> SuiteResult:
    """Every ball configuration extends to a periodic configuration whose balls all lie in its orbit class."""
    result = SuiteResult("periodic extension")
    for index, b in enumerate(enumerate_ball_configs(k)):
        state = extend_periodic(b)
        report = verify_extension(state, depth, samples=samples, seed=seed + index)
        result.check(report.passed and report.exact_center_ball,
                     {"ball": b.to_dict(), "report": report.to_dict()})
        result.check(state.period() in (1, 2, 4), {"ball": b.to_dict(), "period": state.period()})
    return result


def ground_suite(k: int, seed: int, directions: int = 100) -> SuiteResult:
    """Ground states at the spot couplings, minimize against brute force, and the phase fan against minimize."""
    result = SuiteResult("ground states and phase fan")
    rng = random.Random(seed)

    zero = Coupling(0, 0)
    result.check(all(ball_energy_direct(b, zero) == 0 for b in enumerate_ball_configs(k)), {"zero_energies": False})
    result.check(ground_state_set(zero, k).all_configurations, {"zero_gs": "not ALL"})

    spot = [Coupling(-1, -1), Coupling(-1, 1)]
    for J in spot + [random_coupling(rng) for _ in range(directions)]:
        exact, brute = minimize(J, k), brute_force_minimum(J, k)
        result.check(exact == brute, {"coupling": J.to_dict(), "minimize": str(exact.u_min), "brute": str(brute.u_min)})
        for s in exact.minimizers:
            result.check(orbit_of(s).members <= exact.minimizers, {"coupling": J.to_dict(), "not_s4_closed": str(s)})
    for J in spot:
        for witness in ground_state_set(J, k).witnesses:
            report = verify_extension(witness, 4, seed=seed)
            result.check(report.passed, {"coupling": J.to_dict(), "witness": witness.to_dict()})

    fan = region_fan(k)
    for _ in range(directions):
        J = random_coupling(rng)
        result.check(fan.lookup(J) == minimize(J, k).minimizers, {"fan_lookup": J.to_dict()})
    for index, ray in enumerate(fan.rays):
        before = fan.sectors[index - 1].minimizers
        after = fan.sectors[index].minimizers
        result.check(before != after, {"ray": list(ray.direction), "adjacent_sectors_equal": True})
        result.check(before | after <= ray.minimizers, {"ray": list(ray.direction), "boundary_misses_neighbor": True})
    return result


def peierls_verification(k: int, seed: int, trials: int = 500) -> SuiteResult:
    """lambda0 positivity, the single flip, and the seeded random perturbation suite."""
    result = SuiteResult("Peierls condition")
    rng = random.Random(seed)
    for _ in range(100):
        J = random_coupling(rng)
        result.check(lambda0(J, k) > 0, {"coupling": J.to_dict(), "lambda0": str(lambda0(J, k))})

    J = Coupling(-1, -1)
    energies = sorted({ball_energy_direct(b, J) for b in enumerate_ball_configs(k)})
    result.check(lambda0(J, k) == energies[1] - energies[0], {"lambda0_oracle": str(energies[1] - energies[0])})
    report = peierls_check(single_flip(k), J)
    result.check(report.boundary_size == k + 2 and report.satisfied and report.routes_agree,
                 {"single_flip": report.to_dict()})

    suite = peierls_suite(k, trials, seed)
    result.checks += suite.trials
    result.failures.extend(suite.failures[:MAX_FAILURES])
    return result


SUITES = (group_suite, energy_suite, decomposition_suite, extension_suite, ground_suite, peierls_verification)


def run_all(k: int, seed: int) -> list[SuiteResult]:
    """
    Run every suite in order, logging the outcome of each.

    Args:
        k (int): Tree order, 1 <= k <= 4
        seed (int): Seed for every randomized check

    Returns:
        list[SuiteResult]: One result per suite
    """
    results = []
    for suite in SUITES:
        logger.info(f"Running suite '{suite.__name__}' for k={k}")
        started = time.perf_counter()
        try:
            result = suite(k, seed)
        except Exception as e:
            logger.error(f"Suite '{suite.__name__}' raised: {str(e)}", exc_info=True)
            result = SuiteResult(suite.__name__, failures=[{"error": str(e)}])
        elapsed = time.perf_counter() - started
        status = "passed" if result.passed else "FAILED"
        logger.info(f"Suite '{result.name}' {status}: {result.checks} checks in {elapsed:.2f}s")
        results.append(result)
    return results
