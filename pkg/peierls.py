"""
Peierls Module

This module computes the Peierls constant lambda0 (the gap between the two
smallest ball energies), finds the improper balls of a perturbed ground
state, and checks the Peierls inequality H(sigma, phi) >= lambda0 |boundary|
on single configurations and on seeded random families of perturbations.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ground import ground_state_set, is_ground_state, minimize
from group import CayleyTree, GroupWord
from model import (SPINS, Background, Coupling, FiniteConfiguration, ball_at,
                   ball_energy_closed, disagreement_set, energy_values,
                   relative_hamiltonian_balls, relative_hamiltonian_direct,
                   signature_of, window)

logger = logging.getLogger(__name__)

DEFAULT_FLIPS = 5
DEFAULT_DEPTH = 3


class DegenerateCouplingError(ValueError):
    """Raised at J = (0, 0), where every ball has the same energy and lambda0 is undefined."""


class InvalidBackgroundError(ValueError):
    """Raised when the background of a configuration is not a ground state for the coupling."""


def lambda0(J: Coupling, k: int) -> Fraction:
    """
    Gap between the second-smallest and the smallest ball energy.

    Args:
        J (Coupling): Coupling constants, not both zero
        k (int): Tree order

    Returns:
        Fraction: lambda0 > 0

    Raises:
        DegenerateCouplingError: If J = (0, 0)
    """
    if J.is_zero:
        raise DegenerateCouplingError("lambda0 is undefined at J = (0, 0): all ball energies coincide")
    values = energy_values(J, k)
    return values[1] - values[0]


def improper_balls(sigma: FiniteConfiguration, J: Coupling, window_depth: int | None = None) -> set[GroupWord]:
    """
    Centers of the balls on which sigma is not energy-minimal.

    A ball restriction is energy-minimal exactly when some ground state has
    that restriction, because every minimal ball configuration extends
    periodically to a ground state.

    Args:
        sigma (FiniteConfiguration): Perturbation of a ground-state background
        J (Coupling): Coupling constants
        window_depth (int, optional): Scan every center within this distance of e;
            by default only centers within distance two of the perturbation are scanned

    Returns:
        set[GroupWord]: Centers of the improper balls
    """
    tree = CayleyTree(sigma.k)
    if not is_ground_state(sigma.background, J, sigma.k):
        raise InvalidBackgroundError(f"Background {sigma.background} is not a ground state for J={J}")
    u_min = minimize(J, sigma.k).u_min
    if window_depth is None:
        centers = window(tree, disagreement_set(sigma, sigma.unperturbed()), 2)
    else:
        centers = set(tree.words_up_to(window_depth))
    return {x for x in centers
            if ball_energy_closed(signature_of(ball_at(sigma, x, tree)), J) > u_min}


@dataclass
class PeierlsReport:
    lambda0: Fraction
    boundary_size: int
    relative_energy: Fraction
    direct_energy: Fraction
    min_ball_excess: Fraction | None = None

    @property
    def satisfied(self) -> bool:
        return self.relative_energy >= self.lambda0 * self.boundary_size

    @property
    def slack(self) -> Fraction:
        return self.relative_energy - self.lambda0 * self.boundary_size

    @property
    def routes_agree(self) -> bool:
        return self.relative_energy == self.direct_energy

    def to_dict(self) -> dict:
        return {
            "lambda0": str(self.lambda0),
            "boundary_size": self.boundary_size,
            "relative_energy": str(self.relative_energy),
            "slack": str(self.slack),
            "satisfied": self.satisfied,
            "routes_agree": self.routes_agree,
            "min_ball_excess": None if self.min_ball_excess is None else str(self.min_ball_excess),
        }


def peierls_check(sigma: FiniteConfiguration, J: Coupling) -> PeierlsReport:
    """
    Compare H(sigma, phi) with lambda0 |boundary(sigma)|, phi being sigma's background.

    The relative energy is the ball sum; the pair-by-pair sum is computed
    alongside so the two routes can be compared.
    """
    gap = lambda0(J, sigma.k)
    phi = sigma.unperturbed()
    boundary = improper_balls(sigma, J)
    tree = CayleyTree(sigma.k)
    u_min = minimize(J, sigma.k).u_min
    excesses = [ball_energy_closed(signature_of(ball_at(sigma, x, tree)), J) - u_min for x in boundary]
    report = PeierlsReport(
        lambda0=gap,
        boundary_size=len(boundary),
        relative_energy=relative_hamiltonian_balls(sigma, phi, J),
        direct_energy=relative_hamiltonian_direct(sigma, phi, J),
        min_ball_excess=min(excesses) if excesses else None,
    )
    logger.debug(f"Peierls check: H={report.relative_energy}, |boundary|={report.boundary_size}, lambda0={gap}")
    return report


def random_coupling(rng: random.Random, bound: int = 6, max_denominator: int = 4) -> Coupling:
    """Random rational coupling other than (0, 0)."""
    while True:
        J = Coupling(Fraction(rng.randint(-bound, bound), rng.randint(1, max_denominator)),
                     Fraction(rng.randint(-bound, bound), rng.randint(1, max_denominator)))
        if not J.is_zero:
            return J


def random_perturbation(background: Background, k: int, rng: random.Random,
                        flips: int = DEFAULT_FLIPS, depth: int = DEFAULT_DEPTH) -> FiniteConfiguration:
    """
    Flip between 1 and ``flips`` distinct sites within ``depth`` of e to spins that differ from the background.
    """
    sites = list(CayleyTree(k).words_up_to(depth))
    chosen = rng.sample(sites, min(rng.randint(1, flips), len(sites)))
    overrides = {}
    for x in chosen:
        current = background.value(x)
        overrides[x] = rng.choice([spin for spin in SPINS if spin != current])
    return FiniteConfiguration(k, background, overrides)


@dataclass
class PeierlsSuiteResult:
    k: int
    trials: int
    seed: int
    lambda0_values: list[Fraction] = field(default_factory=list)
    min_slack: Fraction | None = None
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        lambdas = sorted(set(self.lambda0_values))
        return {
            "k": self.k,
            "lambda0": str(lambdas[0]) if len(lambdas) == 1 else [str(value) for value in lambdas],
            "trials": self.trials,
            "seed": self.seed,
            "min_slack": None if self.min_slack is None else str(self.min_slack),
            "failures": self.failures,
            "passed": self.passed,
            "note": "randomized check: sound for the sampled perturbations, not a proof for all of them",
        }


def _describe(sigma: FiniteConfiguration) -> dict:
    return {
        "background": sigma.background.describe(),
        "overrides": [{"word": str(word), "spin": spin}
                      for word, spin in sorted(sigma.overrides.items(), key=lambda item: (len(item[0]), item[0].letters))],
    }


def peierls_suite(k: int, trials: int, seed: int, coupling: Coupling | None = None,
                  flips: int = DEFAULT_FLIPS, depth: int = DEFAULT_DEPTH) -> PeierlsSuiteResult:
    """
    Run ``trials`` seeded random perturbations of ground states through ``peierls_check``.

    With no coupling a fresh random J != (0, 0) is drawn per trial. The
    background of each trial is one of the periodic ground-state witnesses for J.
    """
    if coupling is not None and coupling.is_zero:
        raise DegenerateCouplingError("The Peierls suite needs J != (0, 0)")
    rng = random.Random(seed)
    result = PeierlsSuiteResult(k, trials, seed)
    logger.info(f"Running Peierls suite: k={k}, trials={trials}, seed={seed}, flips<={flips}, depth<={depth}")
    witnesses_by_coupling: dict[Coupling, list] = {}
    for trial in range(trials):
        J = coupling if coupling is not None else random_coupling(rng)
        if J not in witnesses_by_coupling:
            witnesses_by_coupling[J] = ground_state_set(J, k).witnesses
        background = rng.choice(witnesses_by_coupling[J])
        sigma = random_perturbation(background, k, rng, flips, depth)
        report = peierls_check(sigma, J)
        result.lambda0_values.append(report.lambda0)
        if result.min_slack is None or report.slack < result.min_slack:
            result.min_slack = report.slack
        per_ball_ok = report.min_ball_excess is None or report.min_ball_excess >= report.lambda0
        if not (report.satisfied and report.routes_agree and per_ball_ok):
            logger.error(f"Peierls trial {trial} failed at J={J}: {report.to_dict()}")
            result.failures.append({"trial": trial, "coupling": J.to_dict(),
                                    "configuration": _describe(sigma), "report": report.to_dict()})
    logger.info(f"Peierls suite finished: {len(result.failures)} failure(s), min slack {result.min_slack}")
    return result
