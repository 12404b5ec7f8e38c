"""
Ground Module

This module finds the ground states of the model. Every ball energy is a
linear form in (J1, J2), so the minimizing signatures are constant on the
open sectors of a fan of rays through the origin. The fan is computed exactly
from the tie directions of pairs of forms.

It also builds the periodic configurations that continue a single ball
configuration to the whole tree through the parity subgroup of index four,
and checks them on a finite window.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from math import gcd, lcm

from classes import (OrbitClass, enumerate_ball_configs, klein_relabeling,
                     multinomial, orbit_index, orbit_of)
from group import (ALL_COSETS, CELL_COSETS, IDENTITY, CayleyTree, CosetLabel,
                   FSets, GroupWord)
from model import (SPINS, BallConfig, ClassSignature, Coupling, all_signatures,
                   ball_at, ball_energy_closed, ball_energy_direct,
                   check_spin, energy_coefficients, signature_of)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _tree(k: int) -> CayleyTree:
    return CayleyTree(k)


@dataclass(frozen=True)
class EnergyForm:
    """U of one signature as the linear form edge_coeff * J1 + pair_coeff * J2."""
    signature: ClassSignature
    edge_coeff: Fraction
    pair_coeff: int

    def value(self, J: Coupling) -> Fraction:
        return self.edge_coeff * J.j1 + self.pair_coeff * J.j2

    @property
    def coefficients(self) -> tuple[Fraction, int]:
        return self.edge_coeff, self.pair_coeff


@lru_cache(maxsize=None)
def all_energy_forms(k: int) -> tuple[EnergyForm, ...]:
    """One energy form per signature with k+1 leaves."""
    return tuple(EnergyForm(s, *energy_coefficients(s)) for s in all_signatures(k))


@dataclass(frozen=True)
class Minimum:
    u_min: Fraction
    minimizers: frozenset[ClassSignature]


def minimize(J: Coupling, k: int) -> Minimum:
    """
    Exact minimum of U over all signatures, with every tied minimizer.

    Args:
        J (Coupling): Coupling constants
        k (int): Tree order

    Returns:
        Minimum: U^min and the set of signatures achieving it
    """
    values = [(form.value(J), form.signature) for form in all_energy_forms(k)]
    u_min = min(value for value, _ in values)
    return Minimum(u_min, frozenset(s for value, s in values if value == u_min))


def brute_force_minimum(J: Coupling, k: int) -> Minimum:
    """Minimum over every ball configuration using the coincidence count, as an oracle for ``minimize``."""
    energies = [(ball_energy_direct(b, J), b) for b in enumerate_ball_configs(k)]
    u_min = min(energy for energy, _ in energies)
    return Minimum(u_min, frozenset(signature_of(b) for energy, b in energies if energy == u_min))


def minimal_ball_count(J: Coupling, k: int) -> int:
    """Number of ball configurations whose energy is U^min."""
    return sum(multinomial(s) for s in minimize(J, k).minimizers)


@dataclass(frozen=True)
class PhaseRegion:
    """
    The closed cone of couplings where ``signature`` is energy-minimal.

    Stored as half-planes alpha * J1 + beta * J2 <= 0.
    """
    signature: ClassSignature
    constraints: tuple[tuple[Fraction, int], ...]

    def contains(self, J: Coupling) -> bool:
        return all(alpha * J.j1 + beta * J.j2 <= 0 for alpha, beta in self.constraints)


def phase_region(s: ClassSignature, k: int) -> PhaseRegion:
    edge, pair = energy_coefficients(s)
    constraints = sorted({(edge - form.edge_coeff, pair - form.pair_coeff)
                          for form in all_energy_forms(k)
                          if form.coefficients != (edge, pair)})
    return PhaseRegion(s, tuple(constraints))


# Directions in the (J1, J2) plane are primitive integer vectors.

def direction_of(j1, j2) -> tuple[int, int]:
    """Primitive integer vector pointing along (j1, j2); (0, 0) stays (0, 0)."""
    j1, j2 = Fraction(j1), Fraction(j2)
    scale = lcm(j1.denominator, j2.denominator)
    x, y = int(j1 * scale), int(j2 * scale)
    divisor = gcd(x, y) or 1
    return x // divisor, y // divisor


def _cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u, v) -> int:
    if _half(u) != _half(v):
        return _half(u) - _half(v)
    cross = _cross(u, v)
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def slope_text(direction: tuple[int, int]) -> str:
    x, y = direction
    return "inf" if x == 0 else str(Fraction(y, x))


@dataclass(frozen=True)
class FanRay:
    direction: tuple[int, int]
    minimizers: frozenset[ClassSignature]


@dataclass(frozen=True)
class Sector:
    """Open angular sector from ``start`` counterclockwise to ``end``."""
    start: tuple[int, int]
    end: tuple[int, int]
    interior: tuple[int, int]
    minimizers: frozenset[ClassSignature]

    def contains(self, direction: tuple[int, int]) -> bool:
        turn = _cross(self.start, self.end)
        if turn > 0:
            return _cross(self.start, direction) > 0 and _cross(direction, self.end) > 0
        if turn == 0 and self.start != self.end:
            return _cross(self.start, direction) > 0
        if self.start == self.end:
            return direction != self.start
        # wider than a half-plane: inside unless within the closed complementary wedge
        return not (_cross(self.end, direction) >= 0 and _cross(direction, self.start) >= 0)


def _interior(start, end) -> tuple[int, int]:
    turn = _cross(start, end)
    if turn > 0:
        x, y = start[0] + end[0], start[1] + end[1]
    elif turn == 0 and start != end:
        x, y = -start[1], start[0]
    else:
        x, y = -(start[0] + end[0]), -(start[1] + end[1])
        if (x, y) == (0, 0):
            x, y = -start[1], start[0]
    return direction_of(x, y)


@dataclass
class RegionFan:
    """Boundary rays sorted counterclockwise from the positive J1 axis and the sectors between them."""
    k: int
    rays: list[FanRay] = field(default_factory=list)
    sectors: list[Sector] = field(default_factory=list)

    def lookup(self, J: Coupling) -> frozenset[ClassSignature]:
        """Minimizing signatures at J read off the fan; (0, 0) gives every signature."""
        if J.is_zero:
            return frozenset(all_signatures(self.k))
        direction = direction_of(J.j1, J.j2)
        for ray in self.rays:
            if ray.direction == direction:
                return ray.minimizers
        for sector in self.sectors:
            if sector.contains(direction):
                return sector.minimizers
        raise RuntimeError(f"Direction {direction} is not covered by the fan for k={self.k}")


def _candidate_rays(k: int) -> list[tuple[int, int]]:
    coefficients = sorted({form.coefficients for form in all_energy_forms(k)})
    rays = set()
    for index, (edge, pair) in enumerate(coefficients):
        for other_edge, other_pair in coefficients[index + 1:]:
            # ties where (edge - other_edge) J1 + (pair - other_pair) J2 = 0
            delta_edge, delta_pair = edge - other_edge, pair - other_pair
            ray = direction_of(delta_pair, -delta_edge)
            rays.add(ray)
            rays.add((-ray[0], -ray[1]))
    return sorted(rays, key=cmp_to_key(_angle_cmp))


def _minimizers_along(direction: tuple[int, int], k: int) -> frozenset[ClassSignature]:
    return minimize(Coupling(*direction), k).minimizers


@lru_cache(maxsize=None)
def region_fan(k: int) -> RegionFan:
    """
    Exact fan of the (J1, J2) plane by minimizing signature set.

    Candidate rays are all pairwise tie directions; rays whose minimizer set
    matches both neighboring sectors are not boundaries and are merged away,
    so adjacent sectors always have different minimizers.
    """
    logger.info(f"Computing region fan for k={k}")
    candidates = _candidate_rays(k)
    ray_sets = [_minimizers_along(ray, k) for ray in candidates]
    gap_sets = [_minimizers_along(_interior(ray, candidates[(index + 1) % len(candidates)]), k)
                for index, ray in enumerate(candidates)]

    boundary = [index for index in range(len(candidates))
                if not (ray_sets[index] == gap_sets[index] == gap_sets[index - 1])]
    fan = RegionFan(k)
    for position, index in enumerate(boundary):
        start = candidates[index]
        end = candidates[boundary[(position + 1) % len(boundary)]]
        fan.rays.append(FanRay(start, ray_sets[index]))
        fan.sectors.append(Sector(start, end, _interior(start, end), gap_sets[index]))
    logger.info(f"Region fan for k={k}: {len(fan.rays)} boundary rays out of {len(candidates)} candidates")
    return fan


def orbit_ids(signatures, k: int) -> list[int]:
    index = orbit_index(k)
    return sorted({index[s] for s in signatures})


def orbit_label(signatures, k: int) -> str:
    """Grid label of a minimizer set: orbit ids joined by '+', or ALL for every signature."""
    if len(signatures) == len(all_signatures(k)):
        return "ALL"
    return "+".join(str(orbit_id) for orbit_id in orbit_ids(signatures, k))


def grid_axis(size: int, extent) -> list[Fraction]:
    """``size`` equally spaced exact values from -extent to extent."""
    extent = Fraction(extent)
    return [-extent + 2 * extent * Fraction(step, size - 1) for step in range(size)]


def grid_labels(k: int, size: int, extent) -> list[tuple[Fraction, Fraction, str]]:
    """Minimizer orbit label at every point of a size x size grid, J1-major."""
    fan = region_fan(k)
    axis = grid_axis(size, extent)
    rows = []
    labels: dict[tuple[int, int], str] = {}
    for j1 in axis:
        for j2 in axis:
            direction = direction_of(j1, j2)
            if direction not in labels:
                labels[direction] = orbit_label(fan.lookup(Coupling(j1, j2)), k)
            rows.append((j1, j2, labels[direction]))
    return rows


@dataclass(frozen=True)
class PeriodicGroundState:
    """
    A configuration on the whole tree that is constant on the cosets of a parity subgroup.

    ``coset_values[c]`` is the spin on coset H_c. The subgroup is the kernel of
    x -> coset_class(x, fsets), of index 1, 2 or 4.
    """
    fsets: FSets
    coset_values: tuple[int, int, int, int]
    source_ball: BallConfig

    def __post_init__(self):
        object.__setattr__(self, "coset_values", tuple(self.coset_values))
        if len(self.coset_values) != 4:
            raise ValueError(f"Need one spin per coset, got {self.coset_values}")
        for spin in self.coset_values:
            check_spin(spin)

    @property
    def k(self) -> int:
        return self.fsets.k

    @property
    def is_bijective(self) -> bool:
        return sorted(self.coset_values) == list(SPINS)

    def value(self, x: GroupWord) -> int:
        return self.coset_values[_tree(self.k).coset_class(x, self.fsets).index]

    def period(self) -> int:
        return len(self.fsets.image_subgroup())

    def in_kernel(self, y: GroupWord) -> bool:
        return _tree(self.k).coset_class(y, self.fsets) == CosetLabel()

    def describe(self) -> str:
        return f"periodic:{self.source_ball.center};{' '.join(map(str, self.source_ball.leaves))}"

    def to_dict(self) -> dict:
        return {
            "source_ball": self.source_ball.to_dict(),
            "fsets": self.fsets.to_dict(),
            "coset_values": {label.name: self.coset_values[label.index] for label in ALL_COSETS},
            "period": self.period(),
        }


# Spin carried by each coset before relabeling: a generator of cell F_p leads
# from e into CELL_COSETS[p], which must carry spin p.
_BASE_VALUES = tuple(next(p for p, label in CELL_COSETS.items() if label == coset) for coset in ALL_COSETS)


def extend_periodic(b: BallConfig) -> PeriodicGroundState:
    """
    Continue a ball configuration to a periodic configuration on the whole tree.

    Spins are first relabeled by the Klein permutation kappa with kappa(center) = 1;
    generator a_j goes into cell F_p with p = kappa(leaf j), and coset H_c
    carries kappa applied to the spin of the cell leading into H_c. The ball
    at e reproduces b exactly and the ball at any x is b relabeled by a
    permutation that depends only on the coset of x.

    Args:
        b (BallConfig): Ball configuration centered at e

    Returns:
        PeriodicGroundState: The continuation; a ground state whenever b is energy-minimal
    """
    kappa = klein_relabeling(b.center)
    fsets = FSets(tuple(kappa(leaf) for leaf in b.leaves))
    # kappa is an involution, so it is its own inverse
    coset_values = tuple(kappa(spin) for spin in _BASE_VALUES)
    state = PeriodicGroundState(fsets, coset_values, b)
    logger.debug(f"Extended {b.to_dict()} with F-sets {fsets.assignment}, period {state.period()}")
    return state


@dataclass
class ExtensionReport:
    depth: int
    balls_checked: int = 0
    pairs_checked: int = 0
    exact_center_ball: bool = False
    bijective: bool = True
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.bijective and not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "depth": self.depth,
            "balls_checked": self.balls_checked,
            "periodicity_pairs_checked": self.pairs_checked,
            "exact_center_ball": self.exact_center_ball,
            "bijective": self.bijective,
            "counterexamples": self.counterexamples,
        }


def _sample_kernel_word(state: PeriodicGroundState, rng: random.Random, max_length: int,
                        attempts: int = 200) -> GroupWord:
    tree = _tree(state.k)
    for _ in range(attempts):
        y = tree.random_word(rng, rng.randint(0, max_length))
        if state.in_kernel(y):
            return y
    return IDENTITY


def verify_extension(p: PeriodicGroundState, depth: int, samples: int = 100, seed: int = 0,
                     max_counterexamples: int = 5) -> ExtensionReport:
    """
    Check a periodic configuration on the ball of radius ``depth`` around e.

    Every ball centered within ``depth`` must lie in the orbit class of the
    source ball, and value(yx) = value(x) must hold for ``samples`` random
    pairs with y in the kernel (length <= 2 depth) and x of length <= depth.
    """
    if depth < 1:
        raise ValueError(f"Verification depth must be >= 1, got {depth}")
    tree = _tree(p.k)
    report = ExtensionReport(depth, bijective=p.is_bijective)
    target = orbit_of(signature_of(p.source_ball))

    for x in tree.words_up_to(depth):
        ball = ball_at(p, x, tree)
        report.balls_checked += 1
        if x == IDENTITY:
            report.exact_center_ball = ball == p.source_ball
        if signature_of(ball) not in target.members and len(report.counterexamples) < max_counterexamples:
            report.counterexamples.append({"kind": "orbit", "center": str(x), "ball": ball.to_dict()})

    rng = random.Random(seed)
    for _ in range(samples):
        y = _sample_kernel_word(p, rng, 2 * depth)
        x = tree.random_word(rng, rng.randint(0, depth))
        report.pairs_checked += 1
        if p.value(tree.multiply(y, x)) != p.value(x) and len(report.counterexamples) < max_counterexamples:
            report.counterexamples.append({"kind": "periodicity", "y": str(y), "x": str(x)})

    if not report.passed:
        logger.warning(f"Extension of {p.source_ball.to_dict()} failed: {report.counterexamples[:1]}")
    return report


def canonical_ball(s: ClassSignature) -> BallConfig:
    """Ball configuration with signature s and leaves in ascending spin order."""
    leaves = tuple(spin for spin, count in zip(SPINS, s.counts) for _ in range(count))
    return BallConfig(s.i, leaves)


@dataclass
class GroundStateSet:
    """
    GS(H) for one coupling: everything at J = (0, 0), otherwise the minimizing
    orbit classes with one constructed periodic witness per minimizing signature.
    """
    coupling: Coupling
    k: int
    all_configurations: bool
    u_min: Fraction
    minimizers: list[ClassSignature]
    orbits: list[OrbitClass]
    witnesses: list[PeriodicGroundState]
    minimal_ball_count: int

    def to_dict(self) -> dict:
        if self.all_configurations:
            return {"coupling": self.coupling.to_dict(), "k": self.k, "gs": "ALL", "u_min": str(self.u_min)}
        index = orbit_index(self.k)
        return {
            "coupling": self.coupling.to_dict(),
            "k": self.k,
            "u_min": str(self.u_min),
            "minimizers": [str(s) for s in self.minimizers],
            "orbits": [{"id": index[orbit.representative],
                        "representative": str(orbit.representative),
                        "size": orbit.size} for orbit in self.orbits],
            "minimal_ball_count": self.minimal_ball_count,
            "witnesses": [witness.to_dict() for witness in self.witnesses],
        }


def ground_state_set(J: Coupling, k: int) -> GroundStateSet:
    minimum = minimize(J, k)
    minimizers = sorted(minimum.minimizers, key=lambda s: (s.i, tuple(-count for count in s.counts)))
    if J.is_zero:
        return GroundStateSet(J, k, True, minimum.u_min, minimizers, [], [], 4 ** (k + 2))
    orbits = sorted({orbit_of(s) for s in minimizers},
                    key=lambda orbit: (orbit.representative.i, tuple(-c for c in orbit.representative.counts)))
    witnesses = [extend_periodic(canonical_ball(s)) for s in minimizers]
    logger.info(f"J={J}, k={k}: U^min={minimum.u_min}, {len(minimizers)} minimizing signatures in {len(orbits)} orbit(s)")
    return GroundStateSet(J, k, False, minimum.u_min, minimizers, orbits, witnesses,
                          minimal_ball_count(J, k))


def is_ground_state(background, J: Coupling, k: int) -> bool:
    """
    Whether every ball restriction of a background is energy-minimal.

    Constant and coset-periodic backgrounds have finitely many distinct ball
    restrictions, all realized within distance two of e.
    """
    tree = _tree(k)
    u_min = minimize(J, k).u_min
    return all(ball_energy_closed(signature_of(ball_at(background, x, tree)), J) == u_min
               for x in tree.words_up_to(2))
