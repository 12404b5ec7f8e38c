"""
Model Module

This module holds the configuration types of the four-state Potts model with
competing interactions (nearest-neighbor coupling J1, next-nearest-neighbor
coupling J2) and the energies built on them:

- the energy U of a configuration on one unit ball, computed directly from the
  spin coincidences and in closed form from the class signature
- the relative Hamiltonian H(sigma, phi) of two configurations that coincide
  almost everywhere, computed pair by pair and as a sum over unit balls

All energies are exact ``fractions.Fraction`` values.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Protocol

from group import CayleyTree, GroupWord, reduce_letters

logger = logging.getLogger(__name__)

SPINS = (1, 2, 3, 4)


class InvalidSpinError(ValueError):
    """Raised when a spin value is outside {1, 2, 3, 4}."""


class InvalidSignatureError(ValueError):
    """Raised when leaf counts are negative or do not sum to k+1."""


class NotAlmostEverywhereEqualError(ValueError):
    """Raised when two configurations differ on an infinite set."""


def check_spin(value) -> int:
    if isinstance(value, bool) or value not in SPINS:
        raise InvalidSpinError(f"Spin must be one of {SPINS}, got {value!r}")
    return value


def to_fraction(value) -> Fraction:
    """
    Convert an int, Fraction or "p/q" string to an exact Fraction.

    Floats are refused so that no binary rounding enters an energy comparison.
    """
    if isinstance(value, float):
        raise TypeError(f"Couplings must be exact, got float {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Cannot read '{value}' as an exact fraction: {e}") from e


@dataclass(frozen=True)
class Coupling:
    """Exact coupling constants J = (J1, J2)."""
    j1: Fraction
    j2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "j1", to_fraction(self.j1))
        object.__setattr__(self, "j2", to_fraction(self.j2))

    @property
    def is_zero(self) -> bool:
        return self.j1 == 0 and self.j2 == 0

    def to_dict(self) -> dict[str, str]:
        return {"j1": str(self.j1), "j2": str(self.j2)}

    def __str__(self):
        return f"({self.j1}, {self.j2})"


@dataclass(frozen=True)
class BallConfig:
    """Spins on one unit ball: the center and one leaf per generator direction."""
    center: int
    leaves: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(self.leaves))
        check_spin(self.center)
        for leaf in self.leaves:
            check_spin(leaf)
        if len(self.leaves) < 2:
            raise InvalidSignatureError(
                f"A unit ball has k+1 >= 2 leaves, got {len(self.leaves)}")

    @property
    def k(self) -> int:
        return len(self.leaves) - 1

    def to_dict(self) -> dict:
        return {"k": self.k, "center": self.center, "leaves": list(self.leaves)}


@dataclass(frozen=True)
class ClassSignature:
    """
    Center spin i and the leaf counts (m, n, l, r) of spins 1, 2, 3, 4.

    Counts are taken over the k+1 leaves only, so m + n + l + r = k + 1.
    """
    i: int
    counts: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        check_spin(self.i)
        if len(self.counts) != 4 or any(count < 0 for count in self.counts):
            raise InvalidSignatureError(f"Need four nonnegative leaf counts, got {self.counts}")
        if sum(self.counts) < 2:
            raise InvalidSignatureError(f"Leaf counts {self.counts} sum to less than k+1 = 2")

    @property
    def k(self) -> int:
        return sum(self.counts) - 1

    def __str__(self):
        return f"({self.i}; {','.join(map(str, self.counts))})"

    def to_dict(self) -> dict:
        return {"i": self.i, "counts": list(self.counts)}


@lru_cache(maxsize=None)
def all_signatures(k: int) -> tuple[ClassSignature, ...]:
    """Every signature with k+1 leaves, ordered by center then counts descending lexicographically."""
    if k < 1:
        raise InvalidSignatureError(f"k must be >= 1, got {k}")
    signatures = []
    for i in SPINS:
        for m in range(k + 1, -1, -1):
            for n in range(k + 1 - m, -1, -1):
                for l in range(k + 1 - m - n, -1, -1):
                    signatures.append(ClassSignature(i, (m, n, l, k + 1 - m - n - l)))
    return tuple(signatures)


def signature_of(b: BallConfig) -> ClassSignature:
    return ClassSignature(b.center, tuple(b.leaves.count(spin) for spin in SPINS))


def energy_coefficients(s: ClassSignature) -> tuple[Fraction, int]:
    """
    Coefficients of J1 and J2 in U for signature s.

    Returns:
        tuple[Fraction, int]: (half the number of leaves equal to the center,
        number of coinciding leaf pairs)
    """
    edge_coeff = Fraction(s.counts[s.i - 1], 2)
    pair_coeff = sum(comb(count, 2) for count in s.counts)
    return edge_coeff, pair_coeff


def ball_energy_direct(b: BallConfig, J: Coupling) -> Fraction:
    """
    Energy of a unit-ball configuration counted coincidence by coincidence.

    Each center-leaf edge contributes J1/2 when its spins agree (every edge
    lies in two balls) and each pair of leaves, which sit at distance two,
    contributes J2 when they agree.
    """
    matched_edges = sum(1 for leaf in b.leaves if leaf == b.center)
    matched_pairs = sum(1 for x, y in itertools.combinations(b.leaves, 2) if x == y)
    return Fraction(matched_edges, 2) * J.j1 + matched_pairs * J.j2


def ball_energy_closed(s: ClassSignature, J: Coupling, k: int | None = None) -> Fraction:
    """
    Energy of a unit ball from its class signature alone.

    U = 1/2 (d_1i m + d_2i n + d_3i l + d_4i r) J1 + (C(m,2) + C(n,2) + C(l,2) + C(r,2)) J2

    Args:
        s (ClassSignature): Center spin and leaf counts
        J (Coupling): Coupling constants
        k (int, optional): Tree order the counts must match

    Returns:
        Fraction: The ball energy
    """
    if k is not None and sum(s.counts) != k + 1:
        raise InvalidSignatureError(f"Signature {s} has {sum(s.counts)} leaves, expected k+1 = {k + 1}")
    edge_coeff, pair_coeff = energy_coefficients(s)
    return edge_coeff * J.j1 + pair_coeff * J.j2


def energy_values(J: Coupling, k: int) -> list[Fraction]:
    """Sorted distinct values U takes over all ball configurations for this k."""
    return sorted({ball_energy_closed(s, J) for s in all_signatures(k)})


class Background(Protocol):
    """Anything that assigns a spin to every vertex of the tree."""

    def value(self, x: GroupWord) -> int: ...


@dataclass(frozen=True)
class ConstantBackground:
    spin: int

    def __post_init__(self):
        check_spin(self.spin)

    def value(self, x: GroupWord) -> int:
        return self.spin

    def describe(self) -> str:
        return f"const:{self.spin}"


@dataclass(frozen=True)
class FiniteConfiguration:
    """
    A background configuration on the whole tree with finitely many overrides.

    Backgrounds are either constant or periodic with respect to a subgroup of
    finite index; two configurations built on agreeing backgrounds coincide
    almost everywhere.
    """
    k: int
    background: Background
    overrides: Mapping[GroupWord, int] = field(default_factory=dict)

    def __post_init__(self):
        overrides = {}
        for word, spin in dict(self.overrides).items():
            if reduce_letters(word.letters) != word.letters:
                raise InvalidSignatureError(f"Override key {word.letters} is not reduced")
            if any(letter < 1 or letter > self.k + 1 for letter in word.letters):
                raise InvalidSignatureError(f"Override key '{word}' uses a generator outside 1..{self.k + 1}")
            overrides[word] = check_spin(spin)
        object.__setattr__(self, "overrides", overrides)

    def __hash__(self):
        return hash((self.k, self.background, tuple(sorted(self.overrides.items(), key=lambda item: item[0].letters))))

    def value(self, x: GroupWord) -> int:
        return self.overrides.get(x, self.background.value(x))

    def unperturbed(self) -> "FiniteConfiguration":
        return FiniteConfiguration(self.k, self.background)


def backgrounds_agree(a: Background, b: Background, tree: CayleyTree) -> bool:
    """
    Whether two coset-periodic backgrounds are the same configuration.

    Both backgrounds factor through a homomorphism onto a product of at most
    two Klein groups, whose image is spanned by at most four generator images,
    so agreement on words with at most four distinct letters decides equality.
    """
    depth = min(tree.k + 1, 4)
    return all(a.value(x) == b.value(x) for x in tree.words_up_to(depth))


def disagreement_set(sigma: FiniteConfiguration, phi: FiniteConfiguration) -> set[GroupWord]:
    """
    Vertices where sigma and phi take different spins.

    Raises:
        NotAlmostEverywhereEqualError: If the backgrounds differ, so the
            disagreement set is infinite
    """
    if sigma.k != phi.k:
        raise NotAlmostEverywhereEqualError(f"Configurations live on trees of order {sigma.k} and {phi.k}")
    tree = CayleyTree(sigma.k)
    if sigma.background != phi.background and not backgrounds_agree(sigma.background, phi.background, tree):
        raise NotAlmostEverywhereEqualError(
            "Backgrounds differ, so the configurations do not coincide almost everywhere")
    candidates = set(sigma.overrides) | set(phi.overrides)
    return {x for x in candidates if sigma.value(x) != phi.value(x)}


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def relative_hamiltonian_direct(sigma: FiniteConfiguration, phi: FiniteConfiguration, J: Coupling) -> Fraction:
    """
    H(sigma, phi) summed over nearest-neighbor pairs and distance-two pairs.

    Only pairs with an endpoint in the disagreement set D contribute, so the
    sum runs over the window of vertices within distance two of D.

    Args:
        sigma (FiniteConfiguration): Perturbed configuration
        phi (FiniteConfiguration): Reference configuration
        J (Coupling): Coupling constants

    Returns:
        Fraction: The relative energy
    """
    tree = CayleyTree(sigma.k)
    changed = disagreement_set(sigma, phi)
    edges: set[frozenset[GroupWord]] = set()
    pairs: set[frozenset[GroupWord]] = set()
    for x in changed:
        for y in tree.neighbors(x):
            edges.add(frozenset((x, y)))
            for z in tree.neighbors(y):
                if z != x:
                    pairs.add(frozenset((x, z)))

    def term(pair):
        x, y = tuple(pair)
        return _delta(sigma.value(x), sigma.value(y)) - _delta(phi.value(x), phi.value(y))

    edge_sum = sum(term(edge) for edge in edges)
    pair_sum = sum(term(pair) for pair in pairs)
    logger.debug(f"Direct relative energy: |D|={len(changed)}, {len(edges)} edges, {len(pairs)} distance-2 pairs")
    return J.j1 * edge_sum + J.j2 * pair_sum


def ball_at(config: Background, x: GroupWord, tree: CayleyTree) -> BallConfig:
    """Restriction of a configuration to the unit ball centered at x; leaf j is x a_j."""
    return BallConfig(config.value(x), tuple(config.value(y) for y in tree.neighbors(x)))


def window(tree: CayleyTree, centers: set[GroupWord], radius: int) -> set[GroupWord]:
    """All vertices within ``radius`` of the given set."""
    reached = set(centers)
    frontier = set(centers)
    for _ in range(radius):
        frontier = {y for x in frontier for y in tree.neighbors(x)} - reached
        reached |= frontier
    return reached


def relative_hamiltonian_balls(sigma: FiniteConfiguration, phi: FiniteConfiguration, J: Coupling) -> Fraction:
    """
    H(sigma, phi) as the sum over unit balls of U(sigma_b) - U(phi_b).

    Ball energies come from the closed form of the class signature. Balls
    centered farther than distance two from the disagreement set have
    identical restrictions and are skipped.
    """
    tree = CayleyTree(sigma.k)
    centers = window(tree, disagreement_set(sigma, phi), 2)
    total = Fraction(0)
    for x in sorted(centers, key=lambda word: (len(word), word.letters)):
        sigma_ball = signature_of(ball_at(sigma, x, tree))
        phi_ball = signature_of(ball_at(phi, x, tree))
        total += ball_energy_closed(sigma_ball, J) - ball_energy_closed(phi_ball, J)
    return total
