"""
Classes Module

This module enumerates the unit-ball configurations, groups them into the
classes Omega of a fixed signature, and closes those classes under the
symmetric group S4 acting by relabeling spins.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from model import (SPINS, BallConfig, ClassSignature, InvalidSignatureError,
                   all_signatures, check_spin)

logger = logging.getLogger(__name__)

MAX_ENUMERATION_K = 4


class SizeGuardError(ValueError):
    """Raised when an enumeration would exceed the supported size."""


@dataclass(frozen=True)
class SpinPermutation:
    """A bijection of {1, 2, 3, 4}; ``images[s - 1]`` is the image of spin s."""
    images: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(SPINS):
            raise ValueError(f"{self.images} is not a permutation of {SPINS}")

    def __call__(self, spin: int) -> int:
        return self.images[check_spin(spin) - 1]

    def compose(self, other: "SpinPermutation") -> "SpinPermutation":
        """self after other."""
        return SpinPermutation(tuple(self(other(spin)) for spin in SPINS))

    def inverse(self) -> "SpinPermutation":
        images = [0] * 4
        for spin, image in zip(SPINS, self.images):
            images[image - 1] = spin
        return SpinPermutation(tuple(images))

    def __str__(self):
        return "".join(map(str, self.images))


IDENTITY_PERMUTATION = SpinPermutation((1, 2, 3, 4))
# The relabelings that move a ball between cosets of the parity subgroup
PI_1 = SpinPermutation((2, 1, 4, 3))
PI_2 = SpinPermutation((3, 4, 1, 2))
PI_3 = SpinPermutation((4, 3, 2, 1))
KLEIN_PERMUTATIONS = (IDENTITY_PERMUTATION, PI_1, PI_2, PI_3)

ALL_PERMUTATIONS = tuple(SpinPermutation(images) for images in itertools.permutations(SPINS))


def klein_relabeling(i: int) -> SpinPermutation:
    """The element of {id, pi1, pi2, pi3} that sends spin i to spin 1."""
    return KLEIN_PERMUTATIONS[check_spin(i) - 1]


@dataclass(frozen=True)
class OrbitClass:
    """
    The S4 orbit of a signature.

    The representative is the smallest member in the order of
    ``model.all_signatures``.
    """
    representative: ClassSignature
    members: frozenset[ClassSignature]

    @property
    def size(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[ClassSignature]:
        return sorted(self.members, key=_signature_key)


def _signature_key(s: ClassSignature):
    return (s.i, tuple(-count for count in s.counts))


def enumerate_ball_configs(k: int) -> list[BallConfig]:
    """
    All 4^(k+2) unit-ball configurations, lexicographic in (center, leaves).

    Args:
        k (int): Tree order, 1 <= k <= 4

    Returns:
        list[BallConfig]: Every ball configuration

    Raises:
        SizeGuardError: If k is outside 1..4
    """
    if not isinstance(k, int) or not 1 <= k <= MAX_ENUMERATION_K:
        raise SizeGuardError(f"Ball enumeration supports 1 <= k <= {MAX_ENUMERATION_K}, got {k!r}")
    configs = [BallConfig(center, leaves)
               for center in SPINS
               for leaves in itertools.product(SPINS, repeat=k + 1)]
    logger.debug(f"Enumerated {len(configs)} ball configurations for k={k}")
    return configs


def multinomial(s: ClassSignature) -> int:
    """Number of ball configurations with signature s: (k+1)! / (m! n! l! r!)."""
    size = factorial(sum(s.counts))
    for count in s.counts:
        size //= factorial(count)
    return size


def omega_class(i: int, m: int, n: int, l: int, k: int) -> list[BallConfig]:
    """
    The class Omega^{(i)}_{m,n,l}: ball configurations with center i and leaf counts (m, n, l, r).

    r = k + 1 - m - n - l is implied.
    """
    r = k + 1 - m - n - l
    if min(m, n, l, r) < 0:
        raise InvalidSignatureError(f"Counts (m, n, l) = ({m}, {n}, {l}) leave r = {r} for k = {k}")
    counts = (m, n, l, r)
    pool = [spin for spin, count in zip(SPINS, counts) for _ in range(count)]
    leaves = sorted(set(itertools.permutations(pool)))
    return [BallConfig(check_spin(i), arrangement) for arrangement in leaves]


def apply_permutation(pi: SpinPermutation, b: BallConfig) -> BallConfig:
    return BallConfig(pi(b.center), tuple(pi(leaf) for leaf in b.leaves))


def permute_signature(pi: SpinPermutation, s: ClassSignature) -> ClassSignature:
    """Induced action on signatures: center i -> pi(i), the count of spin p moves to pi(p)."""
    counts = [0, 0, 0, 0]
    for spin, count in zip(SPINS, s.counts):
        counts[pi(spin) - 1] = count
    return ClassSignature(pi(s.i), tuple(counts))


@lru_cache(maxsize=None)
def orbit_of(s: ClassSignature) -> OrbitClass:
    members = frozenset(permute_signature(pi, s) for pi in ALL_PERMUTATIONS)
    return OrbitClass(min(members, key=_signature_key), members)


@lru_cache(maxsize=None)
def all_orbits(k: int) -> tuple[OrbitClass, ...]:
    """
    Orbits of all signatures for this k, ordered by representative.

    The position of an orbit in this list is its orbit id.
    """
    orbits = {orbit_of(s) for s in all_signatures(k)}
    return tuple(sorted(orbits, key=lambda orbit: _signature_key(orbit.representative)))


@lru_cache(maxsize=None)
def orbit_index(k: int) -> dict[ClassSignature, int]:
    """Map every signature to the id of its orbit."""
    return {member: orbit_id
            for orbit_id, orbit in enumerate(all_orbits(k))
            for member in orbit.members}
