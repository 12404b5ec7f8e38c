"""
Group Module

This module implements the arithmetic of the group G_k, the free product of
k+1 cyclic groups of order two, whose elements are the vertices of the Cayley
tree of order k. It also provides the generator counts omega_j, the parity
subgroup of index four and its cosets, and a depth-bounded networkx view of
the tree that is used as an independent oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import networkx as nx

logger = logging.getLogger(__name__)


class InvalidGeneratorError(ValueError):
    """Raised when a generator index falls outside {1, ..., k+1}."""


class InvalidTreeError(ValueError):
    """Raised when a tree is requested with k < 1."""


@dataclass(frozen=True)
class GroupWord:
    """
    Reduced word in the generators a_1, ..., a_{k+1}.

    Letters are 1-based generator indices. No two consecutive letters are
    equal; the empty word is the identity e.
    """
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for left, right in zip(self.letters, self.letters[1:]):
            if left == right:
                raise InvalidGeneratorError(
                    f"Word {self.letters} is not reduced: repeated letter {left}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(str(letter) for letter in self.letters)

    def inverse(self) -> "GroupWord":
        # every generator is an involution, so the inverse is the reversal
        return GroupWord(tuple(reversed(self.letters)))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """
        Parse the space-separated text form, e.g. "1 2 1"; "" is the identity.

        The letters are reduced while parsing so "1 1 2" gives "2".
        """
        try:
            letters = [int(token) for token in text.split()]
        except ValueError as e:
            raise InvalidGeneratorError(f"Cannot parse group word '{text}': {e}") from e
        return cls(reduce_letters(letters))


IDENTITY = GroupWord()


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """
    Cancel adjacent equal letters until the sequence is reduced.

    Args:
        letters (Iterable[int]): Generator indices in any (possibly unreduced) order

    Returns:
        tuple[int, ...]: The reduced letter sequence
    """
    stack: list[int] = []
    for letter in letters:
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class CosetLabel:
    """
    Coset of the parity subgroup H_0, as the pair of parity bits (eps1, eps2).

    H0 = (0, 0), H1 = (0, 1), H2 = (1, 0), H3 = (1, 1). Labels compose by
    coordinatewise XOR, so the four labels form the Klein four-group.
    """
    eps1: int = 0
    eps2: int = 0

    def __post_init__(self):
        if self.eps1 not in (0, 1) or self.eps2 not in (0, 1):
            raise ValueError(f"Parity bits must be 0 or 1, got ({self.eps1}, {self.eps2})")

    def __xor__(self, other: "CosetLabel") -> "CosetLabel":
        return CosetLabel(self.eps1 ^ other.eps1, self.eps2 ^ other.eps2)

    @property
    def index(self) -> int:
        return 2 * self.eps1 + self.eps2

    @property
    def name(self) -> str:
        return f"H{self.index}"

    @classmethod
    def from_index(cls, index: int) -> "CosetLabel":
        if index not in range(4):
            raise ValueError(f"Coset index must be in 0..3, got {index}")
        return cls(index >> 1, index & 1)

    @classmethod
    def from_name(cls, name: str) -> "CosetLabel":
        if len(name) != 2 or name[0] != "H" or not name[1].isdigit():
            raise ValueError(f"Unknown coset label '{name}'")
        return cls.from_index(int(name[1]))


ALL_COSETS = tuple(CosetLabel.from_index(index) for index in range(4))

# Coset reached by one step along a generator of cell F_p, read off the parity
# sums: F1 touches neither sum, F2 only the second, F3 both, F4 only the first.
CELL_COSETS = {
    1: CosetLabel(0, 0),
    2: CosetLabel(0, 1),
    3: CosetLabel(1, 1),
    4: CosetLabel(1, 0),
}


@dataclass(frozen=True)
class FSets:
    """
    Partition F_1, F_2, F_3, F_4 of the generator indices {1, ..., k+1}.

    ``assignment[j - 1]`` is the cell p in {1, 2, 3, 4} that generator a_j belongs to.
    """
    assignment: tuple[int, ...]

    def __post_init__(self):
        if not self.assignment:
            raise InvalidGeneratorError("FSets needs at least one generator")
        for cell in self.assignment:
            if cell not in (1, 2, 3, 4):
                raise ValueError(f"F-set cell must be in 1..4, got {cell}")

    @classmethod
    def from_mapping(cls, mapping: dict[int, int]) -> "FSets":
        """Build from {generator index: cell}; the keys must be exactly 1..k+1."""
        if sorted(mapping) != list(range(1, len(mapping) + 1)):
            raise InvalidGeneratorError(f"F-set keys must be 1..{len(mapping)}, got {sorted(mapping)}")
        return cls(tuple(mapping[j] for j in range(1, len(mapping) + 1)))

    @property
    def k(self) -> int:
        return len(self.assignment) - 1

    def cell(self, p: int) -> frozenset[int]:
        return frozenset(j for j, cell in enumerate(self.assignment, start=1) if cell == p)

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return tuple(self.assignment.count(p) for p in (1, 2, 3, 4))

    def generator_coset(self, j: int) -> CosetLabel:
        return CELL_COSETS[self.assignment[j - 1]]

    def image_subgroup(self) -> frozenset[CosetLabel]:
        """
        Subgroup of the Klein group generated by the cosets of the generators.

        Its size is the index of the kernel in G_k, i.e. the period of any
        configuration that is constant on cosets.
        """
        image = {CosetLabel()}
        for label in {self.generator_coset(j) for j in range(1, self.k + 2)}:
            image |= {label ^ existing for existing in image}
        return frozenset(image)

    def to_dict(self) -> dict[str, int]:
        return {str(j): cell for j, cell in enumerate(self.assignment, start=1)}


class CayleyTree:
    """
    The Cayley tree of order k, seen through its group G_k.

    Vertices are reduced words, never an explicit adjacency structure; the
    tree is recovered through ``neighbors`` and ``distance``.
    """

    def __init__(self, k: int):
        if not isinstance(k, int) or k < 1:
            raise InvalidTreeError(f"Cayley tree order must be an integer k >= 1, got {k!r}")
        self.k = k
        self.generators = tuple(range(1, k + 2))

    def __repr__(self):
        return f"CayleyTree(k={self.k})"

    def _check_letter(self, j: int):
        if j not in self.generators:
            raise InvalidGeneratorError(
                f"Generator index {j} out of range 1..{self.k + 1}")

    def generator(self, j: int) -> GroupWord:
        self._check_letter(j)
        return GroupWord((j,))

    def multiply(self, a: GroupWord, b: GroupWord) -> GroupWord:
        """
        Product of two reduced words: concatenation with full cancellation.

        Args:
            a (GroupWord): Left factor
            b (GroupWord): Right factor

        Returns:
            GroupWord: The reduced product
        """
        for letter in a.letters + b.letters:
            self._check_letter(letter)
        # only the junction can cancel since both factors are reduced
        left = list(a.letters)
        right = 0
        while left and right < len(b.letters) and left[-1] == b.letters[right]:
            left.pop()
            right += 1
        return GroupWord(tuple(left) + b.letters[right:])

    def distance(self, x: GroupWord, y: GroupWord) -> int:
        return len(self.multiply(x.inverse(), y))

    def omega(self, x: GroupWord, j: int) -> int:
        """Number of occurrences of the generator a_j in x."""
        self._check_letter(j)
        return x.letters.count(j)

    def neighbors(self, x: GroupWord) -> list[GroupWord]:
        """Nearest neighbors of x, in generator order: [x a_1, ..., x a_{k+1}]."""
        return [self.multiply(x, GroupWord((j,))) for j in self.generators]

    def coset_class(self, x: GroupWord, f: FSets) -> CosetLabel:
        """
        Coset of x with respect to the parity subgroup defined by f.

        eps1 is the parity of the number of letters outside F_1 and F_2,
        eps2 the parity of the number of letters in F_2 or F_3.
        """
        if f.k != self.k:
            raise InvalidGeneratorError(f"F-sets cover {f.k + 1} generators, tree has {self.k + 1}")
        eps1 = eps2 = 0
        for letter in x.letters:
            self._check_letter(letter)
            cell = f.assignment[letter - 1]
            if cell in (3, 4):
                eps1 ^= 1
            if cell in (2, 3):
                eps2 ^= 1
        return CosetLabel(eps1, eps2)

    def coset_profile(self, x: GroupWord, f: FSets) -> tuple[int, int, int, int]:
        """
        Q(x): how many neighbors of x fall in each of H0, H1, H2, H3.

        Args:
            x (GroupWord): Vertex
            f (FSets): Partition defining the parity subgroup

        Returns:
            tuple[int, int, int, int]: (q_0(x), q_1(x), q_2(x), q_3(x)), summing to k+1
        """
        counts = [0, 0, 0, 0]
        for y in self.neighbors(x):
            counts[self.coset_class(y, f).index] += 1
        return tuple(counts)

    def sphere(self, n: int) -> Iterator[GroupWord]:
        """Words of length exactly n, in lexicographic order."""
        if n < 0:
            return
        if n == 0:
            yield IDENTITY
            return
        for shorter in self.sphere(n - 1):
            for j in self.generators:
                if not shorter.letters or shorter.letters[-1] != j:
                    yield GroupWord(shorter.letters + (j,))

    def words_up_to(self, depth: int) -> Iterator[GroupWord]:
        """All words of length <= depth, shortest first."""
        for n in range(depth + 1):
            yield from self.sphere(n)

    def random_word(self, rng, length: int) -> GroupWord:
        """Uniformly random reduced word of the given length drawn from ``rng``."""
        letters: list[int] = []
        for _ in range(length):
            choices = [j for j in self.generators if not letters or letters[-1] != j]
            letters.append(rng.choice(choices))
        return GroupWord(tuple(letters))

    def to_graph(self, depth: int) -> nx.Graph:
        """
        Explicit networkx graph of the ball of radius ``depth`` around e.

        Nodes are the text forms of the words, so the graph can be compared
        against the word arithmetic without sharing any code with it.
        """
        graph = nx.Graph()
        graph.add_node("")
        frontier = [()]
        for _ in range(depth):
            next_frontier = []
            for letters in frontier:
                for j in self.generators:
                    if letters and letters[-1] == j:
                        continue
                    child = letters + (j,)
                    graph.add_edge(" ".join(map(str, letters)), " ".join(map(str, child)))
                    next_frontier.append(child)
            frontier = next_frontier
        logger.debug(f"Built depth-{depth} tree graph with {graph.number_of_nodes()} nodes")
        return graph


def permute_profile(profile: Sequence[int], label: CosetLabel) -> tuple[int, ...]:
    """
    Q(e) rearranged for a vertex in coset ``label``.

    Coordinate c of the result is coordinate c XOR label of ``profile``; this is
    the four-case table H0 -> Q(e), H1 -> (q1, q0, q3, q2),
    H2 -> (q2, q3, q0, q1), H3 -> (q3, q2, q1, q0).
    """
    return tuple(profile[c ^ label.index] for c in range(4))
