"""Shared pytest fixtures. Living at the repository root also puts the flat modules on sys.path."""

import random

import pytest

from group import IDENTITY, CayleyTree
from model import ConstantBackground, Coupling, FiniteConfiguration


@pytest.fixture
def tree2():
    return CayleyTree(2)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def ferro():
    """J = (-1, -1): both couplings favor equal spins."""
    return Coupling(-1, -1)


@pytest.fixture
def single_flip():
    """The constant configuration 1 on the tree of order 2 with spin 2 at e."""
    return FiniteConfiguration(2, ConstantBackground(1), {IDENTITY: 2})
