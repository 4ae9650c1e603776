"""Shared fixtures: the five example manifolds and a seeded polynomial source."""
import random
from fractions import Fraction

import pytest

from crwb.mparse import load_fixture
from crwb.poly import Poly
from crwb.registry import graph_registry
from crwb.scalars import GaussianRational


def manifold(name):
    return load_fixture(name).to_manifold()


@pytest.fixture
def heis2():
    return manifold("heis2")


@pytest.fixture
def plane():
    return manifold("plane")


@pytest.fixture
def prod3():
    return manifold("prod3")


@pytest.fixture
def st0():
    return manifold("st0")


@pytest.fixture
def st3():
    return manifold("st3")


def random_scalar(rng, height=6):
    return GaussianRational(
        Fraction(rng.randint(-height, height), rng.randint(1, height)),
        Fraction(rng.randint(-height, height), rng.randint(1, height)),
    )


def random_poly(rng, registry, max_terms=5, max_deg=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = [0] * len(registry)
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            e[rng.randrange(len(registry))] += 1
        c = random_scalar(rng)
        if c:
            terms[tuple(e)] = terms.get(tuple(e), GaussianRational(0)) + c
    return Poly(registry, {e: c for e, c in terms.items() if c})


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture
def small_registry():
    return graph_registry(2, 1)
