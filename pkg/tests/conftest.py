"""Shared fixtures and deterministic random generators for the test suite."""
import json
import os
import random
from fractions import Fraction

import pytest

from punctref.chowring import reduce as chow_reduce
from punctref.conecx import build_complex, star_subdivide, Ray
from punctref.fixtureio import load_fixture_file
from punctref.puncture import monomial_ideal
from punctref.tropmaps import numerical_data, target_model

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")

FIXTURE_NAMES = (
    "p2-two-lines",
    "pr-hyperplane",
    "f1-blowup",
    "f1-counterexample",
)


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name + ".json")


def load(name):
    fixture, _ = load_fixture_file(fixture_path(name))
    return fixture


@pytest.fixture(scope="session")
def p2():
    return load("p2-two-lines")


@pytest.fixture(scope="session")
def pr():
    return load("pr-hyperplane")


@pytest.fixture(scope="session")
def f1():
    return load("f1-blowup")


@pytest.fixture(scope="session")
def f1ce():
    return load("f1-counterexample")


def p2_data_model():
    nd = numerical_data(2, (1, 1), [(2, 2), (-1, -1)])
    tm = target_model(2, [
        ((), [((1, 1), "line")]),
        ((1,), [((1, 1), "line")]),
        ((2,), [((1, 1), "line")]),
        ((1, 2), []),
    ])
    return nd, tm


def pr_data_model():
    nd = numerical_data(1, (1,), [(2,), (-1,)])
    tm = target_model(1, [
        ((), [((1,), "line")]),
        ((1,), [((1,), "line-in-H")]),
    ])
    return nd, tm


# deterministic generators shared by the property and acceptance suites


def random_complex(rng, max_rays=5, max_cone=2):
    """A small complex with at least one 2-cone, simplicial by construction."""
    n = rng.randint(2, max_rays)
    ids = [f"r{i}" for i in range(n)]
    cones = [[ids[0], ids[1]]]
    extra = rng.randint(0, 3)
    for _ in range(extra):
        size = rng.randint(2, min(max_cone, n))
        cone = rng.sample(ids, size)
        cones.append(cone)
    return build_complex([Ray(i, None) for i in ids], cones)


def random_class(rng, c, max_terms=4, max_exp=2):
    cones = [cone for cone in c.maximal_cones()]
    faces = {()}
    for cone in cones:
        for r in cone:
            faces.add((r,))
        faces.add(tuple(sorted(cone)))
    faces = sorted(faces)
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        face = rng.choice(faces)
        mono = {r: rng.randint(1, max_exp) for r in face}
        coeff = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
        terms.append((mono, coeff))
    return chow_reduce(terms, c)


def random_step(rng, c):
    """A star subdivision of a random 2-face of a maximal cone."""
    candidates = [cone for cone in c.maximal_cones() if len(cone) >= 2]
    cone = rng.choice(candidates)
    center = tuple(sorted(rng.sample(list(cone), 2)))
    return star_subdivide(c, center)


def random_triple(rng):
    c = random_complex(rng)
    a = random_class(rng, c)
    post, step = random_step(rng, c)
    return c, a, post, step


def random_wide_ideal(rng):
    """A monomial ideal on a complex with a cone of up to four rays."""
    size = rng.randint(2, 4)
    ids = [f"r{i}" for i in range(size + rng.randint(0, 1))]
    cones = [ids[:size]]
    if len(ids) > size:
        cones.append([ids[0], ids[-1]])
    c = build_complex(ids, cones)
    gens = []
    for _ in range(rng.randint(2, 3)):
        g = {r: rng.randint(0, 2) for r in ids}
        g = {r: v for r, v in g.items() if v}
        if g:
            gens.append(g)
    if not gens:
        gens = [{ids[0]: 1}]
    return c, monomial_ideal(c, gens)
