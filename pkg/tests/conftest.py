"""Shared test helpers: deterministic random quivers, a brute-force cycle
oracle, and the corpus of invalid .quiver fixtures."""

import itertools

import numpy as np

from infinifood import Composition, Food, IngredientBasis, MixEdge, Quiver


def brute_force_cycles(names, edge_pairs):
    """Every simple directed cycle, by exhaustive permutation search.

    Deliberately the dumbest possible enumerator: try every subset, anchor
    the rotation at the subset's smallest name, and test every arrangement
    against the edge set.  Only usable for a handful of vertices, which is
    the point; it is the independent oracle for the real enumerator.
    """
    edges = set(edge_pairs)
    found = []
    for size in range(1, len(names) + 1):
        for subset in itertools.combinations(sorted(names), size):
            start = subset[0]
            for perm in itertools.permutations(subset[1:]):
                seq = (start,) + perm
                if all((seq[i], seq[(i + 1) % size]) in edges for i in range(size)):
                    found.append(seq)
    return sorted(found, key=lambda s: (len(s), s))


_KINDS = ("cookie", "candy", "ice_cream", "cake")


def random_quiver(rng: np.random.Generator, max_foods: int = 6, max_edges: int = 10) -> Quiver:
    """A random valid quiver: <= max_foods foods, <= max_edges edges,
    incoming fractions summing strictly below 1 at every food."""
    n_ing = int(rng.integers(2, 5))
    basis = IngredientBasis(tuple(f"ing{i}" for i in range(n_ing)))
    n_foods = int(rng.integers(1, max_foods + 1))
    foods = []
    for i in range(n_foods):
        weights = rng.dirichlet(np.ones(n_ing))
        weights = weights / weights.sum()
        foods.append(
            Food(f"Food{i}", _KINDS[int(rng.integers(len(_KINDS)))], Composition(basis, tuple(weights)))
        )
    names = [f.name for f in foods]

    edges = []
    for dst in names:
        if len(edges) >= max_edges:
            break
        n_in = int(rng.integers(0, 3))
        if n_in == 0:
            continue
        budget = float(rng.uniform(0.2, 0.9))
        raw = rng.uniform(0.1, 1.0, size=n_in)
        fractions = raw / raw.sum() * budget
        for j in range(n_in):
            if len(edges) >= max_edges:
                break
            src = names[int(rng.integers(n_foods))]
            if rng.random() < 0.3:
                alpha = float(rng.uniform(0.1, 0.95))
                filler = basis.names[int(rng.integers(n_ing))]
            else:
                alpha, filler = 1.0, None
            label = f"edge{len(edges)}" if rng.random() < 0.4 else None
            edges.append(MixEdge(src, dst, float(fractions[j]), alpha, filler, label))
    return Quiver(basis, tuple(foods), tuple(edges))


# invalid .quiver sources, each with the line number and kind of one
# diagnostic the parser must report for it
INVALID_QUIVER_FIXTURES = [
    (
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=1.5\n",
        4, "FractionOutOfRange",
    ),
    (
        "ingredients: a, b\n"
        "food A kind=x base a=0.5, c=0.5\n",
        2, "UnknownIngredient",
    ),
    (
        "ingredients: a\n"
        "food A kind=x base a=1\n"
        "edge A -> Ghost f=0.5\n",
        3, "UnknownFood",
    ),
    (
        "ingredients: a\n"
        "food A kind=x base a=1\n"
        "food A kind=y base a=1\n",
        3, "DuplicateName",
    ),
    (
        "ingredients: a, a\n",
        1, "DuplicateName",
    ),
    (
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=0.6\n"
        "edge A -> B f=0.6\n",
        5, "SumExceedsOne",
    ),
    (
        "ingredients: a, b\n"
        "food A kind=x base a=0.5, b=0.4\n",
        2, "SumExceedsOne",
    ),
    (
        "ingredients: a\n"
        "food A kind=x base a=1\n"
        "this is not a declaration\n",
        3, "SyntaxError",
    ),
    (
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=0.5 carrier=0.5\n",
        4, "MissingCarrierFiller",
    ),
    (
        "food A kind=x base a=1\n"
        "ingredients: a\n",
        2, "SyntaxError",
    ),
    (
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=0.5 carrier=q:0.5\n",
        4, "UnknownIngredient",
    ),
    (
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=0.5 carrier=b:1.5\n",
        4, "FractionOutOfRange",
    ),
]
