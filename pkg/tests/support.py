"""Shared builders for randomized test instances. Everything is seeded."""

import random
from fractions import Fraction

from sbfe import (
    DnfFormula,
    Instance,
    Literal,
    NonAdaptiveStrategy,
    ReadOnceDnf,
    TruthTable,
)


def rand_fraction(rng: random.Random, lo=1, hi=8) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def rand_prob(rng: random.Random) -> Fraction:
    den = rng.randint(2, 9)
    return Fraction(rng.randint(1, den - 1), den)


def rand_costs_probs(rng: random.Random, n: int):
    costs = tuple(rand_fraction(rng) for _ in range(n))
    probs = tuple(rand_prob(rng) for _ in range(n))
    return costs, probs


def rand_read_once_dnf(rng: random.Random, n: int) -> ReadOnceDnf:
    """Random partition of all n variables into non-empty terms."""
    variables = list(range(n))
    rng.shuffle(variables)
    terms = []
    i = 0
    while i < n:
        width = rng.randint(1, n - i)
        terms.append(tuple(Literal(v) for v in variables[i : i + width]))
        i += width
    return ReadOnceDnf(n, tuple(terms))


def rand_equal_width_read_once(rng: random.Random, n_max: int) -> ReadOnceDnf:
    """Random tribes-shaped formula with k*w <= n_max and k, w >= 1."""
    shapes = [(k, w) for k in range(1, n_max + 1) for w in range(1, n_max + 1) if k * w <= n_max and k * w >= 2]
    k, w = rng.choice(shapes)
    variables = list(range(k * w))
    rng.shuffle(variables)
    terms = tuple(
        tuple(Literal(v) for v in variables[j * w : (j + 1) * w]) for j in range(k)
    )
    return ReadOnceDnf(k * w, terms)


def rand_truth_table(rng: random.Random, n: int) -> TruthTable:
    return TruthTable(n, rng.getrandbits(1 << n))


def rand_general_dnf(rng: random.Random, n: int) -> DnfFormula:
    terms = []
    for _ in range(rng.randint(1, max(2, n))):
        width = rng.randint(1, n)
        vs = rng.sample(range(n), width)
        terms.append(tuple(Literal(v, neg=rng.random() < 0.4) for v in vs))
    return DnfFormula(n, tuple(terms))


def rand_instance(rng: random.Random, formula) -> Instance:
    costs, probs = rand_costs_probs(rng, formula.n)
    return Instance(formula, costs, probs)


def rand_permutation(rng: random.Random, n: int) -> NonAdaptiveStrategy:
    order = list(range(n))
    rng.shuffle(order)
    return NonAdaptiveStrategy(tuple(order))
