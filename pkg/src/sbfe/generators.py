"""Constructors for the lower-bound instance families.

All generators are deterministic: the same parameters always produce the
same instance, and variables are numbered terms left-to-right and
within-term left-to-right (the tree family numbers edges in preorder).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError
from .formula import DnfFormula, Literal, ReadOnceDnf, RoAnd, RoLeaf, RoNode, RoOr, RoTree
from .instance import EXACT, FLOAT, Instance


def gen_tribes(k: int, w: int) -> Instance:
    """Read-once DNF with k terms of width w, unit costs, p = 1/2."""
    if k < 1 or w < 1:
        raise ParameterError("tribes needs k >= 1 and w >= 1")
    n = k * w
    terms = tuple(
        tuple(Literal(j * w + i) for i in range(w)) for j in range(k)
    )
    formula = ReadOnceDnf(n, terms)
    return Instance(formula, (Fraction(1),) * n, (Fraction(1, 2),) * n, EXACT)


def gen_ucap(m: int, l: int) -> Instance:
    """m identical terms of width l; in each term one low-probability variable.

    Variable 0 of each term is true with probability 1/l, the others with
    probability (l/m)^(1/(l-1)), which is irrational in general, so the
    instance is float mode. Unit costs. Each term is true with probability
    exactly 1/m.
    """
    if m < 2 or l < 2:
        raise ParameterError("ucap needs m >= 2 and l >= 2")
    p_special = 1.0 / l
    p_rest = (l / m) ** (1.0 / (l - 1))
    if not 0.0 < p_rest < 1.0:
        raise ParameterError(f"(l/m)^(1/(l-1)) = {p_rest} is not in (0,1); need l < m")
    n = m * l
    terms = tuple(
        tuple(Literal(j * l + i) for i in range(l)) for j in range(m)
    )
    formula = ReadOnceDnf(n, terms)
    probs = tuple(p_special if i % l == 0 else p_rest for i in range(n))
    return Instance(formula, (1.0,) * n, probs, FLOAT)


def gen_geometric_cost(l: int) -> Instance:
    """2^l terms of width l, p = 1/2, within-term costs 1, 2, 4, ..., 2^(l-1)."""
    if l < 1:
        raise ParameterError("geometric-cost needs l >= 1")
    m = 1 << l
    n = m * l
    terms = tuple(
        tuple(Literal(j * l + i) for i in range(l)) for j in range(m)
    )
    formula = ReadOnceDnf(n, terms)
    costs = tuple(Fraction(1 << (i % l)) for i in range(n))
    return Instance(formula, costs, (Fraction(1, 2),) * n, EXACT)


@dataclass(frozen=True)
class TreeInstanceMeta:
    """Which variables of a tree instance are leaf edges vs internal edges."""

    depth: int
    eps: Fraction
    leaf_mask: int
    internal_mask: int


def gen_binary_tree(d: int, eps) -> tuple[Instance, TreeInstanceMeta]:
    """Read-once formula of a depth-d binary tree whose edges are variables.

    f(x) = 1 iff some leaf is alive (every edge on its root path is true).
    Edges are numbered in preorder; n = 2*2^d - 2. Unit costs and
    p_i = (1+eps)/2 for all i, with eps a rational in (0, 1/2].
    """
    eps = Fraction(eps)
    if d < 1:
        raise ParameterError("tree depth must be >= 1")
    if not 0 < eps <= Fraction(1, 2):
        raise ParameterError("eps must be a rational in (0, 1/2]")
    n = 2 * (1 << d) - 2
    counter = iter(range(n))
    leaf_mask = 0

    def subtree(depth_left: int) -> RoNode:
        nonlocal leaf_mask
        var = next(counter)
        if depth_left == 1:
            leaf_mask |= 1 << var
            return RoLeaf(var)
        return RoAnd((RoLeaf(var), RoOr((subtree(depth_left - 1), subtree(depth_left - 1)))))

    root = RoOr((subtree(d), subtree(d)))
    formula = RoTree(n, root)
    p = (1 + eps) / 2
    inst = Instance(formula, (Fraction(1),) * n, (p,) * n, EXACT)
    meta = TreeInstanceMeta(d, eps, leaf_mask, ((1 << n) - 1) & ~leaf_mask)
    return inst, meta


def gen_address(d: int, shared_cost=Fraction(1)) -> Instance:
    """General DNF selecting one dedicated variable by d shared address bits.

    Term i conjoins the address bits (bit j of i set means a_j appears
    positively, else negated) with the dedicated variable y_i. Address bits
    are variables 0..d-1 with cost ``shared_cost``; the 2^d dedicated
    variables follow with unit cost. Uniform p = 1/2.
    """
    shared_cost = Fraction(shared_cost)
    if d < 1:
        raise ParameterError("address needs d >= 1")
    if shared_cost <= 0:
        raise ParameterError("shared cost must be positive")
    n = (1 << d) + d
    terms = []
    for i in range(1 << d):
        lits = [Literal(j, neg=not (i >> j & 1)) for j in range(d)]
        lits.append(Literal(d + i))
        terms.append(tuple(lits))
    formula = DnfFormula(n, tuple(terms))
    costs = tuple([shared_cost] * d + [Fraction(1)] * (1 << d))
    return Instance(formula, costs, (Fraction(1, 2),) * n, EXACT)
