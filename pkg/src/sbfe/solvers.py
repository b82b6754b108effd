"""Exhaustive optimal-strategy computation for small instances.

``opt_adaptive`` runs the classic memoized recursion

    V(f) = 0 if f is constant, else min_i [ c_i + (1-p_i) V(f|x_i=0) + p_i V(f|x_i=1) ]

keyed on the canonical truth table of the current restriction together with
the set of still-untested variables (identities matter: costs and
probabilities differ per variable).

``opt_nonadaptive`` runs a subset DP over test sets T:

    best(T) = 0 if U(T) = 0 or T is full, else min_{i not in T} [ U(T) c_i + best(T + i) ]

where U(T) is the probability that f is still undetermined after observing a
random x on T. best(T) is the unconditional expected remaining cost, so the
total for a permutation is the sum of c_{pi(k+1)} * U(first k variables).

``brute_force_opt`` re-derives both optima by plain exhaustion and serves as
the independence oracle for the DPs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Union

from .bits import table_fix, table_is_constant
from .errors import NotReadOnceDnf, SizeExceeded
from .formula import DnfFormula, PartialAssignment, ReadOnceDnf, to_truth_table
from .instance import Instance
from .strategy import STOP, AdaptiveTree, NonAdaptiveStrategy, TestNode

ADAPTIVE_CAP = 20
NONADAPTIVE_CAP = 16
BRUTE_NONADAPTIVE_CAP = 8
BRUTE_ADAPTIVE_CAP = 4


@dataclass(frozen=True)
class SolveResult:
    value: Fraction
    witness: Union[AdaptiveTree, NonAdaptiveStrategy]


def opt_adaptive(instance: Instance, cap: int = ADAPTIVE_CAP) -> SolveResult:
    """Minimum expected cost over all adaptive strategies, with a witness tree."""
    instance.require_exact()
    n = instance.n
    if n > cap:
        raise SizeExceeded(f"n={n} exceeds adaptive cap {cap}")
    probs, costs = instance.probs, instance.costs
    bits0 = to_truth_table(instance.formula).bits
    memo: dict[tuple[int, tuple[int, ...]], tuple[Fraction, Optional[int]]] = {}

    def solve(bits: int, vs: tuple[int, ...]) -> tuple[Fraction, Optional[int]]:
        if table_is_constant(bits, len(vs)):
            return Fraction(0), None
        key = (bits, vs)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nv = len(vs)
        best_value = None
        best_var = None
        for pos, var in enumerate(vs):
            child_vs = vs[:pos] + vs[pos + 1 :]
            v0, _ = solve(table_fix(bits, nv, pos, 0), child_vs)
            v1, _ = solve(table_fix(bits, nv, pos, 1), child_vs)
            p = probs[var]
            value = costs[var] + (1 - p) * v0 + p * v1
            if best_value is None or value < best_value:
                best_value, best_var = value, var
        memo[key] = (best_value, best_var)
        return best_value, best_var

    value, _ = solve(bits0, tuple(range(n)))

    trees: dict[tuple[int, tuple[int, ...]], object] = {}

    def build(bits: int, vs: tuple[int, ...]):
        if table_is_constant(bits, len(vs)):
            return STOP
        key = (bits, vs)
        node = trees.get(key)
        if node is None:
            var = memo[key][1]
            pos = vs.index(var)
            child_vs = vs[:pos] + vs[pos + 1 :]
            nv = len(vs)
            node = TestNode(
                var,
                build(table_fix(bits, nv, pos, 0), child_vs),
                build(table_fix(bits, nv, pos, 1), child_vs),
            )
            trees[key] = node
        return node

    return SolveResult(value, AdaptiveTree(build(bits0, tuple(range(n)))))


def undetermined_prob(instance: Instance, tested_mask: int) -> Fraction:
    """Pr over x of f not being determined after observing x on ``tested_mask``.

    Sums pattern probabilities over the tested set, pruning whole pattern
    subtrees as soon as the restriction becomes constant.
    """
    instance.require_exact()
    n = instance.n
    bits0 = to_truth_table(instance.formula).bits
    tested = [i for i in range(n) if tested_mask >> i & 1]
    return _undetermined_generic(bits0, tuple(range(n)), tested, instance.probs)


def _undetermined_generic(bits, vs, tested, probs) -> Fraction:
    def rec(bits: int, vs: tuple[int, ...], idx: int) -> Fraction:
        if table_is_constant(bits, len(vs)):
            return Fraction(0)
        if idx == len(tested):
            return Fraction(1)
        var = tested[idx]
        pos = vs.index(var)
        child_vs = vs[:pos] + vs[pos + 1 :]
        nv = len(vs)
        p = probs[var]
        return (1 - p) * rec(table_fix(bits, nv, pos, 0), child_vs, idx + 1) + p * rec(
            table_fix(bits, nv, pos, 1), child_vs, idx + 1
        )

    return rec(bits, vs, 0)


def _read_once_terms(instance: Instance):
    formula = instance.formula
    if isinstance(formula, ReadOnceDnf):
        return formula.terms
    if isinstance(formula, DnfFormula):
        try:
            return ReadOnceDnf.from_dnf(formula).terms
        except NotReadOnceDnf:
            return None
    return None


def _undetermined_read_once(terms, probs, tested_mask: int) -> Fraction:
    """Closed form of U(T) for read-once DNFs.

    Terms are independent, so Pr(determined) splits into Pr(some term has all
    variables tested true) + Pr(every term has a tested false variable).
    """
    pr_no_term_true = Fraction(1)
    pr_all_false = Fraction(1)
    for term in terms:
        prod_tested = Fraction(1)
        untested = 0
        for lit in term:
            if tested_mask >> lit.var & 1:
                prod_tested *= probs[lit.var]
            else:
                untested += 1
        pr_term_true = prod_tested if untested == 0 else Fraction(0)
        pr_no_term_true *= 1 - pr_term_true
        pr_all_false *= 1 - prod_tested
    return pr_no_term_true - pr_all_false


def opt_nonadaptive(instance: Instance, cap: int = NONADAPTIVE_CAP) -> SolveResult:
    """Minimum expected cost over all permutations, with a witness order."""
    instance.require_exact()
    n = instance.n
    if n > cap:
        raise SizeExceeded(f"n={n} exceeds non-adaptive cap {cap}")
    probs, costs = instance.probs, instance.costs
    terms = _read_once_terms(instance)
    full = (1 << n) - 1

    if terms is not None:
        def U(mask: int) -> Fraction:
            return _undetermined_read_once(terms, probs, mask)
    else:
        bits0 = to_truth_table(instance.formula).bits
        all_vars = tuple(range(n))

        def U(mask: int) -> Fraction:
            tested = [i for i in range(n) if mask >> i & 1]
            return _undetermined_generic(bits0, all_vars, tested, probs)

    memo: dict[int, tuple[Fraction, Optional[int]]] = {}

    def solve(mask: int) -> tuple[Fraction, Optional[int]]:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        u = U(mask)
        if u == 0 or mask == full:
            result = (Fraction(0), None)
        else:
            best_value = None
            best_var = None
            for i in range(n):
                if mask >> i & 1:
                    continue
                value = u * costs[i] + solve(mask | 1 << i)[0]
                if best_value is None or value < best_value:
                    best_value, best_var = value, i
            result = (best_value, best_var)
        memo[mask] = result
        return result

    value, _ = solve(0)

    order = []
    mask = 0
    while True:
        var = memo[mask][1]
        if var is None:
            break
        order.append(var)
        mask |= 1 << var
    for i in range(n):
        if not mask >> i & 1:
            order.append(i)
    return SolveResult(value, NonAdaptiveStrategy(tuple(order)))


def brute_force_opt(instance: Instance, kind: str) -> SolveResult:
    """Exhaustive minima used only to certify the DPs.

    ``nonadaptive`` walks the prefix tree of all n! permutations, scoring
    each by sum_k c_{pi(k)} * Pr(undetermined after the first k tests);
    ``adaptive`` recurses over raw partial assignments with no memoization
    or canonicalization.
    """
    instance.require_exact()
    n = instance.n
    if kind == "nonadaptive":
        if n > BRUTE_NONADAPTIVE_CAP:
            raise SizeExceeded(f"n={n} exceeds brute-force cap {BRUTE_NONADAPTIVE_CAP}")
        return _brute_nonadaptive(instance)
    if kind == "adaptive":
        if n > BRUTE_ADAPTIVE_CAP:
            raise SizeExceeded(f"n={n} exceeds brute-force cap {BRUTE_ADAPTIVE_CAP}")
        return _brute_adaptive(instance)
    raise ValueError(f"kind must be 'adaptive' or 'nonadaptive', got {kind!r}")


def _brute_nonadaptive(instance) -> SolveResult:
    n = instance.n
    probs, costs = instance.probs, instance.costs
    bits0 = to_truth_table(instance.formula).bits
    all_vars = tuple(range(n))
    ucache: dict[int, Fraction] = {}

    def U(mask: int) -> Fraction:
        hit = ucache.get(mask)
        if hit is None:
            tested = [i for i in range(n) if mask >> i & 1]
            hit = _undetermined_generic(bits0, all_vars, tested, probs)
            ucache[mask] = hit
        return hit

    best_value = None
    best_order = None
    for order in permutations(range(n)):
        total = Fraction(0)
        mask = 0
        for var in order:
            u = U(mask)
            if u == 0:
                break
            total += u * costs[var]
            mask |= 1 << var
        if best_value is None or total < best_value:
            best_value, best_order = total, order
    return SolveResult(best_value, NonAdaptiveStrategy(best_order))


def _brute_adaptive(instance) -> SolveResult:
    n = instance.n
    probs, costs = instance.probs, instance.costs
    f = instance.formula

    def solve(pa: PartialAssignment):
        if f.determined(pa) is not None:
            return Fraction(0), STOP
        best_value = None
        best_node = None
        for var in range(n):
            if pa.is_tested(var):
                continue
            v0, n0 = solve(pa.assign(var, False))
            v1, n1 = solve(pa.assign(var, True))
            p = probs[var]
            value = costs[var] + (1 - p) * v0 + p * v1
            if best_value is None or value < best_value:
                best_value, best_node = value, TestNode(var, n0, n1)
        return best_value, best_node

    value, node = solve(PartialAssignment())
    return SolveResult(value, AdaptiveTree(node))
