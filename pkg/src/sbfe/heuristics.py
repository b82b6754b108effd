"""Closed-form testing strategies for read-once DNFs.

The optimal adaptive strategy orders variables within a term by the ratio
c_i / (1 - p_i) and terms by the ratio C(T) / P(T), where P(T) is the
probability the term is true and C(T) is the expected cost of evaluating the
term sequentially in that variable order:

    C(T) = sum_i c_{j_i} * prod_{r < i} p_{j_r}

(the cost of step i is paid only if every earlier variable was true). All
ratio comparisons are exact in exact mode. Ties break by variable index
within terms and by term index across terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import NotReadOnceDnf, PreconditionViolated
from .formula import DnfFormula, PartialAssignment, ReadOnceDnf
from .instance import Instance
from .strategy import AdaptivePolicy, NonAdaptiveStrategy


@dataclass(frozen=True)
class TermStats:
    """Per-term quantities driving the strategy orderings."""

    truth_prob: Fraction
    eval_cost: Fraction
    order: tuple[int, ...]


def term_stats(instance: Instance, term) -> TermStats:
    costs, probs = instance.costs, instance.probs
    order = tuple(
        sorted((lit.var for lit in term), key=lambda v: (_ratio(costs[v], probs[v]), v))
    )
    truth_prob = _one(instance)
    eval_cost = _zero(instance)
    reach = _one(instance)
    for v in order:
        eval_cost += costs[v] * reach
        reach *= probs[v]
        truth_prob *= probs[v]
    return TermStats(truth_prob, eval_cost, order)


def _ratio(c, p):
    return c / (1 - p)


def _one(instance):
    return Fraction(1) if instance.is_exact else 1.0


def _zero(instance):
    return Fraction(0) if instance.is_exact else 0.0


def _require_read_once(instance: Instance) -> ReadOnceDnf:
    formula = instance.formula
    if isinstance(formula, ReadOnceDnf):
        return formula
    if isinstance(formula, DnfFormula):
        return ReadOnceDnf.from_dnf(formula)
    raise NotReadOnceDnf(f"formula of type {type(formula).__name__} is not a read-once DNF")


def _ordered_terms(instance: Instance) -> list[TermStats]:
    """Term stats sorted by C(T)/P(T), ties by term index."""
    formula = _require_read_once(instance)
    stats = [term_stats(instance, term) for term in formula.terms]
    indexed = sorted(range(len(stats)), key=lambda j: (stats[j].eval_cost / stats[j].truth_prob, j))
    return [stats[j] for j in indexed]


def boros_unyulurt(instance: Instance) -> AdaptivePolicy:
    """Optimal adaptive strategy for read-once DNFs.

    Evaluates terms in C/P order, testing each term's variables in c/(1-p)
    order; a false variable skips the rest of the term.
    """
    ordered = _ordered_terms(instance)

    def next_test(_inst: Instance, pa: PartialAssignment) -> Optional[int]:
        for st in ordered:
            skip = False
            for var in st.order:
                if pa.is_tested(var):
                    if not pa.value_of(var):
                        skip = True
                        break
                else:
                    return var
            if not skip:
                # every variable tested true: the term certifies f = 1
                return None
        return None

    return AdaptivePolicy(next_test, name="boros_unyulurt")


def algorithm1(instance: Instance) -> NonAdaptiveStrategy:
    """Non-adaptive order for unit costs and p = 1/2 everywhere.

    Takes terms shortest first; short terms (length <= ceil(2 log2 n))
    contribute all their variables, long terms only their first
    ceil(2 log2 n), and whatever is left is appended in index order.
    """
    formula = _require_read_once(instance)
    one, half = _one(instance), _one(instance) / 2
    if any(c != one for c in instance.costs) or any(p != half for p in instance.probs):
        raise PreconditionViolated("algorithm1 needs unit costs and uniform p = 1/2")
    n = instance.n
    tau = math.ceil(2 * math.log2(n))
    stats = _ordered_terms(instance)
    out = []
    for st in stats:
        out.extend(st.order[:tau] if len(st.order) > tau else st.order)
    seen = set(out)
    out.extend(i for i in range(n) if i not in seen)
    return NonAdaptiveStrategy(tuple(out))


def round_robin(instance: Instance) -> NonAdaptiveStrategy:
    """One test per term per round, terms in C/P order."""
    stats = _ordered_terms(instance)
    out = []
    width = max((len(st.order) for st in stats), default=0)
    for r in range(width):
        for st in stats:
            if r < len(st.order):
                out.append(st.order[r])
    n = instance.n
    seen = set(out)
    out.extend(i for i in range(n) if i not in seen)
    return NonAdaptiveStrategy(tuple(out))


def term_order(instance: Instance) -> NonAdaptiveStrategy:
    """Terms in C/P order, each evaluated to completion."""
    stats = _ordered_terms(instance)
    out = []
    for st in stats:
        out.extend(st.order)
    n = instance.n
    seen = set(out)
    out.extend(i for i in range(n) if i not in seen)
    return NonAdaptiveStrategy(tuple(out))


def increasing_cost(instance: Instance) -> NonAdaptiveStrategy:
    """Cheapest test first; the classic factor-n fallback for any formula."""
    order = sorted(range(instance.n), key=lambda i: (instance.costs[i], i))
    return NonAdaptiveStrategy(tuple(order))
