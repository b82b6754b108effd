"""Testing strategies and their exact / Monte Carlo expected costs.

Three strategy forms are supported:

* ``NonAdaptiveStrategy``: a permutation of [0, n); tests run in that order,
  with determination re-checked after every single test.
* ``AdaptiveTree``: materialized decision tree of Test/Stop nodes.
* ``AdaptivePolicy``: a callback ``(instance, partial_assignment) -> var | None``
  deciding the next test lazily; None means stop.

Expected cost has two independent exact evaluators that must agree
bit-exactly: :func:`expected_cost_enum` (full enumeration of inputs, driving
the per-input simulator) and :func:`expected_cost_exact` (recursion over the
strategy's branching structure on packed truth tables). Tests assert their
agreement; production callers use the recursion form.

Monte Carlo estimation uses numpy's PCG64 generator. Reproducibility
contract: the (seed, samples, workers) triple determines the output exactly,
with per-worker generators derived by ``SeedSequence(seed).spawn(workers)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .bits import table_fix, table_is_constant
from .errors import InvalidStrategy, SchemaError
from .formula import PartialAssignment, to_truth_table
from .instance import Instance, Value


@dataclass(frozen=True)
class NonAdaptiveStrategy:
    """A fixed test order; execution stops as soon as f is determined."""

    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise InvalidStrategy("order must be a permutation of 0..n-1")


@dataclass(frozen=True)
class StopNode:
    pass


@dataclass(frozen=True)
class TestNode:
    var: int
    if_false: "TreeNode"
    if_true: "TreeNode"


TreeNode = Union[StopNode, TestNode]

STOP = StopNode()


@dataclass(frozen=True)
class AdaptiveTree:
    root: TreeNode


class AdaptivePolicy:
    """Lazy adaptive strategy defined by a next-test callback.

    The callback must never return an already-tested variable and may return
    None (stop) only when the instance's formula is determined.
    """

    def __init__(self, fn: Callable[[Instance, PartialAssignment], Optional[int]], name: str = "policy"):
        self.fn = fn
        self.name = name

    def __call__(self, instance: Instance, pa: PartialAssignment) -> Optional[int]:
        return self.fn(instance, pa)


Strategy = Union[NonAdaptiveStrategy, AdaptiveTree, AdaptivePolicy]


# ---------------------------------------------------------------------------
# Per-input simulation


def simulate_cost(instance: Instance, x: int, strategy: Strategy) -> Value:
    """Total cost of the tests performed on input ``x`` until f is determined."""
    if isinstance(strategy, NonAdaptiveStrategy):
        return _simulate_perm(instance, x, strategy.order)
    if isinstance(strategy, AdaptiveTree):
        return _simulate_tree(instance, x, strategy.root)
    if isinstance(strategy, AdaptivePolicy):
        return _simulate_policy(instance, x, strategy)
    raise TypeError(f"not a strategy: {strategy!r}")


def _zero(instance: Instance) -> Value:
    return Fraction(0) if instance.is_exact else 0.0


def _simulate_perm(instance, x, order):
    if len(order) != instance.n:
        raise InvalidStrategy("permutation length differs from n")
    f = instance.formula
    pa = PartialAssignment()
    cost = _zero(instance)
    for var in order:
        if f.determined(pa) is not None:
            return cost
        cost += instance.costs[var]
        pa = pa.assign(var, bool(x >> var & 1))
    return cost


def _simulate_tree(instance, x, node):
    f = instance.formula
    pa = PartialAssignment()
    cost = _zero(instance)
    while True:
        if f.determined(pa) is not None:
            return cost
        if isinstance(node, StopNode):
            raise InvalidStrategy("tree stops before f is determined")
        try:
            new_pa = pa.assign(node.var, bool(x >> node.var & 1))
        except ValueError as exc:
            raise InvalidStrategy(str(exc)) from exc
        cost += instance.costs[node.var]
        node = node.if_true if x >> node.var & 1 else node.if_false
        pa = new_pa


def _simulate_policy(instance, x, policy):
    f = instance.formula
    pa = PartialAssignment()
    cost = _zero(instance)
    while True:
        if f.determined(pa) is not None:
            return cost
        var = policy(instance, pa)
        if var is None:
            raise InvalidStrategy("policy stopped before f is determined")
        try:
            pa = pa.assign(var, bool(x >> var & 1))
        except ValueError as exc:
            raise InvalidStrategy(str(exc)) from exc
        cost += instance.costs[var]


# ---------------------------------------------------------------------------
# Exact expected cost, evaluator (a): enumeration over all inputs


def expected_cost_enum(instance: Instance, strategy: Strategy) -> Fraction:
    """Sum of Pr(x) * simulate_cost(x) over all 2^n inputs. Oracle evaluator."""
    instance.require_exact()
    total = Fraction(0)
    for x in range(1 << instance.n):
        total += instance.prob_of_input(x) * simulate_cost(instance, x, strategy)
    return total


# ---------------------------------------------------------------------------
# Exact expected cost, evaluator (b): recursion on packed truth tables


def expected_cost_exact(instance: Instance, strategy: Strategy) -> Fraction:
    """Exact expected cost via prefix recursion. Agrees bit-exactly with
    :func:`expected_cost_enum`; see the module docstring."""
    return _expected_recursive(instance, strategy, instance.costs)


def expected_leaf_cost(instance: Instance, strategy: Strategy, free_mask: int) -> Fraction:
    """Expected cost with the variables in ``free_mask`` made free (cost 0)."""
    zero = Fraction(0)
    costs = tuple(zero if free_mask >> i & 1 else c for i, c in enumerate(instance.costs))
    return _expected_recursive(instance, strategy, costs)


def _expected_recursive(instance, strategy, costs) -> Fraction:
    instance.require_exact()
    if isinstance(strategy, NonAdaptiveStrategy):
        return _expected_perm(instance, strategy.order, costs)
    if isinstance(strategy, AdaptiveTree):
        return _expected_tree(instance, strategy.root, costs)
    if isinstance(strategy, AdaptivePolicy):
        return _expected_policy(instance, strategy, costs)
    raise TypeError(f"not a strategy: {strategy!r}")


def _expected_perm(instance, order, costs) -> Fraction:
    n = instance.n
    if len(order) != n:
        raise InvalidStrategy("permutation length differs from n")
    bits0 = to_truth_table(instance.formula).bits
    # Position of order[k] inside the sorted tuple of still-untested variables.
    remaining = sorted(order)
    positions = []
    for var in order:
        pos = remaining.index(var)
        positions.append(pos)
        remaining.pop(pos)
    probs = instance.probs
    memo: dict[tuple[int, int], Fraction] = {}

    def rec(bits: int, k: int) -> Fraction:
        nv = n - k
        if table_is_constant(bits, nv):
            return Fraction(0)
        key = (bits, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        var, pos = order[k], positions[k]
        p = probs[var]
        value = costs[var] + (1 - p) * rec(table_fix(bits, nv, pos, 0), k + 1) + p * rec(
            table_fix(bits, nv, pos, 1), k + 1
        )
        memo[key] = value
        return value

    return rec(bits0, 0)


def _expected_tree(instance, root, costs) -> Fraction:
    n = instance.n
    bits0 = to_truth_table(instance.formula).bits
    probs = instance.probs
    memo: dict[tuple, Fraction] = {}

    def rec(node, bits: int, vs: tuple[int, ...]) -> Fraction:
        if table_is_constant(bits, len(vs)):
            return Fraction(0)
        if isinstance(node, StopNode):
            raise InvalidStrategy("tree stops before f is determined")
        key = (id(node), bits, vs)
        hit = memo.get(key)
        if hit is not None:
            return hit
        var = node.var
        if var not in vs:
            raise InvalidStrategy(f"variable {var} repeated or out of range")
        pos = vs.index(var)
        child_vs = vs[:pos] + vs[pos + 1 :]
        nv = len(vs)
        p = probs[var]
        value = costs[var] + (1 - p) * rec(node.if_false, table_fix(bits, nv, pos, 0), child_vs) + p * rec(
            node.if_true, table_fix(bits, nv, pos, 1), child_vs
        )
        memo[key] = value
        return value

    return rec(root, bits0, tuple(range(n)))


def _expected_policy(instance, policy, costs) -> Fraction:
    n = instance.n
    bits0 = to_truth_table(instance.formula).bits
    probs = instance.probs

    def rec(bits: int, vs: tuple[int, ...], pa: PartialAssignment) -> Fraction:
        if table_is_constant(bits, len(vs)):
            return Fraction(0)
        var = policy(instance, pa)
        if var is None:
            raise InvalidStrategy("policy stopped before f is determined")
        if pa.is_tested(var) or not 0 <= var < n:
            raise InvalidStrategy(f"policy repeated or mis-selected variable {var}")
        pos = vs.index(var)
        child_vs = vs[:pos] + vs[pos + 1 :]
        nv = len(vs)
        p = probs[var]
        return costs[var] + (1 - p) * rec(
            table_fix(bits, nv, pos, 0), child_vs, pa.assign(var, False)
        ) + p * rec(table_fix(bits, nv, pos, 1), child_vs, pa.assign(var, True))

    return rec(bits0, tuple(range(n)), PartialAssignment())


# ---------------------------------------------------------------------------
# Monte Carlo


def sample_inputs(instance: Instance, samples: int, rng: np.random.Generator) -> list[int]:
    """Draw assignment bitmasks from the instance's product distribution."""
    n = instance.n
    p = np.array([float(pi) for pi in instance.probs])
    hits = rng.random((samples, n)) < p
    powers = [1 << i for i in range(n)]
    out = []
    for row in hits:
        x = 0
        for i in np.flatnonzero(row):
            x |= powers[i]
        out.append(x)
    return out


def expected_cost_mc(
    instance: Instance, strategy: Strategy, samples: int, seed: int, workers: int = 1
) -> tuple[float, float]:
    """Sample mean and standard error of the cost; deterministic given
    (seed, samples, workers)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    children = np.random.SeedSequence(seed).spawn(workers)
    base, rem = divmod(samples, workers)
    values: list[float] = []
    for w, child in enumerate(children):
        chunk = base + (1 if w < rem else 0)
        if chunk == 0:
            continue
        rng = np.random.Generator(np.random.PCG64(child))
        for x in sample_inputs(instance, chunk, rng):
            values.append(float(simulate_cost(instance, x, strategy)))
    arr = np.asarray(values)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr


# ---------------------------------------------------------------------------
# Policy materialization


def materialize_policy(instance: Instance, policy: AdaptivePolicy) -> AdaptiveTree:
    """Unroll a policy into an explicit decision tree.

    Depth is bounded by n because repeats are rejected; every Stop leaf is
    placed exactly where the formula becomes determined.
    """
    f = instance.formula
    n = instance.n

    def rec(pa: PartialAssignment, depth: int) -> TreeNode:
        if f.determined(pa) is not None:
            return STOP
        if depth > n:
            raise InvalidStrategy("policy exceeded depth n without determining f")
        var = policy(instance, pa)
        if var is None:
            raise InvalidStrategy("policy stopped before f is determined")
        if not 0 <= var < n or pa.is_tested(var):
            raise InvalidStrategy(f"policy repeated or mis-selected variable {var}")
        return TestNode(
            var,
            rec(pa.assign(var, False), depth + 1),
            rec(pa.assign(var, True), depth + 1),
        )

    return AdaptiveTree(rec(PartialAssignment(), 0))


# ---------------------------------------------------------------------------
# JSON encoding


def _tree_node_to_dict(node: TreeNode) -> dict:
    if isinstance(node, StopNode):
        return {"op": "stop"}
    return {
        "op": "test",
        "var": node.var,
        "if_false": _tree_node_to_dict(node.if_false),
        "if_true": _tree_node_to_dict(node.if_true),
    }


def _tree_node_from_dict(d: dict) -> TreeNode:
    op = d.get("op")
    if op == "stop":
        return STOP
    if op == "test":
        return TestNode(int(d["var"]), _tree_node_from_dict(d["if_false"]), _tree_node_from_dict(d["if_true"]))
    raise SchemaError(f"unknown tree op {op!r}")


def strategy_to_dict(strategy: Strategy) -> dict:
    if isinstance(strategy, NonAdaptiveStrategy):
        return {"kind": "perm", "order": list(strategy.order)}
    if isinstance(strategy, AdaptiveTree):
        return {"kind": "tree", "node": _tree_node_to_dict(strategy.root)}
    raise SchemaError("only permutations and materialized trees serialize; materialize policies first")


def strategy_from_dict(d: dict) -> Strategy:
    kind = d.get("kind")
    if kind == "perm":
        return NonAdaptiveStrategy(tuple(int(v) for v in d["order"]))
    if kind == "tree":
        return AdaptiveTree(_tree_node_from_dict(d["node"]))
    raise SchemaError(f"unknown strategy kind {kind!r}")
