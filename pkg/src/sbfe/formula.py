"""Boolean formula representations: evaluation, restriction and determination.

Four interchangeable representations are supported: DNF term lists (with
optional negations), read-once DNFs, read-once AND/OR trees, two-terminal
series-parallel graphs, and packed truth tables. Variable i is always bit i
of an assignment bitmask (LSB = x0).

A formula is *determined* by a partial assignment when it is constant on the
subcube fixing the tested variables to their observed values. `determined`
returns that constant as a bool, or None when the value is still open.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .bits import table_fix, table_is_constant, table_unfix
from .errors import NotReadOnceDnf, SizeExceeded

TRUTH_TABLE_CAP = 24


@dataclass(frozen=True)
class PartialAssignment:
    """Which variables are tested (bitmask) and their observed values (bitmask)."""

    tested: int = 0
    values: int = 0

    def __post_init__(self):
        if self.values & ~self.tested:
            raise ValueError("values must be a subset of tested")

    def assign(self, var: int, value: bool) -> "PartialAssignment":
        bit = 1 << var
        if self.tested & bit:
            raise ValueError(f"variable {var} already tested")
        return PartialAssignment(self.tested | bit, self.values | (bit if value else 0))

    def is_tested(self, var: int) -> bool:
        return bool(self.tested >> var & 1)

    def value_of(self, var: int) -> bool:
        if not self.is_tested(var):
            raise ValueError(f"variable {var} not tested")
        return bool(self.values >> var & 1)


@dataclass(frozen=True)
class Literal:
    var: int
    neg: bool = False

    def satisfied_by(self, x: int) -> bool:
        return bool(x >> self.var & 1) != self.neg


@dataclass(frozen=True)
class Constant:
    """Formula with no effective support. Needed as a restriction fixed point."""

    n: int
    value: bool

    def evaluate(self, x: int) -> bool:
        return self.value

    def determined(self, pa: PartialAssignment):
        return self.value

    def restrict(self, var: int, value: bool) -> "Constant":
        return self

    def variables(self) -> int:
        return 0


@dataclass(frozen=True)
class DnfFormula:
    """OR of terms; each term is an AND of literals.

    Normal formulas have at least one term and at least one literal per term.
    Two degenerate shapes are tolerated so restriction stays closed: zero
    terms (constant false) and an empty term (the formula is constant true).
    """

    n: int
    terms: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        for term in self.terms:
            seen = set()
            for lit in term:
                if not 0 <= lit.var < self.n:
                    raise ValueError(f"literal variable {lit.var} out of range")
                if lit.var in seen:
                    raise ValueError(f"variable {lit.var} repeated within a term")
                seen.add(lit.var)

    def evaluate(self, x: int) -> bool:
        return any(all(lit.satisfied_by(x) for lit in term) for term in self.terms)

    def variables(self) -> int:
        mask = 0
        for term in self.terms:
            for lit in term:
                mask |= 1 << lit.var
        return mask

    def has_negation(self) -> bool:
        return any(lit.neg for term in self.terms for lit in term)

    def determined(self, pa: PartialAssignment):
        """Structural determination check.

        A term all of whose literals are tested and satisfied forces true; a
        tested, violated literal in every term forces false. Both conditions
        are complete for negation-free DNFs. With negations, "false" stays
        complete but "true" can also arise from case analysis across terms,
        so an explicit completion scan over the surviving untested variables
        backs up the structural check.
        """
        all_false = True
        open_vars = 0
        for term in self.terms:
            falsified = False
            untested = 0
            for lit in term:
                if pa.is_tested(lit.var):
                    if lit.satisfied_by(pa.values) is False:
                        falsified = True
                        break
                else:
                    untested |= 1 << lit.var
            if falsified:
                continue
            if untested == 0:
                return True
            all_false = False
            open_vars |= untested
        if all_false:
            return False
        if not self.has_negation():
            return None
        return self._scan_tautology(pa, open_vars)

    def _scan_tautology(self, pa: PartialAssignment, open_vars: int):
        """True if every completion of the open variables satisfies some term."""
        free = [i for i in range(self.n) if open_vars >> i & 1]
        if len(free) > TRUTH_TABLE_CAP:
            raise SizeExceeded(f"completion scan over {len(free)} variables")
        for combo in range(1 << len(free)):
            x = pa.values
            for j, var in enumerate(free):
                if combo >> j & 1:
                    x |= 1 << var
            if not self.evaluate(x):
                return None
        return True

    def restrict(self, var: int, value: bool) -> Union["DnfFormula", "ReadOnceDnf"]:
        new_terms = []
        for term in self.terms:
            kept = []
            dropped = False
            for lit in term:
                if lit.var == var:
                    if lit.satisfied_by(1 << var if value else 0):
                        continue
                    dropped = True
                    break
                kept.append(lit)
            if dropped:
                continue
            if not kept:
                return type(self)(self.n, ((),))
            new_terms.append(tuple(kept))
        return type(self)(self.n, tuple(new_terms))


class ReadOnceDnf(DnfFormula):
    """DNF whose terms are negation-free and pairwise variable-disjoint."""

    def __post_init__(self):
        super().__post_init__()
        seen = set()
        for term in self.terms:
            for lit in term:
                if lit.neg:
                    raise NotReadOnceDnf(f"negated literal on variable {lit.var}")
                if lit.var in seen:
                    raise NotReadOnceDnf(f"variable {lit.var} appears in two terms")
                seen.add(lit.var)

    @classmethod
    def from_dnf(cls, dnf: DnfFormula) -> "ReadOnceDnf":
        return cls(dnf.n, dnf.terms)


@dataclass(frozen=True)
class RoLeaf:
    var: int


@dataclass(frozen=True)
class RoAnd:
    children: tuple["RoNode", ...]


@dataclass(frozen=True)
class RoOr:
    children: tuple["RoNode", ...]


RoNode = Union[RoLeaf, RoAnd, RoOr]


def _walk_vars(node, out: list[int]):
    if isinstance(node, (RoLeaf, TtspEdge)):
        out.append(node.var)
    else:
        if len(node.children) < 2:
            raise ValueError("internal nodes need at least 2 children")
        for child in node.children:
            _walk_vars(child, out)


@dataclass(frozen=True)
class RoTree:
    """Read-once AND/OR tree: every variable labels at most one leaf."""

    n: int
    root: RoNode

    def __post_init__(self):
        leaves: list[int] = []
        _walk_vars(self.root, leaves)
        if len(set(leaves)) != len(leaves):
            raise ValueError("a variable labels more than one leaf")
        if leaves and not all(0 <= v < self.n for v in leaves):
            raise ValueError("leaf variable out of range")

    def evaluate(self, x: int) -> bool:
        def rec(node) -> bool:
            if isinstance(node, RoLeaf):
                return bool(x >> node.var & 1)
            if isinstance(node, RoAnd):
                return all(rec(c) for c in node.children)
            return any(rec(c) for c in node.children)

        return rec(self.root)

    def variables(self) -> int:
        leaves: list[int] = []
        _walk_vars(self.root, leaves)
        mask = 0
        for v in leaves:
            mask |= 1 << v
        return mask

    def determined(self, pa: PartialAssignment):
        # Monotone formula: constant on the subcube iff the all-zeros and
        # all-ones completions agree.
        untested = ((1 << self.n) - 1) & ~pa.tested
        low = self.evaluate(pa.values)
        high = self.evaluate(pa.values | untested)
        return low if low == high else None

    def restrict(self, var: int, value: bool):
        def rec(node):
            if isinstance(node, RoLeaf):
                return value if node.var == var else node
            combine_and = isinstance(node, RoAnd)
            kept = []
            for child in node.children:
                sub = rec(child)
                if sub is True:
                    if not combine_and:
                        return True
                elif sub is False:
                    if combine_and:
                        return False
                else:
                    kept.append(sub)
            if not kept:
                return combine_and
            if len(kept) == 1:
                return kept[0]
            return RoAnd(tuple(kept)) if combine_and else RoOr(tuple(kept))

        result = rec(self.root)
        if result is True or result is False:
            return Constant(self.n, result)
        return RoTree(self.n, result)


@dataclass(frozen=True)
class TtspEdge:
    var: int


@dataclass(frozen=True)
class TtspSeries:
    children: tuple["TtspNode", ...]


@dataclass(frozen=True)
class TtspParallel:
    children: tuple["TtspNode", ...]


TtspNode = Union[TtspEdge, TtspSeries, TtspParallel]


@dataclass(frozen=True)
class TtspGraph:
    """Two-terminal series-parallel multigraph, as its composition tree.

    Evaluates to true iff the graph has an s-t path of edges set true.
    Each variable must label exactly one edge.
    """

    n: int
    root: TtspNode

    def __post_init__(self):
        edges: list[int] = []
        _walk_vars(self.root, edges)
        if sorted(set(edges)) != sorted(edges):
            raise ValueError("a variable labels more than one edge")
        if edges and not all(0 <= v < self.n for v in edges):
            raise ValueError("edge variable out of range")

    def to_rotree(self) -> RoTree:
        return ttsp_to_formula(self)

    def evaluate(self, x: int) -> bool:
        return self.to_rotree().evaluate(x)

    def variables(self) -> int:
        return self.to_rotree().variables()

    def determined(self, pa: PartialAssignment):
        return self.to_rotree().determined(pa)

    def restrict(self, var: int, value: bool):
        return self.to_rotree().restrict(var, value)


@dataclass(frozen=True)
class TruthTable:
    """Packed truth table: bit x of ``bits`` is f(x)."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n > TRUTH_TABLE_CAP:
            raise SizeExceeded(f"truth table over {self.n} > {TRUTH_TABLE_CAP} variables")
        if self.bits >> (1 << self.n):
            raise ValueError("bits wider than 2^n")

    @classmethod
    def constant(cls, n: int, value: bool) -> "TruthTable":
        return cls(n, (1 << (1 << n)) - 1 if value else 0)

    def evaluate(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def variables(self) -> int:
        mask = 0
        for i in range(self.n):
            if table_fix(self.bits, self.n, i, 0) != table_fix(self.bits, self.n, i, 1):
                mask |= 1 << i
        return mask

    def determined(self, pa: PartialAssignment):
        """Scan all completions of the untested variables."""
        free = [i for i in range(self.n) if not pa.is_tested(i)]
        first = self.evaluate(pa.values)
        for combo in range(1, 1 << len(free)):
            x = pa.values
            for j, var in enumerate(free):
                if combo >> j & 1:
                    x |= 1 << var
            if self.evaluate(x) != first:
                return None
        return first

    def restrict(self, var: int, value: bool) -> "TruthTable":
        half = table_fix(self.bits, self.n, var, 1 if value else 0)
        return TruthTable(self.n, table_unfix(half, self.n, var))


Formula = Union[Constant, DnfFormula, RoTree, TtspGraph, TruthTable]


def evaluate(formula: Formula, x: int) -> bool:
    """f(x) for a full assignment bitmask."""
    return formula.evaluate(x)


def is_determined(formula: Formula, pa: PartialAssignment):
    """The constant value of f on the subcube fixed by ``pa``, or None."""
    return formula.determined(pa)


def restrict(formula: Formula, var: int, value: bool) -> Formula:
    """Fix one variable; the result still ranges over all n variables."""
    return formula.restrict(var, value)


def ttsp_to_formula(g: TtspGraph) -> RoTree:
    """Series composition maps to AND, parallel to OR, edges to leaves."""

    def rec(node) -> RoNode:
        if isinstance(node, TtspEdge):
            return RoLeaf(node.var)
        children = tuple(rec(c) for c in node.children)
        return RoAnd(children) if isinstance(node, TtspSeries) else RoOr(children)

    return RoTree(g.n, rec(g.root))


def to_truth_table(formula: Formula, cap: int = TRUTH_TABLE_CAP) -> TruthTable:
    """Materialize f as a packed table; refuses n above ``cap``."""
    if formula.n > cap:
        raise SizeExceeded(f"n={formula.n} exceeds truth table cap {cap}")
    if isinstance(formula, TruthTable):
        return formula
    bits = 0
    for x in range(1 << formula.n):
        if formula.evaluate(x):
            bits |= 1 << x
    return TruthTable(formula.n, bits)
