"""Problem instances (formula + costs + probabilities) and their JSON format.

Exact-mode instances carry `fractions.Fraction` costs and probabilities and
serialize them as "num/den" strings; float-mode instances carry floats. Bit
ordering in all serialized bitmasks and truth tables is fixed: variable i is
bit i, LSB = x0.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ModeMismatch, NotReadOnceDnf, SchemaError
from .formula import (
    Constant,
    DnfFormula,
    Formula,
    Literal,
    ReadOnceDnf,
    RoAnd,
    RoLeaf,
    RoOr,
    RoTree,
    TruthTable,
    TtspEdge,
    TtspGraph,
    TtspParallel,
    TtspSeries,
)

Value = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"


def format_value(v: Value) -> Union[str, float]:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return float(v)


def parse_exact(s) -> Fraction:
    if not isinstance(s, str) or "/" not in s:
        raise SchemaError(f"exact mode requires 'num/den' strings, got {s!r}")
    num, den = s.split("/", 1)
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class Instance:
    """A formula with per-variable test costs and truth probabilities."""

    formula: Formula
    costs: tuple[Value, ...]
    probs: tuple[Value, ...]
    mode: str = EXACT

    def __post_init__(self):
        n = self.formula.n
        if len(self.costs) != n or len(self.probs) != n:
            raise ValueError("costs and probs must have length n")
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        want = Fraction if self.mode == EXACT else float
        for c in self.costs:
            if not isinstance(c, want) or c <= 0:
                raise ValueError(f"costs must be positive {want.__name__}s, got {c!r}")
        for p in self.probs:
            if not isinstance(p, want) or not 0 < p < 1:
                raise ValueError(f"probs must be {want.__name__}s strictly in (0,1), got {p!r}")

    @property
    def n(self) -> int:
        return self.formula.n

    @property
    def is_exact(self) -> bool:
        return self.mode == EXACT

    def require_exact(self):
        if not self.is_exact:
            raise ModeMismatch("operation requires an exact-mode instance")

    def prob_of_input(self, x: int) -> Value:
        """Product-distribution probability of the full assignment ``x``."""
        one = Fraction(1) if self.is_exact else 1.0
        pr = one
        for i, p in enumerate(self.probs):
            pr = pr * (p if x >> i & 1 else (one - p))
        return pr

    def digest(self) -> str:
        """Stable short identifier derived from the canonical JSON form."""
        blob = json.dumps(instance_to_dict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def exact_instance(formula: Formula, costs, probs) -> Instance:
    return Instance(formula, tuple(Fraction(c) for c in costs), tuple(Fraction(p) for p in probs), EXACT)


def unit_uniform_instance(formula: Formula) -> Instance:
    n = formula.n
    return exact_instance(formula, [1] * n, [Fraction(1, 2)] * n)


# ---------------------------------------------------------------------------
# JSON encoding


def _rotree_node_to_dict(node):
    if isinstance(node, RoLeaf):
        return {"op": "leaf", "var": node.var}
    op = "and" if isinstance(node, RoAnd) else "or"
    return {"op": op, "children": [_rotree_node_to_dict(c) for c in node.children]}


def _rotree_node_from_dict(d):
    op = d.get("op")
    if op == "leaf":
        return RoLeaf(int(d["var"]))
    children = tuple(_rotree_node_from_dict(c) for c in d["children"])
    if op == "and":
        return RoAnd(children)
    if op == "or":
        return RoOr(children)
    raise SchemaError(f"unknown rotree op {op!r}")


def _ttsp_node_to_dict(node):
    if isinstance(node, TtspEdge):
        return {"op": "edge", "var": node.var}
    op = "series" if isinstance(node, TtspSeries) else "parallel"
    return {"op": op, "children": [_ttsp_node_to_dict(c) for c in node.children]}


def _ttsp_node_from_dict(d):
    op = d.get("op")
    if op == "edge":
        return TtspEdge(int(d["var"]))
    children = tuple(_ttsp_node_from_dict(c) for c in d["children"])
    if op == "series":
        return TtspSeries(children)
    if op == "parallel":
        return TtspParallel(children)
    raise SchemaError(f"unknown ttsp op {op!r}")


def _bits_hex(n: int, bits: int) -> str:
    width = max(1, (1 << n) // 4)
    return format(bits, f"0{width}x")


def formula_to_dict(formula: Formula) -> dict:
    if isinstance(formula, Constant):
        terms = [[]] if formula.value else []
        return {"kind": "dnf", "terms": terms}
    if isinstance(formula, DnfFormula):
        return {
            "kind": "dnf",
            "terms": [[{"var": lit.var, "neg": lit.neg} for lit in term] for term in formula.terms],
        }
    if isinstance(formula, RoTree):
        return {"kind": "rotree", "node": _rotree_node_to_dict(formula.root)}
    if isinstance(formula, TtspGraph):
        return {"kind": "ttsp", "node": _ttsp_node_to_dict(formula.root)}
    if isinstance(formula, TruthTable):
        return {"kind": "truth_table", "bits_hex": _bits_hex(formula.n, formula.bits)}
    raise SchemaError(f"unknown formula type {type(formula).__name__}")


def formula_from_dict(d: dict, n: int) -> Formula:
    kind = d.get("kind")
    if kind == "dnf":
        terms = tuple(
            tuple(Literal(int(lit["var"]), bool(lit.get("neg", False))) for lit in term)
            for term in d["terms"]
        )
        dnf = DnfFormula(n, terms)
        try:
            return ReadOnceDnf.from_dnf(dnf)
        except NotReadOnceDnf:
            return dnf
    if kind == "rotree":
        return RoTree(n, _rotree_node_from_dict(d["node"]))
    if kind == "ttsp":
        return TtspGraph(n, _ttsp_node_from_dict(d["node"]))
    if kind == "truth_table":
        return TruthTable(n, int(d["bits_hex"], 16))
    raise SchemaError(f"unknown formula kind {kind!r}")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "mode": inst.mode,
        "formula": formula_to_dict(inst.formula),
        "costs": [format_value(c) for c in inst.costs],
        "probs": [format_value(p) for p in inst.probs],
    }


def instance_from_dict(d: dict) -> Instance:
    try:
        n = int(d["n"])
        mode = d["mode"]
        formula = formula_from_dict(d["formula"], n)
        if mode == EXACT:
            costs = tuple(parse_exact(c) for c in d["costs"])
            probs = tuple(parse_exact(p) for p in d["probs"])
        elif mode == FLOAT:
            costs = tuple(float(c) for c in d["costs"])
            probs = tuple(float(p) for p in d["probs"])
        else:
            raise SchemaError(f"unknown mode {mode!r}")
    except KeyError as exc:
        raise SchemaError(f"missing field {exc}") from exc
    return Instance(formula, costs, probs, mode)


def dump_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def load_instance(text: str) -> Instance:
    return instance_from_dict(json.loads(text))
