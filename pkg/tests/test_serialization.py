"""JSON round trips for instances, strategies, and reports."""

import json
import random
from fractions import Fraction

import pytest

from sbfe import (
    DnfFormula,
    Instance,
    Literal,
    ModeMismatch,
    NonAdaptiveStrategy,
    ReadOnceDnf,
    RoLeaf,
    RoOr,
    RoTree,
    SchemaError,
    TruthTable,
    TtspEdge,
    TtspGraph,
    TtspParallel,
    dump_instance,
    expected_cost_exact,
    gen_binary_tree,
    gen_tribes,
    load_instance,
    to_truth_table,
)
from sbfe.instance import format_value, parse_exact
from sbfe.strategy import AdaptiveTree, StopNode, strategy_from_dict, strategy_to_dict
from sbfe.strategy import TestNode as TreeTest
import support


class TestValues:
    def test_fraction_round_trip(self):
        v = Fraction(22, 7)
        assert parse_exact(format_value(v)) == v

    def test_exact_mode_rejects_bare_numbers(self):
        with pytest.raises(SchemaError):
            parse_exact(0.5)
        with pytest.raises(SchemaError):
            parse_exact("0.5")


class TestInstanceJson:
    def test_dnf_round_trip(self):
        rng = random.Random(1)
        inst = support.rand_instance(rng, support.rand_general_dnf(rng, 5))
        again = load_instance(dump_instance(inst))
        assert again == inst

    def test_read_once_survives_round_trip(self):
        inst = gen_tribes(2, 3)
        again = load_instance(dump_instance(inst))
        assert isinstance(again.formula, ReadOnceDnf)
        assert again == inst

    def test_rotree_round_trip(self):
        inst, _ = gen_binary_tree(2, Fraction(1, 4))
        again = load_instance(dump_instance(inst))
        assert again == inst

    def test_ttsp_round_trip(self):
        g = TtspGraph(2, TtspParallel((TtspEdge(0), TtspEdge(1))))
        inst = Instance(g, (Fraction(1), Fraction(2)), (Fraction(1, 3), Fraction(1, 2)))
        again = load_instance(dump_instance(inst))
        assert again == inst

    def test_truth_table_round_trip(self):
        rng = random.Random(2)
        tt = support.rand_truth_table(rng, 4)
        inst = support.rand_instance(rng, tt)
        again = load_instance(dump_instance(inst))
        assert again == inst

    def test_float_mode_round_trip(self):
        f = DnfFormula(2, ((Literal(0, neg=True),), (Literal(1),)))
        inst = Instance(f, (1.0, 2.5), (0.25, 0.75), "float")
        again = load_instance(dump_instance(inst))
        assert again == inst

    def test_loader_upgrades_read_once_shapes(self):
        f = DnfFormula(2, ((Literal(0),), (Literal(1),)))
        inst = Instance(f, (1.0, 2.5), (0.25, 0.75), "float")
        again = load_instance(dump_instance(inst))
        assert isinstance(again.formula, ReadOnceDnf)
        assert again.formula.terms == f.terms

    def test_exact_mode_requires_rational_strings(self):
        f = DnfFormula(1, ((Literal(0),),))
        blob = {
            "n": 1,
            "mode": "exact",
            "formula": {"kind": "dnf", "terms": [[{"var": 0, "neg": False}]]},
            "costs": [1.0],
            "probs": ["1/2"],
        }
        with pytest.raises(SchemaError):
            load_instance(json.dumps(blob))

    def test_digest_stable(self):
        a = gen_tribes(2, 2)
        b = gen_tribes(2, 2)
        assert a.digest() == b.digest()
        assert a.digest() != gen_tribes(3, 2).digest()


class TestInstanceValidation:
    def test_cost_must_be_positive(self):
        f = DnfFormula(1, ((Literal(0),),))
        with pytest.raises(ValueError):
            Instance(f, (Fraction(0),), (Fraction(1, 2),))

    def test_prob_strictly_inside_unit_interval(self):
        f = DnfFormula(1, ((Literal(0),),))
        with pytest.raises(ValueError):
            Instance(f, (Fraction(1),), (Fraction(1),))
        with pytest.raises(ValueError):
            Instance(f, (Fraction(1),), (Fraction(0),))

    def test_mode_mismatch_detected(self):
        f = DnfFormula(1, ((Literal(0),),))
        inst = Instance(f, (1.0,), (0.5,), "float")
        with pytest.raises(ModeMismatch):
            expected_cost_exact(inst, NonAdaptiveStrategy((0,)))


class TestStrategyJson:
    def test_perm_round_trip(self):
        s = NonAdaptiveStrategy((2, 0, 1))
        assert strategy_from_dict(strategy_to_dict(s)) == s

    def test_tree_round_trip(self):
        tree = AdaptiveTree(TreeTest(0, StopNode(), TreeTest(1, StopNode(), StopNode())))
        again = strategy_from_dict(strategy_to_dict(tree))
        assert again == tree

    def test_unknown_kind_rejected(self):
        with pytest.raises(SchemaError):
            strategy_from_dict({"kind": "nope"})


class TestBitsHex:
    def test_known_encoding(self):
        # x0 & x1 over n=2: bits 0b1000 -> hex "8"
        tt = TruthTable(2, 0b1000)
        inst = Instance(tt, (Fraction(1),) * 2, (Fraction(1, 2),) * 2)
        blob = json.loads(dump_instance(inst))
        assert blob["formula"] == {"kind": "truth_table", "bits_hex": "8"}

    def test_width_padding(self):
        tt = TruthTable(4, 1)
        inst = Instance(tt, (Fraction(1),) * 4, (Fraction(1, 2),) * 4)
        blob = json.loads(dump_instance(inst))
        assert blob["formula"]["bits_hex"] == "0001"
