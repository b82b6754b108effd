"""Lower-bound instance families."""

from fractions import Fraction

import pytest

from sbfe import (
    DnfFormula,
    ParameterError,
    PartialAssignment,
    ReadOnceDnf,
    dump_instance,
    gen_address,
    gen_binary_tree,
    gen_geometric_cost,
    gen_tribes,
    gen_ucap,
    simulate_cost,
    to_truth_table,
)
from sbfe.strategy import AdaptivePolicy


class TestTribes:
    def test_structure_2x2(self):
        inst = gen_tribes(2, 2)
        assert isinstance(inst.formula, ReadOnceDnf)
        assert inst.n == 4
        assert [[lit.var for lit in t] for t in inst.formula.terms] == [[0, 1], [2, 3]]

    def test_pr_false_2x2(self):
        inst = gen_tribes(2, 2)
        pr_false = sum(
            inst.prob_of_input(x) for x in range(16) if not inst.formula.evaluate(x)
        )
        assert pr_false == Fraction(9, 16)

    def test_term_truth_probability_is_2_pow_minus_w(self):
        for k, w in ((1, 3), (2, 2), (3, 4)):
            inst = gen_tribes(k, w)
            for term in inst.formula.terms:
                pr = Fraction(1)
                for lit in term:
                    pr *= inst.probs[lit.var]
                assert pr == Fraction(1, 2**w)

    def test_pr_false_4x4_at_least_half(self):
        # (1 - 1/16)^4 = (15/16)^4, checked without enumerating 2^16 inputs
        pr_false = (1 - Fraction(1, 16)) ** 4
        assert pr_false == Fraction(15**4, 16**4)
        assert pr_false >= Fraction(1, 2)

    def test_parameter_validation(self):
        with pytest.raises(ParameterError):
            gen_tribes(0, 2)


class TestUcap:
    def test_per_term_truth_probability(self):
        for m, l in ((4, 2), (8, 2), (16, 4), (6, 3)):
            inst = gen_ucap(m, l)
            assert inst.mode == "float"
            term = inst.formula.terms[0]
            pr = 1.0
            for lit in term:
                pr *= inst.probs[lit.var]
            assert abs(pr - 1 / m) <= 1e-12 / m

    def test_special_variable_has_prob_one_over_l(self):
        inst = gen_ucap(4, 2)
        assert inst.probs[0] == 0.5  # 1/l
        assert inst.probs[1] == 0.5  # (l/m)^(1/(l-1)) = (2/4)^1

    def test_rejects_l_not_less_than_m(self):
        with pytest.raises(ParameterError):
            gen_ucap(2, 2)

    def test_rejects_small_parameters(self):
        with pytest.raises(ParameterError):
            gen_ucap(1, 2)
        with pytest.raises(ParameterError):
            gen_ucap(4, 1)


class TestGeometricCost:
    def test_l1_two_unit_terms(self):
        inst = gen_geometric_cost(1)
        assert inst.n == 2
        assert all(c == 1 for c in inst.costs)
        assert len(inst.formula.terms) == 2

    def test_l2_structure(self):
        inst = gen_geometric_cost(2)
        assert inst.n == 8
        assert len(inst.formula.terms) == 4
        for j in range(4):
            assert inst.costs[2 * j] == 1 and inst.costs[2 * j + 1] == 2

    def test_exactly_one_term_true_l2(self):
        inst = gen_geometric_cost(2)
        pr = Fraction(0)
        for x in range(1 << 8):
            true_terms = sum(
                1 for t in inst.formula.terms if all(x >> lit.var & 1 for lit in t)
            )
            if true_terms == 1:
                pr += inst.prob_of_input(x)
        assert pr == Fraction(27, 64)
        import math

        assert float(pr) >= 1 / (2 * math.e)


class TestBinaryTree:
    def test_depth_1_is_or(self):
        inst, meta = gen_binary_tree(1, Fraction(1, 2))
        assert inst.n == 2
        assert to_truth_table(inst.formula).bits == 0b1110
        assert meta.leaf_mask == 0b11 and meta.internal_mask == 0

    def test_depth_3_matches_displayed_formula(self):
        inst, meta = gen_binary_tree(3, Fraction(1, 4))
        assert inst.n == 14
        assert bin(meta.leaf_mask).count("1") == 8

        def displayed(x):
            b = lambda i: bool(x >> i & 1)
            return (
                b(0) and ((b(1) and (b(2) or b(3))) or (b(4) and (b(5) or b(6))))
            ) or (b(7) and ((b(8) and (b(9) or b(10))) or (b(11) and (b(12) or b(13)))))

        for x in range(0, 1 << 14, 7):  # stride keeps runtime small
            assert inst.formula.evaluate(x) == displayed(x)
        assert inst.formula.evaluate((1 << 14) - 1) is True

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_alive_leaf_oracle(self, d):
        inst, meta = gen_binary_tree(d, Fraction(1, 4))
        # rebuild root paths independently, mirroring the preorder numbering
        paths = []

        def collect(depth_left, next_var, above):
            # returns the first variable index after this subtree
            var = next_var
            if depth_left == 1:
                paths.append(above | 1 << var)
                return var + 1
            after_left = collect(depth_left - 1, var + 1, above | 1 << var)
            return collect(depth_left - 1, after_left, above | 1 << var)

        nxt = collect(d, 0, 0)
        collect(d, nxt, 0)
        assert len(paths) == 1 << d
        step = 1 if inst.n <= 10 else 11
        for x in range(0, 1 << inst.n, step):
            alive = any(x & p == p for p in paths)
            assert inst.formula.evaluate(x) == alive

    def test_probability_and_meta(self):
        inst, meta = gen_binary_tree(2, Fraction(1, 4))
        assert all(p == Fraction(5, 8) for p in inst.probs)
        assert meta.depth == 2
        assert bin(meta.leaf_mask).count("1") == 4
        assert meta.leaf_mask & meta.internal_mask == 0
        assert meta.leaf_mask | meta.internal_mask == (1 << inst.n) - 1

    def test_eps_validation(self):
        with pytest.raises(ParameterError):
            gen_binary_tree(2, Fraction(3, 4))
        with pytest.raises(ParameterError):
            gen_binary_tree(0, Fraction(1, 4))

    def test_pr_alive_leaf_exists_d2(self):
        inst, _ = gen_binary_tree(2, Fraction(1, 4))
        pr = sum(inst.prob_of_input(x) for x in range(1 << 6) if inst.formula.evaluate(x))
        assert pr >= Fraction(1, 4)


class TestAddress:
    def test_structure_d2(self):
        inst = gen_address(2)
        assert inst.n == 6
        assert isinstance(inst.formula, DnfFormula)
        assert len(inst.formula.terms) == 4
        for i, term in enumerate(inst.formula.terms):
            assert len(term) == 3
            for j in range(2):
                assert term[j].var == j
                assert term[j].neg == (not i >> j & 1)
            assert term[2].var == 2 + i and not term[2].neg

    def test_address_then_dedicated_strategy_cost(self):
        # test all shared bits, then the selected dedicated variable
        for d, shared in ((2, Fraction(1)), (3, Fraction(1, 3))):
            inst = gen_address(d, shared)

            def next_test(instance, pa):
                for j in range(d):
                    if not pa.is_tested(j):
                        return j
                idx = pa.values & ((1 << d) - 1)
                return d + idx

            policy = AdaptivePolicy(next_test)
            want = d * shared + 1
            for x in range(1 << inst.n):
                assert simulate_cost(inst, x, policy) == want

    def test_parameter_validation(self):
        with pytest.raises(ParameterError):
            gen_address(0)
        with pytest.raises(ParameterError):
            gen_address(2, Fraction(-1))


class TestDeterminism:
    def test_identical_parameters_identical_json(self):
        assert dump_instance(gen_tribes(3, 2)) == dump_instance(gen_tribes(3, 2))
        assert dump_instance(gen_address(2)) == dump_instance(gen_address(2))
        assert dump_instance(gen_ucap(8, 2)) == dump_instance(gen_ucap(8, 2))
        assert dump_instance(gen_geometric_cost(2)) == dump_instance(gen_geometric_cost(2))
        a, _ = gen_binary_tree(2, Fraction(1, 4))
        b, _ = gen_binary_tree(2, Fraction(1, 4))
        assert dump_instance(a) == dump_instance(b)
