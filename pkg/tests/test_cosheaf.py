from fractions import Fraction
import math

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from pyreeb.cosheaf import (
    BinaryCSP,
    ConstructibleCosheaf,
    CosheafError,
    Decision,
    InterleavingCertificate,
    component_count,
    corestriction,
    cosheaf_of,
    d_I_bounds,
    decide_interleaving,
    evaluate,
    realize,
    same_fibre_counts,
    shift,
    verify_certificate,
)
from pyreeb.generate import generate_random_reeb
from pyreeb.graph import disjoint_union, edge_graph, is_isomorphic, loop_graph, smooth


class TestCosheafOf:
    """Тесты косвязки графа Риба"""

    def test_edge(self):
        """Одно ребро: одна страта между двумя критическими значениями"""
        cs = cosheaf_of(edge_graph(0, 1))
        assert cs.critical == (0, 1)
        assert cs.strata == (0, 1, 0)
        assert cs.crit_sizes == (1, 1)
        assert cs.left == ((), (0,))
        assert cs.right == ((0,), ())

    def test_loop_sections(self):
        """Петля: две компоненты над серединой, одна над всей прямой"""
        cs = cosheaf_of(loop_graph(0, 1))
        assert cs.strata == (0, 2, 0)
        assert len(evaluate(cs, "0.25", "0.75")) == 2
        assert len(evaluate(cs, -1, 2)) == 1
        assert len(evaluate(cs, "0.5", "0.5")) == 0
        assert len(cs.point("0.5")) == 2
        assert len(cs.point(0)) == 1

    def test_corestriction(self):
        """Отображение при вложении интервалов"""
        cs = cosheaf_of(loop_graph(0, 1))
        assert corestriction(cs, ("0.25", "0.75"), (-1, 2)) == (0, 0)
        with pytest.raises(CosheafError):
            corestriction(cs, (-1, 2), ("0.25", "0.75"))

    def test_malformed(self):
        """Структурные ошибки косвязки"""
        with pytest.raises(CosheafError):
            ConstructibleCosheaf.build([1, 0], [0, 1, 0], [1, 1], [[], [0]], [[0], []])
        with pytest.raises(CosheafError):
            ConstructibleCosheaf.build([0, 1], [1, 1, 0], [1, 1], [[0], [0]], [[0], []])
        with pytest.raises(CosheafError):
            ConstructibleCosheaf.build([0, 1], [0, 1, 0], [1, 1], [[], [3]], [[0], []])

    def test_component_count(self):
        """Число компонент связности"""
        assert component_count(cosheaf_of(disjoint_union(edge_graph(0, 1), loop_graph(2, 3)))) == 2
        assert component_count(ConstructibleCosheaf.build([], [0], [], [], [])) == 0

    @given(st.integers(2, 7), st.integers(0, 3), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_realize_roundtrip(self, n, loops, seed):
        """Граф косвязки графа изоморфен самому графу"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        assert is_isomorphic(realize(cosheaf_of(g)), g)


class TestShift:
    """Тесты сдвига косвязки"""

    def test_zero(self):
        """Нулевой сдвиг ничего не меняет"""
        cs = cosheaf_of(loop_graph(0, 1))
        assert shift(cs, 0) is cs

    def test_negative(self):
        """Отрицательный сдвиг недопустим"""
        with pytest.raises(CosheafError):
            shift(cosheaf_of(edge_graph(0, 1)), "-1")

    def test_loop_killed(self):
        """Сдвиг на 1/2 убивает петлю высоты 1"""
        shifted = shift(cosheaf_of(loop_graph(0, 1)), "0.5")
        assert is_isomorphic(realize(shifted), edge_graph("-0.5", "1.5"))

    @given(st.integers(2, 6), st.integers(0, 2), st.integers(0, 10**6), st.sampled_from(["0.05", "0.1", "0.25"]))
    @settings(max_examples=25, deadline=None)
    def test_shift_is_smoothing(self, n, loops, seed, eps):
        """Сдвиг косвязки соответствует сглаживанию графа"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        shifted = shift(cosheaf_of(g), eps)
        smoothed = smooth(g, eps)
        assert same_fibre_counts(shifted, cosheaf_of(smoothed))
        assert is_isomorphic(realize(shifted), smoothed)


class TestBinaryCSP:
    """Тесты решателя бинарных ограничений"""

    @staticmethod
    def _not_equal(names: list[str], budget: int = 1000) -> BinaryCSP[str]:
        csp: BinaryCSP[str] = BinaryCSP(budget)
        for name in names:
            csp.add_variable(name, [0, 1])
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                csp.add_constraint(a, b, {(0, 1), (1, 0)})
        return csp

    def test_solvable(self):
        """Две переменные с разными значениями"""
        csp = self._not_equal(["a", "b"])
        decision, assignment = csp.solve()
        assert decision is Decision.YES
        assert assignment is not None and assignment["a"] != assignment["b"]

    def test_unsolvable(self):
        """Треугольник неравенств над двумя значениями неразрешим"""
        decision, assignment = self._not_equal(["a", "b", "c"]).solve()
        assert decision is Decision.NO
        assert assignment is None

    def test_budget(self):
        """Исчерпание бюджета даёт UNDECIDED"""
        decision, _ = self._not_equal(["a", "b", "c"], budget=0).solve()
        assert decision is Decision.UNDECIDED

    def test_repeated_constraints_intersect(self):
        """Повторные ограничения на пару пересекаются"""
        csp: BinaryCSP[str] = BinaryCSP()
        csp.add_variable("a", [0, 1])
        csp.add_variable("b", [0, 1])
        csp.add_constraint("a", "b", {(0, 0), (1, 1)})
        csp.add_constraint("b", "a", {(1, 1), (0, 1)})
        decision, assignment = csp.solve()
        assert decision is Decision.YES
        assert assignment == {"a": 1, "b": 1}


class TestInterleaving:
    """Тесты решения о чередовании и оценки d_I"""

    def test_loop_vs_edge(self):
        """Петля высоты 1 и ребро: нет чередования при 1/5, есть при 1/4"""
        f, g = cosheaf_of(loop_graph(0, 1)), cosheaf_of(edge_graph(0, 1))
        assert decide_interleaving(f, g, "0.2").decision is Decision.NO
        result = decide_interleaving(f, g, "0.25")
        assert result.decision is Decision.YES
        assert result.certificate is not None
        assert verify_certificate(f, g, result.certificate)

    def test_certificate_roundtrip(self):
        """Сертификат переживает запись в словарь и не подходит к чужому измельчению"""
        f, g = cosheaf_of(loop_graph(0, 1)), cosheaf_of(edge_graph(0, 1))
        cert = decide_interleaving(f, g, "0.25").certificate
        assert cert is not None
        restored = InterleavingCertificate.from_dict(cert.to_dict())
        assert restored == cert
        assert verify_certificate(f, g, restored)
        moved = InterleavingCertificate(cert.epsilon, tuple(t + 1 for t in cert.cells), cert.phi, cert.psi)
        assert not verify_certificate(f, g, moved)

    def test_certificate_schema(self):
        """Сертификат с лишними полями отвергается"""
        with pytest.raises(CosheafError):
            InterleavingCertificate.from_dict({"epsilon": "0.5", "cells": [], "phi": [], "psi": [], "x": 1})
        with pytest.raises(CosheafError):
            InterleavingCertificate.from_dict({"epsilon": "0.5", "cells": [], "phi": [[-1]], "psi": []})

    def test_identity(self):
        """Косвязка чередуется сама с собой при ε = 0"""
        f = cosheaf_of(loop_graph(0, 1))
        assert decide_interleaving(f, f, 0).decision is Decision.YES
        bounds = d_I_bounds(f, f)
        assert (bounds.lo, bounds.hi) == (0, 0)

    def test_negative_epsilon(self):
        """Отрицательное ε недопустимо"""
        f = cosheaf_of(edge_graph(0, 1))
        with pytest.raises(CosheafError):
            decide_interleaving(f, f, "-0.1")

    def test_bounds_loop_vs_edge(self):
        """Интервал для d_I петли и ребра содержит 1/4"""
        f, g = cosheaf_of(loop_graph(0, 1)), cosheaf_of(edge_graph(0, 1))
        bounds = d_I_bounds(f, g, tolerance="0.001")
        assert bounds.contains(Fraction(1, 4))
        assert bounds.width <= Fraction(1, 1000)
        assert bounds.hi_provenance == "certificate"
        assert "hi" in bounds.certificates
        assert not bounds.undecided

    def test_bounds_shifted_edges(self):
        """Рёбра [0, 1] и [0, 2]: d_I = 1"""
        bounds = d_I_bounds(cosheaf_of(edge_graph(0, 1)), cosheaf_of(edge_graph(0, 2)))
        assert bounds.contains(1)
        assert bounds.width <= Fraction(1, 1000)

    def test_bounds_components(self):
        """Разное число компонент: d_I бесконечно"""
        f = cosheaf_of(edge_graph(0, 1))
        g = cosheaf_of(disjoint_union(edge_graph(0, 1), edge_graph(0, 1)))
        bounds = d_I_bounds(f, g)
        assert math.isinf(bounds.lo) and math.isinf(bounds.hi)
        assert bounds.lo_provenance == "components"

    def test_bounds_tolerance(self):
        """Точность должна быть положительной"""
        f = cosheaf_of(edge_graph(0, 1))
        with pytest.raises(CosheafError):
            d_I_bounds(f, f, tolerance=0)

    def test_bounds_undecided(self):
        """Нулевой бюджет даёт помеченный грубый интервал"""
        f, g = cosheaf_of(loop_graph(0, 1)), cosheaf_of(edge_graph(0, 1))
        bounds = d_I_bounds(f, g, budget=0)
        assert bounds.undecided
        assert bounds.contains(Fraction(1, 4))

    @given(st.integers(2, 5), st.integers(0, 2), st.integers(0, 10**6), st.integers(0, 10**6))
    @settings(max_examples=15, deadline=None)
    def test_decision_monotone(self, n, loops, seed_a, seed_b):
        """Если чередование есть при ε, оно есть и при любом большем ε"""
        k = min(loops, n * (n - 1) // 2)
        f = cosheaf_of(generate_random_reeb(n, k, seed_a))
        g = cosheaf_of(generate_random_reeb(n, k, seed_b))
        decisions = [decide_interleaving(f, g, eps).decision for eps in ("0.05", "0.1", "0.2", "0.4", "0.8")]
        assert Decision.UNDECIDED not in decisions
        first_yes = decisions.index(Decision.YES) if Decision.YES in decisions else len(decisions)
        assert all(d is Decision.YES for d in decisions[first_yes:])

    @given(st.integers(2, 7), st.integers(0, 3), st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_identity_on_random(self, n, loops, seed):
        """Любая косвязка чередуется сама с собой при ε = 0"""
        f = cosheaf_of(generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed))
        assert decide_interleaving(f, f, 0).decision is Decision.YES

    @given(st.integers(2, 5), st.integers(0, 2), st.integers(0, 10**6), st.integers(0, 10**6))
    @settings(max_examples=10, deadline=None)
    def test_bounds_symmetric(self, n, loops, seed_a, seed_b):
        """Интервалы d_I(F, G) и d_I(G, F) пересекаются"""
        k = min(loops, n * (n - 1) // 2)
        f = cosheaf_of(generate_random_reeb(n, k, seed_a))
        g = cosheaf_of(generate_random_reeb(n, k, seed_b))
        forward = d_I_bounds(f, g, tolerance="0.01")
        backward = d_I_bounds(g, f, tolerance="0.01")
        assert max(forward.lo, backward.lo) <= min(forward.hi, backward.hi)
