from fractions import Fraction

import pytest

from cluster_forge.qp import (DegenerateQuadraticPartError, LoopPresentError,
                              PathElement, Potential, QPError, QPQuiver,
                              QuiverWithPotential, UnknownArrowError,
                              VertexOnTwoCycleError, canonical_rotation,
                              cyclic_derivative, jacobian_dimension,
                              mutate_qp, premutation, reduce_qp,
                              three_cycle_qp)


class TestCyclicDerivative:
    def test_three_cycle(self):
        w = three_cycle_qp().potential
        assert cyclic_derivative(w, "a").words == {("b", "c"): 1}
        assert cyclic_derivative(w, "b").words == {("c", "a"): 1}
        assert cyclic_derivative(w, "c").words == {("a", "b"): 1}

    def test_absent_arrow_gives_zero(self):
        qp = QuiverWithPotential.build(
            3, [("a", 2, 3), ("b", 1, 2), ("c", 3, 1), ("d", 1, 3)],
            {("a", "b", "c"): 1})
        assert cyclic_derivative(qp.potential, "d").is_zero()

    def test_unknown_arrow_rejected(self):
        with pytest.raises(UnknownArrowError):
            cyclic_derivative(three_cycle_qp().potential, "zz")

    def test_squared_cycle(self):
        w = three_cycle_qp(squared=True).potential
        assert cyclic_derivative(w, "a").words == {("b", "c", "a", "b", "c"): Fraction(2)}

    def test_rotation_invariance(self):
        q = three_cycle_qp().quiver
        w1 = Potential(q, 12, {("a", "b", "c"): 1})
        w2 = Potential(q, 12, {("c", "a", "b"): 1})
        assert w1 == w2
        for arrow in "abc":
            assert cyclic_derivative(w1, arrow) == cyclic_derivative(w2, arrow)


class TestJacobianDimension:
    def test_three_cycle(self):
        result = jacobian_dimension(three_cycle_qp(), 4)
        assert result.dimension == 6 and result.saturated

    def test_acyclic_zero_potential(self):
        qp = QuiverWithPotential.build(3, [("a", 1, 2), ("b", 2, 3)], {})
        result = jacobian_dimension(qp, 4)
        assert result.dimension == 6 and result.saturated

    def test_no_arrows(self):
        qp = QuiverWithPotential.build(5, [], {})
        assert jacobian_dimension(qp, 2).dimension == 5

    def test_unsaturated_reports_bound(self):
        # zero potential on a cycle: paths keep growing
        qp = QuiverWithPotential.build(3, [("a", 2, 3), ("b", 1, 2), ("c", 3, 1)], {})
        result = jacobian_dimension(qp, 3)
        assert not result.saturated
        assert str(result).startswith(">=")


class TestPremutation:
    def test_three_cycle_at_2(self):
        pre = premutation(three_cycle_qp(), 2)
        assert {a[0] for a in pre.quiver.arrows} == {"a*", "b*", "c", "[ab]"}
        am = pre.quiver.arrow_map()
        assert am["[ab]"] == (1, 3) and am["a*"] == (3, 2) and am["b*"] == (2, 1)
        want = {canonical_rotation(("[ab]", "c")),
                canonical_rotation(("[ab]", "b*", "a*"))}
        assert set(pre.potential.cycles) == want

    def test_sink_with_zero_potential(self):
        qp = QuiverWithPotential.build(2, [("a", 1, 2)], {})
        pre = premutation(qp, 2)
        assert pre.potential.is_zero()
        assert pre.quiver.arrow_map()["a*"] == (2, 1)

    def test_rejects_vertex_on_two_cycle(self):
        qp = QuiverWithPotential.build(2, [("a", 1, 2), ("b", 2, 1)], {("a", "b"): 1})
        with pytest.raises(VertexOnTwoCycleError):
            premutation(qp, 1)


class TestReduce:
    def test_three_cycle_reduction(self):
        triv, red = reduce_qp(premutation(three_cycle_qp(), 2))
        assert {a[0] for a in red.quiver.arrows} == {"a*", "b*"}
        assert red.potential.is_zero()
        assert {a[0] for a in triv.quiver.arrows} == {"[ab]", "c"}
        assert set(triv.potential.cycles) == {canonical_rotation(("[ab]", "c"))}

    def test_already_reduced_passthrough(self):
        qp = three_cycle_qp()
        triv, red = reduce_qp(qp)
        assert not triv.quiver.arrows and triv.potential.is_zero()
        assert red.potential == qp.potential
        assert red.quiver.arrows == qp.quiver.arrows

    def test_squared_potential_keeps_two_cycle_quiver(self):
        red = mutate_qp(three_cycle_qp(squared=True), 2)
        names = {a[0] for a in red.quiver.arrows}
        assert names == {"a*", "b*", "c", "[ab]"}
        want = {canonical_rotation(("[ab]", "c", "[ab]", "c")),
                canonical_rotation(("[ab]", "b*", "a*"))}
        assert set(red.potential.cycles) == want
        assert red.potential.is_reduced()

    def test_jacobian_dimension_preserved_by_reduction(self):
        pre = premutation(three_cycle_qp(), 2)
        _, red = reduce_qp(pre)
        for cutoff in (3, 4, 5):
            assert jacobian_dimension(pre, cutoff).dimension == \
                jacobian_dimension(red, cutoff).dimension


class TestMutation:
    def test_golden_abc(self):
        out = mutate_qp(three_cycle_qp(), 2)
        assert out.potential.is_zero()
        shape = sorted((s, t) for _, s, t in out.quiver.arrows)
        assert shape == [(2, 1), (3, 2)]

    def test_double_mutation_restores_quiver_and_dimension(self):
        qp = three_cycle_qp()
        out = mutate_qp(mutate_qp(qp, 2), 2)
        assert sorted((s, t) for _, s, t in out.quiver.arrows) == \
            sorted((s, t) for _, s, t in qp.quiver.arrows)
        assert jacobian_dimension(out, 5).dimension == jacobian_dimension(qp, 5).dimension

    def test_second_mutation_on_two_cycle_rejected(self):
        out = mutate_qp(three_cycle_qp(squared=True), 2)
        with pytest.raises(VertexOnTwoCycleError):
            mutate_qp(out, 1)

    def test_matches_matrix_mutation_when_two_acyclic(self):
        from cluster_forge.quiver import ExchangeMatrix
        qp = three_cycle_qp()
        out = mutate_qp(qp, 2)

        def to_matrix(quiver):
            rows = [[0] * quiver.num_vertices for _ in range(quiver.num_vertices)]
            for _, s, t in quiver.arrows:
                rows[s - 1][t - 1] += 1
                rows[t - 1][s - 1] -= 1
            return tuple(tuple(r) for r in rows)

        b = ExchangeMatrix(to_matrix(qp.quiver))
        assert to_matrix(out.quiver) == b.mutate(2).rows


class TestTruncation:
    def test_monotonicity(self):
        # results at truncation N, restricted below N' < N, match direct N'
        for n_small, n_big in [(4, 8), (5, 12)]:
            small = mutate_qp(QuiverWithPotential.build(
                3, [("a", 2, 3), ("b", 1, 2), ("c", 3, 1)],
                {("a", "b", "c"): 1, ("a", "b", "c", "a", "b", "c"): 1},
                truncation=n_small), 2)
            big = mutate_qp(QuiverWithPotential.build(
                3, [("a", 2, 3), ("b", 1, 2), ("c", 3, 1)],
                {("a", "b", "c"): 1, ("a", "b", "c", "a", "b", "c"): 1},
                truncation=n_big), 2)
            restricted = {w: c for w, c in big.potential.cycles.items()
                          if len(w) <= n_small}
            assert restricted == small.potential.cycles


class TestValidation:
    def test_loop_rejected(self):
        with pytest.raises(LoopPresentError):
            QPQuiver(2, (("l", 1, 1),))

    def test_non_cycle_potential_rejected(self):
        with pytest.raises(QPError):
            QuiverWithPotential.build(3, [("a", 1, 2), ("b", 2, 3)], {("a", "b"): 1})

    def test_short_cycle_rejected(self):
        with pytest.raises(QPError):
            Potential(three_cycle_qp().quiver, 12, {("a",): 1})
