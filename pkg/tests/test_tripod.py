"""Admissible matrices and the tripod invariant bases."""

import pytest

from phyloinv.flows import enumerate_flows
from phyloinv.groups import GroupSpec, parse_group_spec
from phyloinv.lattice import kernel_lattice, spans
from phyloinv.tripod import (AdmissibilityError, AdmissibleMatrix, adm_basis,
                             admissible_condition_matrix, cyclic_basis,
                             cyclic_basis_matrix, exchange_matrix,
                             is_admissible, matrix_to_binomial, product_basis,
                             product_cubic, relabel_matrix, tripod_invariants,
                             tripod_tree)

Z3 = GroupSpec((3,))
Z4 = GroupSpec((4,))


def adm_lattice(spec):
    """Oracle: the admissible lattice as the kernel of the condition matrix."""
    return kernel_lattice(admissible_condition_matrix(spec))


class TestAdmissibility:
    def test_zero_is_admissible(self):
        ok, why = is_admissible(((0, 0, 0),) * 3, Z3)
        assert ok and why is None

    def test_row_sum_violation(self):
        ok, why = is_admissible(((1, 0, 0), (0, 0, 0), (0, 0, 0)), Z3)
        assert not ok
        assert "row" in why

    def test_column_sum_violation(self):
        # rows balance but the first and last columns do not
        m = ((1, -1, 0), (0, 1, -1), (0, 0, 0))
        ok, why = is_admissible(m, Z3)
        assert not ok
        assert "column" in why

    def test_antidiagonal_violation(self):
        # rows and columns balance but the i+j=0 class does not
        m = ((1, -1, 0), (-1, 0, 1), (0, 1, -1))
        ok, why = is_admissible(m, Z3)
        assert not ok
        assert "antidiagonal" in why

    def test_constructor_rejects_bad(self):
        with pytest.raises(AdmissibilityError):
            AdmissibleMatrix(Z3, ((1, 0, 0), (0, 0, 0), (0, 0, 0)))

    def test_entry_by_elements(self):
        m = cyclic_basis_matrix(3, 1, 2)
        assert m.entry((1,), (2,)) == 1
        assert m.transpose().entry((2,), (1,)) == 1


class TestExchange:
    def test_shape(self):
        M = exchange_matrix(4, 0, 1, 2, 3)
        assert M[0][2] == 1 and M[1][3] == 1
        assert M[0][3] == -1 and M[1][2] == -1
        assert sum(sum(r) for r in M) == 0

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            exchange_matrix(4, 1, 1, 2, 3)
        with pytest.raises(ValueError):
            exchange_matrix(4, 0, 1, 2, 2)


class TestCyclicBasis:
    @pytest.mark.parametrize("g", range(3, 9))
    def test_count_admissible_degree(self, g):
        basis = cyclic_basis(g)
        assert len(basis) == (g - 1) * (g - 2)
        for m in basis:
            assert m.degree <= g
        assert max(m.degree for m in basis) == g

    @pytest.mark.parametrize("g", range(3, 9))
    def test_identity_pattern_on_k(self, g):
        # the defining property: 1 at the own (i, j), 0 at all other K spots
        for i in range(1, g):
            for j in range(2, g):
                m = cyclic_basis_matrix(g, i, j)
                for a in range(1, g):
                    for b in range(2, g):
                        assert m.entries[a][b] == (1 if (a, b) == (i, j) else 0)

    def test_rejects_outside_k(self):
        with pytest.raises(ValueError):
            cyclic_basis_matrix(4, 0, 2)
        with pytest.raises(ValueError):
            cyclic_basis_matrix(4, 1, 1)

    @pytest.mark.parametrize("g", range(3, 8))
    def test_spans_admissible_lattice(self, g):
        L = adm_lattice(GroupSpec((g,)))
        assert L.rank == (g - 1) * (g - 2)
        assert spans([list(m.flat()) for m in cyclic_basis(g)], L)


# the six Z4 basis matrices, fixed reference values
Z4_REFERENCE = {
    (1, 2): ((0, 1, -1, 0), (-1, 0, 1, 0), (1, -1, 0, 0), (0, 0, 0, 0)),
    (1, 3): ((0, 1, 0, -1), (-1, 0, 0, 1), (0, 0, 0, 0), (1, -1, 0, 0)),
    (2, 2): ((0, 1, -1, 0), (-1, 1, 0, 0), (0, -1, 1, 0), (1, -1, 0, 0)),
    (2, 3): ((1, 0, 0, -1), (-1, 1, 0, 0), (-1, 0, 0, 1), (1, -1, 0, 0)),
    (3, 2): ((1, 0, -1, 0), (-1, 1, 0, 0), (0, 0, 0, 0), (0, -1, 1, 0)),
    (3, 3): ((1, 0, 0, -1), (0, 0, 0, 0), (-1, 1, 0, 0), (0, -1, 0, 1)),
}


def test_z4_reference_matrices():
    for (i, j), want in Z4_REFERENCE.items():
        assert cyclic_basis_matrix(4, i, j).entries == want


# reference degree-3 matrix over Z3 and its binomial
Z3_REFERENCE_MATRIX = ((0, -1, 1), (1, 0, -1), (-1, 1, 0))
Z3_REFERENCE_LHS = (((0,), (1,), (2,)), ((1,), (2,), (0,)), ((2,), (0,), (1,)))
Z3_REFERENCE_RHS = (((0,), (2,), (1,)), ((1,), (0,), (2,)), ((2,), (1,), (0,)))


def test_z3_reference_binomial():
    m = AdmissibleMatrix(Z3, Z3_REFERENCE_MATRIX)
    assert m.degree == 3
    b = matrix_to_binomial(m)
    # positive entries sit at (0,2), (1,0), (2,1), so the sides come out
    # with that orientation; the opposite matrix gives the mirror binomial
    assert (b.lhs, b.rhs) == (Z3_REFERENCE_RHS, Z3_REFERENCE_LHS)
    neg = AdmissibleMatrix(Z3, tuple(tuple(-x for x in row)
                                     for row in Z3_REFERENCE_MATRIX))
    bn = matrix_to_binomial(neg)
    assert (bn.lhs, bn.rhs) == (Z3_REFERENCE_LHS, Z3_REFERENCE_RHS)


class TestProductBasis:
    @pytest.mark.parametrize("gf,hf", [((2,), (2,)), ((2,), (3,)),
                                       ((3,), (3,)), ((2,), (4,)),
                                       ((2, 2), (2,))])
    def test_count_admissible_degree_span(self, gf, hf):
        gs, hs = GroupSpec(gf), GroupSpec(hf)
        bg = adm_basis(gs)
        bh = adm_basis(hs)
        basis = product_basis(gs, hs, bg, bh)
        n = gs.order * hs.order
        assert len(basis) == (n - 1) * (n - 2)
        bound = max(3, *gf, *hf)
        combined = GroupSpec(gf + hf)
        for m in basis:
            assert m.group == combined
            assert m.degree <= bound
        L = adm_lattice(combined)
        assert spans([list(m.flat()) for m in basis], L)

    def test_cubic_shape(self):
        gs = hs = GroupSpec((2,))
        m = product_cubic(gs, hs, (1,), (1,), (1,), (1,))
        assert m.degree == 3
        flat = m.flat()
        assert sorted(flat).count(1) == 3
        assert sorted(flat).count(-1) == 3

    def test_cubic_rejects_zero_j_or_k(self):
        gs = hs = GroupSpec((2,))
        with pytest.raises(ValueError):
            product_cubic(gs, hs, (0,), (0,), (1,), (0,))
        with pytest.raises(ValueError):
            product_cubic(gs, hs, (0,), (1,), (0,), (0,))

    def test_bad_input_basis_size(self):
        gs, hs = GroupSpec((3,)), GroupSpec((2,))
        with pytest.raises(ValueError):
            product_basis(gs, hs, [], [])


class TestAdmBasis:
    def test_direct_z2xz2xz2(self):
        spec = GroupSpec((2, 2, 2))
        basis = adm_basis(spec)
        assert len(basis) == 7 * 6
        L = adm_lattice(spec)
        assert spans([list(m.flat()) for m in basis], L)

    def test_factored_equals_direct_span_z6(self):
        spec = GroupSpec((6,))
        direct = adm_basis(spec, "direct-cyclic")
        factored = adm_basis(spec, "factored")
        assert len(direct) == len(factored) == 20
        L = adm_lattice(spec)
        assert spans([list(m.flat()) for m in direct], L)
        assert spans([list(m.flat()) for m in factored], L)
        # factored mode goes through the prime-power presentation, so its
        # matrices stay degree <= 3 wherever the factors allow
        assert max(m.degree for m in factored) == 3
        assert max(m.degree for m in direct) == 6

    def test_factored_falls_back_for_prime_powers(self):
        spec = GroupSpec((4,))
        a = adm_basis(spec, "direct-cyclic")
        b = adm_basis(spec, "factored")
        assert [m.entries for m in a] == [m.entries for m in b]

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            adm_basis(GroupSpec((3,)), "mystery")


def test_relabel_matrix_preserves_admissibility():
    src = GroupSpec((2, 3))
    tgt = GroupSpec((6,))

    def phi(e):  # crt isomorphism Z2 x Z3 -> Z6
        return ((3 * e[0] + 4 * e[1]) % 6,)

    for m in adm_basis(src):
        out = relabel_matrix(m, phi, tgt)
        assert out.group == tgt
        assert out.degree == m.degree


class TestTripodInvariants:
    def test_z3_binomials(self):
        invs = tripod_invariants(Z3)
        assert len(invs) == 2
        assert all(b.degree == 3 for b in invs)

    def test_z4_binomials_degrees(self):
        invs = tripod_invariants(Z4)
        assert len(invs) == 6
        assert sorted(b.degree for b in invs) == [3, 3, 3, 3, 4, 4]

    def test_flows_are_genuine(self):
        rt = tripod_tree()
        all_flows = set(enumerate_flows(rt, Z4))
        for b in tripod_invariants(Z4):
            for f in b.lhs + b.rhs:
                assert f in all_flows

    def test_binomial_degree_equals_matrix_degree(self):
        for g in (3, 4, 5):
            for m in cyclic_basis(g):
                assert matrix_to_binomial(m).degree == m.degree

    def test_kimura_model(self):
        invs = tripod_invariants(parse_group_spec("Z2xZ2"))
        assert len(invs) == 6
        assert all(b.degree == 3 for b in invs)
