"""LPS graphs: generators, group enumeration, spectra, expansion constants."""

from fractions import Fraction

import pytest

from ramkit import DomainError
from ramkit.lps_graphs import (
    PGL,
    PSL,
    FourSquares,
    Graph,
    ProjMatrix,
    build_lps,
    cayley_graph,
    enumerate_group,
    expansion_constant,
    four_square_solutions,
    generating_set,
    is_connected,
    spectral_report,
)

# the X^(5,29) generating set in its two printed normalizations: the
# raw four-squares matrices S (det 5) and the rescaled S' (det 1)
S_RAW_5_29 = [
    (25, 0, 0, 6),
    (6, 0, 0, 25),
    (1, 2, 27, 1),
    (1, 27, 2, 1),
    (1, 24, 24, 1),
    (1, 5, 5, 1),
]
S_RESCALED_5_29 = [
    (26, 0, 0, 19),
    (19, 0, 0, 26),
    (8, 16, 13, 8),
    (8, 13, 16, 8),
    (8, 18, 18, 8),
    (8, 11, 11, 8),
]
GEN_5_29_CANONICAL = {
    (3, 0, 0, 10),
    (8, 11, 11, 8),
    (8, 13, 16, 8),
    (8, 16, 13, 8),
    (8, 18, 18, 8),
    (10, 0, 0, 3),
}
GEN_5_13_CANONICAL = {
    (1, 0, 0, 6),
    (1, 0, 0, 11),
    (1, 2, 11, 1),
    (1, 3, 3, 1),
    (1, 10, 10, 1),
    (1, 11, 2, 1),
}


def cycle_graph(n: int) -> Graph:
    return Graph(n=n, adjacency=[sorted(((i - 1) % n, (i + 1) % n)) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n=n, adjacency=[[j for j in range(n) if j != i] for i in range(n)])


def test_four_square_solutions_5():
    sols = {s.astuple() for s in four_square_solutions(5)}
    assert sols == {
        (1, 2, 0, 0),
        (1, -2, 0, 0),
        (1, 0, 2, 0),
        (1, 0, -2, 0),
        (1, 0, 0, 2),
        (1, 0, 0, -2),
    }


def test_four_square_solution_count_is_p_plus_one():
    for p in (5, 13, 17, 29):
        sols = four_square_solutions(p)
        assert len(sols) == p + 1
        for s in sols:
            a0, a1, a2, a3 = s.astuple()
            assert a0 > 0 and a0 % 2 == 1
            assert a1 % 2 == a2 % 2 == a3 % 2 == 0
            assert a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p


def test_four_squares_validation():
    with pytest.raises(DomainError):
        FourSquares(2, 1, 0, 0)


def test_projective_canonical_pgl():
    m = ProjMatrix.canonical(2, 4, 6, 8, 13, PGL)
    assert m.entries()[0] == 1  # scaled so the first nonzero entry is 1
    # scalar multiples collapse to the same representative
    m2 = ProjMatrix.canonical(6, 12, 18, 24, 13, PGL)
    assert m == m2
    with pytest.raises(DomainError):
        ProjMatrix.canonical(1, 0, 0, 13, 13, PGL)  # singular mod 13


def test_projective_canonical_psl():
    m = ProjMatrix.canonical(26, 0, 0, 19, 29, PSL)
    assert m.entries() == (3, 0, 0, 10)
    assert (m.a * m.d - m.b * m.c) % 29 == 1
    with pytest.raises(DomainError):
        ProjMatrix.canonical(2, 0, 0, 1, 29, PSL)  # determinant 2, not 1


def test_matmul_and_inverse():
    m = ProjMatrix.canonical(8, 16, 13, 8, 29, PSL)
    ident = m @ m.inverse()
    assert ident.entries() == (1, 0, 0, 1)


def test_generating_set_5_29_matches_reference():
    gens = generating_set(5, 29)
    assert all(g.kind == PSL for g in gens)
    assert {g.entries() for g in gens} == GEN_5_29_CANONICAL
    # both printed normalizations canonicalize onto the same set
    assert {
        ProjMatrix.canonical(*m, 29, PSL).entries() for m in S_RESCALED_5_29
    } == GEN_5_29_CANONICAL
    assert {ProjMatrix.canonical(*m, 29, PGL) for m in S_RAW_5_29} == {
        ProjMatrix.canonical(*m, 29, PGL) for m in S_RESCALED_5_29
    }
    # closed under inverses, so the Cayley graph is undirected
    gen_set = set(gens)
    assert all(g.inverse() in gen_set for g in gens)


def test_generating_set_5_13_is_pgl_branch():
    gens = generating_set(5, 13)
    assert all(g.kind == PGL for g in gens)
    assert {g.entries() for g in gens} == GEN_5_13_CANONICAL


def test_generating_set_rejects_bad_args():
    with pytest.raises(DomainError):
        generating_set(4, 29)
    with pytest.raises(DomainError):
        generating_set(5, 7)  # q not 1 mod 4
    with pytest.raises(DomainError):
        generating_set(13, 5)  # q^2 <= 4p
    with pytest.raises(DomainError):
        generating_set(5, 5)


def test_group_orders():
    assert len(enumerate_group(5, PGL)) == 120
    assert len(enumerate_group(13, PGL)) == 2184
    assert len(enumerate_group(13, PSL)) == 1092
    assert len(enumerate_group(29, PSL)) == 12180


def test_cayley_graph_custom_multiply():
    # additive group Z/6 with inverse-closed generators {1, 5} is C_6
    g = cayley_graph(list(range(6)), [1, 5], multiply=lambda a, b: (a + b) % 6)
    assert g.n == 6 and g.degree_set() == {2}
    assert expansion_constant(g) == Fraction(2, 3)


def test_cayley_graph_rejects_asymmetric_generators():
    # {1} alone is not inverse-closed in Z/3: the edge relation is directed
    with pytest.raises(DomainError):
        cayley_graph([0, 1, 2], [1], multiply=lambda a, b: (a + b) % 3)


def test_cayley_graph_rejects_foreign_generator():
    gens = generating_set(5, 29)
    with pytest.raises(DomainError):
        cayley_graph(enumerate_group(13, PSL), gens)


def test_expansion_constants_exact():
    assert expansion_constant(complete_graph(4)) == Fraction(2)
    assert expansion_constant(cycle_graph(6)) == Fraction(2, 3)
    assert expansion_constant(complete_graph(6)) == Fraction(3)
    with pytest.raises(DomainError):
        expansion_constant(Graph(n=2, adjacency=[[], []]))  # disconnected


def test_spectral_report_cycle():
    rep = spectral_report(cycle_graph(6), 2)
    assert rep.bipartite
    assert abs(rep.lambda1 - 2.0) < 1e-9
    assert abs(rep.lambda2 - 2.0) < 1e-9  # the -2 end of a bipartite spectrum
    assert abs(rep.lambda_nontrivial - 1.0) < 1e-9
    assert rep.is_ramanujan  # 1 <= 2 = 2 sqrt(k-1)


def test_spectral_report_complete():
    rep = spectral_report(complete_graph(6), 5)
    assert not rep.bipartite
    assert abs(rep.lambda_nontrivial - 1.0) < 1e-9
    assert rep.is_ramanujan
    assert abs(rep.bound - 4.0) < 1e-12


def test_spectral_report_rejects_irregular():
    g = Graph(n=3, adjacency=[[1], [0, 2], [1]])
    with pytest.raises(DomainError):
        spectral_report(g, 2)


def test_dense_and_iterative_agree():
    g = cycle_graph(24)
    dense = spectral_report(g, 2)
    iterative = spectral_report(g, 2, force_iterative=True)
    assert abs(dense.lambda_nontrivial - iterative.lambda_nontrivial) < 1e-6


def test_build_lps_5_13():
    graph, report, meta = build_lps(5, 13)
    assert meta["branch"] == PGL
    assert graph.n == 2184
    assert graph.degree_set() == {6}
    assert is_connected(graph)
    assert report.bipartite
    assert abs(report.lambda_nontrivial - 4.249721) < 1e-5
    assert abs(report.bound - 4.472136) < 1e-5
    assert report.is_ramanujan
    # deterministic: a rebuild reports the identical spectrum
    _, report2, _ = build_lps(5, 13)
    assert report2.lambda_nontrivial == report.lambda_nontrivial


def test_build_lps_13_29():
    graph, report, meta = build_lps(13, 29)
    assert meta["branch"] == PSL
    assert graph.n == 12180
    assert graph.degree_set() == {14}
    assert abs(report.lambda_nontrivial - 6.948738) < 1e-5
    assert abs(report.bound - 7.211103) < 1e-5
    assert report.is_ramanujan
