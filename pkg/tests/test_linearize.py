import pytest

from loopnil import intmat
from loopnil.abelian import AbelianInvariants
from loopnil.linearize import moore_homology, reduced_linearization
from loopnil.simplicial import moore_space, point, sphere, wedge, wedge_of_circles

import oracles


def chain_data(space, top):
    """Nondegenerate cells with degenerate faces mapped to None (oracle input)."""
    cells = [space.n_cells(q) for q in range(top + 1)]
    faces = {}
    for q in range(1, top + 1):
        for cid in space.n_cells(q):
            faces[cid] = [
                (r.base if not r.is_degenerate and r.base != "*" else None)
                for r in space.faces[cid]
            ]
    # reduced complex: the basepoint is quotiented out entirely
    cells[0] = []
    return cells, faces


def oracle_homology(space, s):
    cells, faces = chain_data(space, max(space.top_dim, s + 1))
    return oracles.chain_homology(cells, faces, s)


def test_linearization_ranks():
    z = reduced_linearization(point())
    assert all(z.rank(q) == 0 for q in range(4))
    zs1 = reduced_linearization(sphere(1))
    assert [zs1.rank(q) for q in range(3)] == [0, 1, 2]
    zw2 = reduced_linearization(wedge_of_circles(2))
    assert zw2.rank(2) == 4


def test_face_matrices_satisfy_simplicial_identities():
    a = reduced_linearization(moore_space(2, 2))
    for q in range(2, 5):
        for j in range(q + 1):
            for i in range(j):
                lhs = intmat.matmul(
                    a.face_matrix(q - 1, i), a.face_matrix(q, j), b_cols=a.rank(q)
                )
                rhs = intmat.matmul(
                    a.face_matrix(q - 1, j - 1), a.face_matrix(q, i), b_cols=a.rank(q)
                )
                assert lhs == rhs


def test_moore_boundary_squares_to_zero():
    # the composite of the induced differential with itself vanishes
    for space in [sphere(2), wedge_of_circles(2), moore_space(2, 2)]:
        a = reduced_linearization(space)
        for q in range(2, 5):
            d1 = a.face_matrix(q, 0)
            d2 = a.face_matrix(q - 1, 0)
            dd = intmat.matmul(d2, d1, b_cols=a.rank(q))
            # d0 d0 equals d0 d1 by the simplicial identities, so on the Moore
            # subgroup the square vanishes; check the identity globally
            d1_alt = a.face_matrix(q, 1)
            alt = intmat.matmul(d2, d1_alt, b_cols=a.rank(q))
            assert dd == alt


@pytest.mark.parametrize(
    "space_fn,expected",
    [
        (lambda: sphere(1), {0: (0, ()), 1: (1, ()), 2: (0, ()), 3: (0, ())}),
        (lambda: sphere(2), {0: (0, ()), 1: (0, ()), 2: (1, ()), 3: (0, ()), 4: (0, ())}),
        (lambda: sphere(3), {s: ((1, ()) if s == 3 else (0, ())) for s in range(6)}),
        (lambda: wedge_of_circles(2), {0: (0, ()), 1: (2, ()), 2: (0, ())}),
        (lambda: moore_space(2, 2), {1: (0, ()), 2: (0, (2,)), 3: (0, ())}),
        (lambda: moore_space(3, 2), {2: (0, (3,)), 3: (0, ())}),
        (lambda: moore_space(4, 1), {1: (0, (4,)), 2: (0, ())}),
        (lambda: moore_space(6, 2), {2: (0, (6,)), 3: (0, ())}),
    ],
)
def test_moore_homology_matches_reduced_homology(space_fn, expected):
    space = space_fn()
    a = reduced_linearization(space)
    for s, (rank, torsion) in expected.items():
        got = moore_homology(a, s)
        assert got == AbelianInvariants(rank, torsion), (space.name, s)
        o_rank, o_torsion = oracle_homology(space, s)
        assert (got.rank, list(got.torsion)) == (o_rank, o_torsion), (space.name, s)


def test_moore_homology_point_trivial():
    a = reduced_linearization(point())
    for s in range(4):
        assert moore_homology(a, s).is_trivial


def test_wedge_homology_is_direct_sum():
    pieces = [sphere(1), sphere(2)]
    w = wedge(*pieces)
    aw = reduced_linearization(w)
    parts = [reduced_linearization(x) for x in pieces]
    for s in range(0, 4):
        whole = moore_homology(aw, s)
        ranks = sum(moore_homology(p, s).rank for p in parts)
        torsion = sum((list(moore_homology(p, s).torsion) for p in parts), [])
        assert whole.rank == ranks
        assert sorted(whole.torsion) == sorted(torsion)
    w2 = wedge(wedge_of_circles(2), sphere(1))
    a2 = reduced_linearization(w2)
    assert moore_homology(a2, 1).rank == 3


def test_moore_boundary_squared_is_zero_matrix():
    # the induced differential on Moore coordinates composes to zero
    for space in [sphere(2), moore_space(2, 2)]:
        a = reduced_linearization(space)

        def moore_basis(q):
            n = a.rank(q)
            if q <= 0 or n == 0:
                return intmat.identity(n), n
            blocks = [a.face_matrix(q, i) for i in range(1, q + 1)]
            return intmat.kernel_basis(intmat.stack_rows(blocks, n), ncols=n)

        for s in range(1, 4):
            k_lo, n_lo = moore_basis(s - 1)
            k_mid, n_mid = moore_basis(s)
            k_hi, n_hi = moore_basis(s + 1)
            if n_hi == 0 or n_lo == 0:
                continue
            c_mid, _ = intmat.solve_columns(
                k_lo, intmat.matmul(a.face_matrix(s, 0), k_mid, b_cols=n_mid),
                a_cols=n_lo, b_cols=n_mid,
            )
            c_hi, _ = intmat.solve_columns(
                k_mid, intmat.matmul(a.face_matrix(s + 1, 0), k_hi, b_cols=n_hi),
                a_cols=n_mid, b_cols=n_hi,
            )
            square = intmat.matmul(c_mid, c_hi, a_cols=n_mid, b_cols=n_hi)
            assert all(all(v == 0 for v in row) for row in square)


def test_moore_homology_rejects_torsion_degrees():
    from loopnil.errors import UnsupportedTorsion
    from loopnil.linearize import SimplicialAbelianGroup

    g = SimplicialAbelianGroup(
        lambda q: 1 if q >= 0 else 0,
        lambda q, i: [[1]],
        lambda q, i: [[1]],
        torsion_fn=lambda q: (2,) if q == 1 else (),
        name="torsion-test",
    )
    with pytest.raises(UnsupportedTorsion):
        moore_homology(g, 1)


def test_sphere_homology_window():
    # rank 1 exactly at s = n, trivial elsewhere through s = n + 2
    for n in (1, 2, 3):
        a = reduced_linearization(sphere(n))
        for s in range(0, n + 3):
            inv = moore_homology(a, s)
            if s == n:
                assert inv == AbelianInvariants(1, ())
            else:
                assert inv.is_trivial, (n, s)
