"""Permanent engines and unimodular reduction."""
from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from egperm.graphcore import Multigraph, banana, catalog, complete_graph, path_graph
from egperm.gperm import reduced_incidence
from egperm.matmod import (BlockSpec, CompositeModulusError, IntMatrix,
                           MatrixError, ModMatrix, parse_matrix,
                           permanent_block, permanent_naive, permanent_ryser,
                           row_reduce_unimodular, same_row_space)


def test_naive_base_cases():
    assert permanent_naive(IntMatrix.from_rows([[1]])) == 1
    for k in (2, 3, 4, 5):
        ones = IntMatrix.from_rows([[1] * k for _ in range(k)])
        assert permanent_naive(ones) == math.factorial(k)


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))
def test_naive_2x2(a, b, c, d):
    assert permanent_naive(IntMatrix.from_rows([[a, b], [c, d]])) == a * d + b * c


def test_naive_guard():
    with pytest.raises(MatrixError):
        permanent_naive(IntMatrix.from_rows([[1] * 13] * 13))


def test_ryser_matches_naive_randomized():
    rng = random.Random(20240817)
    for p in (3, 5, 7, 13):
        for _ in range(100):
            n = rng.randint(1, 8)
            rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            m = IntMatrix.from_rows(rows)
            assert permanent_ryser(m.mod(p)) == permanent_naive(m) % p


def test_ryser_zero_column():
    m = IntMatrix.from_rows([[1, 0, 1], [2, 0, 1], [1, 0, 2]])
    assert permanent_ryser(m.mod(5)) == 0


def test_ryser_wilson():
    ones = IntMatrix.from_rows([[1] * 4] * 4)
    assert permanent_ryser(ones.mod(5)) == 4  # 4! = 24 = -1 mod 5


def test_ryser_numpy_path():
    rng = random.Random(99)
    rows = [[rng.randrange(7) for _ in range(22)] for _ in range(22)]
    m = IntMatrix.from_rows(rows).mod(7)
    import egperm.matmod as mm
    assert mm._ryser_numpy(m) == mm._ryser_gray(m)


def test_block_k4_values():
    m = reduced_incidence(catalog("K4"), 3)
    assert permanent_block(BlockSpec(m, 2, 1), 3) == 0
    # 1_{4x2} (x) M at p=5 equals the Ryser value on the 12x12 expansion
    spec = BlockSpec(m, 4, 2)
    expanded = spec.expand().mod(5)
    assert permanent_block(spec, 5) == permanent_ryser(expanded, guard=30)


def test_block_matches_ryser_randomized():
    rng = random.Random(7)
    for p in (3, 7):
        for _ in range(25):
            r, c = rng.randint(1, 3), rng.randint(1, 3)
            rows = [[rng.randint(-1, 1) for _ in range(c)] for _ in range(r)]
            m = IntMatrix.from_rows(rows)
            k = math.lcm(r, c)
            spec = BlockSpec(m, k // r, k // c)
            assert permanent_block(spec, p) == permanent_ryser(spec.expand().mod(p), guard=30)


def test_block_pigeonhole_zero():
    m = IntMatrix.from_rows([[1, 0]])
    assert permanent_block(BlockSpec(m, 2, 1), 5) == 0


def test_block_composite_flagged():
    m = reduced_incidence(catalog("K4"), 3)
    with pytest.raises(CompositeModulusError):
        permanent_block(BlockSpec(m, 2, 1), 9)


def test_block_composite_two_vertex_special_case():
    m = IntMatrix.from_rows([[1, 1, 1]])
    assert permanent_block(BlockSpec(m, 3, 1), 4) == 2
    m2 = IntMatrix.from_rows([[-1, -1, -1]])
    assert permanent_block(BlockSpec(m2, 3, 1), 4) == 2
    assert permanent_block(BlockSpec(IntMatrix.from_rows([[1]]), 1, 1), 2) == 1


@given(st.integers(0, 5))
@settings(max_examples=20, deadline=None)
def test_row_col_swap_invariance(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    m = IntMatrix.from_rows(rows)
    i, j = rng.randrange(n), rng.randrange(n)
    swapped = [row[:] for row in rows]
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert permanent_naive(IntMatrix.from_rows(swapped)) == permanent_naive(m)
    cols = [[rows[r][j if c == i else (i if c == j else c)] for c in range(n)]
            for r in range(n)]
    assert permanent_naive(IntMatrix.from_rows(cols)) == permanent_naive(m)
    scaled = [row[:] for row in rows]
    scaled[0] = [3 * x for x in scaled[0]]
    assert permanent_naive(IntMatrix.from_rows(scaled)) == 3 * permanent_naive(m)


def test_repeated_row_reduction_lemma():
    # adding a multiple of a k-fold repeated row preserves the permanent mod k+1
    rng = random.Random(5)
    for _ in range(20):
        k = rng.choice((2, 3, 4))
        n = k + 2
        rep = [rng.randint(-2, 2) for _ in range(n)]
        others = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n - k)]
        rows = [rep[:] for _ in range(k)] + others
        m = IntMatrix.from_rows(rows)
        c = rng.randint(1, 3)
        rows2 = [r[:] for r in rows]
        rows2[-1] = [a + c * b for a, b in zip(rows2[-1], rep)]
        m2 = IntMatrix.from_rows(rows2)
        assert permanent_naive(m) % (k + 1) == permanent_naive(m2) % (k + 1)


def _det(rows) -> Fraction:
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def test_total_unimodularity_exhaustive():
    import itertools
    graphs = [complete_graph(3), banana(3), path_graph(4),
              Multigraph.build(3, [(0, 1), (0, 1), (1, 2), (0, 2), (2, 2)]),
              Multigraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])]
    for g in graphs:
        assert g.edge_count <= 5
        m = reduced_incidence(g, g.vertex_count - 1)
        for size in range(1, min(m.rows, m.cols) + 1):
            for rs in itertools.combinations(range(m.rows), size):
                for cs in itertools.combinations(range(m.cols), size):
                    sub = [[m.at(i, j) for j in cs] for i in rs]
                    assert _det(sub) in (-1, 0, 1)


def test_row_reduce_k3_tree_first():
    # triangle with tree edges (0,2),(1,2) first, then the chord (0,1)
    g = Multigraph.build(3, [(0, 2), (1, 2), (0, 1)])
    m = reduced_incidence(g, 2)
    a = row_reduce_unimodular(m)
    assert a.rows == 2 and a.cols == 1
    assert all(x in (-1, 0, 1) for x in a.entries)
    rebuilt = IntMatrix.from_rows([[1, 0, a.at(0, 0)], [0, 1, a.at(1, 0)]])
    assert same_row_space(rebuilt, m)


def zigzag_tree_first_matrix(m: int) -> IntMatrix:
    """Reduced signed incidence of the zig-zag on m vertices, tree columns
    first: path edges (v_j, v_{j+1}), an edge from v_{m-1} into the deleted
    special vertex, then the distance-2 chords and the two remaining edges
    at the special vertex."""
    rows = m - 1
    cols = []
    for j in range(rows - 1):            # tree: path edges
        col = [0] * rows
        col[j], col[j + 1] = 1, -1
        cols.append(col)
    col = [0] * rows                     # tree: (v_{m-1}, special)
    col[rows - 1] = 1
    cols.append(col)
    for j in range(rows - 2):            # chords (v_j, v_{j+2})
        col = [0] * rows
        col[j], col[j + 2] = 1, -1
        cols.append(col)
    col = [0] * rows                     # (v_{m-2}, special)
    col[rows - 2] = 1
    cols.append(col)
    col = [0] * rows                     # (v_1, special)
    col[0] = 1
    cols.append(col)
    return IntMatrix.from_rows([[c[i] for c in cols] for i in range(rows)])


def test_row_reduce_zigzag_block():
    m = 7
    rows = m - 1
    a = row_reduce_unimodular(zigzag_tree_first_matrix(m))
    assert a.rows == rows and a.cols == rows
    # path incidence columns plus one all-ones hyperedge column
    expected_cols = []
    for j in range(rows - 1):
        col = [0] * rows
        col[j] = col[j + 1] = 1
        expected_cols.append(tuple(col))
    expected_cols.append(tuple([1] * rows))
    got = sorted(tuple(abs(x) for x in a.col(j)) for j in range(rows))
    assert got == sorted(expected_cols)


def test_row_reduce_identity_passthrough():
    m = IntMatrix.from_rows([[1, 0, 1, -1], [0, 1, 0, 1]])
    a = row_reduce_unimodular(m)
    assert a == IntMatrix.from_rows([[1, -1], [0, 1]])


def test_row_reduce_singular():
    m = IntMatrix.from_rows([[1, 1, 0], [1, 1, 1]])
    with pytest.raises(MatrixError):
        row_reduce_unimodular(m)


def test_parse_matrix_roundtrip():
    text = "M 2 3\n1 -1 0\n0 1 -1\n"
    m = parse_matrix(text)
    assert m.rows == 2 and m.cols == 3 and m.at(1, 2) == -1
    with pytest.raises(MatrixError):
        parse_matrix("2 3\n1 1 1\n1 1 1\n")


def test_modmatrix_validation():
    with pytest.raises(MatrixError):
        ModMatrix(1, 1, 4, (1,))
    with pytest.raises(MatrixError):
        ModMatrix(1, 1, 5, (7,))
