"""Polynomial matrices: degrees, unimodularity, kernel bases, membership."""

import itertools
import random

import pytest

from isoconv.fields import field_create
from isoconv.polys import (
    NEG_INF,
    Poly,
    PolyMatrix,
    column_degrees,
    column_reduce,
    external_degree,
    internal_degree,
    is_unimodular,
    minimal_kernel_basis,
    module_contains,
    modules_equal,
)

GF3 = field_create(3)

G_EX1 = [[[1, 1, 2], [2, 1]], [[1, 2], [0, 1]], [[2, 1, 2], []]]
G2_EX1 = [[[1, 1, 1], [2, 1]], [[0, 0, 1], [0, 2]], [[1, 1, 1], [1]]]
G3_EX1 = [[[2, 2, 1], [1, 2]], [[1, 2], [0, 1]], [[2, 1, 2], []]]


def _pm(grid, spec=GF3):
    return PolyMatrix.from_int_grid(spec, grid)


def test_poly_basics():
    p = Poly.from_ints(GF3, [1, 2, 0])
    assert p.degree == 1
    z = Poly.zero(GF3)
    assert z.degree == NEG_INF
    q = Poly.from_ints(GF3, [0, 1])
    assert (p * q).degree == 2
    assert (p - p).is_zero()
    quo, rem = (p * q).divmod(q)
    assert quo == p and rem.is_zero()


def test_poly_reversal():
    p = Poly.from_ints(GF3, [1, 2])
    assert p.reversed(2).coeffs == (GF3.zero(), GF3.element(2), GF3.one())
    with pytest.raises(ValueError):
        p.reversed(0)


def test_column_degrees_ex1():
    assert column_degrees(_pm(G_EX1)) == [2, 1]
    assert column_degrees(PolyMatrix.identity(GF3, 2)) == [0, 0]
    assert column_degrees(_pm(G2_EX1)) == [2, 1]


def test_external_degree():
    assert external_degree(_pm(G_EX1)) == 3
    assert external_degree(PolyMatrix.identity(GF3, 2)) == 0
    assert external_degree(_pm(G3_EX1)) == 3


def test_zero_column_reports_sentinel():
    g = _pm([[[1], []], [[0, 1], []]])
    assert column_degrees(g) == [1, NEG_INF]
    assert external_degree(g) == NEG_INF


def test_internal_degree():
    assert internal_degree(_pm(G_EX1)) == 3
    assert internal_degree(PolyMatrix.identity(GF3, 2)) == 0


def test_internal_degree_unimodular_invariance():
    rng = random.Random(41)
    g = _pm(G_EX1)
    for _ in range(10):
        u = _random_unimodular(GF3, 2, rng)
        assert internal_degree(g @ u) == internal_degree(g)


def _random_unimodular(spec, n, rng):
    """Product of elementary column operations: unit determinant."""
    m = PolyMatrix.identity(spec, n)
    for _ in range(4):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        f = Poly.from_elements(
            spec, [spec.random_element(rng) for _ in range(rng.randrange(1, 3))]
        )
        rows = [list(r) for r in m.entries]
        for r in range(n):
            rows[r][j] = rows[r][j] + f * rows[r][i]
        m = PolyMatrix.from_rows(spec, rows)
    return m


def test_is_unimodular():
    u = _pm([[[1], [0, 1]], [[], [1]]])
    assert is_unimodular(u)
    d = _pm([[[0, 1], []], [[], [1]]])
    assert not is_unimodular(d)
    q_const = _pm([[[1], [1]], [[1], [2]]])
    assert is_unimodular(q_const)
    with pytest.raises(ValueError):
        is_unimodular(_pm([[[1], [0]]]))


def test_kernel_basis_1x2():
    p = _pm([[[1], [0, 1]]])  # [1, z]
    basis = minimal_kernel_basis(p)
    assert basis.cols == 1
    assert (p @ basis).is_zero()
    assert max(d for d in column_degrees(basis)) == 1
    # no degree-0 kernel vector exists: [a, b] constant with a + z b = 0 forces both zero
    for a in range(3):
        for b in range(3):
            if (a, b) != (0, 0):
                combo = p @ _pm([[[a]], [[b]]])
                assert not combo.is_zero()


def test_kernel_basis_identity_is_empty():
    basis = minimal_kernel_basis(PolyMatrix.identity(GF3, 3))
    assert basis.cols == 0


def test_kernel_basis_column_reduced_and_minimal():
    rng = random.Random(43)
    for _ in range(10):
        rows, cols = 2, 4
        p = PolyMatrix.from_rows(
            GF3,
            [
                [
                    Poly.from_elements(GF3, [GF3.random_element(rng) for _ in range(2)])
                    for _ in range(cols)
                ]
                for _ in range(rows)
            ],
        )
        target = p.cols - p.rank()
        basis = minimal_kernel_basis(p)
        assert basis.cols == target
        assert (p @ basis).is_zero()
        degs = column_degrees(basis)
        # column reduced: leading coefficient matrix has full column rank
        lead = _leading_matrix(basis)
        assert lead.rank() == basis.cols
        # minimality: no kernel vector of degree < max column degree is
        # independent of the lower-degree columns (exhaustive, tiny degrees)
        if basis.cols and max(degs) >= 1:
            dmax = int(max(degs))
            lower = [j for j in range(basis.cols) if column_degrees(basis)[j] < dmax]
            sub = basis.select_columns(lower) if lower else None
            found = _kernel_vectors_up_to(p, dmax - 1)
            for v in found:
                if sub is None:
                    assert _is_zero_vec(v)
                else:
                    stacked = sub.hstack(PolyMatrix.from_rows(GF3, [[x] for x in v]))
                    assert stacked.rank() == sub.cols  # dependent on lower columns


def _leading_matrix(g):
    from isoconv.matrices import Matrix

    degs = column_degrees(g)
    rows = []
    for i in range(g.rows):
        row = []
        for j in range(g.cols):
            d = degs[j]
            row.append(g.entries[i][j].coeff(int(d)) if d != NEG_INF else g.spec.zero())
        rows.append(row)
    return Matrix.from_rows(g.spec, rows)


def _kernel_vectors_up_to(p, dmax):
    """Exhaustive kernel vectors of degree <= dmax over GF(3), small sizes."""
    out = []
    spec = p.spec
    coeff_choices = list(itertools.product(range(3), repeat=(dmax + 1)))
    for combo in itertools.product(coeff_choices, repeat=p.cols):
        if all(all(c == 0 for c in col) for col in combo):
            continue
        vec = [Poly.from_ints(spec, list(col)) for col in combo]
        prod = p @ PolyMatrix.from_rows(spec, [[v] for v in vec])
        if prod.is_zero():
            out.append(vec)
    return out


def _is_zero_vec(v):
    return all(x.is_zero() for x in v)


def test_column_reduce_deterministic_and_sound():
    g = _pm([[[1], [1]], [[0, 1], [0, 1, 1]]])
    red = column_reduce(g)
    lead = _leading_matrix(red)
    assert lead.rank() == red.cols
    assert modules_equal(g, red)


def test_module_contains():
    g = _pm(G_EX1)
    col0 = [Poly.from_ints(GF3, c) for c in [[1, 1, 2], [1, 2], [2, 1, 2]]]
    assert module_contains(g, col0)
    # z * column is still inside; a shifted unit vector is not
    assert module_contains(g, [p.shift(1) for p in col0])
    e1 = [Poly.from_ints(GF3, [1]), Poly.zero(GF3), Poly.zero(GF3)]
    assert not module_contains(g, e1)


def test_modules_equal_under_unimodular_factor():
    rng = random.Random(47)
    g = _pm(G_EX1)
    for _ in range(5):
        u = _random_unimodular(GF3, 2, rng)
        assert modules_equal(g, g @ u)


def test_polymat_mul_examples():
    g = _pm(G_EX1)
    e1 = _pm([[[1]], [[]]])
    assert (g @ e1).column(0) == g.column(0)
    u = _pm([[[1]], [[0, 1]]])
    prod = g @ u
    # against hand convolution on the first row: (1+z+2z^2) + z(2+z) = 1 + 2z^2 + z^2... exact check
    expect0 = Poly.from_ints(GF3, [1, 1, 2]) + Poly.from_ints(GF3, [2, 1]).shift(1)
    assert prod[0, 0] == expect0
    zero_u = _pm([[[]], [[]]])
    assert (g @ zero_u).is_zero()
    with pytest.raises(ValueError):
        g @ _pm([[[1]]])
