import random

import pytest

from ihomology.matrices import Matrix
from ihomology.rings import ZZ, QQ, Zmod
from ihomology.snf import (
    smith_normal_form,
    invariant_factors,
    hermite_column_form,
    integer_kernel,
    integer_kernel_mod,
    solve_matrix,
)


def check_transforms(M, res):
    R = M.ring
    D = (res.U @ M) @ res.V
    assert D == res.D_matrix()
    assert res.U @ res.Uinv == Matrix.identity(R, M.nrows)
    assert res.V @ res.Vinv == Matrix.identity(R, M.ncols)
    for a, b in zip(res.diag, res.diag[1:]):
        assert R.divides(a, b)


def test_smith_2x2():
    # gcd of entries is 2 and |det| = 8, so the invariant factors are 2, 4
    M = Matrix.from_rows(ZZ, [[2, 4], [6, 8]])
    res = smith_normal_form(M)
    assert res.diag == [2, 4]
    check_transforms(M, res)


def test_smith_unimodular():
    # determinant -2, entry gcd 1: invariant factors 1, 2
    M = Matrix.from_rows(ZZ, [[1, 2], [3, 4]])
    assert invariant_factors(M) == [1, 2]


def test_smith_zero_and_identity():
    Z = Matrix.zeros(ZZ, 3, 2)
    assert invariant_factors(Z) == []
    assert invariant_factors(Matrix.identity(ZZ, 4)) == [1, 1, 1, 1]


def test_smith_diag_canonical_sign():
    M = Matrix.from_rows(ZZ, [[-3, 0], [0, -5]])
    assert invariant_factors(M) == [1, 15]


def test_smith_rectangular():
    M = Matrix.from_rows(ZZ, [[2, 0, 0], [0, 3, 0]])
    assert invariant_factors(M) == [1, 6]


def test_smith_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    rng = random.Random(11)
    for _ in range(40):
        nr = rng.randrange(1, 5)
        nc = rng.randrange(1, 5)
        data = [[rng.randrange(-6, 7) for _ in range(nc)] for _ in range(nr)]
        ours = invariant_factors(Matrix.from_rows(ZZ, data))
        theirs = sympy_snf(sympy.Matrix(data))
        want = [abs(theirs[i, i]) for i in range(min(nr, nc)) if theirs[i, i] != 0]
        assert ours == want, (data, ours, want)


def test_smith_transforms_random():
    rng = random.Random(7)
    for _ in range(30):
        nr = rng.randrange(1, 6)
        nc = rng.randrange(1, 6)
        data = [[rng.randrange(-9, 10) for _ in range(nc)] for _ in range(nr)]
        M = Matrix.from_rows(ZZ, data)
        res = smith_normal_form(M)
        check_transforms(M, res)


def test_smith_over_q():
    M = Matrix.from_rows(QQ, [[1, 2], [2, 4]])
    res = smith_normal_form(M)
    assert res.diag == [1]
    check_transforms(M, res)


def span_mod(columns, m, n):
    """All Z/m-combinations of the given sparse columns, as tuples."""
    vecs = {(0,) * n}
    for col in columns:
        base = tuple(col.get(i, 0) % m for i in range(n))
        new = set()
        for v in vecs:
            w = v
            for _ in range(m):
                w = tuple((a + b) % m for a, b in zip(w, base))
                new.add(w)
        vecs |= new
    return vecs


def test_smith_zmod_cokernel_order():
    # |coker| counted by brute force must match the diagonal's prediction:
    # coker = sum of Z/m/(d_i) plus free part, of order prod(d_i) * m^(extra)
    rng = random.Random(23)
    for m in (4, 6, 12):
        R = Zmod(m)
        for _ in range(12):
            nr = rng.randrange(1, 4)
            nc = rng.randrange(1, 4)
            data = [[rng.randrange(m) for _ in range(nc)] for _ in range(nr)]
            M = Matrix.from_rows(R, data)
            res = smith_normal_form(M)
            check_transforms(M, res)
            cols = [M.column(j) for j in range(nc)]
            image = span_mod(cols, m, nr)
            coker = m ** nr // len(image)
            pred = m ** (nr - len(res.diag))
            for d in res.diag:
                pred *= d
            assert coker == pred, (m, data, res.diag)
            for d in res.diag:
                assert m % d == 0 and 1 <= d < m


def test_solve_and_kernel():
    rng = random.Random(5)
    for _ in range(25):
        nr = rng.randrange(1, 5)
        nc = rng.randrange(1, 5)
        data = [[rng.randrange(-4, 5) for _ in range(nc)] for _ in range(nr)]
        M = Matrix.from_rows(ZZ, data)
        res = smith_normal_form(M)
        x = {j: rng.randrange(-3, 4) for j in range(nc)}
        x = {j: v for j, v in x.items() if v}
        b = M @ x
        got = res.solve(b)
        assert got is not None
        assert M @ got == b
        for col in res.kernel_basis():
            assert M @ col == {}


def test_solve_unsolvable():
    M = Matrix.from_rows(ZZ, [[2, 0], [0, 2]])
    res = smith_normal_form(M)
    assert res.solve({0: 1}) is None
    assert res.solve({0: 2, 1: 4}) == {0: 1, 1: 2}


def test_solve_matrix_columnwise():
    M = Matrix.from_rows(ZZ, [[1, 2], [0, 3]])
    B = Matrix.from_rows(ZZ, [[3, 1], [3, 0]])
    X = solve_matrix(smith_normal_form(M), B)
    assert M @ X == B


def test_hermite_canonical():
    # the Hermite form depends only on the column lattice
    rng = random.Random(17)
    for _ in range(20):
        n = rng.randrange(1, 5)
        k = rng.randrange(1, 5)
        data = [[rng.randrange(-5, 6) for _ in range(k)] for _ in range(n)]
        M = Matrix.from_rows(ZZ, data)
        H1 = hermite_column_form(M)
        # recombine columns by a unimodular transform: shear then reverse
        cols = [M.column(j) for j in range(k)]
        for _ in range(6):
            a = rng.randrange(k)
            b = rng.randrange(k)
            if a != b:
                c = rng.randrange(-2, 3)
                for i, v in list(cols[b].items()):
                    w = cols[a].get(i, 0) + c * v
                    if w:
                        cols[a][i] = w
                    else:
                        cols[a].pop(i, None)
        cols.reverse()
        H2 = hermite_column_form(Matrix.from_columns(ZZ, n, cols))
        assert H1 == H2


def test_integer_kernel_sum_matrix():
    M = Matrix.from_rows(ZZ, [[1, 1, 1]])
    K = integer_kernel(M)
    assert K.ncols == 2
    for j in range(K.ncols):
        assert M @ K.column(j) == {}
    # x = (1, -1, 0) lies in the kernel lattice
    res = smith_normal_form(K)
    assert res.solve({0: 1, 1: -1}) is not None


def test_integer_kernel_mod_brute():
    rng = random.Random(31)
    for m in (4, 6):
        for _ in range(10):
            nr = rng.randrange(1, 3)
            nc = rng.randrange(1, 4)
            data = [[rng.randrange(-3, 4) for _ in range(nc)] for _ in range(nr)]
            M = Matrix.from_rows(ZZ, data)
            K = integer_kernel_mod(M, m)
            assert K.ncols == nc
            kcols = [K.column(j) for j in range(K.ncols)]
            got = span_mod(kcols, m, nc)
            want = set()
            for idx in range(m ** nc):
                x = []
                t = idx
                for _ in range(nc):
                    x.append(t % m)
                    t //= m
                xv = {j: x[j] for j in range(nc) if x[j]}
                b = M @ xv
                if all(v % m == 0 for v in b.values()):
                    want.add(tuple(x))
            assert got == want, (m, data)
