"""Smith normal form and integer lattice utilities.

The eliminator reduces a sparse matrix to diagonal form by invertible row
and column operations, optionally tracking the transforms: U @ M @ V == D
with d_1 | d_2 | ... along the diagonal.  It works over any of the rings
in rings.py; over Z/m the Bezout steps are computed on canonical lifts,
so every 2x2 block used is invertible mod m.

Pivoting prefers units and sparse rows/columns (a cheap Markowitz rule),
which keeps fill-in tame on boundary matrices.  All choices are made by
explicit sorted order, so results are deterministic.
"""

from math import gcd

from .matrices import Matrix
from .rings import ZZ, IntegerRing, ZmodRing, xgcd


def _axpy(R, dst, src, c):
    """dst += c * src on sparse dicts, in place."""
    if R.is_zero(c):
        return
    for k, v in src.items():
        w = R.add(dst.get(k, R.zero), R.mul(c, v))
        if R.is_zero(w):
            dst.pop(k, None)
        else:
            dst[k] = w


def _combine(R, x, y, s, t):
    """Return s*x + t*y as a new sparse dict."""
    out = {}
    for k, v in x.items():
        w = R.mul(s, v)
        if not R.is_zero(w):
            out[k] = w
    for k, v in y.items():
        w = R.add(out.get(k, R.zero), R.mul(t, v))
        if R.is_zero(w):
            out.pop(k, None)
        else:
            out[k] = w
    return out


class SNFResult:
    """Diagonal form of a matrix plus (optionally) the change of basis.

    diag lists the nonzero diagonal entries in divisibility order; rank is
    their count.  When transforms were requested, U, Uinv, V, Vinv satisfy
    U @ M @ V == D, U @ Uinv == I, V @ Vinv == I over the ring.
    """

    def __init__(self, ring, nrows, ncols, diag, U=None, Uinv=None, V=None, Vinv=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.diag = diag
        self.rank = len(diag)
        self.U = U
        self.Uinv = Uinv
        self.V = V
        self.Vinv = Vinv

    def D_matrix(self):
        D = Matrix(self.ring, self.nrows, self.ncols)
        for p, d in enumerate(self.diag):
            D.set(p, p, d)
        return D

    def solve(self, b):
        """Return one x with M @ x == b, or None if there is none.

        b is a sparse dict.  Requires transforms.
        """
        R = self.ring
        c = self.U @ b
        y = {}
        for i, ci in c.items():
            if i >= self.rank:
                return None
            d = self.diag[i]
            if not R.divides(d, ci):
                return None
            q = R.div(ci, d)
            if not R.is_zero(q):
                y[i] = q
        return self.V @ y

    def kernel_basis(self):
        """Sparse columns spanning ker M.  Valid over Z and over fields."""
        R = self.ring
        if isinstance(R, ZmodRing) and not R.is_field:
            raise ValueError("kernel over composite Z/m goes through integer lattices")
        Vc = self.V.columns()
        return [dict(Vc.get(j, {})) for j in range(self.rank, self.ncols)]


class _Eliminator:
    def __init__(self, M, transforms):
        R = self.R = M.ring
        self.nrows = M.nrows
        self.ncols = M.ncols
        self.rows = {i: dict(r) for i, r in M.rows.items() if r}
        self.colrows = {}
        for i, r in self.rows.items():
            for j in r:
                self.colrows.setdefault(j, set()).add(i)
        if transforms is True:
            wanted = {"U", "Uinv", "V", "Vinv"}
        elif not transforms:
            wanted = set()
        else:
            wanted = set(transforms)
        self.tU = "U" in wanted
        self.tUinv = "Uinv" in wanted
        self.tV = "V" in wanted
        self.tVinv = "Vinv" in wanted
        one = R.el(1)
        if self.tU:
            self.U = {i: {i: one} for i in range(self.nrows)}
        if self.tUinv:
            self.Uinv_cols = {i: {i: one} for i in range(self.nrows)}
        if self.tV:
            self.V_cols = {j: {j: one} for j in range(self.ncols)}
        if self.tVinv:
            self.Vinv = {j: {j: one} for j in range(self.ncols)}
        self.rank = 0

    # --- raw matrix operations (rows + colrows stay consistent) ---

    def _entry_set(self, i, j, w):
        R = self.R
        row = self.rows.get(i)
        if R.is_zero(w):
            if row is not None and row.pop(j, None) is not None:
                s = self.colrows[j]
                s.discard(i)
                if not s:
                    del self.colrows[j]
                if not row:
                    del self.rows[i]
        else:
            if row is None:
                row = self.rows[i] = {}
            if j not in row:
                self.colrows.setdefault(j, set()).add(i)
            row[j] = w

    def _m_row_axpy(self, i, k, c):
        R = self.R
        src = self.rows.get(k)
        if not src:
            return
        for j, v in list(src.items()):
            w = R.add(self.rows.get(i, {}).get(j, R.zero), R.mul(c, v))
            self._entry_set(i, j, w)

    def _m_row_2x2(self, i, k, s, t, u, v):
        R = self.R
        ri = self.rows.pop(i, {})
        rk = self.rows.pop(k, {})
        for j in set(ri) | set(rk):
            cs = self.colrows.get(j)
            if cs is not None:
                cs.discard(i)
                cs.discard(k)
                if not cs:
                    del self.colrows[j]
        ni = _combine(R, ri, rk, s, t)
        nk = _combine(R, ri, rk, u, v)
        if ni:
            self.rows[i] = ni
            for j in ni:
                self.colrows.setdefault(j, set()).add(i)
        if nk:
            self.rows[k] = nk
            for j in nk:
                self.colrows.setdefault(j, set()).add(k)

    def _m_row_swap(self, i, k):
        ri = self.rows.pop(i, None)
        rk = self.rows.pop(k, None)
        for j in set(ri or ()) | set(rk or ()):
            cs = self.colrows[j]
            cs.discard(i)
            cs.discard(k)
        if rk is not None:
            self.rows[i] = rk
            for j in rk:
                self.colrows[j].add(i)
        if ri is not None:
            self.rows[k] = ri
            for j in ri:
                self.colrows[j].add(k)

    def _m_col_axpy(self, j, l, c):
        R = self.R
        for i in list(self.colrows.get(l, ())):
            v = self.rows[i][l]
            w = R.add(self.rows[i].get(j, R.zero), R.mul(c, v))
            self._entry_set(i, j, w)

    def _m_col_2x2(self, j, l, s, t, u, v):
        R = self.R
        touched = set(self.colrows.get(j, ())) | set(self.colrows.get(l, ()))
        for i in touched:
            row = self.rows[i]
            a = row.get(j, R.zero)
            b = row.get(l, R.zero)
            self._entry_set(i, j, R.add(R.mul(s, a), R.mul(t, b)))
            self._entry_set(i, l, R.add(R.mul(u, a), R.mul(v, b)))

    def _m_col_swap(self, j, l):
        sj = self.colrows.pop(j, set())
        sl = self.colrows.pop(l, set())
        for i in sj | sl:
            row = self.rows[i]
            a = row.pop(j, None)
            b = row.pop(l, None)
            if b is not None:
                row[j] = b
            if a is not None:
                row[l] = a
        if sl:
            self.colrows[j] = sl
        if sj:
            self.colrows[l] = sj

    def _m_col_scale(self, j, c):
        R = self.R
        for i in self.colrows.get(j, ()):
            self.rows[i][j] = R.mul(c, self.rows[i][j])

    # --- operations mirrored into the transforms ---

    def row_axpy(self, i, k, c):
        self._m_row_axpy(i, k, c)
        R = self.R
        if self.tU:
            _axpy(R, self.U.setdefault(i, {}), self.U.get(k, {}), c)
        if self.tUinv:
            _axpy(R, self.Uinv_cols.setdefault(k, {}), self.Uinv_cols.get(i, {}), R.neg(c))

    def row_2x2(self, i, k, s, t, u, v):
        self._m_row_2x2(i, k, s, t, u, v)
        R = self.R
        if self.tU:
            Ui = self.U.pop(i, {})
            Uk = self.U.pop(k, {})
            self.U[i] = _combine(R, Ui, Uk, s, t)
            self.U[k] = _combine(R, Ui, Uk, u, v)
        if self.tUinv:
            dinv = R.inv(R.sub(R.mul(s, v), R.mul(t, u)))
            Ci = self.Uinv_cols.pop(i, {})
            Ck = self.Uinv_cols.pop(k, {})
            self.Uinv_cols[i] = _combine(R, Ci, Ck, R.mul(dinv, v), R.neg(R.mul(dinv, u)))
            self.Uinv_cols[k] = _combine(R, Ci, Ck, R.neg(R.mul(dinv, t)), R.mul(dinv, s))

    def row_swap(self, i, k):
        self._m_row_swap(i, k)
        if self.tU:
            self.U[i], self.U[k] = self.U.pop(k, {}), self.U.pop(i, {})
        if self.tUinv:
            self.Uinv_cols[i], self.Uinv_cols[k] = (
                self.Uinv_cols.pop(k, {}), self.Uinv_cols.pop(i, {}))

    def col_axpy(self, j, l, c):
        self._m_col_axpy(j, l, c)
        R = self.R
        if self.tV:
            _axpy(R, self.V_cols.setdefault(j, {}), self.V_cols.get(l, {}), c)
        if self.tVinv:
            _axpy(R, self.Vinv.setdefault(l, {}), self.Vinv.get(j, {}), R.neg(c))

    def col_2x2(self, j, l, s, t, u, v):
        self._m_col_2x2(j, l, s, t, u, v)
        R = self.R
        if self.tV:
            Vj = self.V_cols.pop(j, {})
            Vl = self.V_cols.pop(l, {})
            self.V_cols[j] = _combine(R, Vj, Vl, s, t)
            self.V_cols[l] = _combine(R, Vj, Vl, u, v)
        if self.tVinv:
            dinv = R.inv(R.sub(R.mul(s, v), R.mul(t, u)))
            Wj = self.Vinv.pop(j, {})
            Wl = self.Vinv.pop(l, {})
            self.Vinv[j] = _combine(R, Wj, Wl, R.mul(dinv, v), R.neg(R.mul(dinv, u)))
            self.Vinv[l] = _combine(R, Wj, Wl, R.neg(R.mul(dinv, t)), R.mul(dinv, s))

    def col_swap(self, j, l):
        self._m_col_swap(j, l)
        if self.tV:
            self.V_cols[j], self.V_cols[l] = (
                self.V_cols.pop(l, {}), self.V_cols.pop(j, {}))
        if self.tVinv:
            self.Vinv[j], self.Vinv[l] = self.Vinv.pop(l, {}), self.Vinv.pop(j, {})

    def col_scale(self, j, c):
        self._m_col_scale(j, c)
        R = self.R
        if self.tV:
            self.V_cols[j] = {i: R.mul(c, v) for i, v in self.V_cols.get(j, {}).items()}
        if self.tVinv:
            cinv = R.inv(c)
            self.Vinv[j] = {i: R.mul(cinv, v) for i, v in self.Vinv.get(j, {}).items()}

    # --- main loop ---

    def _find_pivot(self, p):
        R = self.R
        cols = sorted((len(s), j) for j, s in self.colrows.items() if j >= p)
        if not cols:
            return None
        best = None
        examined = 0
        found_unit = False
        for ln, j in cols:
            rows_here = self.colrows[j]
            for i in sorted(rows_here):
                v = self.rows[i][j]
                sz = R.size(v)
                cost = (ln - 1) * (len(self.rows[i]) - 1)
                key = (sz, cost, i, j)
                if best is None or key < best:
                    best = key
                    if sz == 1 and cost == 0:
                        return i, j
                if sz == 1:
                    found_unit = True
            examined += 1
            if found_unit and examined >= 4:
                break
            if examined >= 40:
                break
        if best is not None and best[0] > 1 and examined < len(cols):
            # no unit seen in the sparse columns; look everywhere for a
            # smaller pivot before committing to a non-unit
            for ln, j in cols[examined:]:
                for i in sorted(self.colrows[j]):
                    v = self.rows[i][j]
                    sz = R.size(v)
                    if sz < best[0]:
                        cost = (ln - 1) * (len(self.rows[i]) - 1)
                        key = (sz, cost, i, j)
                        if key < best:
                            best = key
        return best[2], best[3]

    def _clear(self, p):
        R = self.R
        while True:
            colset = self.colrows.get(p, set())
            if len(colset) > 1 or (colset and p not in colset):
                for i in sorted(colset - {p}):
                    if i not in self.colrows.get(p, ()):
                        continue
                    a = self.rows[p][p]
                    b = self.rows[i][p]
                    if R.divides(a, b):
                        self.row_axpy(i, p, R.neg(R.div(b, a)))
                    else:
                        g, s, t, u, v = R.bezout(a, b)
                        self.row_2x2(p, i, s, t, u, v)
            rowd = self.rows.get(p, {})
            extras = sorted(j for j in rowd if j != p)
            for j in extras:
                if j not in self.rows.get(p, {}):
                    continue
                a = self.rows[p][p]
                b = self.rows[p][j]
                if R.divides(a, b):
                    self.col_axpy(j, p, R.neg(R.div(b, a)))
                else:
                    g, s, t, u, v = R.bezout(a, b)
                    self.col_2x2(p, j, s, t, u, v)
            colset = self.colrows.get(p, set())
            if colset <= {p} and all(j == p for j in self.rows.get(p, {})):
                break

    def _fix_divisibility(self):
        R = self.R
        one = R.el(1)
        changed = True
        while changed:
            changed = False
            for a_idx in range(self.rank):
                da = self.rows.get(a_idx, {}).get(a_idx, R.zero)
                if R.is_zero(da):
                    continue
                for b_idx in range(a_idx + 1, self.rank):
                    db = self.rows.get(b_idx, {}).get(b_idx, R.zero)
                    if R.is_zero(db) or R.divides(da, db):
                        continue
                    self.col_axpy(a_idx, b_idx, one)
                    g, s, t, u, v = R.bezout(da, db)
                    self.row_2x2(a_idx, b_idx, s, t, u, v)
                    rem = self.rows.get(a_idx, {}).get(b_idx, R.zero)
                    if not R.is_zero(rem):
                        self.col_axpy(b_idx, a_idx, R.neg(R.div(rem, g)))
                    da = self.rows.get(a_idx, {}).get(a_idx, R.zero)
                    changed = True
                    if R.is_zero(da):
                        break

    def _compact_zeros(self):
        # over Z/m a divisibility fix can turn a diagonal entry into zero;
        # move surviving entries up so the nonzero block is an initial segment
        write = 0
        for q in range(self.rank):
            if self.rows.get(q, {}).get(q) is None:
                continue
            if q != write:
                self.row_swap(write, q)
                self.col_swap(write, q)
            write += 1
        self.rank = write

    def _normalize_units(self):
        R = self.R
        for q in range(self.rank):
            d = self.rows[q][q]
            u = R.canonical_unit(d)
            if not R.is_zero(R.sub(u, R.el(1))):
                self.col_scale(q, u)

    def run(self):
        p = 0
        limit = min(self.nrows, self.ncols)
        while p < limit:
            piv = self._find_pivot(p)
            if piv is None:
                break
            i, j = piv
            if i != p:
                self.row_swap(p, i)
            if j != p:
                self.col_swap(p, j)
            self._clear(p)
            p += 1
        self.rank = p
        self._fix_divisibility()
        self._compact_zeros()
        self._normalize_units()

    def result(self):
        R = self.R
        diag = [self.rows[q][q] for q in range(self.rank)]
        U = Uinv = V = Vinv = None
        if self.tU:
            U = Matrix(R, self.nrows, self.nrows,
                       {i: dict(r) for i, r in self.U.items() if r})
        if self.tUinv:
            Uinv = Matrix.from_columns(
                R, self.nrows, [self.Uinv_cols.get(i, {}) for i in range(self.nrows)])
        if self.tV:
            V = Matrix.from_columns(
                R, self.ncols, [self.V_cols.get(j, {}) for j in range(self.ncols)])
        if self.tVinv:
            Vinv = Matrix(R, self.ncols, self.ncols,
                          {j: dict(r) for j, r in self.Vinv.items() if r})
        return SNFResult(R, self.nrows, self.ncols, diag, U, Uinv, V, Vinv)


def smith_normal_form(M, transforms=True):
    """Smith form of M; transforms may be True, False, or a subset of
    {"U", "Uinv", "V", "Vinv"} naming the change-of-basis matrices to track."""
    work = _Eliminator(M, transforms)
    work.run()
    return work.result()


def invariant_factors(M):
    """Nonzero diagonal of the Smith form, without transform tracking."""
    return smith_normal_form(M, transforms=False).diag


def solve_matrix(res, B):
    """Solve M @ X == B columnwise from an SNFResult of M; None if stuck."""
    cols = []
    Bc = B.columns()
    for j in range(B.ncols):
        x = res.solve(dict(Bc.get(j, {})))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(res.ring, res.ncols, cols)


def hermite_column_form(M):
    """Canonical basis of the integer column lattice, as matrix columns.

    Column-style Hermite form: pivot rows strictly increase left to right,
    pivots are positive, and in each pivot row the entries of the earlier
    columns are reduced into [0, pivot).  The output depends only on the
    lattice spanned by the input columns, which makes downstream bases
    reproducible.
    """
    R = M.ring
    if not isinstance(R, IntegerRing):
        raise ValueError("Hermite form is implemented over Z only")
    seen = M.columns()
    rest = [dict(seen[j]) for j in sorted(seen) if seen[j]]
    pivots = []
    while rest:
        i = min(min(c) for c in rest)
        active = [c for c in rest if i in c]
        others = [c for c in rest if i not in c]
        c0 = active[0]
        for c in active[1:]:
            a, b = c0[i], c[i]
            if b % a == 0:
                _axpy(R, c, c0, -(b // a))
            else:
                g, s, t, u, v = R.bezout(a, b)
                nc0 = _combine(R, c0, c, s, t)
                nc = _combine(R, c0, c, u, v)
                c0 = nc0
                c.clear()
                c.update(nc)
            if c and i not in c:
                others.append(c)
        if c0[i] < 0:
            c0 = {k: -v for k, v in c0.items()}
        g = c0[i]
        for _, pc in pivots:
            e = pc.get(i)
            if e is not None:
                q = e // g
                if q:
                    _axpy(R, pc, c0, -q)
        pivots.append((i, c0))
        rest = [c for c in others if c]
    return Matrix.from_columns(R, M.nrows, [pc for _, pc in pivots])


def integer_kernel(M):
    """Canonical basis of ker(M) over Z, as matrix columns."""
    res = smith_normal_form(M, transforms=("V",))
    ker = res.kernel_basis()
    if not ker:
        return Matrix(M.ring, M.ncols, 0)
    return hermite_column_form(Matrix.from_columns(M.ring, M.ncols, ker))


def hermite_basis_mod(cols, n, m):
    """Canonical lower-triangular basis of span(cols) + m*Z^n.

    The lattice contains m*Z^n, so every entry can be kept in [0, m) and
    the result always has one pivot per row; pivots divide m (a pivot of
    m marks a row the columns miss entirely).  Entry growth is impossible,
    unlike general integer Hermite elimination.
    """
    def reduced(c, pivot_row, pivot_val):
        out = {k: v % m for k, v in c.items() if k != pivot_row and v % m}
        out[pivot_row] = pivot_val
        return out

    pool = []
    for c in cols:
        r = {i: v % m for i, v in c.items() if v % m}
        if r:
            pool.append(r)
    pivots = []
    for i in range(n):
        active = [c for c in pool if min(c) == i]
        pool = [c for c in pool if min(c) != i]
        c0 = None
        for c in active:
            if c0 is None:
                c0 = c
                continue
            a, b = c0[i], c[i]
            if b % a == 0:
                _axpy(ZZ, c, c0, -(b // a))
            else:
                g, s, t = xgcd(a, b)
                nc = _combine(ZZ, c0, c, -(b // g), a // g)
                c0 = reduced(_combine(ZZ, c0, c, s, t), i, g)
                c = nc
            c = {k: v % m for k, v in c.items() if v % m}
            if c:
                pool.append(c)
        # fold in m*e_i so the pivot divides m
        if c0 is None:
            piv = {i: m}
        else:
            a = c0[i]
            g, s, _ = xgcd(a, m)
            piv = c0 if g == a else reduced({k: s * v for k, v in c0.items()}, i, g)
            rem = {k: ((m // g) * v) % m for k, v in c0.items() if k != i}
            rem = {k: v for k, v in rem.items() if v}
            if rem:
                pool.append(rem)
        # canonical reduction of earlier columns at this pivot row
        g = piv[i]
        for pc in pivots:
            e = pc.get(i)
            if e is not None and e // g:
                _axpy(ZZ, pc, piv, -(e // g))
                for k in list(pc):
                    if k > i:
                        v = pc[k] % m
                        if v:
                            pc[k] = v
                        else:
                            del pc[k]
        pivots.append(piv)
    return Matrix.from_columns(ZZ, n, pivots)


def integer_kernel_mod(M, m):
    """Canonical basis of the lattice {x in Z^n : M x == 0 mod m}.

    M is an integer matrix; the lattice contains m*Z^n, so the basis is
    always n columns in lower-triangular staircase form.
    """
    if not isinstance(M.ring, IntegerRing):
        raise ValueError("integer_kernel_mod expects a matrix over Z")
    res = smith_normal_form(M, transforms=("V",))
    n = M.ncols
    Vc = res.V.columns()
    cols = []
    for idx in range(n):
        col = dict(Vc.get(idx, {}))
        if idx < res.rank:
            scale = m // gcd(res.diag[idx], m)
            if scale != 1:
                col = {i: scale * v for i, v in col.items()}
        cols.append(col)
    return hermite_basis_mod(cols, n, m)


def hermite_solve_vector(B, c):
    """Solve B x = c over Z for B in column-Hermite form; None if unsolvable.

    Forward substitution down the pivot staircase: linear in the number of
    nonzero entries touched, no transforms needed.
    """
    cols = B.columns()
    residual = dict(c)
    x = {}
    for j in range(B.ncols):
        col = cols.get(j)
        if not col:
            continue
        r = min(col)
        v = residual.get(r)
        if v:
            q, rem = divmod(v, col[r])
            if rem:
                return None
            x[j] = q
            _axpy(B.ring, residual, col, -q)
    if residual:
        return None
    return x


def hermite_solve(B, C):
    """Columnwise hermite_solve_vector; returns a matrix X with B X = C."""
    Ccols = C.columns()
    out = []
    for j in range(C.ncols):
        x = hermite_solve_vector(B, Ccols.get(j, {}))
        if x is None:
            return None
        out.append(x)
    return Matrix.from_columns(B.ring, B.ncols, out)


def hermite_solve_vector_mod(B, c, m):
    """x with B x == c modulo m*Z^n, for B from hermite_basis_mod.

    The column span of B contains m*Z^n, so reducing the running residual
    mod m only shifts the answer by a lattice element of span(B); every
    intermediate value stays in [0, m).  Returns None when c is not in
    span(B) + m*Z^n.
    """
    cols = B.columns()
    residual = {i: v % m for i, v in c.items() if v % m}
    x = {}
    for j in range(B.ncols):
        col = cols.get(j)
        if not col:
            continue
        r = min(col)
        v = residual.get(r)
        if v:
            q, rem = divmod(v, col[r])
            if rem:
                return None
            x[j] = q
            _axpy(ZZ, residual, col, -q)
            residual = {i: w % m for i, w in residual.items() if w % m}
    if residual:
        return None
    return x


def hermite_solve_mod(B, C, m):
    """Columnwise hermite_solve_vector_mod; None if any column fails."""
    Ccols = C.columns()
    out = []
    for j in range(C.ncols):
        x = hermite_solve_vector_mod(B, Ccols.get(j, {}), m)
        if x is None:
            return None
        out.append(x)
    return Matrix.from_columns(ZZ, B.ncols, out)
