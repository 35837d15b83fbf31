"""Blown-up cochain complexes over filtered simplicial pseudomanifolds.

A regular simplex with join decomposition D0 * ... * Dn blows up to the
prism cD0 x ... x cD_{n-1} x Dn, cones taken over the singular parts.
Its cochains form the tensor product of the factor cochains, with basis
tuples ((F_0, e_0), ..., (F_{n-1}, e_{n-1}), (F_n, 0)): F_i a face of
the i-th part (empty allowed everywhere but last) and e_i = 1 when the
face reaches the cone apex.  A global cochain is a family over the
regular top simplices whose coefficients agree on every shared tuple,
so the assembled complex has one basis element per realized tuple.

The perverse degree of a tuple measures, stratum by stratum, how far it
sticks out of the apex direction; bounding it and the perverse degree
of the coboundary by a perversity carves out the subcomplex whose
cohomology is computed here.  The simplex-to-blowup comparison maps
(cochain embedding and chain blow-down) live here too; cap products are
in cap.py.
"""

from itertools import combinations, product

from .complexes import ChainMap, InducedMap, PresentedComplex
from .intersection import cochain_complex
from .matrices import Matrix
from .rings import ZZ, ZmodRing
from .snf import (hermite_column_form, hermite_solve, hermite_solve_vector,
                  integer_kernel, smith_normal_form, solve_matrix)


def cone_faces(part):
    """Cochain basis of the cone on a part: (face, reaches_apex) pairs."""
    verts = tuple(part)
    out = [((), 1)]
    for r in range(1, len(verts) + 1):
        for F in combinations(verts, r):
            out.append((F, 0))
            out.append((F, 1))
    return out


def last_faces(part):
    verts = tuple(part)
    return [(F, 0) for r in range(1, len(verts) + 1)
            for F in combinations(verts, r)]


def tuple_degree(b):
    return sum(len(F) - 1 + e for F, e in b)


def tuple_support(b):
    out = []
    for F, _ in b:
        out.extend(F)
    return tuple(sorted(out))


def tuple_norm(b, level):
    """Perverse degree of a basis tuple along the codimension-level stratum.

    None stands for minus infinity: a tuple reaching the apex of that
    cone factor puts no constraint on the perversity there.
    """
    n = len(b) - 1
    F, e = b[n - level]
    if e:
        return None
    return sum(len(G) - 1 + d for G, d in b[n - level + 1:])


def tuple_allowable(b, p):
    n = len(b) - 1
    for level in range(1, n + 1):
        v = tuple_norm(b, level)
        if v is not None and v > p(level):
            return False
    return True


def tuple_cofacets(b, parts):
    """Cofacet tuples inside the blowup of parts, with incidence signs.

    Koszul sign per factor from the degrees of the later factors, then
    the sorted position of the added vertex; flipping e appends the apex
    after the face vertices.
    """
    n = len(b) - 1
    degs = [len(F) - 1 + e for F, e in b]
    suffix = sum(degs)
    for i, (F, e) in enumerate(b):
        suffix -= degs[i]
        koszul = -1 if suffix % 2 else 1
        for a in parts[i]:
            if a in F:
                continue
            F2 = tuple(sorted(F + (a,)))
            yield b[:i] + ((F2, e),) + b[i + 1:], koszul * (-1) ** F2.index(a)
        if i < n and e == 0:
            yield b[:i] + ((F, 1),) + b[i + 1:], koszul * (-1) ** len(F)


def cochain_embedding_terms(face, parts):
    """Image tuples of the dual cochain of a face, inside one blowup.

    The parts of the face are coned off below its deepest stratum s and
    kept plain at s; every factor past s runs over all points of its
    cone (or of the last part).  All tails carry one common sign, fixed
    by the vertex counts of the front parts.
    """
    n = len(parts) - 1
    fparts = []
    for i in range(n + 1):
        P = set(parts[i])
        fparts.append(tuple(a for a in face if a in P))
    s = max(i for i in range(n + 1) if fparts[i])
    sizes = [len(fparts[i]) if i < s else len(fparts[i]) - 1
             for i in range(s + 1)]
    nu = sum(sizes[i] * sizes[j]
             for i in range(s + 1) for j in range(i + 1, s + 1))
    head = tuple((fparts[i], 1) for i in range(s)) + ((fparts[s], 0),)
    choices = []
    for i in range(s + 1, n + 1):
        opts = [((a,), 0) for a in parts[i]]
        if i < n:
            opts.append(((), 1))
        choices.append(tuple(opts))
    tails = product(*choices) if choices else ((),)
    return (-1 if nu % 2 else 1), [head + tail for tail in tails]


def tuple_flatten(b):
    """Blow-down of a chain tuple: the joined face, or None if it collapses.

    The image keeps the cone factors up to the first apex-free one;
    beyond it every factor must be a single point for the blow-down to
    preserve degree.
    """
    ell = next(i for i, (F, e) in enumerate(b) if e == 0)
    for F, e in b[ell + 1:]:
        if len(F) - 1 + e != 0:
            return None
    out = []
    for i in range(ell + 1):
        out.extend(b[i][0])
    return tuple(sorted(out))


def blown_cap(b, parts):
    """Cap of a basis cochain against the blown fundamental chain.

    Factorwise on the prism: front face to back face on each cone (the
    apex appended), apex point when the cochain already fills the cone,
    zero otherwise; the classical front/back rule on the last factor.
    """
    n = len(parts) - 1
    out = []
    for i in range(n + 1):
        F, e = b[i]
        P = parts[i]
        if i == n:
            r = len(F) - 1
            if F != P[:r + 1]:
                return None
            out.append((P[r:], 0))
        elif e:
            if F != P:
                return None
            out.append(((), 1))
        else:
            r = len(F) - 1
            if F != P[:r + 1]:
                return None
            out.append((P[r:], 1))
    degs = [len(F) - 1 + e for F, e in b]
    nu = 0
    suffix = 0
    for j in range(n, 0, -1):
        suffix += degs[j]
        nu += len(parts[j - 1]) * suffix
    return (-1 if nu % 2 else 1), tuple(out)


class LocalBlowup:
    """The blown-up cochain complex of a single regular simplex."""

    def __init__(self, parts):
        self.parts = tuple(tuple(P) for P in parts)
        self.n = len(self.parts) - 1
        if not self.parts[self.n]:
            raise ValueError("blowup needs a regular simplex")
        factors = [cone_faces(P) for P in self.parts[:-1]]
        factors.append(last_faces(self.parts[-1]))
        grouped = {}
        for b in product(*factors):
            grouped.setdefault(tuple_degree(b), []).append(b)
        self.tuples = {k: sorted(v) for k, v in grouped.items()}
        self.index = {}
        for k, tl in self.tuples.items():
            for i, b in enumerate(tl):
                self.index[b] = (k, i)
        self.top = max(self.tuples)
        self._D = {}

    def dim(self, k):
        return len(self.tuples.get(k, ()))

    def differential(self, k):
        M = self._D.get(k)
        if M is None:
            up = {b: i for i, b in enumerate(self.tuples.get(k + 1, ()))}
            rows = {}
            for j, b in enumerate(self.tuples.get(k, ())):
                for b2, sign in tuple_cofacets(b, self.parts):
                    rows.setdefault(up[b2], {})[j] = sign
            M = self._D[k] = Matrix(ZZ, self.dim(k + 1), self.dim(k), rows)
        return M

    def allowable_indices(self, k, p):
        return [i for i, b in enumerate(self.tuples.get(k, ()))
                if tuple_allowable(b, p)]

    def perverse_kernel(self, k, p):
        """Hermite basis over Z of the degree-k perversity-p subcomplex,
        in full tuple coordinates: allowable cochains with allowable
        coboundary."""
        nk = self.dim(k)
        cols = self.allowable_indices(k, p)
        if not cols:
            return Matrix(ZZ, nk, 0)
        good_up = set(self.allowable_indices(k + 1, p))
        bad = [i for i in range(self.dim(k + 1)) if i not in good_up]
        if not bad:
            ker = Matrix.identity(ZZ, len(cols))
        else:
            ker = integer_kernel(self.differential(k).submatrix(bad, cols))
        rows = {}
        for jj, j in enumerate(cols):
            r = ker.rows.get(jj)
            if r:
                rows[j] = dict(r)
        return hermite_column_form(Matrix(ZZ, nk, ker.ncols, rows))

    def cochain_embedding_matrix(self, k):
        """Images of the dual face cochains, over Z; returns (matrix, faces)
        with faces the lex-sorted k-faces of the simplex."""
        verts = tuple(sorted(a for P in self.parts for a in P))
        faces = list(combinations(verts, k + 1))
        rows = {}
        for j, F in enumerate(faces):
            sign, terms = cochain_embedding_terms(F, self.parts)
            for t in terms:
                kk, i = self.index[t]
                rows.setdefault(i, {})[j] = sign
        return Matrix(ZZ, self.dim(k), len(faces), rows), faces


class BlowupComplex:
    """Global blown-up cochains: one basis element per realized tuple."""

    def __init__(self, space):
        self.space = space
        n = self.n = space.n
        self.tops = [s for s in space.simplices(n) if space.is_regular(s)]
        self.parts_of = {s: space.join_decomposition(s).parts for s in self.tops}
        seen = {}
        for s in self.tops:
            parts = self.parts_of[s]
            factors = [cone_faces(P) for P in parts[:-1]]
            factors.append(last_faces(parts[-1]))
            for b in product(*factors):
                seen.setdefault(tuple_degree(b), set()).add(b)
        self.tuples = {k: sorted(v) for k, v in seen.items()}
        self.index = {}
        for k, tl in self.tuples.items():
            for i, b in enumerate(tl):
                self.index[b] = (k, i)
        self.top = max(self.tuples) if self.tuples else 0
        entries = {}
        for s in self.tops:
            parts = self.parts_of[s]
            factors = [cone_faces(P) for P in parts[:-1]]
            factors.append(last_faces(parts[-1]))
            for b in product(*factors):
                k, j = self.index[b]
                store = entries.setdefault(k, {})
                for b2, sign in tuple_cofacets(b, parts):
                    i = self.index[b2][1]
                    prev = store.setdefault((i, j), sign)
                    if prev != sign:
                        raise AssertionError("inconsistent blown-up coboundary")
        self._D = {}
        for k, store in entries.items():
            rows = {}
            for (i, j), sign in store.items():
                rows.setdefault(i, {})[j] = sign
            self._D[k] = Matrix(ZZ, self.dim(k + 1), self.dim(k), rows)
        self._allowable = {}
        self._embedding = None

    def dim(self, k):
        return len(self.tuples.get(k, ()))

    def differential(self, k):
        M = self._D.get(k)
        if M is None:
            return Matrix(ZZ, self.dim(k + 1), self.dim(k))
        return M

    def allowable_indices(self, k, p):
        key = (k, p.values)
        idx = self._allowable.get(key)
        if idx is None:
            idx = [i for i, b in enumerate(self.tuples.get(k, ()))
                   if tuple_allowable(b, p)]
            self._allowable[key] = idx
        return idx

    def embedding_matrix(self, k):
        """Global cochain embedding in degree k, over Z: columns indexed by
        the k-simplices, rows by the degree-k tuples."""
        if self._embedding is None:
            stores = {}
            for s in self.tops:
                parts = self.parts_of[s]
                verts = tuple(sorted(a for P in parts for a in P))
                for r in range(1, len(verts) + 1):
                    for F in combinations(verts, r):
                        sign, terms = cochain_embedding_terms(F, parts)
                        col = self.space.index_of(F)
                        store = stores.setdefault(r - 1, {})
                        for t in terms:
                            i = self.index[t][1]
                            prev = store.setdefault((i, col), sign)
                            if prev != sign:
                                raise AssertionError(
                                    "inconsistent embedding coefficients")
            self._embedding = {}
            for kk, store in stores.items():
                rows = {}
                for (i, j), sign in store.items():
                    rows.setdefault(i, {})[j] = sign
                self._embedding[kk] = Matrix(
                    ZZ, self.dim(kk), len(self.space.simplices(kk)), rows)
        M = self._embedding.get(k)
        if M is None:
            return Matrix(ZZ, self.dim(k), len(self.space.simplices(k)))
        return M


class TWComplex:
    """Perversity-bounded subcomplex of the blown-up cochains, based.

    Stored like any chain complex but at negated degrees, so the
    coboundary still lowers; cohomology(k) is homology(-k)."""

    def __init__(self, blowup, p, ring):
        if isinstance(ring, ZmodRing) and not ring.is_field:
            raise ValueError("blown-up complexes need integer or field "
                             "coefficients")
        if p.n != blowup.space.n:
            raise ValueError("perversity depth does not match the filtration")
        self.blowup = blowup
        self.space = blowup.space
        self.perversity = p
        self.ring = ring
        self.top = blowup.top
        self.bases = {}
        self._snf_cache = {}
        for k in range(self.top + 1):
            nk = blowup.dim(k)
            cols = blowup.allowable_indices(k, p)
            if not cols:
                self.bases[k] = Matrix(ring, nk, 0)
                continue
            good_up = set(blowup.allowable_indices(k + 1, p))
            bad = [i for i in range(blowup.dim(k + 1)) if i not in good_up]
            if not bad:
                ker = Matrix.identity(ring, len(cols))
            elif ring is ZZ:
                ker = integer_kernel(blowup.differential(k).submatrix(bad, cols))
            else:
                sub = blowup.differential(k).submatrix(bad, cols).map_ring(ring)
                kb = smith_normal_form(sub, transforms=("V",)).kernel_basis()
                ker = Matrix.from_columns(ring, len(cols), kb)
            rows = {}
            for jj, j in enumerate(cols):
                r = ker.rows.get(jj)
                if r:
                    rows[j] = dict(r)
            B = Matrix(ring, nk, ker.ncols, rows)
            if ring is ZZ:
                B = hermite_column_form(B)
            self.bases[k] = B
        dims = {-k: B.ncols for k, B in self.bases.items()}
        boundaries = {}
        for k in range(self.top):
            if self.bases[k].ncols and self.bases[k + 1].ncols:
                image = blowup.differential(k).map_ring(ring) @ self.bases[k]
                Dk = self._solve_basis(k + 1, image)
                if Dk is None:
                    raise AssertionError("coboundary left the perverse subcomplex")
                if not Dk.is_zero():
                    boundaries[-k] = Dk
        self.complex = PresentedComplex(ring, dims, boundaries, check=True)

    def _solve_basis(self, k, image):
        if self.ring is ZZ:
            return hermite_solve(self.bases[k], image)
        return solve_matrix(self._basis_snf(k), image)

    def _basis_snf(self, k):
        res = self._snf_cache.get(k)
        if res is None:
            res = smith_normal_form(self.bases[k], transforms=("U", "V"))
            self._snf_cache[k] = res
        return res

    def rank(self, k):
        B = self.bases.get(k)
        return B.ncols if B is not None else 0

    def cohomology(self, k):
        return self.complex.homology(-k)

    def full_from_internal(self, k, vec):
        return self.bases[k] @ vec

    def internal_from_full(self, k, cochain):
        """Coordinates of a full tuple-space cochain in the stored basis;
        None if it does not lie in the subcomplex."""
        if self.ring is ZZ:
            return hermite_solve_vector(self.bases[k], cochain)
        return self._basis_snf(k).solve(dict(cochain))

    def generator_cochains(self, k):
        group = self.cohomology(k)
        return [self.full_from_internal(k, rep) for rep in group.reps]

    def class_coords(self, k, cochain):
        vec = self.internal_from_full(k, cochain)
        if vec is None:
            raise ValueError("cochain is not in the perverse subcomplex")
        return self.cohomology(k).coords(vec)


def blowup_complex(space):
    B = space.cache.get(("blowup",))
    if B is None:
        B = space.cache[("blowup",)] = BlowupComplex(space)
    return B


def tw_complex(space, p, ring):
    key = ("tw", p.values, ring.name)
    T = space.cache.get(key)
    if T is None:
        T = space.cache[key] = TWComplex(blowup_complex(space), p, ring)
    return T


def tw_cohomology(space, p, ring, k):
    return tw_complex(space, p, ring).cohomology(k)


def tw_comparison(space, p, q, ring, k):
    """Map induced on cohomology by the inclusion of the perversity-p
    subcomplex into the perversity-q one, for p <= q."""
    if not p <= q:
        raise ValueError("comparison map needs a pointwise smaller source")
    src = tw_complex(space, p, ring)
    dst = tw_complex(space, q, ring)
    cols = []
    for j in range(src.rank(k)):
        full = src.full_from_internal(k, {j: ring.one})
        col = dst.internal_from_full(k, full)
        if col is None:
            raise AssertionError("perverse subcomplexes are not nested")
        cols.append(col)
    T = Matrix.from_columns(ring, dst.rank(k), cols)
    return InducedMap(src.cohomology(k), dst.cohomology(k), T)


def cochain_embedding(space, p, ring):
    """Chain map realizing ordinary cochains inside the perversity-p
    blown-up subcomplex (the embedding lands in the zero-perversity part,
    which sits inside every GM perversity)."""
    tw = tw_complex(space, p, ring)
    B = blowup_complex(space)
    components = {}
    for k in range(B.top + 1):
        if not len(space.simplices(k)) or not tw.rank(k):
            continue
        Mk = B.embedding_matrix(k).map_ring(ring)
        sol = tw._solve_basis(k, Mk)
        if sol is None:
            raise AssertionError("embedding leaves the perverse subcomplex")
        components[-k] = sol
    return ChainMap(cochain_complex(space, ring), tw.complex, components)


def cochain_embedding_induced(space, p, ring, k):
    """The embedding H^k(X) -> H^k of the perversity-p blown-up complex."""
    return cochain_embedding(space, p, ring).induced(-k)
