"""Perverse chain complexes and intersection homology.

A k-simplex is allowable for a perversity p when, for every level
l in 1..n, its part inside X_{n-l} has dimension at most k - l + p(l);
an empty part passes every bound.  The perverse complex in degree k
consists of the chains supported on allowable simplices whose
boundaries are again supported on allowable simplices.

Over the integers and over fields these are free modules and the
complex is presented by explicit bases.  Over Z/m with m composite the
submodule need not be free; each homology group is then computed from
the integer lattice of chains whose offending boundary coefficients
vanish mod m.
"""

from .complexes import HomologyGroup, InducedMap, PresentedComplex, homology_of
from .matrices import Matrix
from .rings import ZZ
from .snf import (hermite_column_form, hermite_solve, hermite_solve_vector,
                  integer_kernel, integer_kernel_mod, smith_normal_form,
                  solve_matrix)


def is_allowable(K, simplex, p):
    """Allowability of one simplex at every level at once."""
    k = len(simplex) - 1
    for level in range(1, K.n + 1):
        d = K.filtration_dim(simplex, K.n - level)
        if d is None:
            continue
        if d > k - level + p(level):
            return False
    return True


def allowable_indices(K, k, p):
    """Indices of allowable k-simplices, cached per (k, perversity)."""
    key = ("allowable", k, p.values)
    idx = K.cache.get(key)
    if idx is None:
        idx = [j for j, s in enumerate(K.simplices(k)) if is_allowable(K, s, p)]
        K.cache[key] = idx
    return idx


def _bad_rows(K, k, p):
    return sorted(set(range(len(K.simplices(k))))
                  - set(allowable_indices(K, k, p)))


class PerverseComplex:
    """The perverse chain complex of a filtered complex over a ring.

    Chains are addressed in two coordinate systems: 'full' vectors over
    all k-simplices of the space, and internal presentation coordinates.
    All public methods speak full coordinates.
    """

    def __init__(self, K, p, ring):
        if p.n != K.n:
            raise ValueError("perversity length does not match the filtration")
        self.space = K
        self.perversity = p
        self.ring = ring
        self.top = K.top_dim()
        self._lattice = ring.name.startswith("Z/") and not ring.is_field
        if self._lattice:
            self._init_lattice()
        else:
            self._init_based()

    # --- free presentation: integers and fields ---

    def _init_based(self):
        K, p, ring = self.space, self.perversity, self.ring
        self._snf_cache = {}
        self.bases = {}
        for k in range(self.top + 1):
            cols = allowable_indices(K, k, p)
            nk = len(K.simplices(k))
            if not cols:
                self.bases[k] = Matrix.zeros(ring, nk, 0)
                continue
            bad = _bad_rows(K, k - 1, p) if k else []
            if not bad:
                ker = Matrix.identity(ring, len(cols))
            elif ring is ZZ:
                sub = K.boundary_matrix(k, ZZ).submatrix(bad, cols)
                ker = integer_kernel(sub)
            else:
                sub = K.boundary_matrix(k, ring).submatrix(bad, cols)
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
        dims = {k: B.ncols for k, B in self.bases.items()}
        boundaries = {}
        for k in range(1, self.top + 1):
            if dims.get(k) and dims.get(k - 1):
                image = self.space.boundary_matrix(k, self.ring) @ self.bases[k]
                D = self._solve_basis(k - 1, image)
                if D is None:
                    raise AssertionError("boundary left the perverse complex")
                boundaries[k] = D
        self.complex = PresentedComplex(self.ring, dims, boundaries, check=True)

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

    # --- lattice presentation: Z/m with m composite ---

    def _init_lattice(self):
        K, p = self.space, self.perversity
        m = self.ring.m
        self.allowable = {k: allowable_indices(K, k, p)
                          for k in range(self.top + 1)}
        self._lattice_bases = {}
        for k in range(self.top + 1):
            cols = self.allowable[k]
            if not cols:
                self._lattice_bases[k] = Matrix.zeros(ZZ, 0, 0)
                continue
            bad = _bad_rows(K, k - 1, p) if k else []
            if not bad:
                self._lattice_bases[k] = Matrix.identity(ZZ, len(cols))
            else:
                sub = K.boundary_matrix(k, ZZ).submatrix(bad, cols)
                self._lattice_bases[k] = integer_kernel_mod(sub, m)
        self._groups = {}

    def _lattice_homology(self, k):
        H = self._groups.get(k)
        if H is not None:
            return H
        K = self.space
        cols = self.allowable.get(k, [])
        if not cols:
            H = HomologyGroup.trivial(self.ring)
            self._groups[k] = H
            return H
        # cycles: kernel of the unrestricted boundary on allowable chains
        all_rows = list(range(len(K.simplices(k - 1)))) if k else []
        out = K.boundary_matrix(k, self.ring).submatrix(all_rows, cols)
        # boundaries: images of the degree k+1 lattice, in allowable coords
        up = self.allowable.get(k + 1, [])
        if up:
            Kup = self._lattice_bases[k + 1]
            cols_up = list(range(Kup.ncols))
            full = K.boundary_matrix(k + 1, ZZ).submatrix(
                list(range(len(K.simplices(k)))), up) @ Kup
            inn = full.submatrix(cols, cols_up).map_ring(self.ring)
        else:
            inn = Matrix.zeros(self.ring, len(cols), 0)
        H = homology_of(out, inn)
        self._groups[k] = H
        return H

    # --- common interface ---

    def rank(self, k):
        """Number of presentation generators in degree k."""
        if self._lattice:
            b = self._lattice_bases.get(k)
            return b.ncols if b is not None else 0
        return self.complex.dim(k)

    def full_from_internal(self, k, vec):
        """Full chain vector from internal presentation coordinates."""
        if self._lattice:
            cols = self.allowable[k]
            return {cols[i]: v for i, v in vec.items()}
        return self.bases[k] @ vec

    def internal_from_full(self, k, chain):
        """Internal coordinates of a full chain vector; None if outside."""
        if self._lattice:
            pos = {j: i for i, j in enumerate(self.allowable.get(k, []))}
            out = {}
            for j, v in chain.items():
                if j not in pos:
                    return None
                out[pos[j]] = v
            return out
        if self.ring is ZZ:
            return hermite_solve_vector(self.bases[k], chain)
        col = solve_matrix(self._basis_snf(k),
                           Matrix(self.ring, self.bases[k].nrows, 1,
                                  {i: {0: v} for i, v in chain.items()}))
        if col is None:
            return None
        return {i: r[0] for i, r in col.rows.items() if r.get(0)}

    def homology(self, k):
        if self._lattice:
            return self._lattice_homology(k)
        return self.complex.homology(k)

    def generator_chains(self, k):
        """Generators of degree-k homology as full chain vectors."""
        H = self.homology(k)
        return [self.full_from_internal(k, rep) for rep in H.reps]

    def class_coords(self, k, chain):
        """Homology coordinates of a full-coordinate cycle."""
        vec = self.internal_from_full(k, chain)
        if vec is None:
            raise ValueError("chain is not in the perverse complex")
        return self.homology(k).coords(vec)

    def class_equal(self, k, c1, c2):
        return self.class_coords(k, c1) == self.class_coords(k, c2)


def perverse_complex(K, p, ring):
    key = ("perverse_complex", p.values, ring.name)
    C = K.cache.get(key)
    if C is None:
        C = PerverseComplex(K, p, ring)
        K.cache[key] = C
    return C


def intersection_homology(K, p, ring, k):
    return perverse_complex(K, p, ring).homology(k)


def comparison_map(K, p, q, ring, k):
    """Degree-k homology map induced by the inclusion for p <= q."""
    if not p <= q:
        raise ValueError("comparison map needs a pointwise smaller source")
    src = perverse_complex(K, p, ring)
    dst = perverse_complex(K, q, ring)
    cols = []
    for i in range(src.rank(k)):
        chain = src.full_from_internal(k, {i: ring.el(1)})
        vec = dst.internal_from_full(k, chain)
        if vec is None:
            raise AssertionError("perverse complexes are not nested")
        cols.append(vec)
    T = Matrix.from_columns(ring, dst.rank(k), cols)
    return InducedMap(src.homology(k), dst.homology(k), T)


def cochain_complex(K, ring):
    """Simplicial cochains of the whole space, stored at negated degrees."""
    key = ("cochain_complex", ring.name)
    C = K.cache.get(key)
    if C is None:
        top = K.top_dim()
        dims = {-k: len(K.simplices(k)) for k in range(top + 1)}
        boundaries = {}
        for k in range(1, top + 1):
            M = K.boundary_matrix(k, ring)
            if M.nrows and M.ncols:
                boundaries[-(k - 1)] = M.transpose()
        C = PresentedComplex(ring, dims, boundaries, check=False)
        K.cache[key] = C
    return C


def cohomology(K, ring, k):
    """Ordinary simplicial cohomology of the underlying space."""
    return cochain_complex(K, ring).homology(-k)


def gm_cochain_complex(K, p, ring):
    """Hom-dual of the perverse complex, stored at negated degrees.

    Available over the integers and over fields, where the perverse
    complex is a complex of finitely generated free modules.
    """
    if ring.name.startswith("Z/") and not ring.is_field:
        raise ValueError("dual complexes need integer or field coefficients")
    key = ("gm_cochain", p.values, ring.name)
    C = K.cache.get(key)
    if C is None:
        P = perverse_complex(K, p, ring)
        dims = {-k: P.complex.dim(k) for k in range(K.top_dim() + 1)}
        boundaries = {}
        for k in range(1, K.top_dim() + 1):
            if P.complex.dim(k) and P.complex.dim(k - 1):
                boundaries[-(k - 1)] = P.complex.boundary(k).transpose()
        C = PresentedComplex(ring, dims, boundaries, check=True)
        K.cache[key] = C
    return C


def gm_cohomology(K, p, ring, k):
    """Degree-k cohomology of the Hom-dual of the perverse complex."""
    return gm_cochain_complex(K, p, ring).homology(-k)
