"""Chain complexes of free modules and their homology, with generators.

Homology is computed as a subquotient of the ambient chain module: a
basis of cycles, the boundary columns expressed in that basis, and the
Smith form of the result.  Over Z this gives ranks, torsion, explicit
generating cycles, and well-defined coordinates of arbitrary cycles in
the generators, which is what the product and duality checks need.

Over a composite Z/m the cycle module need not be free, so homology is
computed from integer lattices instead: the lattice of mod-m cycles and
the lattice spanned by boundaries together with m times the ambient
basis.  Their quotient is a finite abelian group whose invariant factors
all divide m, read off from one more Smith form.
"""

from .matrices import Matrix
from .rings import ZZ, IntegerRing, RationalField, ZmodRing
from .snf import (
    hermite_solve_mod,
    hermite_solve_vector_mod,
    integer_kernel,
    integer_kernel_mod,
    invariant_factors,
    smith_normal_form,
    solve_matrix,
)


class HomologyGroup:
    """A homology module with generators and coordinates.

    orders lists one entry per generator: 0 for infinite order, d >= 2
    for a generator of order d (over Z/m the value m marks a free Z/m
    summand).  reps holds matching ambient representatives.
    """

    def __init__(self, ring, ambient_dim, orders, reps, coord_fn):
        self.ring = ring
        self.ambient_dim = ambient_dim
        self.orders = orders
        self.reps = reps
        self._coord_fn = coord_fn

    @classmethod
    def trivial(cls, ring, ambient_dim=0):
        def coord_fn(v):
            if v:
                raise ValueError("not a cycle")
            return ()
        return cls(ring, ambient_dim, [], [], coord_fn)

    @property
    def free_rank(self):
        if isinstance(self.ring, ZmodRing) and not self.ring.is_field:
            return sum(1 for o in self.orders if o == self.ring.m)
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self):
        if isinstance(self.ring, ZmodRing) and not self.ring.is_field:
            return [o for o in self.orders if o != self.ring.m]
        return [o for o in self.orders if o != 0]

    def iso_type(self):
        return (self.free_rank, tuple(sorted(self.torsion)))

    def is_trivial(self):
        return not self.orders

    def coords(self, v):
        """Coordinates of the cycle v in the generators, normalized.

        Torsion coordinates are reduced mod the generator's order, so two
        cycles are homologous iff their coords are equal.  Raises if v is
        not a cycle.
        """
        return self._coord_fn(v)

    def class_equal(self, u, v):
        return self.coords(u) == self.coords(v)

    def is_zero_class(self, v):
        return all(c == 0 for c in self.coords(v))

    def __str__(self):
        R = self.ring
        if isinstance(R, IntegerRing):
            free_name = "Z"
        elif isinstance(R, RationalField):
            free_name = "Q"
        else:
            free_name = f"(Z/{R.m})"
        parts = []
        r = self.free_rank
        if r == 1:
            parts.append("Z" if free_name == "Z" else free_name)
        elif r > 1:
            parts.append(f"{free_name}^{r}")
        for d in self.torsion:
            parts.append(f"Z/{d}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<HomologyGroup {self} over {self.ring.name}>"


def _group_from_cycles(ring, ambient_dim, Zb, B):
    """Homology of span(Zb columns) / span(B columns) over Z or a field."""
    z = Zb.ncols
    if z == 0:
        return HomologyGroup.trivial(ring, ambient_dim)
    snfZ = smith_normal_form(Zb, transforms=("U", "V"))
    Y = solve_matrix(snfZ, B)
    if Y is None:
        raise ValueError("boundary columns do not lie in the cycle span")
    snfY = smith_normal_form(Y, transforms=("U", "Uinv"))
    orders_raw = list(snfY.diag) + [0] * (z - snfY.rank)
    Uinv_cols = snfY.Uinv.columns()
    keep = []
    orders = []
    reps = []
    for i, d in enumerate(orders_raw):
        if d != 0 and ring.is_unit(ring.el(d)):
            continue
        gen = Zb @ dict(Uinv_cols.get(i, {}))
        keep.append(i)
        orders.append(0 if d == 0 else d)
        reps.append(gen)

    U_Y = snfY.U

    def coord_fn(v):
        w = snfZ.solve(v)
        if w is None:
            raise ValueError("not a cycle")
        t = U_Y @ w
        out = []
        for i, d in zip(keep, orders):
            c = t.get(i, ring.zero)
            if d:
                c = c % d
            out.append(c)
        return tuple(out)

    return HomologyGroup(ring, ambient_dim, orders, reps, coord_fn)


def _homology_integer(bd_out, bd_in):
    Zb = integer_kernel(bd_out)
    return _group_from_cycles(ZZ, bd_out.ncols, Zb, bd_in)


def _homology_field(ring, bd_out, bd_in):
    snf_out = smith_normal_form(bd_out, transforms=("V",))
    Zb = Matrix.from_columns(ring, bd_out.ncols, snf_out.kernel_basis())
    return _group_from_cycles(ring, bd_out.ncols, Zb, bd_in)


def _homology_zmod(ring, bd_out, bd_in):
    """Cycles and the quotient are handled through integer lattices.

    The cycle lattice K = {x : bd_out x == 0 mod m} contains m*Z^n, so its
    staircase basis and every solve against it stay reduced mod m; the
    quotient by boundaries and m*Z^n is presented by a matrix over Z/m.
    """
    m = ring.m
    n = bd_out.ncols
    if n == 0:
        return HomologyGroup.trivial(ring, 0)
    lift_out = bd_out.map_ring(ZZ)
    lift_in = bd_in.map_ring(ZZ)
    K = integer_kernel_mod(lift_out, m)
    Yb = hermite_solve_mod(K, lift_in, m)
    if Yb is None:
        raise ValueError("boundary lattice escapes the cycle lattice")
    # relations: boundary preimages plus W = {y : K y == 0 mod m}, the
    # coordinate lattice of m*Z^n inside the cycles; a congruence solve of
    # a boundary column is off from the true preimage only by W
    W = integer_kernel_mod(K, m)
    Y = Yb.hstack(W)
    snfY = smith_normal_form(Y.map_ring(ring), transforms=("U", "Uinv"))
    Uinv_cols = snfY.Uinv.columns()
    keep = []
    orders = []
    reps = []
    for i in range(n):
        d = snfY.diag[i] if i < snfY.rank else 0
        order = d if d else m
        if order == 1:
            continue
        if m % order:
            raise ValueError(f"invariant factor {order} does not divide {m}")
        gen = K @ {k: int(v) for k, v in Uinv_cols.get(i, {}).items()}
        keep.append(i)
        orders.append(order)
        reps.append({k: v % m for k, v in gen.items() if v % m})

    U_Y = snfY.U

    def coord_fn(v):
        lift = {k: int(x) for k, x in v.items()}
        w = hermite_solve_vector_mod(K, lift, m)
        if w is None:
            raise ValueError("not a cycle mod m")
        t = U_Y @ {k: x % m for k, x in w.items() if x % m}
        return tuple(t.get(i, 0) % d for i, d in zip(keep, orders))

    return HomologyGroup(ring, n, orders, reps, coord_fn)


def homology_of(bd_out, bd_in):
    """Homology ker(bd_out)/im(bd_in) with generators.

    bd_out maps the module in question outward, bd_in maps into it; both
    must share a ring, and bd_out.ncols == bd_in.nrows is the ambient
    dimension.
    """
    ring = bd_out.ring
    if bd_out.ncols != bd_in.nrows:
        raise ValueError("boundary shapes disagree")
    if isinstance(ring, IntegerRing):
        return _homology_integer(bd_out, bd_in)
    if ring.is_field:
        return _homology_field(ring, bd_out, bd_in)
    if isinstance(ring, ZmodRing):
        return _homology_zmod(ring, bd_out, bd_in)
    raise ValueError(f"homology over {ring.name} is not supported")


def homology_type_of(bd_out, bd_in):
    """(free rank, sorted torsion) without generators; cheaper than homology_of."""
    ring = bd_out.ring
    if isinstance(ring, IntegerRing):
        r_out = len(invariant_factors(bd_out))
        inv_in = invariant_factors(bd_in)
        rank = bd_out.ncols - r_out - len(inv_in)
        torsion = sorted(d for d in inv_in if d != 1)
        return (rank, tuple(torsion))
    if ring.is_field:
        r_out = len(invariant_factors(bd_out))
        r_in = len(invariant_factors(bd_in))
        return (bd_out.ncols - r_out - r_in, ())
    g = homology_of(bd_out, bd_in)
    return g.iso_type()


class PresentedComplex:
    """A chain complex of based free modules over one of the exact rings.

    dims maps degree -> rank of the chain module, boundaries maps k to
    the matrix of the differential from degree k to degree k-1.  Degrees
    may be any integers; missing degrees are zero.  Cochain complexes are
    stored with negated degrees so the differential still lowers.
    """

    def __init__(self, ring, dims, boundaries, check=True):
        self.ring = ring
        self.dims = {k: n for k, n in dims.items() if n}
        self.boundaries = {}
        for k, M in boundaries.items():
            if M.nrows != self.dim(k - 1) or M.ncols != self.dim(k):
                raise ValueError(f"boundary at degree {k} has shape "
                                 f"{M.nrows}x{M.ncols}, expected "
                                 f"{self.dim(k - 1)}x{self.dim(k)}")
            if not M.is_zero():
                self.boundaries[k] = M
        self._homology = {}
        self._homology_type = {}
        if check:
            for k in list(self.boundaries):
                if (k - 1) in self.boundaries:
                    if not (self.boundaries[k - 1] @ self.boundaries[k]).is_zero():
                        raise ValueError(f"boundary squared is nonzero at degree {k}")

    def dim(self, k):
        return self.dims.get(k, 0)

    def degrees(self):
        return sorted(self.dims)

    def boundary(self, k):
        M = self.boundaries.get(k)
        if M is None:
            return Matrix(self.ring, self.dim(k - 1), self.dim(k))
        return M

    def homology(self, k):
        if k not in self._homology:
            if self.dim(k) == 0:
                self._homology[k] = HomologyGroup.trivial(self.ring)
            else:
                self._homology[k] = homology_of(self.boundary(k), self.boundary(k + 1))
        return self._homology[k]

    def homology_type(self, k):
        if k in self._homology:
            return self._homology[k].iso_type()
        if k not in self._homology_type:
            if self.dim(k) == 0:
                self._homology_type[k] = (0, ())
            else:
                self._homology_type[k] = homology_type_of(
                    self.boundary(k), self.boundary(k + 1))
        return self._homology_type[k]

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in self.dims.items())

    def map_ring(self, ring):
        return PresentedComplex(
            ring, dict(self.dims),
            {k: M.map_ring(ring) for k, M in self.boundaries.items()},
            check=False)


class ChainMap:
    """A degree-zero map of PresentedComplexes, one matrix per degree."""

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = {k: M for k, M in components.items() if not M.is_zero()}

    def component(self, k):
        M = self.components.get(k)
        if M is None:
            return Matrix(self.source.ring, self.target.dim(k), self.source.dim(k))
        return M

    def verify(self):
        """Check commutation with the boundaries; raises naming the degree."""
        degs = set(self.source.dims) | set(self.components)
        for k in sorted(degs):
            lhs = self.component(k - 1) @ self.source.boundary(k)
            rhs = self.target.boundary(k) @ self.component(k)
            if lhs != rhs:
                raise ValueError(f"not a chain map: fails at degree {k}")

    def induced(self, k):
        return InducedMap(self.source.homology(k), self.target.homology(k),
                          self.component(k))


class InducedMap:
    """The map on homology induced by a matrix sending cycles to cycles."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = matrix
        self.image_coords = [target.coords(matrix @ rep) for rep in source.reps]

    def is_surjective(self):
        tgt = self.target
        n = len(tgt.orders)
        if n == 0:
            return True
        ring = tgt.ring
        if ring.is_field:
            cols = [{i: c for i, c in enumerate(coords) if c != 0}
                    for coords in self.image_coords]
            M = Matrix.from_columns(ring, n, cols)
            return len(invariant_factors(M)) == n
        cols = [{i: int(c) for i, c in enumerate(coords) if c != 0}
                for coords in self.image_coords]
        for i, o in enumerate(tgt.orders):
            if o:
                cols.append({i: o})
        M = Matrix.from_columns(ZZ, n, cols)
        inv = invariant_factors(M)
        return len(inv) == n and all(d == 1 for d in inv)

    def is_isomorphism(self):
        """Isomorphism test for finitely generated modules.

        Same isomorphism type plus surjectivity suffices: a surjective
        endomorphism of a finitely generated module over a commutative
        Noetherian ring is injective.
        """
        return (self.source.iso_type() == self.target.iso_type()
                and self.is_surjective())

    def matrix_on_generators(self):
        """Columns are coordinates of the images of the source generators."""
        return [tuple(c) for c in self.image_coords]
