"""Finite filtered simplicial complexes modeling pseudomanifolds.

A complex carries a formal dimension n and a stratum index s(v) in
{0..n} on each vertex; the subspace X_i is the full subcomplex on the
vertices with s(v) <= i.  The vertex order must refine the stratum
order, so every simplex, kept as a sorted tuple of vertex indices,
splits into contiguous stratum runs: its join decomposition.

The module also hosts the standard constructions (cone, suspension,
barycentric subdivision, quotient by a free involution, cross-polytope
boundaries), validation of the pseudomanifold conditions, orientation
propagation for the fundamental class, the builtin space registry, and
the text input format used by the CLI.
"""

from itertools import combinations

from .complexes import PresentedComplex
from .matrices import Matrix
from .rings import ZZ


class NonOrientableError(ValueError):
    """Raised when orientation propagation hits an inconsistent cycle."""

    def __init__(self, message, cycle):
        super().__init__(message)
        self.cycle = cycle


class JoinDecomposition:
    """A simplex split by strata: parts[i] holds the vertices in stratum i."""

    __slots__ = ("parts", "regular")

    def __init__(self, parts):
        self.parts = parts
        self.regular = bool(parts[-1])

    def dims(self):
        """dim of each join factor; empty factors give -1."""
        return tuple(len(p) - 1 for p in self.parts)

    def __repr__(self):
        return f"JoinDecomposition({self.parts!r})"


class ValidationReport:
    def __init__(self):
        self.checks = []

    def add(self, name, ok, witness=None):
        self.checks.append((name, ok, witness))

    def failures(self):
        return [(name, witness) for name, ok, witness in self.checks if not ok]

    @property
    def valid(self):
        return all(ok for name, ok, _ in self.checks if name != "normality")

    @property
    def normal(self):
        return all(ok for name, ok, _ in self.checks if name == "normality")

    def __str__(self):
        lines = []
        for name, ok, witness in self.checks:
            if ok:
                lines.append(f"ok   {name}")
            else:
                lines.append(f"FAIL {name}: {witness}")
        return "\n".join(lines)


class FilteredComplex:
    """Immutable filtered simplicial complex on ordered, stratified vertices."""

    def __init__(self, n, vertex_names, strata, facets, name=None):
        if len(vertex_names) != len(strata):
            raise ValueError("vertex names and strata differ in length")
        if len(set(vertex_names)) != len(vertex_names):
            raise ValueError("duplicate vertex names")
        for s in strata:
            if not 0 <= s <= n:
                raise ValueError(f"stratum {s} outside 0..{n}")
        for a, b in zip(strata, strata[1:]):
            if a > b:
                raise ValueError("vertex order does not refine the stratum order")
        self.n = n
        self.vertex_names = list(vertex_names)
        self.strata = list(strata)
        self.name = name

        seen = set()
        self.facets = []
        for f in facets:
            t = tuple(sorted(f))
            if len(set(t)) != len(t):
                raise ValueError(f"facet with repeated vertex: {f}")
            for v in t:
                if not 0 <= v < len(vertex_names):
                    raise ValueError(f"facet uses unknown vertex index {v}")
            if t not in seen:
                seen.add(t)
                self.facets.append(t)

        by_dim = {}
        for f in self.facets:
            for r in range(1, len(f) + 1):
                for face in combinations(f, r):
                    by_dim.setdefault(r - 1, set()).add(face)
        self._simplices = {k: sorted(s) for k, s in by_dim.items()}
        self._index = {k: {s: i for i, s in enumerate(lst)}
                       for k, lst in self._simplices.items()}
        self.cache = {}

    # --- basic structure ---

    @property
    def vertex_count(self):
        return len(self.vertex_names)

    def top_dim(self):
        return max(self._simplices) if self._simplices else -1

    def simplices(self, k):
        return self._simplices.get(k, [])

    def index_of(self, simplex):
        return self._index[len(simplex) - 1][tuple(simplex)]

    def has_simplex(self, simplex):
        t = tuple(simplex)
        return t in self._index.get(len(t) - 1, {})

    def f_vector(self):
        return tuple(len(self.simplices(k)) for k in range(self.top_dim() + 1))

    def euler_characteristic(self):
        return sum((-1) ** k * len(s) for k, s in self._simplices.items())

    def simplex_names(self, simplex):
        return tuple(self.vertex_names[v] for v in simplex)

    # --- filtration ---

    def stratum(self, v):
        return self.strata[v]

    def join_decomposition(self, simplex):
        parts = [[] for _ in range(self.n + 1)]
        for v in simplex:
            parts[self.strata[v]].append(v)
        return JoinDecomposition(tuple(tuple(p) for p in parts))

    def is_regular(self, simplex):
        return self.strata[simplex[-1]] == self.n

    def filtration_dim(self, simplex, level):
        """dim of the part of the simplex inside X_level; None when empty."""
        count = 0
        for v in simplex:
            if self.strata[v] <= level:
                count += 1
            else:
                break
        return count - 1 if count else None

    # --- chains ---

    def boundary_matrix(self, k, ring):
        key = ("boundary", k, ring.name)
        M = self.cache.get(key)
        if M is None:
            rows = {}
            lower = self._index.get(k - 1, {})
            minus_one = ring.el(-1)
            one = ring.el(1)
            for j, s in enumerate(self.simplices(k)):
                sign = one
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    if face:
                        rows.setdefault(lower[face], {})[j] = sign
                    sign = ring.mul(sign, minus_one)
            M = Matrix(ring, len(self.simplices(k - 1)), len(self.simplices(k)), rows)
            self.cache[key] = M
        return M

    def chain_complex(self, ring):
        key = ("chain_complex", ring.name)
        C = self.cache.get(key)
        if C is None:
            top = self.top_dim()
            dims = {k: len(self.simplices(k)) for k in range(top + 1)}
            bnds = {k: self.boundary_matrix(k, ring) for k in range(1, top + 1)}
            C = PresentedComplex(ring, dims, bnds, check=False)
            self.cache[key] = C
        return C

    def homology(self, k, ring):
        return self.chain_complex(ring).homology(k)

    # --- validation ---

    def validate(self):
        report = ValidationReport()
        report.add("stratum_order", True)

        full_ok, full_witness = True, None
        for i in range(self.n + 1):
            allowed = {v for v in range(self.vertex_count) if self.strata[v] <= i}
            for k, lst in self._simplices.items():
                for s in lst:
                    if all(v in allowed for v in s) and not self.has_simplex(s):
                        full_ok, full_witness = False, self.simplex_names(s)
                        break
        report.add("fullness", full_ok, full_witness)

        bad = [v for v in range(self.vertex_count) if self.strata[v] == self.n - 1]
        report.add("no_codim_one", not bad,
                   self.vertex_names[bad[0]] if bad else None)

        covered = set()
        for f in self.simplices(self.n):
            for r in range(1, len(f) + 1):
                covered.update(combinations(f, r))
        uncovered = None
        for k in sorted(self._simplices, reverse=True):
            for s in self._simplices[k]:
                if s not in covered:
                    uncovered = self.simplex_names(s)
                    break
            if uncovered:
                break
        report.add("purity", uncovered is None, uncovered)

        ok, witness = True, None
        walls = self._wall_cofacets()
        for wall in self.simplices(self.n - 1):
            if all(self.strata[v] <= self.n - 2 for v in wall):
                continue
            found = len(walls.get(wall, []))
            if found != 2:
                ok = False
                witness = (self.simplex_names(wall), f"{found} cofacets")
                break
        report.add("two_cofaces", ok, witness)

        ok, witness = True, None
        for k in sorted(self._simplices):
            for s in self._simplices[k]:
                if any(self.strata[v] > self.n - 2 for v in s):
                    continue
                if not self._link_connected(s):
                    ok, witness = False, self.simplex_names(s)
                    break
            if not ok:
                break
        report.add("normality", ok, witness)
        return report

    def _wall_cofacets(self):
        key = ("wall_cofacets",)
        walls = self.cache.get(key)
        if walls is None:
            walls = {}
            for s in self.simplices(self.n):
                for i in range(len(s)):
                    walls.setdefault(s[:i] + s[i + 1:], []).append(s)
            self.cache[key] = walls
        return walls

    def _link_connected(self, simplex):
        sset = set(simplex)
        link_vertices = set()
        for f in self.facets:
            fs = set(f)
            if sset <= fs:
                link_vertices.update(fs - sset)
        if len(link_vertices) <= 1:
            return True
        parent = {v: v for v in link_vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.simplices(1):
            if sset & set(e):
                continue
            if e[0] in link_vertices and e[1] in link_vertices:
                if self.has_simplex(tuple(sorted(set(e) | sset))):
                    parent[find(e[0])] = find(e[1])
        roots = {find(v) for v in link_vertices}
        return len(roots) == 1

    # --- orientation ---

    def fundamental_class(self, ring):
        """Signed sum of the top simplices, as a sparse vector over ring.

        Orientation is propagated across shared walls; the sign of a top
        simplex is understood relative to its sorted vertex list.  Raises
        NonOrientableError with a witness cycle if propagation conflicts
        (impossible in characteristic 2).
        """
        key = ("fundamental", ring.name)
        cached = self.cache.get(key)
        if cached is not None:
            return dict(cached)
        tops = self.simplices(self.n)
        if not tops:
            raise ValueError("no top-dimensional simplices")
        walls = self._wall_cofacets()
        for wall, cofaces in walls.items():
            if len(cofaces) != 2:
                raise ValueError(
                    f"wall {self.simplex_names(wall)} has {len(cofaces)} cofacets; "
                    "not a closed pseudomanifold")

        two_is_zero = ring.is_zero(ring.el(2))
        orient = {}
        parent = {}
        idx = {s: i for i, s in enumerate(tops)}
        for seed in tops:
            if seed in orient:
                continue
            orient[seed] = 1
            parent[seed] = None
            queue = [seed]
            qi = 0
            while qi < len(queue):
                cur = queue[qi]
                qi += 1
                for i in range(len(cur)):
                    wall = cur[:i] + cur[i + 1:]
                    for nb in walls[wall]:
                        if nb == cur:
                            continue
                        j = nb.index(*(set(nb) - set(wall)))
                        want = -orient[cur] * (-1) ** i * (-1) ** j
                        if nb not in orient:
                            orient[nb] = want
                            parent[nb] = cur
                            queue.append(nb)
                        elif orient[nb] != want and not two_is_zero:
                            cycle = self._witness_cycle(parent, cur, nb)
                            raise NonOrientableError(
                                "not orientable over " + ring.name, cycle)
        chain = {idx[s]: ring.el(v) for s, v in orient.items()}
        bd = self.boundary_matrix(self.n, ring)
        if bd @ chain:
            raise AssertionError("fundamental chain is not a cycle")
        self.cache[key] = dict(chain)
        return chain

    def _witness_cycle(self, parent, a, b):
        path_a = [a]
        while parent[path_a[-1]] is not None:
            path_a.append(parent[path_a[-1]])
        path_b = [b]
        while parent[path_b[-1]] is not None:
            path_b.append(parent[path_b[-1]])
        seen = {s: i for i, s in enumerate(path_a)}
        for i, s in enumerate(path_b):
            if s in seen:
                cycle = path_a[:seen[s] + 1] + path_b[:i][::-1]
                return [self.simplex_names(t) for t in cycle]
        return [self.simplex_names(t) for t in path_a + path_b]

    def __repr__(self):
        label = self.name or "FilteredComplex"
        return (f"<{label}: n={self.n}, {self.vertex_count} vertices, "
                f"f={self.f_vector()}>")


# --- constructions ---


def simplex_sphere(n):
    """Boundary of the (n+1)-simplex, with the trivial filtration."""
    V = n + 2
    names = [f"v{i}" for i in range(V)]
    strata = [n] * V
    facets = list(combinations(range(V), V - 1))
    return FilteredComplex(n, names, strata, facets, name=f"s{n}")


def cross_polytope_boundary(d):
    """Boundary of the d-dimensional cross-polytope: a (d-1)-sphere.

    Vertices come in antipodal pairs +e_i, -e_i; facets pick one sign per
    coordinate, so no simplex contains an antipodal pair.
    """
    names = []
    for i in range(1, d + 1):
        names.append(f"+e{i}")
        names.append(f"-e{i}")
    n = d - 1
    strata = [n] * (2 * d)
    facets = []
    for signs in range(2 ** d):
        facets.append(tuple(2 * i + ((signs >> i) & 1) for i in range(d)))
    return FilteredComplex(n, names, strata, facets, name=f"cross{d}")


def cross_polytope_antipode(d):
    """The antipodal involution on cross_polytope_boundary(d) vertices."""
    return {2 * i: 2 * i + 1 for i in range(d)} | {2 * i + 1: 2 * i for i in range(d)}


def _fresh_name(base, taken):
    if base not in taken:
        return base
    i = 2
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def cone(K, apex_name="apex"):
    """Simplicial cone: apex in stratum 0, K strata shifted up by one."""
    n = K.n + 1
    names = [_fresh_name(apex_name, set(K.vertex_names))] + K.vertex_names
    strata = [0] + [s + 1 for s in K.strata]
    facets = [(0,) + tuple(v + 1 for v in f) for f in K.facets]
    return FilteredComplex(n, names, strata, facets,
                           name=f"cone:{K.name}" if K.name else None)


def suspension(K):
    """Simplicial suspension: two apexes in stratum 0, strata shifted up."""
    n = K.n + 1
    taken = set(K.vertex_names)
    north = _fresh_name("north", taken)
    south = _fresh_name("south", taken | {north})
    names = [north, south] + K.vertex_names
    strata = [0, 0] + [s + 1 for s in K.strata]
    facets = []
    for f in K.facets:
        shifted = tuple(v + 2 for v in f)
        facets.append((0,) + shifted)
        facets.append((1,) + shifted)
    return FilteredComplex(n, names, strata, facets,
                           name=f"susp:{K.name}" if K.name else None)


def barycentric_subdivision(K):
    """Flag complex of the face poset; barycenter strata from carriers.

    The stratum of a barycenter is the largest vertex stratum of its
    carrier simplex, which keeps each X_i a full subcomplex.  The result
    carries the carrier map in its `carriers` attribute.
    """
    carriers = []
    for k in sorted(K._simplices):
        carriers.extend(K._simplices[k])
    strata = [K.strata[c[-1]] for c in carriers]
    order = sorted(range(len(carriers)), key=lambda i: (strata[i], carriers[i]))
    carriers = [carriers[i] for i in order]
    strata = [strata[i] for i in order]
    pos = {c: i for i, c in enumerate(carriers)}
    names = ["b{" + ",".join(K.vertex_names[v] for v in c) + "}" for c in carriers]

    facets = []
    for f in K.facets:
        # maximal flags of faces of f correspond to orderings of its vertices
        def extend(flag, remaining):
            if not remaining:
                facets.append(tuple(sorted(pos[c] for c in flag)))
                return
            for v in remaining:
                extend(flag + [tuple(sorted(flag[-1] + (v,))) if flag else (v,)],
                       tuple(w for w in remaining if w != v))
        extend([], f)

    out = FilteredComplex(K.n, names, strata, facets,
                          name=f"sd({K.name})" if K.name else None)
    out.carriers = carriers
    return out


def lift_involution(K, pairing, sd):
    """Transport a vertex involution of K to barycentric_subdivision(K)."""
    pos = {c: i for i, c in enumerate(sd.carriers)}
    out = {}
    for i, c in enumerate(sd.carriers):
        out[i] = pos[tuple(sorted(pairing[v] for v in c))]
    return out


def antipodal_quotient(K, pairing):
    """Quotient by a free simplicial involution, with admissibility checks.

    pairing maps each vertex index to its partner.  The action must be a
    strata-preserving free involution, no simplex may meet its image, and
    distinct simplices may share an image vertex set only if they form an
    orbit; violations raise with a witness.
    """
    V = K.vertex_count
    for v in range(V):
        w = pairing.get(v)
        if w is None or not 0 <= w < V:
            raise ValueError(f"involution undefined on vertex {K.vertex_names[v]}")
        if w == v:
            raise ValueError(f"involution fixes vertex {K.vertex_names[v]}")
        if pairing[w] != v:
            raise ValueError(f"not an involution at vertex {K.vertex_names[v]}")
        if K.strata[v] != K.strata[w]:
            raise ValueError(f"involution moves {K.vertex_names[v]} across strata")

    def image(s):
        return tuple(sorted(pairing[v] for v in s))

    for k in sorted(K._simplices):
        for s in K._simplices[k]:
            t = image(s)
            if not K.has_simplex(t):
                raise ValueError(f"not simplicial: image of {K.simplex_names(s)} "
                                 "is not a simplex")
            if set(s) & set(t):
                raise ValueError(f"simplex {K.simplex_names(s)} meets its image; "
                                 "subdivide first")

    rep = {v: min(v, pairing[v]) for v in range(V)}
    reps = sorted(set(rep.values()))
    new_index = {r: i for i, r in enumerate(reps)}

    def project(s):
        t = tuple(sorted(new_index[rep[v]] for v in s))
        if len(set(t)) != len(s):
            raise ValueError(f"orbit map collapses simplex {K.simplex_names(s)}")
        return t

    projected = {}
    for k in sorted(K._simplices):
        for s in K._simplices[k]:
            q = project(s)
            other = projected.get(q)
            if other is not None and other != s and other != image(s):
                raise ValueError(
                    f"identification clash: {K.simplex_names(s)} and "
                    f"{K.simplex_names(other)} share image {q}")
            projected[q] = s

    names = [K.vertex_names[r] for r in reps]
    strata = [K.strata[r] for r in reps]
    facets = sorted({project(f) for f in K.facets})
    return FilteredComplex(K.n, names, strata, facets,
                           name=f"{K.name}/antipode" if K.name else None)


def projective_space(d, subdivisions=1):
    """RP^{d-1} as a quotient of the subdivided cross-polytope boundary."""
    K = cross_polytope_boundary(d)
    pairing = cross_polytope_antipode(d)
    for _ in range(subdivisions):
        sd = barycentric_subdivision(K)
        pairing = lift_involution(K, pairing, sd)
        K = sd
    return antipodal_quotient(K, pairing)


# --- text format ---


def parse_complex(text):
    """Parse the text format: dim, vertex, and facet lines; '#' comments."""
    n = None
    names = []
    strata = []
    index = {}
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "dim":
            if len(words) != 2:
                raise ValueError(f"line {lineno}: expected 'dim <n>'")
            n = int(words[1])
        elif words[0] == "vertex":
            if len(words) != 4 or words[2] != "stratum":
                raise ValueError(f"line {lineno}: expected 'vertex <name> stratum <i>'")
            vname, s = words[1], int(words[3])
            if vname in index:
                raise ValueError(f"line {lineno}: duplicate vertex {vname!r}")
            if strata and s < strata[-1]:
                raise ValueError(f"line {lineno}: vertex order violates "
                                 "stratum refinement")
            index[vname] = len(names)
            names.append(vname)
            strata.append(s)
        elif words[0] == "facet":
            try:
                facets.append(tuple(index[w] for w in words[1:]))
            except KeyError as e:
                raise ValueError(f"line {lineno}: unknown vertex {e.args[0]!r}") from None
        else:
            raise ValueError(f"line {lineno}: unknown directive {words[0]!r}")
    if n is None:
        raise ValueError("missing 'dim <n>' line")
    if not facets:
        raise ValueError("no facets given")
    return FilteredComplex(n, names, strata, facets)


def load_complex(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex(fh.read())


# --- builtin registry ---

_builtin_cache = {}


def builtin(name):
    """Builtin spaces: s<n>, rp3, sigma-rp3, cone:<builtin>, susp:<builtin>."""
    K = _builtin_cache.get(name)
    if K is not None:
        return K
    if name.startswith("cone:"):
        K = cone(builtin(name.split(":", 1)[1]))
        K.name = name
    elif name.startswith("susp:"):
        K = suspension(builtin(name.split(":", 1)[1]))
        K.name = name
    elif name == "rp3":
        K = projective_space(4, subdivisions=1)
        K.name = "rp3"
    elif name == "sigma-rp3":
        K = suspension(builtin("rp3"))
        K.name = "sigma-rp3"
    elif name.startswith("s") and name[1:].isdigit():
        K = simplex_sphere(int(name[1:]))
    else:
        raise ValueError(f"unknown builtin {name!r}")
    _builtin_cache[name] = K
    return K
