"""Perversities on a filtration of formal dimension n.

A perversity assigns an integer to each stratum codimension 0..n.  The
Goresky-MacPherson (GM) ones vanish up to codimension 2 and grow by at
most one per step; the zero and top perversities bound them, and duality
reflects the lattice through the top.
"""


class Perversity:
    __slots__ = ("values", "label")

    def __init__(self, values, label=None):
        self.values = tuple(int(v) for v in values)
        if not self.values:
            raise ValueError("a perversity needs at least the codimension-0 value")
        self.label = label

    @property
    def n(self):
        return len(self.values) - 1

    def __call__(self, i):
        return self.values[i]

    @property
    def is_gm(self):
        v = self.values
        for i in range(min(3, len(v))):
            if v[i] != 0:
                return False
        for i in range(2, len(v) - 1):
            if not (v[i] <= v[i + 1] <= v[i] + 1):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, Perversity) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __le__(self, other):
        self._match(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __add__(self, other):
        self._match(other)
        return Perversity(tuple(a + b for a, b in zip(self.values, other.values)))

    def _match(self, other):
        if self.n != other.n:
            raise ValueError("perversities live on different dimensions")

    def dual(self):
        """The complementary perversity t - p; defined for GM input."""
        if not self.is_gm:
            raise ValueError("dual is defined for GM perversities")
        t = top(self.n)
        out = Perversity(tuple(a - b for a, b in zip(t.values, self.values)))
        assert out.is_gm
        return out

    def __str__(self):
        if self.label:
            return self.label
        return "(" + ",".join(str(v) for v in self.values) + ")"

    def __repr__(self):
        return f"Perversity{self.values}"


def zero(n):
    return Perversity((0,) * (n + 1), label="zero")


def top(n):
    return Perversity(tuple(max(i - 2, 0) for i in range(n + 1)), label="top")


def clip(k, n):
    return Perversity(tuple(max(0, min(k, i - 2)) for i in range(n + 1)),
                      label=f"clip:{k}")


def gm_lattice(n):
    """All GM perversities for formal dimension n, in lexicographic order."""
    if n < 3:
        return [zero(n)]
    tails = [[]]
    for i in range(3, n + 1):
        grown = []
        for t in tails:
            last = t[-1] if t else 0
            for v in (last, last + 1):
                if v <= i - 2:
                    grown.append(t + [v])
        tails = grown
    return [Perversity((0, 0, 0, *t)) for t in sorted(tails)]


def parse_perversity(text, n):
    """Parse the CLI syntax: zero | top | clip:<k> | list:<v0,...,vn>."""
    if text == "zero":
        return zero(n)
    if text == "top":
        return top(n)
    if text.startswith("clip:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad clip level in {text!r}") from None
        return clip(k, n)
    if text.startswith("list:"):
        body = text.split(":", 1)[1]
        try:
            vals = tuple(int(v) for v in body.split(","))
        except ValueError:
            raise ValueError(f"bad perversity list in {text!r}") from None
        if len(vals) != n + 1:
            raise ValueError(f"perversity list needs {n + 1} values for dimension {n}, "
                             f"got {len(vals)}")
        return Perversity(vals)
    raise ValueError(f"unknown perversity {text!r} "
                     "(expected zero, top, clip:<k>, or list:<v0,...,vn>)")
