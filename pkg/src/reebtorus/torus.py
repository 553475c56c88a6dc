"""Free actions of finite groups on tori T^p = R^p / Z^p by affine maps.

Every map here is a coordinate permutation followed by a translation, acting
from the right:

    (x . A)_i = x_{perm[i]} + trans[i]  (mod 1)

so that ``apply(apply(x, A), B) == apply(x, compose(A, B))`` with

    perm_AB[i]  = perm_A[perm_B[i]]
    trans_AB[i] = trans_A[perm_B[i]] + trans_B[i].

All arithmetic is exact (``Fraction``); there is no floating point in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import NamedTuple, Sequence

from . import groups as gr
from .errors import DimensionMismatch, NotFree
from .smith import abelian_group_from_relations

ZERO = Fraction(0)


def _frac1(q) -> Fraction:
    q = Fraction(q)
    return q - math.floor(q)


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_frac1(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __str__(self):
        return "(" + ", ".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class AffineTorusMap:
    perm: tuple
    trans: tuple

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation")
        if len(self.trans) != len(perm):
            raise DimensionMismatch("perm and trans have different lengths")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "trans", tuple(_frac1(t) for t in self.trans))

    @classmethod
    def identity(cls, p: int) -> "AffineTorusMap":
        return cls(tuple(range(p)), (ZERO,) * p)

    @classmethod
    def translation(cls, trans) -> "AffineTorusMap":
        return cls(tuple(range(len(trans))), tuple(trans))

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def is_identity(self) -> bool:
        return self.is_translation and not any(self.trans)

    @property
    def is_translation(self) -> bool:
        return all(i == s for i, s in enumerate(self.perm))

    def __str__(self):
        return f"perm=[{','.join(map(str, self.perm))}] trans=[{','.join(map(str, self.trans))}]"


def apply(A: AffineTorusMap, x: TorusPoint) -> TorusPoint:
    if A.dim != x.dim:
        raise DimensionMismatch(f"map on T^{A.dim} applied to a point of T^{x.dim}")
    return TorusPoint(tuple(x.coords[s] + t for s, t in zip(A.perm, A.trans)))


def compose(A: AffineTorusMap, B: AffineTorusMap) -> AffineTorusMap:
    """The map ``x -> (x . A) . B``."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"cannot compose maps on T^{A.dim} and T^{B.dim}")
    return AffineTorusMap(tuple(A.perm[j] for j in B.perm),
                          tuple(A.trans[j] + t for j, t in zip(B.perm, B.trans)))


def cycles(perm: Sequence[int]) -> list:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = perm[i]
        out.append(cyc)
    return out


def fixed_point(A: AffineTorusMap) -> TorusPoint | None:
    """A fixed point of ``A`` or ``None``.

    On a cycle i -> perm[i] -> ... the fixed-point equations x_i = x_{perm[i]} + t_i
    are solvable iff the translations around the cycle sum to an integer.
    """
    x = [ZERO] * A.dim
    for cyc in cycles(A.perm):
        if sum(A.trans[i] for i in cyc).denominator != 1:
            return None
        # x_{perm[i]} = x_i - t_i, starting from x = 0 at the head of the cycle
        i = cyc[0]
        for _ in range(len(cyc) - 1):
            x[A.perm[i]] = x[i] - A.trans[i]
            i = A.perm[i]
    pt = TorusPoint(tuple(x))
    assert apply(A, pt) == pt
    return pt


# -- actions ------------------------------------------------------------------

class TorusAction:
    """A right action of a finite group on T^p, evaluated element by element.

    Subclasses mirror the constructions: trivial, cyclic, product, extension by
    fixed coordinates and the wreath action.
    """

    group = None
    dim = 0

    def evaluate(self, g) -> AffineTorusMap:
        gr.check(self.group, g)
        cache = self.__dict__.setdefault("_cache", {})
        A = cache.get(g)
        if A is None:
            A = self._evaluate(g)
            cache[g] = A
        return A

    def _evaluate(self, g) -> AffineTorusMap:
        raise NotImplementedError

    def translation_only(self) -> bool:
        """Whether every element acts by a pure translation (decided from the recipe)."""
        raise NotImplementedError

    def elements(self, cap=gr.DEFAULT_CAP):
        return gr.enumerate_group(self.group, cap)

    def generator_maps(self) -> list:
        return [(g, self.evaluate(g)) for g in gr.generators(self.group)]


@dataclass(frozen=True, eq=True)
class TrivialAction(TorusAction):
    n: int

    @property
    def group(self):
        return gr.Trivial()

    @property
    def dim(self):
        return self.n

    def _evaluate(self, g):
        return AffineTorusMap.identity(self.n)

    def translation_only(self):
        return True

    def __str__(self):
        return f"trivial(T^{self.n})"


@dataclass(frozen=True, eq=True)
class CyclicAction(TorusAction):
    m: int

    @property
    def group(self):
        return gr.cyclic(self.m)

    @property
    def dim(self):
        return 1

    def _evaluate(self, g):
        k = 0 if self.m == 1 else g.k
        return AffineTorusMap.translation((Fraction(k, self.m),))

    def translation_only(self):
        return True

    def __str__(self):
        return f"cyclic({self.m})"


@dataclass(frozen=True, eq=True)
class ProductAction(TorusAction):
    parts: tuple

    @property
    def group(self):
        return gr.Product(tuple(a.group for a in self.parts))

    @property
    def dim(self):
        return sum(a.dim for a in self.parts)

    def _evaluate(self, g):
        perm, trans, off = [], [], 0
        for a, x in zip(self.parts, g):
            A = a.evaluate(x)
            perm.extend(off + s for s in A.perm)
            trans.extend(A.trans)
            off += a.dim
        return AffineTorusMap(tuple(perm), tuple(trans))

    def translation_only(self):
        return all(a.translation_only() for a in self.parts)

    def __str__(self):
        return "product(" + ", ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True, eq=True)
class ExtendedAction(TorusAction):
    base: TorusAction
    n: int

    @property
    def group(self):
        return self.base.group

    @property
    def dim(self):
        return self.base.dim + self.n

    def _evaluate(self, g):
        A = self.base.evaluate(g)
        p = self.base.dim
        return AffineTorusMap(A.perm + tuple(range(p, p + self.n)), A.trans + (ZERO,) * self.n)

    def translation_only(self):
        return self.base.translation_only()

    def __str__(self):
        return f"extend({self.base}, {self.n})"


@dataclass(frozen=True, eq=True)
class WreathAction(TorusAction):
    """G wr Z_m on T^(pm+1): blocks 0..m-1 of size p, then one circle coordinate.

    (x_0, ..., x_{m-1}, y) . (alpha, k) = (x_k alpha(0), x_{k+1} alpha(1), ..., y + k/m),
    block indices mod m.
    """
    base: TorusAction
    m: int

    @property
    def group(self):
        return gr.WreathCyclic(self.base.group, self.m)

    @property
    def dim(self):
        return self.base.dim * self.m + 1

    def _evaluate(self, g):
        p, m = self.base.dim, self.m
        perm, trans = [], []
        for i in range(m):
            A = self.base.evaluate(g.fn[i])
            src = ((i + g.k) % m) * p
            perm.extend(src + s for s in A.perm)
            trans.extend(A.trans)
        perm.append(p * m)
        trans.append(Fraction(g.k, m))
        return AffineTorusMap(tuple(perm), tuple(trans))

    def translation_only(self):
        # with m >= 2 a nonzero shift permutes the blocks unless they are empty
        return self.base.dim == 0

    def __str__(self):
        return f"wreath({self.base}, {self.m})"


def act_trivial(n: int) -> TorusAction:
    if n < 0:
        raise ValueError("n >= 0")
    return TrivialAction(n)


def act_cyclic(m: int) -> TorusAction:
    if m < 1:
        raise ValueError("m >= 1")
    return CyclicAction(m)


def act_product(actions: Sequence[TorusAction]) -> TorusAction:
    return ProductAction(tuple(actions))


def act_extend_trivial(action: TorusAction, n: int) -> TorusAction:
    if n < 0:
        raise ValueError("n >= 0")
    return action if n == 0 else ExtendedAction(action, n)


def act_wreath(action: TorusAction, m: int) -> TorusAction:
    if m < 2:
        raise ValueError("m >= 2")
    return WreathAction(action, m)


# -- freeness -----------------------------------------------------------------

@dataclass
class FreenessReport:
    certified: bool
    checked: int
    witnesses: dict = field(default_factory=dict)  # element -> fixed TorusPoint

    @property
    def status(self) -> str:
        return "FREE" if self.certified else "NOT FREE"


def is_free(action: TorusAction, cap: int = gr.DEFAULT_CAP) -> FreenessReport:
    """Certify freeness element by element with the cycle-sum criterion."""
    e = gr.identity(action.group)
    witnesses, checked = {}, 0
    for g in action.elements(cap):
        if g == e:
            continue
        checked += 1
        pt = fixed_point(action.evaluate(g))
        if pt is not None:
            witnesses[g] = pt
    return FreenessReport(not witnesses, checked, witnesses)


# -- fundamental group of the quotient -----------------------------------------

class H1(NamedTuple):
    rank: int
    torsion: tuple

    def __str__(self):
        parts = (["Z"] if self.rank == 1 else [f"Z^{self.rank}"] if self.rank else []) + \
                [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


class CrystalGroup:
    """pi_1(T^p / G) as the group of affine maps of R^p lifting the action.

    An element ``(g, z)`` with ``z`` in Z^p is the map ``x -> x . lift(g) + z``
    where ``lift(g)`` uses the translation representatives in [0, 1).  The
    lattice is ``{(e, z)}`` and ``delta(g, z) = g``.
    """

    def __init__(self, action: TorusAction, cap: int = gr.DEFAULT_CAP):
        self.action = action
        self.group = action.group
        self.dim = action.dim
        self.cap = cap
        self.elements = list(action.elements(cap))
        self._e = gr.identity(self.group)
        self._maps = {g: action.evaluate(g) for g in self.elements}

    def lift(self, g) -> AffineTorusMap:
        return self._maps[g]

    def cocycle(self, g, h) -> tuple:
        """Integer vector c with lift(g) lift(h) = lift(gh) + c on R^p."""
        A, B = self._maps[g], self._maps[h]
        C = self._maps[gr._mul(self.group, g, h)]
        c = tuple(A.trans[j] + t - u for j, t, u in zip(B.perm, B.trans, C.trans))
        if any(x.denominator != 1 for x in c):
            raise ArithmeticError(f"lifts of {g!r}, {h!r} do not compose to a lift: not an action")
        return tuple(int(x) for x in c)

    def identity(self):
        return (self._e, (0,) * self.dim)

    def mul(self, a, b):
        (g, z), (h, w) = a, b
        c = self.cocycle(g, h)
        sigma = self._maps[h].perm
        return (gr._mul(self.group, g, h), tuple(ci + z[s] + wi for ci, s, wi in zip(c, sigma, w)))

    def inverse(self, a):
        g, z = a
        gi = gr._inv(self.group, g)
        # solve (g, z)(gi, w) = (e, 0)
        c = self.cocycle(g, gi)
        sigma = self._maps[gi].perm
        return (gi, tuple(-ci - z[s] for ci, s in zip(c, sigma)))

    def lattice(self, z):
        return (self._e, tuple(z))

    def delta(self, a):
        return a[0]

    def act(self, a, x: Sequence[Fraction]) -> tuple:
        """Apply an element to a point of R^p (exact)."""
        g, z = a
        A = self._maps[g]
        return tuple(Fraction(x[s]) + t + zi for s, t, zi in zip(A.perm, A.trans, z))

    def presentation(self):
        """Generators and abelianized relations.

        Generators: lattice basis e_1..e_p, then one lift x_g per element g.
        Relations, for every generator s of G and every g in G:
            e_i - e_{perm_s[i]}                      (conjugation by x_s)
            x_g + x_s - x_{gs} - sum_i c(g, s)_i e_i  (multiplication of lifts)
        """
        p = self.dim
        index = {g: p + i for i, g in enumerate(self.elements)}
        ngens = p + len(self.elements)
        gens = gr.generators(self.group)
        rows = []
        for s in gens:
            perm = self._maps[s].perm
            for i in range(p):
                if perm[i] != i:
                    row = [0] * ngens
                    row[i] += 1
                    row[perm[i]] -= 1
                    rows.append(row)
        for g in self.elements:
            for s in gens:
                row = [0] * ngens
                row[index[g]] += 1
                row[index[s]] += 1
                row[index[gr._mul(self.group, g, s)]] -= 1
                for i, ci in enumerate(self.cocycle(g, s)):
                    row[i] -= ci
                rows.append(row)
        # x_e is the identity map
        row = [0] * ngens
        row[index[self._e]] = 1
        rows.append(row)
        return ngens, gens, rows

    def summary(self) -> str:
        ngens, gens, rows = self.presentation()
        return (f"1 -> Z^{self.dim} -> pi1 -> G -> 1; generators: {self.dim} lattice + "
                f"{len(self.elements)} lifts ({len(gens)} generators of G used), "
                f"{len(rows)} abelian relations")


def pi1_presentation(action: TorusAction, cap: int = gr.DEFAULT_CAP) -> CrystalGroup:
    report = is_free(action, cap)
    if not report.certified:
        g, pt = next(iter(report.witnesses.items()))
        raise NotFree(f"element {g!r} fixes {pt}; the quotient is not covered by the torus")
    return CrystalGroup(action, cap)


def homology_h1(crystal: CrystalGroup) -> H1:
    ngens, _, rows = crystal.presentation()
    rank, torsion = abelian_group_from_relations(rows, ngens)
    return H1(rank, tuple(torsion))


def lcm_denominator(A: AffineTorusMap) -> int:
    return reduce(math.lcm, (t.denominator for t in A.trans), 1)
