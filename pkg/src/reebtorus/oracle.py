"""Brute-force ground truth, independent of the engine's group expressions.

* automorphisms of a decorated tree generated by the declared atom rotations,
  closed under composition by breadth-first search;
* a grid scan for fixed points of an affine torus map;
* comparison of a piece result with the tree automorphism group through
  order, element-order histogram and abelianization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from . import groups as gr
from .errors import CapExceeded
from .model import DecoratedReebTree, VertexKind, canonical_code
from .torus import AffineTorusMap, TorusPoint

GRID_CAP = 10 ** 6


@dataclass(frozen=True)
class TreeAutomorphism:
    """Vertex permutation of a tree; ``images[i]`` is the index of the image of vertex ``i``
    (indices follow ``tree.vertices``)."""
    images: tuple

    def vertex_map(self, tree) -> dict:
        ids = [v.id for v in tree.vertices]
        return {ids[i]: ids[j] for i, j in enumerate(self.images)}

    def edge_map(self, tree) -> dict:
        vmap = self.vertex_map(tree)
        out = {}
        for v in tree.vertices:
            up = tree.parent(v.id)
            if up is not None:
                out[up[0]] = tree.parent(vmap[v.id])[0]
        return out

    def then(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        """Apply ``self`` first, then ``other``."""
        return TreeAutomorphism(tuple(other.images[j] for j in self.images))

    def inverse(self) -> "TreeAutomorphism":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return TreeAutomorphism(tuple(inv))


def _match(tree: DecoratedReebTree, a, b, out: dict):
    """Extend ``out`` by an isomorphism from the subtree at ``a`` onto the one at ``b``
    respecting symmetry data and orbit order (codes must agree)."""
    out[a] = b
    va = tree.vertex(a)
    kids_a = dict(tree.children(a))
    kids_b = dict(tree.children(b))
    if va.kind is not VertexKind.ATOM:
        for (_, x), (_, y) in zip(tree.children(a), tree.children(b)):
            _match(tree, x, y, out)
        return
    sa, sb = va.symmetry, tree.vertex(b).symmetry

    def buckets(edges, kids):
        d = {}
        for e in edges:
            d.setdefault(canonical_code(tree, kids[e]), []).append(e)
        return d

    ia, ib = buckets(sa.invariant, kids_a), buckets(sb.invariant, kids_b)
    for code, ea in ia.items():
        for x, y in zip(ea, ib[code]):
            _match(tree, kids_a[x], kids_b[y], out)
    oa = buckets([o[0] for o in sa.orbits], kids_a)
    ob = buckets([o[0] for o in sb.orbits], kids_b)
    orb_a = {o[0]: o for o in sa.orbits}
    orb_b = {o[0]: o for o in sb.orbits}
    for code, heads in oa.items():
        for ha, hb in zip(heads, ob[code]):
            for x, y in zip(orb_a[ha], orb_b[hb]):
                _match(tree, kids_a[x], kids_b[y], out)


def rotation_generators(tree: DecoratedReebTree) -> list:
    """One automorphism per atom with m >= 2: rotate every orbit by one position,
    carrying the hanging subtrees along."""
    index = {v.id: i for i, v in enumerate(tree.vertices)}
    gens = []
    for v in tree.vertices:
        if v.kind is not VertexKind.ATOM or v.symmetry.m < 2:
            continue
        kids = dict(tree.children(v.id))
        img = list(range(len(tree.vertices)))
        m = v.symmetry.m
        for orb in v.symmetry.orbits:
            tops = [kids[e] for e in orb]
            psi = []
            for c in tops:
                mp = {}
                _match(tree, tops[0], c, mp)
                psi.append(mp)
            for i in range(m):
                back = {w: x for x, w in psi[i].items()}
                fwd = psi[(i + 1) % m]
                for w, x in back.items():
                    img[index[w]] = index[fwd[x]]
        gens.append(TreeAutomorphism(tuple(img)))
    return gens


def enumerate_automorphisms(tree: DecoratedReebTree, cap: int = gr.DEFAULT_CAP) -> list:
    e = TreeAutomorphism(tuple(range(len(tree.vertices))))
    gens = rotation_generators(tree)
    seen = {e}
    out = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a.then(g)
                if b not in seen:
                    seen.add(b)
                    out.append(b)
                    nxt.append(b)
                    if len(out) > cap:
                        raise CapExceeded(len(out), cap, "automorphism group")
        frontier = nxt
    return out


def is_automorphism(tree: DecoratedReebTree, aut: TreeAutomorphism) -> bool:
    """Check every structural constraint an allowed automorphism must satisfy."""
    vs = tree.vertices
    if sorted(aut.images) != list(range(len(vs))):
        return False
    img = {v.id: vs[aut.images[i]].id for i, v in enumerate(vs)}
    if img[tree.root] != tree.root:
        return False
    for v in vs:
        w = tree.vertex(img[v.id])
        if (v.kind, v.f, v.saddles, v.extremum) != (w.kind, w.f, w.saddles, w.extremum):
            return False
    edges = {frozenset((a, b)) for _, a, b in tree.edges}
    if any(frozenset((img[a], img[b])) not in edges for _, a, b in tree.edges):
        return False
    emap = aut.edge_map(tree)
    for v in vs:
        if v.kind is not VertexKind.ATOM:
            continue
        w = tree.vertex(img[v.id])
        s, t = v.symmetry, w.symmetry
        if s.m != t.m:
            return False
        # invariant children and whole orbits go to the same position among
        # equal-code siblings at the image atom (no reshuffling of equal copies)
        ks, kt = dict(tree.children(v.id)), dict(tree.children(w.id))
        if [emap[e] for e in s.invariant] != _positional(tree, s.invariant, kt, ks, t.invariant):
            return False
        heads = [o[0] for o in s.orbits]
        target_heads = _positional(tree, heads, kt, ks, [o[0] for o in t.orbits])
        orbit_of = {o[0]: o for o in t.orbits}
        shifts = set()
        for orb, head in zip(s.orbits, target_heads):
            if head is None:
                return False
            tgt = orbit_of[head]
            pos = {e: j for j, e in enumerate(tgt)}
            placed = [pos.get(emap[e]) for e in orb]
            if None in placed:
                return False
            shifts |= {(j - i) % s.m for i, j in enumerate(placed)}
        if len(shifts) > 1:
            return False
    return True


def _positional(tree, edges, kids_t, kids_s, target_edges) -> list:
    """For each of ``edges`` (children of the source atom), the edge of the image
    atom holding the same rank among siblings with the same canonical code."""
    rank, seen = [], {}
    for e in edges:
        c = canonical_code(tree, kids_s[e])
        rank.append((c, seen.get(c, 0)))
        seen[c] = seen.get(c, 0) + 1
    slots, seen = {}, {}
    for e in target_edges:
        c = canonical_code(tree, kids_t[e])
        slots[(c, seen.get(c, 0))] = e
        seen[c] = seen.get(c, 0) + 1
    return [slots.get(r) for r in rank]


# -- comparison ---------------------------------------------------------------

@dataclass
class OracleReport:
    count: int
    histogram: dict
    abelianization: list
    engine_order: int | None = None
    engine_histogram: dict | None = None
    engine_abelianization: list | None = None
    mismatches: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.engine_order is None:
            return "UNCOMPARED"
        return "MATCH" if not self.mismatches else "MISMATCH(" + ",".join(self.mismatches) + ")"

    @property
    def ok(self) -> bool:
        return self.engine_order is not None and not self.mismatches


def automorphism_report(tree: DecoratedReebTree, cap: int = gr.DEFAULT_CAP) -> OracleReport:
    auts = enumerate_automorphisms(tree, cap)
    e = auts[0]
    mul = TreeAutomorphism.then
    return OracleReport(len(auts), gr.order_histogram(auts, mul, e), gr.abelian_invariants(auts, mul, e))


def compare(engine_result, tree: DecoratedReebTree, cap: int = gr.DEFAULT_CAP) -> OracleReport:
    """Compare the engine's finite group for a piece against the tree automorphisms."""
    rep = automorphism_report(tree, cap)
    target = engine_result.target
    n = gr.order(target)
    if n > cap:
        raise CapExceeded(n, cap)
    rep.engine_order = n
    rep.engine_histogram = gr.histogram(target, cap)
    rep.engine_abelianization = gr.abelianization(target, cap)
    if rep.engine_order != rep.count:
        rep.mismatches.append("order")
    if rep.engine_histogram != rep.histogram:
        rep.mismatches.append("histogram")
    if rep.engine_abelianization != rep.abelianization:
        rep.mismatches.append("abelianization")
    return rep


# -- fixed points -------------------------------------------------------------

def grid_fixed_point_scan(A: AffineTorusMap, cap: int = GRID_CAP, chunk: int = 1 << 16) -> TorusPoint | None:
    """Exhaustive search over the points with coordinates in (1/L)Z, L the lcm of
    the translation denominators.  If ``A`` has any fixed point it has one on
    this grid (pin one coordinate per permutation cycle to 0 and solve), so
    ``None`` certifies freeness of this map."""
    p = A.dim
    L = reduce(math.lcm, (t.denominator for t in A.trans), 1)
    npts = L ** p
    if npts > cap:
        raise CapExceeded(npts, cap, "grid")
    perm = np.asarray(A.perm, dtype=np.int64)
    shift = np.asarray([int(t * L) for t in A.trans], dtype=np.int64)
    radix = L ** np.arange(p - 1, -1, -1, dtype=np.int64)
    for start in range(0, npts, chunk):
        idx = np.arange(start, min(npts, start + chunk), dtype=np.int64)
        pts = (idx[:, None] // radix[None, :]) % L
        moved = (pts[:, perm] + shift[None, :]) % L
        hit = np.flatnonzero((moved == pts).all(axis=1))
        if hit.size:
            row = pts[hit[0]]
            return TorusPoint(tuple(Fraction(int(a), L) for a in row))
    return None
