"""Recursive analysis of decorated pieces and assembly of the global answer.

For a piece rooted at its boundary circle C, look at the vertex u next to C:

* u is a boundary leaf (cylinder, no critical points): everything trivial, p = 0;
* u is an extremum (disk, one critical point): everything trivial, p = 0;
* u is an atom with symmetry order m, invariant children X_i and orbit
  families whose first members are Y_1..Y_b; each child is analysed as a piece
  rooted at its cut circle, and

      m = 1:   source = (x_i pi0 S_Xi) x Z
      m >= 2:  source = (x_i pi0 S_Xi) x ((x_j pi0 S_Yj) wr_m Z)

The finite group G, the homomorphism lambda-bar and the free torus action are
all determined by the source shape (see :func:`action_for`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from . import groups as gr
from . import torus as tr
from .errors import CapExceeded
from .model import DecoratedReebTree, ProblemInstance, VertexKind

log = logging.getLogger(__name__)

CERTIFIED = "CERTIFIED"
SKIPPED = "SKIPPED"
FAILED = "FAILED"


def action_for(source) -> tr.TorusAction:
    """Free action of ``target_of(source)`` realizing lambda-bar.

    Z factors become fixed circle coordinates placed after the blocks of the
    other factors; a wreath over Z becomes the wreath action on T^(pm+1).
    """
    if isinstance(source, gr.Trivial):
        return tr.act_trivial(0)
    if isinstance(source, gr.FreeZ):
        return tr.act_trivial(1)
    if isinstance(source, gr.WreathOverZ):
        return tr.act_wreath(action_for(source.inner), source.m)
    if isinstance(source, gr.Product):
        kept = [f for f in source.factors if not isinstance(f, gr.FreeZ)]
        nfree = len(source.factors) - len(kept)
        if not kept:
            return tr.act_trivial(nfree)
        return tr.act_extend_trivial(tr.act_product([action_for(f) for f in kept]), nfree)
    raise TypeError(f"not a source expression: {source!r}")


@dataclass
class PieceResult:
    source: object
    target: object
    hom: gr.StructuralHom
    p: int
    action: tr.TorusAction
    # index of the distinguished Z (case m = 1) or wreath (m >= 2) factor in source
    eta_coordinate: Optional[int]
    case: str  # "n=0", "n=1", "m=1", "m>=2"
    vertex: object = None
    m: Optional[int] = None
    x_results: list = field(default_factory=list)
    y_results: list = field(default_factory=list)

    def walk(self):
        yield self
        for r in self.x_results + self.y_results:
            yield from r.walk()


def _result(source, case, vertex, m=None, xs=(), ys=()) -> PieceResult:
    target = gr.target_of(source)
    action = action_for(source)
    eta = len(source.factors) - 1 if case in ("m=1", "m>=2") else None
    return PieceResult(source, target, gr.StructuralHom(source, target), action.dim, action,
                       eta, case, vertex, m, list(xs), list(ys))


def _analyze(tree: DecoratedReebTree, vid) -> PieceResult:
    """Analyse the piece whose root circle sits on the edge above ``vid``."""
    v = tree.vertex(vid)
    if v.kind is VertexKind.BOUNDARY:
        return _result(gr.Trivial(), "n=0", vid)
    if v.kind is VertexKind.EXTREMUM:
        return _result(gr.Trivial(), "n=1", vid)
    sym = v.symmetry
    kids = dict(tree.children(vid))
    xs = [_analyze(tree, kids[e]) for e in sym.invariant]
    if sym.m == 1:
        source = gr.Product(_factors(r.source for r in xs) + (gr.FreeZ(),))
        return _result(source, "m=1", vid, 1, xs)
    # the first member of each orbit stands for the whole orbit (equal codes)
    ys = [_analyze(tree, kids[orb[0]]) for orb in sym.orbits]
    inner = gr.prod(r.source for r in ys)
    source = gr.Product(_factors(r.source for r in xs) + (gr.WreathOverZ(inner, sym.m),))
    return _result(source, "m>=2", vid, sym.m, xs, ys)


def _factors(sources) -> tuple:
    p = gr.prod(sources)
    return p.factors if isinstance(p, gr.Product) else ()


def analyze_piece(tree: DecoratedReebTree) -> PieceResult:
    return _analyze(tree, tree.top)


@dataclass
class Verdict:
    is_torus: bool
    description: str  # "T^p/G"
    p: int
    group_name: str

    def homotopy_type(self) -> str:
        text = self.description
        if self.is_torus:
            model = {0: "point", 1: "S^1"}.get(self.p, f"T^{self.p}")
            if text != model:
                text += f" ≃ {model}"
        return text


@dataclass
class AnalysisResult:
    instance: ProblemInstance
    pieces: list
    source: object
    target: object
    hom: gr.StructuralHom
    p: int
    action: tr.TorusAction
    order: int
    certification: str
    freeness: Optional[tr.FreenessReport]
    crystal: Optional[tr.CrystalGroup]
    h1: Optional[tr.H1]
    verdict: Verdict
    generic: bool
    warnings: list = field(default_factory=list)


def verdict_for(action: tr.TorusAction, target) -> Verdict:
    p = action.dim
    name = gr.pretty(target)
    if isinstance(target, gr.Trivial):
        desc = "point" if p == 0 else f"T^{p}"
    else:
        desc = f"T^{p}/({name})" if " " in name else f"T^{p}/{name}"
    return Verdict(action.translation_only(), desc, p, name)


def analyze_instance(instance: ProblemInstance, max_order: int = gr.DEFAULT_CAP) -> AnalysisResult:
    instance.surface.check_supported()
    pieces = [analyze_piece(t) for t in instance.pieces]
    source = gr.prod(r.source for r in pieces)
    target = gr.target_of(source)
    action = action_for(source)
    hom = gr.StructuralHom(source, target)
    n = gr.order(target)
    freeness = crystal = h1 = None
    if n > max_order:
        certification = SKIPPED
        log.warning("group of order %d exceeds cap %d: certification skipped", n, max_order)
    else:
        freeness = tr.is_free(action, max_order)
        if freeness.certified:
            certification = CERTIFIED
            crystal = tr.CrystalGroup(action, max_order)
            h1 = tr.homology_h1(crystal)
        else:
            certification = FAILED
    return AnalysisResult(
        instance=instance, pieces=pieces, source=source, target=target, hom=hom,
        p=action.dim, action=action, order=n, certification=certification,
        freeness=freeness, crystal=crystal, h1=h1, verdict=verdict_for(action, target),
        generic=generic_check(instance), warnings=list(instance.warnings),
    )


def generic_check(instance: ProblemInstance) -> bool:
    """True iff in each piece the critical values are pairwise distinct and every atom has one saddle."""
    for tree in instance.pieces:
        values = [v.f for v in tree.vertices if v.is_critical]
        if len(values) != len(set(values)):
            return False
        if any(v.saddles != 1 for v in tree.vertices if v.kind is VertexKind.ATOM):
            return False
    return True


def check_cap(expr, cap):
    n = gr.order(expr)
    if n > cap:
        raise CapExceeded(n, cap)
    return n
