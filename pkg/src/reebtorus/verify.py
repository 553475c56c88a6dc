"""Property checks run by ``reebtorus verify``.

Each check returns a :class:`Check`; a failing check carries the first
offending element in serialized form.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import groups as gr
from . import oracle as orc
from . import torus as tr
from .errors import CapExceeded

HOM_PAIRS = 4000


@dataclass
class Check:
    name: str
    passed: bool
    checked: int = 0
    detail: str = ""
    failing: str | None = None

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    oracle: list = field(default_factory=list)  # (piece index, OracleReport)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def check_action_axioms(action: tr.TorusAction, cap: int = gr.DEFAULT_CAP) -> Check:
    """evaluate(e) is the identity and evaluate(gh) = evaluate(g) then evaluate(h), for all pairs."""
    G = action.group
    elems = list(action.elements(cap))
    e = gr.identity(G)
    if not action.evaluate(e).is_identity:
        return Check("action axioms", False, 1, "identity does not act trivially",
                     gr.format_element(G, e))
    maps = {g: action.evaluate(g) for g in elems}
    n = 0
    for g, h in itertools.product(elems, repeat=2):
        n += 1
        if maps[gr._mul(G, g, h)] != tr.compose(maps[g], maps[h]):
            return Check("action axioms", False, n, "evaluate(gh) != compose(evaluate(g), evaluate(h))",
                         f"g={gr.format_element(G, g)} h={gr.format_element(G, h)}")
    return Check("action axioms", True, n, f"{len(elems)} elements, all pairs")


def check_freeness(action: tr.TorusAction, cap: int = gr.DEFAULT_CAP,
                   grid_cap: int = orc.GRID_CAP) -> Check:
    """Cycle-sum criterion on every non-identity element, cross-checked by a grid scan."""
    G = action.group
    e = gr.identity(G)
    n = scanned = 0
    for g in action.elements(cap):
        if g == e:
            continue
        n += 1
        A = action.evaluate(g)
        pt = tr.fixed_point(A)
        if pt is not None:
            return Check("freeness", False, n, f"fixed point {pt}", gr.format_element(G, g))
        try:
            grid = orc.grid_fixed_point_scan(A, grid_cap)
        except CapExceeded:
            continue
        scanned += 1
        if grid is not None:
            return Check("freeness", False, n, f"grid scan found fixed point {grid}",
                         gr.format_element(G, g))
    return Check("freeness", True, n, f"{n} non-identity elements, {scanned} grid-scanned")


def _box_values(source) -> range:
    ms = [1]

    def walk(x):
        if isinstance(x, gr.WreathOverZ):
            ms.append(x.m)
            walk(x.inner)
        elif isinstance(x, gr.Product):
            for f in x.factors:
                walk(f)

    walk(source)
    return range(-1, max(ms))


def _random_element(expr, rng, values):
    if isinstance(expr, gr.Trivial):
        return ()
    if isinstance(expr, gr.FreeZ):
        return rng.choice(values)
    if isinstance(expr, gr.Product):
        return tuple(_random_element(f, rng, values) for f in expr.factors)
    fn = tuple(_random_element(expr.inner, rng, values) for _ in range(expr.m))
    k = rng.choice(values)
    return gr.WreathElement(fn, k % expr.m if isinstance(expr, gr.WreathCyclic) else k)


def check_hom(hom: gr.StructuralHom, seed: int = 0, pairs: int = HOM_PAIRS) -> list:
    """lambda-bar(ab) = lambda-bar(a) lambda-bar(b) on a box of source elements
    (all pairs when small, a seeded sample otherwise), and surjectivity: the
    images of a generating set of the source generate the target."""
    S, G = hom.source, hom.target
    values = _box_values(S)
    box = list(itertools.islice(gr.source_box(S, values), pairs + 1))
    if len(box) ** 2 <= pairs:
        sample = list(itertools.product(box, repeat=2))
    else:
        rng = random.Random(seed)
        sample = [(_random_element(S, rng, values), _random_element(S, rng, values))
                  for _ in range(pairs)]
    out = []
    for i, (a, b) in enumerate(sample, 1):
        if hom(gr._mul(S, a, b)) != gr._mul(G, hom(a), hom(b)):
            out.append(Check("lambda-bar homomorphism", False, i, "image of product differs",
                             f"a={gr.format_element(S, a)} b={gr.format_element(S, b)}"))
            break
    else:
        out.append(Check("lambda-bar homomorphism", True, len(sample), f"{len(sample)} pairs"))
    images = [hom(s) for s in gr.generators(S)]
    reached = gr._closure(images, lambda x, y: gr._mul(G, x, y), gr.identity(G))
    n = gr.order(G)
    out.append(Check("lambda-bar surjective", len(reached) == n, len(images),
                     f"image of generators spans {len(reached)} of {n} elements"))
    return out


def run(result, cap: int = gr.DEFAULT_CAP, seed: int = 0, oracle: bool = True,
        grid_cap: int = orc.GRID_CAP) -> VerificationReport:
    """All checks for an analysis result.  Raises CapExceeded if |G| > cap."""
    if result.order > cap:
        raise CapExceeded(result.order, cap)
    rep = VerificationReport()
    rep.checks.append(check_action_axioms(result.action, cap))
    rep.checks.append(check_freeness(result.action, cap, grid_cap))
    rep.checks.extend(check_hom(result.hom, seed))
    if oracle:
        for i, (piece, tree) in enumerate(zip(result.pieces, result.instance.pieces)):
            r = orc.compare(piece, tree, cap)
            rep.oracle.append((i, r))
            rep.checks.append(Check(f"oracle piece {i}", r.ok, r.count, r.verdict))
    return rep


# -- fault injection (test fixtures) -------------------------------------------

class FaultyAction(tr.TorusAction):
    """Wraps an action and drops the translation of one non-identity element."""

    def __init__(self, base: tr.TorusAction, victim=None):
        self.base = base
        self.group = base.group
        self.dim = base.dim
        if victim is None:
            e = gr.identity(base.group)
            victim = next((g for g in gr.generators(base.group) if g != e), e)
        self.victim = victim

    def _evaluate(self, g):
        A = self.base.evaluate(g)
        if g == self.victim:
            return tr.AffineTorusMap(A.perm, (0,) * A.dim)
        return A

    def translation_only(self):
        return self.base.translation_only()

    def __str__(self):
        return f"faulty({self.base})"
