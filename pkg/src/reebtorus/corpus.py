"""Small builder for instance documents and the bundled test corpus.

Trees are written as nested calls::

    atom(1, ext(2), ext(2))            # auto symmetry, saddles = #children - 1
    atom(1, bnd(3), ext(2), ext(2), symmetry={"m": 2, "invariant": [0], "orbits": [[1, 2]]})

Explicit symmetries refer to children by position.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .model import ProblemInstance, parse_instance


@dataclass
class _Node:
    kind: str
    f: Fraction
    children: tuple = ()
    extremum: str | None = None
    saddles: int | None = None
    symmetry: object = "auto"


def ext(f, kind="max") -> _Node:
    return _Node("extremum", Fraction(f), extremum=kind)


def bnd(f) -> _Node:
    return _Node("boundary", Fraction(f))


def atom(f, *children, saddles=None, symmetry="auto") -> _Node:
    if saddles is None:
        saddles = len(children) - 1
    return _Node("atom", Fraction(f), tuple(children), saddles=saddles, symmetry=symmetry)


def piece(top: _Node, root_f=0, kind=None) -> dict:
    """Document fragment for a piece whose root circle sits at ``root_f`` above ``top``."""
    vertices, edges = [], []

    def has_boundary(n):
        return n.kind == "boundary" or any(has_boundary(c) for c in n.children)

    if kind is None:
        kind = "cylinder" if has_boundary(top) else "disk"

    def visit(n: _Node, parent):
        vid = f"v{len(vertices)}"
        rec = {"id": vid, "type": n.kind, "f": str(n.f)}
        vertices.append(rec)
        if parent is not None:
            edges.append({"id": f"e{vid[1:]}", "from": parent, "to": vid})
        if n.kind == "extremum":
            rec["extremum"] = n.extremum
        if n.kind == "atom":
            rec["saddles"] = n.saddles
            kid_edges = [visit(c, vid) for c in n.children]
            if n.symmetry == "auto":
                rec["symmetry"] = "auto"
                rec["cyclic_order"] = kid_edges
            elif n.symmetry is not None:
                s = n.symmetry
                rec["symmetry"] = {
                    "m": s["m"],
                    "invariant": [kid_edges[i] for i in s.get("invariant", [])],
                    "orbits": [[kid_edges[i] for i in o] for o in s.get("orbits", [])],
                }
        return f"e{vid[1:]}"

    root = {"id": "v0", "type": "boundary", "f": str(Fraction(root_f))}
    vertices.append(root)
    visit(top, "v0")
    return {"kind": kind, "root": "v0", "vertices": vertices, "edges": edges}


def document(*pieces, genus=None, boundary=None, target="line") -> dict:
    if genus is None:
        chi = sum(1 if p["kind"] == "disk" else 0 for p in pieces)
        # smallest supported surface with matching Euler characteristic when one exists
        genus, boundary = {1: (0, 1), 0: (0, 2)}.get(chi, (1, 1))
    return {"surface": {"genus": genus, "boundary": boundary, "orientable": True, "target": target},
            "pieces": list(pieces)}


def instance(*pieces, **kw) -> ProblemInstance:
    return parse_instance(document(*pieces, **kw))


# -- named desk examples -------------------------------------------------------

def tree_a() -> dict:
    """Two maxima at the same height above one saddle: m = 2."""
    return piece(atom(1, ext(2), ext(2)))


def tree_b() -> dict:
    """Two maxima at different heights: m = 1."""
    return piece(atom(1, ext(2), ext(3)))


def two_piece() -> dict:
    return document(tree_a(), tree_b(), genus=1, boundary=1)


# -- small trees (at most 12 vertices) -------------------------------------------

def small_trees() -> dict:
    """Named pieces covering both base cases, m = 1, m >= 2 (m = 2, 3, 4), explicit
    mixed atoms and nesting up to depth 3."""
    sym2_inv0 = {"m": 2, "invariant": [0], "orbits": [[1, 2]]}
    sym3_inv0 = {"m": 3, "invariant": [0], "orbits": [[1, 2, 3]]}
    pair = lambda f: atom(f, ext(f + 1), ext(f + 1))  # noqa: E731
    return {
        "cylinder_plain": piece(bnd(1)),
        "disk_max": piece(ext(1)),
        "disk_min": piece(ext(-1, "min")),
        "tree_a": tree_a(),
        "tree_b": tree_b(),
        "tree_a_min": piece(atom(2, ext(1, "min"), ext(1, "min")), root_f=3),
        "tree_a_undeclared": piece(atom(1, ext(2), ext(2), symmetry=None)),
        "three_prong": piece(atom(1, ext(2), ext(2), ext(2))),
        "three_prong_min": piece(atom(1, ext(0, "min"), ext(0, "min"), ext(0, "min")), root_f=2),
        "four_prong": piece(atom(1, ext(2), ext(2), ext(2), ext(2))),
        "three_distinct": piece(atom(1, ext(2), ext(3), ext(4))),
        "aab_not_symmetric": piece(atom(1, ext(2), ext(2), ext(3))),
        "abab": piece(atom(1, ext(2), ext(3), ext(2), ext(3))),
        "ababab": piece(atom(1, ext(2), ext(3), ext(2), ext(3), ext(2), ext(3))),
        "max_min": piece(atom(0, ext(1), ext(-1, "min")), root_f=5),
        "cylinder_atom": piece(atom(1, bnd(2), ext(2))),
        "cylinder_m2": piece(atom(1, bnd(3), ext(2), ext(2), symmetry=sym2_inv0)),
        "cylinder_m3": piece(atom(1, bnd(9), ext(2), ext(2), ext(2), symmetry=sym3_inv0)),
        "cylinder_nested": piece(atom(1, bnd(5), pair(2))),
        "disk_mixed_m2": piece(atom(1, ext(5), ext(2), ext(2), symmetry=sym2_inv0)),
        "disk_mixed_nested": piece(atom(1, pair(5), ext(2), ext(2), symmetry=sym2_inv0)),
        "z2_wr_z2": piece(atom(1, pair(2), pair(2))),
        "z2_wr_z3": piece(atom(1, pair(2), pair(2), pair(2))),
        "z3_wr_z2": piece(atom(1, atom(2, ext(3), ext(3), ext(3)), atom(2, ext(3), ext(3), ext(3)))),
        "m1_over_m2": piece(atom(1, pair(2), ext(4))),
        "two_different_pairs": piece(atom(1, pair(2), pair(3))),
        "swap_circles": piece(atom(1, atom(2, ext(3), ext(4)), atom(2, ext(3), ext(4)))),
        "cycle_three_circles": piece(atom(1, *[atom(2, ext(3), ext(4)) for _ in range(3)])),
        "chain_depth3": piece(atom(1, atom(2, pair(3), ext(5)), ext(6))),
        "wreath_depth3": piece(atom(1, atom(2, pair(3), ext(5)), atom(2, pair(3), ext(5)))),
        "multi_saddle_m1": piece(atom(1, ext(2), ext(3), ext(4), saddles=2)),
        "cylinder_chain": piece(atom(1, atom(2, bnd(4), ext(3)), ext(5))),
        "cylinder_deep_pair": piece(atom(1, atom(2, bnd(4), pair(3)), ext(6))),
        "declared_trivial_pair": piece(atom(1, pair(2), pair(2), symmetry={"m": 1, "invariant": [0, 1]})),
    }


# -- random generic trees --------------------------------------------------------

def random_generic_piece(rng: random.Random, n_atoms: int, cylinder: bool = False) -> dict:
    """A piece where every atom has one saddle (two children) and all critical values differ."""
    values = list(range(1, 4 * n_atoms + 8))
    rng.shuffle(values)
    values = iter(values)

    # grow the shape: each atom has two open child slots
    atoms_left = n_atoms

    def grow(depth=0):
        nonlocal atoms_left
        if atoms_left > 0 and (depth == 0 or rng.random() < 0.6):
            atoms_left -= 1
            return ["atom", [None, None]]
        return ["leaf"]

    root_child = grow()
    frontier = [root_child] if root_child[0] == "atom" else []
    while atoms_left > 0 and frontier:
        node = rng.choice(frontier)
        i = rng.randrange(2)
        if node[1][i] is None:
            node[1][i] = ["atom", [None, None]]
            atoms_left -= 1
            frontier.append(node[1][i])
        if all(c is not None for c in node[1]):
            frontier.remove(node)

    leaves = []

    def build(shape):
        if shape is None or shape[0] == "leaf":
            holder = {"f": next(values)}
            leaves.append(holder)
            return holder
        return {"f": next(values), "kids": [build(c) for c in shape[1]]}

    top = build(root_child)
    if cylinder:
        rng.choice(leaves)["boundary"] = True
    root_f = next(values)

    def to_node(h, parent_f):
        if "kids" in h:
            return atom(h["f"], *[to_node(k, h["f"]) for k in h["kids"]])
        if h.get("boundary"):
            return bnd(h["f"])
        return ext(h["f"], "max" if h["f"] > parent_f else "min")

    return piece(to_node(top, root_f), root_f=root_f)


def generic_corpus(count: int = 24, seed: int = 20241017, max_vertices: int = 50) -> list:
    """Seeded generic instances (one to three pieces, trees up to ``max_vertices``)."""
    rng = random.Random(seed)
    docs = []
    for i in range(count):
        npieces = 1 + i % 3
        pieces = []
        for _ in range(npieces):
            cyl = rng.random() < 0.3
            limit = (max_vertices - 2) // 2 - (1 if cyl else 0)
            pieces.append(random_generic_piece(rng, rng.randint(0, limit), cylinder=cyl))
        # ensure the sizes actually reach the upper range
        if i == 0:
            pieces = [random_generic_piece(rng, (max_vertices - 2) // 2)]
        genus, boundary = (0, 1) if npieces == 1 and pieces[0]["kind"] == "disk" else (2, npieces)
        docs.append(document(*pieces, genus=genus, boundary=boundary))
    return docs


def write_corpus(directory) -> list:
    """Write the named desk examples as JSON files; returns the paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "tree_a.json": document(tree_a()),
        "tree_b.json": document(tree_b()),
        "two_piece.json": two_piece(),
        "z2_wr_z2.json": document(small_trees()["z2_wr_z2"]),
        "swap_circles.json": document(small_trees()["swap_circles"]),
        "cylinder_m3.json": document(small_trees()["cylinder_m3"]),
        "z2_wr_z3.json": document(small_trees()["z2_wr_z3"]),
        "generic_50.json": generic_corpus(1)[0],
    }
    paths = []
    for name, doc in files.items():
        path = out / name
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        paths.append(path)
    return paths
