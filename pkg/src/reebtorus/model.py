"""Decorated Kronrod-Reeb trees of disk and cylinder pieces, plus the instance file format.

A piece is a rooted tree.  The root is the distinguished boundary circle, it
has exactly one incident edge, and every other vertex is a boundary leaf, a
local extremum leaf or an atom (a critical level-set component carrying one or
more saddles).  Atoms carry symmetry data describing which hanging subtrees are
permuted cyclically by the stabilizer of the function.

All function values are exact :class:`fractions.Fraction` instances.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Hashable, Mapping, Sequence

from .errors import InvariantViolation, SchemaError, UnsupportedSurface

__all__ = [
    "PieceKind", "VertexKind", "ExtremumKind", "Target",
    "SurfaceDescriptor", "AtomSymmetry", "Vertex", "DecoratedReebTree",
    "ProblemInstance", "canonical_code", "detect_symmetry",
    "parse_instance", "load_instance", "serialize_instance", "dump_instance",
    "parse_rational",
]


class PieceKind(enum.Enum):
    DISK = "disk"
    CYLINDER = "cylinder"


class VertexKind(enum.Enum):
    BOUNDARY = "boundary"
    EXTREMUM = "extremum"
    ATOM = "atom"


class ExtremumKind(enum.Enum):
    MIN = "min"
    MAX = "max"


class Target(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"


EULER = {PieceKind.DISK: 1, PieceKind.CYLINDER: 0}


@dataclass(frozen=True)
class SurfaceDescriptor:
    genus: int
    boundary_count: int
    orientable: bool = True
    target: Target = Target.LINE

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    def check_supported(self):
        if not self.orientable:
            raise UnsupportedSurface(
                "non-orientable surfaces are not covered: the homotopy classification requires M orientable")
        if self.boundary_count == 0 and self.genus == 0:
            raise UnsupportedSurface(
                "M = S^2 is excluded: the homotopy classification requires M distinct from the 2-sphere")
        if self.boundary_count == 0 and self.genus == 1:
            raise UnsupportedSurface(
                "M = T^2 is excluded: the homotopy classification requires M distinct from the 2-torus")


@dataclass(frozen=True)
class AtomSymmetry:
    """Cyclic symmetry of an atom.

    ``orbits`` are tuples of exactly ``m`` child edge ids; the rotation sends
    position ``i`` of every orbit to position ``i + 1 mod m``.
    """
    m: int
    invariant: tuple = ()
    orbits: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant", tuple(self.invariant))
        object.__setattr__(self, "orbits", tuple(tuple(o) for o in self.orbits))

    @property
    def members(self) -> list:
        return list(self.invariant) + [e for orb in self.orbits for e in orb]


@dataclass(frozen=True)
class Vertex:
    id: Hashable
    kind: VertexKind
    f: Fraction
    saddles: int | None = None
    extremum: ExtremumKind | None = None
    symmetry: AtomSymmetry | None = None
    # symmetry was requested as "auto" and filled in by detect_symmetry
    auto_symmetry: bool = False
    cyclic_order: tuple | None = None

    @property
    def is_critical(self) -> bool:
        return self.kind is not VertexKind.BOUNDARY


@dataclass(frozen=True)
class DecoratedReebTree:
    """A validated piece tree.  Construction raises :class:`InvariantViolation`
    on any broken invariant and resolves ``auto`` symmetries."""

    kind: PieceKind
    root: Hashable
    vertices: tuple
    edges: tuple  # of (edge id, endpoint, endpoint)

    _vmap: dict = field(init=False, repr=False, compare=False, hash=False)
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)
    _parent: dict = field(init=False, repr=False, compare=False, hash=False)
    _children: dict = field(init=False, repr=False, compare=False, hash=False)
    _codes: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        self._index()
        self._check_local()
        self._resolve_symmetry()
        self._check_symmetry()

    # -- structure -------------------------------------------------------

    def _index(self):
        vmap = {}
        for v in self.vertices:
            if v.id in vmap:
                raise InvariantViolation("unique_vertex_ids", [v.id])
            vmap[v.id] = v
        adj = {vid: [] for vid in vmap}
        seen_edges = set()
        for eid, a, b in self.edges:
            if eid in seen_edges:
                raise InvariantViolation("unique_edge_ids", [eid])
            seen_edges.add(eid)
            for end in (a, b):
                if end not in vmap:
                    raise InvariantViolation("edge_endpoints_exist", [eid, end])
            if a == b:
                raise InvariantViolation("tree", [eid], "self-loop")
            adj[a].append((eid, b))
            adj[b].append((eid, a))
        if self.root not in vmap:
            raise InvariantViolation("root_exists", [self.root])
        if len(self.edges) != len(vmap) - 1:
            raise InvariantViolation(
                "tree", [], f"{len(vmap)} vertices need {len(vmap) - 1} edges, got {len(self.edges)}")

        parent = {self.root: None}
        order = [self.root]
        for vid in order:
            for eid, w in adj[vid]:
                if w not in parent:
                    parent[w] = (eid, vid)
                    order.append(w)
        if len(parent) != len(vmap):
            missing = sorted((v for v in vmap if v not in parent), key=str)
            raise InvariantViolation("tree", missing, "not connected to the root")

        children = {}
        for vid in vmap:
            kids = [(eid, w) for eid, w in adj[vid] if parent[w] == (eid, vid)]
            v = vmap[vid]
            if v.cyclic_order is not None:
                by_edge = dict(kids)
                if Counter(v.cyclic_order) != Counter(list(by_edge)):
                    raise InvariantViolation(
                        "cyclic_order_is_child_permutation", [vid],
                        "cyclic_order must list every child edge exactly once")
                kids = [(e, by_edge[e]) for e in v.cyclic_order]
            children[vid] = kids

        object.__setattr__(self, "_vmap", vmap)
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_parent", parent)
        object.__setattr__(self, "_children", children)
        object.__setattr__(self, "_codes", {})

    def _check_local(self):
        vmap, adj = self._vmap, self._adj
        root = vmap[self.root]
        if root.kind is not VertexKind.BOUNDARY:
            raise InvariantViolation("root_is_boundary", [self.root])
        if len(adj[self.root]) != 1:
            raise InvariantViolation("root_degree_one", [self.root])

        for v in self.vertices:
            deg = len(adj[v.id])
            if v.kind is VertexKind.ATOM:
                if deg < 2:
                    raise InvariantViolation("atom_degree_at_least_two", [v.id])
                if v.saddles is None or v.saddles < 1:
                    raise InvariantViolation("atom_saddle_count_positive", [v.id])
                if v.extremum is not None:
                    raise InvariantViolation("atom_has_no_extremum_kind", [v.id])
            else:
                if deg != 1:
                    raise InvariantViolation("leaf_degree_one", [v.id])
                if v.saddles is not None or v.symmetry is not None or v.auto_symmetry \
                        or v.cyclic_order is not None:
                    raise InvariantViolation("leaf_has_no_atom_data", [v.id])
                if v.kind is VertexKind.EXTREMUM and v.extremum is None:
                    raise InvariantViolation("extremum_kind_declared", [v.id])
                if v.kind is VertexKind.BOUNDARY and v.extremum is not None:
                    raise InvariantViolation("boundary_has_no_extremum_kind", [v.id])

        for eid, a, b in self.edges:
            if vmap[a].f == vmap[b].f:
                raise InvariantViolation("f_strictly_monotone_on_edges", [eid, a, b])

        for v in self.vertices:
            if v.kind is VertexKind.EXTREMUM:
                (_, w), = adj[v.id]
                nb = vmap[w].f
                if v.extremum is ExtremumKind.MAX and not v.f > nb:
                    raise InvariantViolation("max_above_neighbor", [v.id, w])
                if v.extremum is ExtremumKind.MIN and not v.f < nb:
                    raise InvariantViolation("min_below_neighbor", [v.id, w])

        nbound = sum(v.kind is VertexKind.BOUNDARY for v in self.vertices)
        want = 2 if self.kind is PieceKind.CYLINDER else 1
        if nbound != want:
            raise InvariantViolation(
                "boundary_vertex_count", [v.id for v in self.vertices if v.kind is VertexKind.BOUNDARY],
                f"{self.kind.value} piece needs {want} boundary vertices, found {nbound}")

        ext = sum(v.kind is VertexKind.EXTREMUM for v in self.vertices)
        sad = sum(v.saddles for v in self.vertices if v.kind is VertexKind.ATOM)
        if ext - sad != EULER[self.kind]:
            raise InvariantViolation(
                "euler_characteristic", [],
                f"{ext} extrema - {sad} saddles = {ext - sad}, "
                f"but chi({self.kind.value}) = {EULER[self.kind]}")

    def _resolve_symmetry(self):
        resolved = {}
        for vid in self.postorder():
            v = self._vmap[vid]
            if v.kind is not VertexKind.ATOM:
                continue
            if v.auto_symmetry:
                if v.cyclic_order is None:
                    raise InvariantViolation("auto_symmetry_needs_cyclic_order", [vid])
                sym = detect_symmetry([(e, self._code(w)) for e, w in self._children[vid]])
            elif v.symmetry is None:
                # no declaration: no hanging subtree is moved
                sym = AtomSymmetry(1, tuple(e for e, _ in self._children[vid]), ())
            else:
                continue
            resolved[vid] = sym
            # later codes read the resolved symmetry
            self._vmap[vid] = replace(v, symmetry=sym)
        if resolved:
            object.__setattr__(self, "vertices", tuple(self._vmap[v.id] for v in self.vertices))
            self._codes.clear()

    def _check_symmetry(self):
        for v in self.vertices:
            if v.kind is not VertexKind.ATOM:
                continue
            sym = v.symmetry
            kids = dict(self._children[v.id])
            if sym.m < 1:
                raise InvariantViolation("symmetry_m_positive", [v.id])
            if (sym.m == 1) != (len(sym.orbits) == 0):
                raise InvariantViolation(
                    "symmetry_m_one_iff_no_orbits", [v.id],
                    "m >= 2 needs at least one orbit and m = 1 admits none")
            members = sym.members
            if len(members) != len(set(members)) or set(members) != set(kids):
                raise InvariantViolation(
                    "symmetry_partitions_children", [v.id],
                    "invariant children and orbit members must partition the child edges")
            for orb in sym.orbits:
                if len(orb) != sym.m:
                    raise InvariantViolation("orbit_length_is_m", [v.id, *orb])
                codes = {self._code(kids[e]) for e in orb}
                if len(codes) != 1:
                    raise InvariantViolation(
                        "orbit_members_isomorphic", [v.id, *orb],
                        "subtrees in one orbit must have equal canonical codes")

    # -- queries ---------------------------------------------------------

    def vertex(self, vid) -> Vertex:
        return self._vmap[vid]

    def children(self, vid) -> list:
        """Child ``(edge id, vertex id)`` pairs, in cyclic order when one is declared."""
        return list(self._children[vid])

    def parent(self, vid):
        """``(edge id, parent id)`` or ``None`` for the root."""
        return self._parent[vid]

    def edge_child(self, eid):
        for e, a, b in self.edges:
            if e == eid:
                return b if self._parent[b] == (eid, a) else a
        raise KeyError(eid)

    @property
    def top(self):
        """The vertex adjacent to the root."""
        (_, w), = self._adj[self.root]
        return w

    def postorder(self, start=None) -> list:
        start = self.root if start is None else start
        out, stack = [], [(start, False)]
        while stack:
            vid, done = stack.pop()
            if done:
                out.append(vid)
                continue
            stack.append((vid, True))
            for _, w in reversed(self._children[vid]):
                stack.append((w, False))
        return out

    def subtree(self, vid) -> list:
        return self.postorder(vid)

    def _code(self, vid) -> str:
        code = self._codes.get(vid)
        if code is None:
            code = _encode(self, vid)
            self._codes[vid] = code
        return code

    @property
    def euler_characteristic(self) -> int:
        return EULER[self.kind]


def _encode(tree: DecoratedReebTree, vid) -> str:
    v = tree._vmap[vid]
    kids = tree._children[vid]
    f = f"{{{v.f}}}"
    if v.kind is VertexKind.EXTREMUM:
        return f"E{v.extremum.value}{f}"
    if v.kind is VertexKind.BOUNDARY:
        inner = ",".join(tree._code(w) for _, w in kids)
        return f"B{f}({inner})"
    sym = v.symmetry
    by_edge = dict(kids)
    if sym is None:
        inv = sorted(tree._code(w) for _, w in kids)
        orbs = []
        m = 0
    else:
        inv = sorted(tree._code(by_edge[e]) for e in sym.invariant)
        orbs = sorted("(" + ",".join(_min_rotation([tree._code(by_edge[e]) for e in orb])) + ")"
                      for orb in sym.orbits)
        m = sym.m
    return f"A{f}s{v.saddles}m{m}[I:{','.join(inv)}][O:{','.join(orbs)}]"


def _min_rotation(seq: Sequence[str]) -> list:
    n = len(seq)
    return min((list(seq[i:]) + list(seq[:i]) for i in range(n)), default=[])


def canonical_code(tree: DecoratedReebTree, vertex) -> str:
    """Code of the subtree hanging below ``vertex`` (away from the root).

    Equal codes iff there is a root-preserving isomorphism of the subtrees that
    preserves f-values, vertex kinds, saddle counts and symmetry data.
    """
    if vertex not in tree._vmap:
        raise KeyError(vertex)
    return tree._code(vertex)


def detect_symmetry(children_cyclic_order: Sequence[tuple]) -> AtomSymmetry:
    """Maximal rotational symmetry of a cyclically ordered list of ``(edge id, code)``."""
    L = len(children_cyclic_order)
    if L < 1:
        raise ValueError("an atom has at least one child")
    edges = [e for e, _ in children_cyclic_order]
    codes = [c for _, c in children_cyclic_order]
    d0 = next(d for d in range(1, L + 1)
              if all(codes[i] == codes[(i + d) % L] for i in range(L)))
    m = L // d0
    if m == 1:
        return AtomSymmetry(1, tuple(edges), ())
    orbits = tuple(tuple(edges[i + j * d0] for j in range(m)) for i in range(d0))
    return AtomSymmetry(m, (), orbits)


@dataclass(frozen=True)
class ProblemInstance:
    surface: SurfaceDescriptor
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise InvariantViolation("at_least_one_piece")
        self.surface.check_supported()

    @property
    def warnings(self) -> list:
        chi = sum(p.euler_characteristic for p in self.pieces)
        if chi != self.surface.euler_characteristic:
            return [f"piece Euler characteristics sum to {chi}, surface has "
                    f"chi = {self.surface.euler_characteristic} (advisory: pieces may be cut "
                    f"from a larger surface)"]
        return []


# -- document format ----------------------------------------------------------

_TOP_KEYS = {"surface", "pieces"}
_SURFACE_KEYS = {"genus", "boundary", "orientable", "target"}
_PIECE_KEYS = {"kind", "root", "vertices", "edges"}
_VERTEX_KEYS = {"id", "type", "f", "saddles", "extremum", "symmetry", "cyclic_order"}
_SYM_KEYS = {"m", "invariant", "orbits"}
_EDGE_KEYS = {"id", "from", "to"}


def parse_rational(value, where="f") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"{where}: expected an exact rational string like \"3/2\", got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    text = value.strip()
    try:
        num, _, den = text.partition("/")
        q = Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: malformed rational {value!r}") from None
    return q


def _obj(value, keys, where, required=()) -> Mapping:
    if not isinstance(value, Mapping):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(value) - keys
    if unknown:
        raise SchemaError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = [k for k in required if k not in value]
    if missing:
        raise SchemaError(f"{where}: missing field(s) {missing}")
    return value


def _int(value, where, minimum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SchemaError(f"{where}: must be >= {minimum}")
    return value


def _ident(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"{where}: ids are strings or integers, got {value!r}")
    return value


def _list(value, where) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    return value


def _enum(cls, value, where):
    try:
        return cls(value)
    except ValueError:
        choices = "|".join(m.value for m in cls)
        raise SchemaError(f"{where}: expected one of {choices}, got {value!r}") from None


def _parse_vertex(raw, where) -> Vertex:
    raw = _obj(raw, _VERTEX_KEYS, where, required=("id", "type", "f"))
    vid = _ident(raw["id"], f"{where}.id")
    where = f"vertex {vid!r}"
    kind = _enum(VertexKind, raw["type"], f"{where}.type")
    f = parse_rational(raw["f"], f"{where}.f")
    saddles = _int(raw["saddles"], f"{where}.saddles") if "saddles" in raw else None
    extremum = _enum(ExtremumKind, raw["extremum"], f"{where}.extremum") if "extremum" in raw else None
    cyclic = None
    if "cyclic_order" in raw:
        cyclic = tuple(_ident(e, f"{where}.cyclic_order") for e in _list(raw["cyclic_order"], f"{where}.cyclic_order"))
    sym, auto = None, False
    if "symmetry" in raw:
        s = raw["symmetry"]
        if s == "auto":
            auto = True
        else:
            s = _obj(s, _SYM_KEYS, f"{where}.symmetry", required=("m",))
            m = _int(s["m"], f"{where}.symmetry.m")
            inv = tuple(_ident(e, f"{where}.symmetry.invariant")
                        for e in _list(s.get("invariant", []), f"{where}.symmetry.invariant"))
            orbits = tuple(tuple(_ident(e, f"{where}.symmetry.orbits") for e in _list(o, f"{where}.symmetry.orbits"))
                           for o in _list(s.get("orbits", []), f"{where}.symmetry.orbits"))
            sym = AtomSymmetry(m, inv, orbits)
    return Vertex(vid, kind, f, saddles, extremum, sym, auto, cyclic)


def _parse_piece(raw, where) -> DecoratedReebTree:
    raw = _obj(raw, _PIECE_KEYS, where, required=_PIECE_KEYS)
    kind = _enum(PieceKind, raw["kind"], f"{where}.kind")
    root = _ident(raw["root"], f"{where}.root")
    vertices = [_parse_vertex(v, f"{where}.vertices[{i}]")
                for i, v in enumerate(_list(raw["vertices"], f"{where}.vertices"))]
    edges = []
    for i, e in enumerate(_list(raw["edges"], f"{where}.edges")):
        e = _obj(e, _EDGE_KEYS, f"{where}.edges[{i}]", required=_EDGE_KEYS)
        edges.append((_ident(e["id"], f"{where}.edges[{i}].id"),
                      _ident(e["from"], f"{where}.edges[{i}].from"),
                      _ident(e["to"], f"{where}.edges[{i}].to")))
    return kind, root, vertices, edges


def parse_instance(document) -> ProblemInstance:
    """Parse and validate an instance document (JSON text, bytes, or an already-loaded mapping)."""
    if isinstance(document, (str, bytes, bytearray)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from None
    doc = _obj(document, _TOP_KEYS, "document", required=_TOP_KEYS)
    s = _obj(doc["surface"], _SURFACE_KEYS, "surface", required=("genus", "boundary"))
    orientable = s.get("orientable", True)
    if not isinstance(orientable, bool):
        raise SchemaError("surface.orientable: expected a boolean")
    surface = SurfaceDescriptor(
        _int(s["genus"], "surface.genus", 0),
        _int(s["boundary"], "surface.boundary", 0),
        orientable,
        _enum(Target, s.get("target", "line"), "surface.target"),
    )
    raw_pieces = [_parse_piece(p, f"pieces[{i}]") for i, p in enumerate(_list(doc["pieces"], "pieces"))]
    surface.check_supported()
    pieces = [DecoratedReebTree(*raw) for raw in raw_pieces]
    return ProblemInstance(surface, tuple(pieces))


def load_instance(path) -> ProblemInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _fmt_q(q: Fraction) -> str:
    return str(q)


def serialize_vertex(v: Vertex) -> dict:
    out: dict[str, Any] = {"id": v.id, "type": v.kind.value, "f": _fmt_q(v.f)}
    if v.saddles is not None:
        out["saddles"] = v.saddles
    if v.extremum is not None:
        out["extremum"] = v.extremum.value
    if v.auto_symmetry:
        out["symmetry"] = "auto"
    elif v.symmetry is not None:
        out["symmetry"] = {"m": v.symmetry.m,
                           "invariant": list(v.symmetry.invariant),
                           "orbits": [list(o) for o in v.symmetry.orbits]}
    if v.cyclic_order is not None:
        out["cyclic_order"] = list(v.cyclic_order)
    return out


def serialize_tree(tree: DecoratedReebTree) -> dict:
    return {
        "kind": tree.kind.value,
        "root": tree.root,
        "vertices": [serialize_vertex(v) for v in tree.vertices],
        "edges": [{"id": e, "from": a, "to": b} for e, a, b in tree.edges],
    }


def serialize_instance(instance: ProblemInstance) -> dict:
    s = instance.surface
    return {
        "surface": {"genus": s.genus, "boundary": s.boundary_count,
                    "orientable": s.orientable, "target": s.target.value},
        "pieces": [serialize_tree(p) for p in instance.pieces],
    }


def dump_instance(instance: ProblemInstance, indent=2) -> str:
    return json.dumps(serialize_instance(instance), indent=indent)


def tree_from_document(piece: Mapping) -> DecoratedReebTree:
    """Build a single validated piece from its document fragment."""
    return DecoratedReebTree(*_parse_piece(piece, "piece"))
