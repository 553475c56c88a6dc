"""Group expressions and exact element arithmetic.

Source groups (pi_0 of stabilizers) are built from ``Trivial``, ``FreeZ``,
``Product`` and ``WreathOverZ``; target groups (finite groups of Reeb graph
automorphisms) from ``Trivial``, ``Product`` and ``WreathCyclic``.  The cyclic
group Z_m is ``WreathCyclic(Trivial(), m)``.

Elements are plain hashable values whose shape mirrors the expression:

    Trivial              ()
    FreeZ                int
    Product              tuple, one entry per factor
    WreathOverZ(S, m)    WreathElement(fn, k), fn a length-m tuple of S-elements, k in Z
    WreathCyclic(G, m)   WreathElement(fn, k), k reduced mod m

Multiplication in both wreath flavours is

    (a, k) (b, l) = (c, k + l),   c(s) = a(s + l mod m) * b(s).
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import CapExceeded, NotAPieceGroup, ShapeMismatch

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class Trivial:
    def __str__(self):
        return "Triv"


@dataclass(frozen=True)
class FreeZ:
    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("Product needs at least one factor; use Trivial() for the empty product")

    def __str__(self):
        return "Prod(" + ", ".join(map(str, self.factors)) + ")"


@dataclass(frozen=True)
class WreathOverZ:
    inner: object
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("wreath over Z needs m >= 2")

    def __str__(self):
        return f"Wr({self.inner}, {self.m})"


@dataclass(frozen=True)
class WreathCyclic:
    inner: object
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("wreath with Z_m needs m >= 2")

    def __str__(self):
        return f"WrC({self.inner}, {self.m})"


class WreathElement(NamedTuple):
    fn: tuple
    k: int


def cyclic(m: int):
    """Z_m as a target expression (the trivial group for m = 1)."""
    return Trivial() if m == 1 else WreathCyclic(Trivial(), m)


def cyclic_element(m: int, k: int):
    return () if m == 1 else WreathElement(((),) * m, k % m)


def prod(factors: Iterable):
    """Flattened product: nested Products are spliced in, Trivial factors dropped,
    and the empty product is Trivial."""
    out = []
    for f in factors:
        if isinstance(f, Product):
            out.extend(f.factors)
        elif not isinstance(f, Trivial):
            out.append(f)
    return Product(tuple(out)) if out else Trivial()


def is_finite(expr) -> bool:
    if isinstance(expr, Trivial):
        return True
    if isinstance(expr, FreeZ | WreathOverZ):
        return False
    if isinstance(expr, Product):
        return all(is_finite(f) for f in expr.factors)
    if isinstance(expr, WreathCyclic):
        return is_finite(expr.inner)
    raise TypeError(f"not a group expression: {expr!r}")


# -- shape checking -----------------------------------------------------------

def conforms(expr, a) -> bool:
    if isinstance(expr, Trivial):
        return a == ()
    if isinstance(expr, FreeZ):
        return isinstance(a, int) and not isinstance(a, bool)
    if isinstance(expr, Product):
        return (isinstance(a, tuple) and not isinstance(a, WreathElement)
                and len(a) == len(expr.factors)
                and all(conforms(f, x) for f, x in zip(expr.factors, a)))
    if isinstance(expr, WreathOverZ | WreathCyclic):
        if not (isinstance(a, WreathElement) and isinstance(a.fn, tuple) and len(a.fn) == expr.m
                and isinstance(a.k, int) and not isinstance(a.k, bool)):
            return False
        if isinstance(expr, WreathCyclic) and not 0 <= a.k < expr.m:
            return False
        return all(conforms(expr.inner, x) for x in a.fn)
    raise TypeError(f"not a group expression: {expr!r}")


def check(expr, *elements):
    for a in elements:
        if not conforms(expr, a):
            raise ShapeMismatch(f"{a!r} is not an element of {expr}")


# -- arithmetic ---------------------------------------------------------------

def identity(expr):
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, FreeZ):
        return 0
    if isinstance(expr, Product):
        return tuple(identity(f) for f in expr.factors)
    if isinstance(expr, WreathOverZ | WreathCyclic):
        return WreathElement((identity(expr.inner),) * expr.m, 0)
    raise TypeError(f"not a group expression: {expr!r}")


def _mul(expr, a, b):
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, FreeZ):
        return a + b
    if isinstance(expr, Product):
        return tuple(_mul(f, x, y) for f, x, y in zip(expr.factors, a, b))
    m = expr.m
    inner = expr.inner
    fn = tuple(_mul(inner, a.fn[(s + b.k) % m], b.fn[s]) for s in range(m))
    k = a.k + b.k
    if isinstance(expr, WreathCyclic):
        k %= m
    return WreathElement(fn, k)


def _inv(expr, a):
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, FreeZ):
        return -a
    if isinstance(expr, Product):
        return tuple(_inv(f, x) for f, x in zip(expr.factors, a))
    m = expr.m
    fn = tuple(_inv(expr.inner, a.fn[(s - a.k) % m]) for s in range(m))
    k = -a.k % m if isinstance(expr, WreathCyclic) else -a.k
    return WreathElement(fn, k)


def mul(expr, a, b, validate=True):
    # validate=False skips the shape check for hot loops over known elements
    if validate:
        check(expr, a, b)
    return _mul(expr, a, b)


def inverse(expr, a, validate=True):
    if validate:
        check(expr, a)
    return _inv(expr, a)


def power(expr, a, n: int):
    check(expr, a)
    if n < 0:
        a, n = _inv(expr, a), -n
    result = identity(expr)
    while n:
        if n & 1:
            result = _mul(expr, result, a)
        a = _mul(expr, a, a)
        n >>= 1
    return result


def element_order(expr, a, limit=None) -> int:
    e = identity(expr)
    x, n = a, 1
    while x != e:
        x = _mul(expr, x, a)
        n += 1
        if limit is not None and n > limit:
            raise ValueError(f"element {a!r} has order > {limit}")
    return n


# -- finite groups ------------------------------------------------------------

def order(expr) -> int:
    if isinstance(expr, Trivial):
        return 1
    if isinstance(expr, Product):
        return math.prod(order(f) for f in expr.factors)
    if isinstance(expr, WreathCyclic):
        return order(expr.inner) ** expr.m * expr.m
    raise ValueError(f"{expr} is infinite")


def enumerate_group(expr, cap: int = DEFAULT_CAP) -> Iterator:
    """All elements of a finite expression, each once, identity first."""
    n = order(expr)
    if n > cap:
        raise CapExceeded(n, cap)
    return _elements(expr)


def _elements(expr) -> Iterator:
    if isinstance(expr, Trivial):
        yield ()
    elif isinstance(expr, Product):
        yield from itertools.product(*(list(_elements(f)) for f in expr.factors))
    elif isinstance(expr, WreathCyclic):
        inner = list(_elements(expr.inner))
        for k in range(expr.m):
            for fn in itertools.product(inner, repeat=expr.m):
                yield WreathElement(fn, k)
    else:
        raise ValueError(f"{expr} is infinite")


def generators(expr) -> list:
    """A generating set read off the expression: factor generators embedded in
    products; for a wreath, the shift plus the inner generators at slot 0."""
    if isinstance(expr, Trivial):
        return []
    if isinstance(expr, FreeZ):
        return [1]
    if isinstance(expr, Product):
        ids = [identity(f) for f in expr.factors]
        gens = []
        for i, f in enumerate(expr.factors):
            for g in generators(f):
                gens.append(tuple(ids[:i]) + (g,) + tuple(ids[i + 1:]))
        return gens
    e = identity(expr.inner)
    gens = [WreathElement((e,) * expr.m, 1)]
    for g in generators(expr.inner):
        gens.append(WreathElement((g,) + (e,) * (expr.m - 1), 0))
    return gens


def source_box(expr, values: Sequence[int]) -> Iterator:
    """Elements of a (possibly infinite) source group whose integer entries,
    including every wreath shift, are drawn from ``values``."""
    if isinstance(expr, Trivial):
        yield ()
    elif isinstance(expr, FreeZ):
        yield from values
    elif isinstance(expr, Product):
        yield from itertools.product(*(list(source_box(f, values)) for f in expr.factors))
    elif isinstance(expr, WreathOverZ | WreathCyclic):
        inner = list(source_box(expr.inner, values))
        ks = range(expr.m) if isinstance(expr, WreathCyclic) else values
        for k in ks:
            for fn in itertools.product(inner, repeat=expr.m):
                yield WreathElement(fn, k)
    else:
        raise TypeError(f"not a group expression: {expr!r}")


# -- invariants of an abstract finite group -----------------------------------

def _closure(gens, mul, e) -> set:
    """Subgroup generated by ``gens`` (finite ambient group)."""
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def order_histogram(elements: Sequence, mul: Callable, e) -> dict:
    hist = Counter()
    for a in elements:
        x, n = a, 1
        while x != e:
            x = mul(x, a)
            n += 1
        hist[n] += 1
    return dict(sorted(hist.items()))


def abelian_invariants(elements: Sequence, mul: Callable, e) -> list:
    """Invariant factors of G/[G,G] computed from a multiplication callback.

    Works on any finite group given by its element list; it does not look at
    how the group was constructed.
    """
    elements = list(elements)
    inv = {}
    for a in elements:
        if a in inv:
            continue
        x = a
        while mul(x, a) != e:
            x = mul(x, a)
        # x = a^(n-1)
        inv[a] = x
        inv[x] = a

    # greedy generating set
    gens, sub = [], {e}
    for a in elements:
        if a not in sub:
            gens.append(a)
            sub = _closure(gens, mul, e)

    comms = {mul(mul(inv[a], inv[b]), mul(a, b)) for a in gens for b in gens}
    K = _closure(list(comms), mul, e)
    while True:
        conj = {mul(mul(inv[g], k), g) for g in gens for k in K}
        if conj <= K:
            break
        K = _closure(list(K | conj), mul, e)

    # coset representatives and element orders in the quotient
    coset_of = {}
    reps = []
    for a in elements:
        if a in coset_of:
            continue
        reps.append(a)
        for k in K:
            coset_of[mul(a, k)] = a
    qorders = []
    for a in reps:
        x, n = a, 1
        while x not in K:
            x = mul(x, a)
            n += 1
        qorders.append(n)
    return invariant_factors_from_orders(qorders)


def invariant_factors_from_orders(orders: Sequence[int]) -> list:
    """Invariant factors of a finite abelian group from the multiset of its element orders."""
    size = len(orders)
    if size == 1:
        return []
    primes = sorted({p for p in _prime_factors(size)})
    # per prime: list of exponents of cyclic p-primary factors
    parts = {}
    for p in primes:
        # N(k) = #{x : p^k x = 0} = p^(sum_i min(k, e_i))
        logs = [0]
        k = 1
        while True:
            nk = sum(1 for o in orders if (p ** k) % o == 0)
            logs.append(_ilog(nk, p))
            if nk == _p_part(size, p):
                break
            k += 1
        # number of e_i >= k is logs[k] - logs[k-1]
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        exps = []
        for k, cnt in enumerate(ge, start=1):
            nxt = ge[k] if k < len(ge) else 0
            exps.extend([k] * (cnt - nxt))
        parts[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in parts.values())
    factors = []
    for i in range(width):
        d = 1
        for p, exps in parts.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return sorted(factors)


def _prime_factors(n: int) -> list:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _p_part(n: int, p: int) -> int:
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def _ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def abelianization(expr, cap: int = DEFAULT_CAP) -> list:
    elems = list(enumerate_group(expr, cap))
    return abelian_invariants(elems, lambda a, b: _mul(expr, a, b), identity(expr))


def histogram(expr, cap: int = DEFAULT_CAP) -> dict:
    elems = list(enumerate_group(expr, cap))
    return order_histogram(elems, lambda a, b: _mul(expr, a, b), identity(expr))


# -- structural homomorphisms -------------------------------------------------

def target_of(source):
    """The finite target shape paired with a source shape: Z factors are killed,
    wreaths over Z become wreaths with Z_m."""
    if isinstance(source, Trivial | FreeZ):
        return Trivial()
    if isinstance(source, WreathOverZ):
        return WreathCyclic(target_of(source.inner), source.m)
    if isinstance(source, Product):
        kept = [target_of(f) for f in source.factors if not isinstance(f, FreeZ)]
        return Product(tuple(kept)) if kept else Trivial()
    raise TypeError(f"not a source expression: {source!r}")


class StructuralHom:
    """The homomorphism lambda-bar between shape-compatible source and target.

    FreeZ goes to the trivial group, products map factorwise (Z factors of a
    product may have no target factor at all), and ``(xi, k)`` in a wreath over
    Z maps to ``(lambda o xi, k mod m)``.
    """

    def __init__(self, source, target):
        self.source = source
        self.target = target
        self._plan = _plan(source, target)

    def __repr__(self):
        return f"StructuralHom({self.source} -> {self.target})"

    def __eq__(self, other):
        return isinstance(other, StructuralHom) and (self.source, self.target) == (other.source, other.target)

    def __hash__(self):
        return hash((self.source, self.target))

    def __call__(self, a):
        check(self.source, a)
        return _apply(self._plan, a)


def _plan(s, t):
    if isinstance(s, FreeZ | Trivial) and isinstance(t, Trivial):
        return ("kill",)
    if isinstance(s, WreathOverZ) and isinstance(t, WreathCyclic) and s.m == t.m:
        return ("wreath", s.m, _plan(s.inner, t.inner))
    if isinstance(s, Product):
        if isinstance(t, Product) and len(t.factors) == len(s.factors):
            return ("prod", [(i, _plan(f, g)) for i, (f, g) in enumerate(zip(s.factors, t.factors))])
        kept = [i for i, f in enumerate(s.factors) if not isinstance(f, FreeZ)]
        if isinstance(t, Trivial) and all(isinstance(s.factors[i], Trivial) for i in kept):
            return ("kill",)
        if isinstance(t, Product) and len(kept) == len(t.factors):
            return ("prod", [(i, _plan(s.factors[i], g)) for i, g in zip(kept, t.factors)])
    raise ShapeMismatch(f"{s} and {t} are not shape-compatible")


def _apply(plan, a):
    tag = plan[0]
    if tag == "kill":
        return ()
    if tag == "prod":
        return tuple(_apply(p, a[i]) for i, p in plan[1])
    _, m, inner = plan
    return WreathElement(tuple(_apply(inner, x) for x in a.fn), a.k % m)


def lambda_eval(hom: StructuralHom, a):
    return hom(a)


def eta(expr, a) -> int:
    """Projection of a piece group element onto its distinguished integer coordinate.

    Piece groups are Products whose last factor is either the Z of a cylinder
    twist (m = 1) or the wreath over Z whose shift k is the coordinate (m >= 2).
    """
    if not isinstance(expr, Product) or not isinstance(expr.factors[-1], FreeZ | WreathOverZ):
        raise NotAPieceGroup(f"{expr} has no distinguished integer coordinate")
    check(expr, a)
    last = a[-1]
    return last if isinstance(expr.factors[-1], FreeZ) else last.k


# -- text form ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(Prod|WrC|Wr|Triv|Z|\d+|[(),])")


def parse_expr(text: str):
    """Inverse of ``str(expr)``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"bad group expression at {text[pos:]!r}")
        tokens.append(mt.group(1))
        pos = mt.end()
    expr, rest = _parse(tokens)
    if rest:
        raise ValueError(f"trailing tokens {rest}")
    return expr


def _parse(tokens):
    head, *rest = tokens
    if head == "Triv":
        return Trivial(), rest
    if head == "Z":
        return FreeZ(), rest
    if head == "Prod":
        if rest[0] != "(":
            raise ValueError("expected (")
        rest = rest[1:]
        factors = []
        while True:
            f, rest = _parse(rest)
            factors.append(f)
            if rest[0] == ")":
                return Product(tuple(factors)), rest[1:]
            if rest[0] != ",":
                raise ValueError("expected , or )")
            rest = rest[1:]
    if head in ("Wr", "WrC"):
        if rest[0] != "(":
            raise ValueError("expected (")
        inner, rest = _parse(rest[1:])
        if rest[0] != "," or not rest[1].isdigit() or rest[2] != ")":
            raise ValueError("expected , m )")
        cls = WreathOverZ if head == "Wr" else WreathCyclic
        return cls(inner, int(rest[1])), rest[3:]
    raise ValueError(f"unexpected token {head!r}")


def pretty(expr) -> str:
    """Human-readable name of a finite group: Z_m, products with ' x ', wreaths with 'wr'."""
    if isinstance(expr, Trivial):
        return "1"
    if isinstance(expr, FreeZ):
        return "Z"
    if isinstance(expr, Product):
        if len(expr.factors) == 1:
            return pretty(expr.factors[0])
        return " x ".join(_wrap(f) for f in expr.factors)
    base = "Z" if isinstance(expr, WreathOverZ) else f"Z_{expr.m}"
    if isinstance(expr.inner, Trivial):
        return base if isinstance(expr, WreathCyclic) else f"1 wr_{expr.m} Z"
    sep = f" wr_{expr.m} " if isinstance(expr, WreathOverZ) else " wr "
    return f"{_wrap(expr.inner)}{sep}{base}"


def _wrap(expr) -> str:
    s = pretty(expr)
    return f"({s})" if " " in s else s


def format_element(expr, a) -> str:
    """Compact text for an element: wreath elements as ``[f0,f1,...;k]``, products as ``(a,b)``."""
    if isinstance(expr, Trivial):
        return "e"
    if isinstance(expr, FreeZ):
        return str(a)
    if isinstance(expr, Product):
        return "(" + ",".join(format_element(f, x) for f, x in zip(expr.factors, a)) + ")"
    if isinstance(expr.inner, Trivial):
        return f"[;{a.k}]"
    return "[" + ",".join(format_element(expr.inner, x) for x in a.fn) + f";{a.k}]"
