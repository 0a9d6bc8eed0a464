"""Finite carriers, posets, finite functions, and table-given semirings.

Everything downstream enumerates over these. All values are immutable after
construction; set-like data is kept sorted by carrier declaration order so
serializations are canonical and diffable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CarrierMismatch, UnknownElement


def transitive_closure(pairs):
    """Transitive closure of a set of (a, b) pairs."""
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    closure = set()
    for start in succ:
        seen = set()
        stack = list(succ[start])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(succ.get(node, ()))
        closure.update((start, b) for b in seen)
    return closure


@dataclass(frozen=True)
class PosetReport:
    ok: bool
    irreflexive_violations: tuple = ()
    transitivity_violations: tuple = ()
    cycles: tuple = ()

    def __str__(self):
        if self.ok:
            return "poset: OK"
        parts = []
        if self.cycles:
            parts.append(f"cycles at {list(self.cycles)}")
        if self.irreflexive_violations:
            parts.append(f"reflexive pairs {list(self.irreflexive_violations)}")
        if self.transitivity_violations:
            parts.append(f"missing transitive pairs {list(self.transitivity_violations)}")
        return "poset: " + "; ".join(parts)


def check_poset(order):
    """Check a strict-order relation given as a pair list.

    Reports reflexive pairs, missing transitive pairs, and cycles (elements
    forced reflexive by the closure).
    """
    pairs = set(map(tuple, order))
    refl = tuple(sorted((a, b) for (a, b) in pairs if a == b))
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    missing = tuple(sorted(
        (a, d)
        for a, bs in succ.items()
        for b in bs
        for d in succ.get(b, ())
        if a != d and (a, d) not in pairs))
    closure = transitive_closure(pairs)
    cycles = tuple(sorted({a for (a, b) in closure if a == b}))
    ok = not refl and not missing and not cycles
    return PosetReport(ok, refl, missing, cycles)


@dataclass(frozen=True)
class FiniteCarrier:
    """A finite set of named elements, optionally with a strict order.

    Element names are pairwise distinct; declaration order is canonical. The
    order, when present, is stored transitively closed and irreflexive.
    """

    elements: tuple[str, ...]
    order: frozenset[tuple[str, str]] | None = None

    is_finite = True

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"duplicate element names in {self.elements}")
        if any(not isinstance(e, str) or not e for e in self.elements):
            raise ValueError("element names must be nonempty strings")
        if self.order is not None:
            elems = set(self.elements)
            for a, b in self.order:
                if a not in elems or b not in elems:
                    raise UnknownElement(f"order pair ({a},{b}) outside carrier")
            report = check_poset(self.order)
            if not report.ok:
                raise ValueError(f"carrier order is not a strict order: {report}")
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    @classmethod
    def from_hasse(cls, elements, edges):
        """Build a poset carrier from Hasse-diagram edges (closure computed)."""
        return cls(tuple(elements), frozenset(transitive_closure(set(map(tuple, edges)))))

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(f"{name!r} not in carrier {self.elements}") from None

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.elements)

    def sort_key(self, name):
        return self.index(name)

    def leq(self, a, b):
        """Reflexive order; requires a poset carrier (discrete = equality)."""
        if a == b:
            self.index(a)
            return True
        if self.order is None:
            return False
        return (a, b) in self.order

    def downclose(self, names):
        """Downward closure of a set of names, sorted canonically."""
        down = {x for x in self.elements for y in names if self.leq(x, y)}
        return tuple(sorted(down, key=self.index))

    def sorted_tuple(self, names):
        names = set(names)
        return tuple(sorted(names, key=self.index))


def discrete(*names):
    return FiniteCarrier(tuple(names))


# ---------------------------------------------------------------------------
# lattice utilities over an ordered carrier


def upper_bounds(carrier, names):
    return [u for u in carrier.elements if all(carrier.leq(x, u) for x in names)]


def lub(carrier, names):
    """Least upper bound of a set of names, or None if there is none."""
    ubs = upper_bounds(carrier, names)
    for u in ubs:
        if all(carrier.leq(u, v) for v in ubs):
            return u
    return None


def glb(carrier, names):
    lbs = [l for l in carrier.elements if all(carrier.leq(l, x) for x in names)]
    for l in lbs:
        if all(carrier.leq(m, l) for m in lbs):
            return l
    return None


def bottom(carrier):
    return lub(carrier, ())


def strictly_below(carrier, x):
    return [y for y in carrier.elements if carrier.leq(y, x) and y != x]


def join_irreducibles(carrier):
    """Elements that are not the join of the elements strictly below them.

    The bottom (empty join) is never irreducible.
    """
    bot = bottom(carrier)
    out = []
    for x in carrier.elements:
        if x == bot:
            continue
        if lub(carrier, strictly_below(carrier, x)) != x:
            out.append(x)
    return out


def distributivity_witness(carrier):
    """None if the lattice is distributive, else a witness triple (x, y, z)."""
    elems = carrier.elements
    for x, y, z in itertools.product(elems, repeat=3):
        yz = glb(carrier, (y, z))
        xy = lub(carrier, (x, y))
        xz = lub(carrier, (x, z))
        if None in (yz, xy, xz):
            return (x, y, z)
        lhs = lub(carrier, (x, yz))
        rhs = glb(carrier, (xy, xz))
        if lhs != rhs:
            return (x, y, z)
    return None


def restrict_order(carrier, names):
    """Sub-poset order pairs induced on a subset of the carrier."""
    names = set(names)
    if carrier.order is None:
        return frozenset()
    return frozenset((a, b) for (a, b) in carrier.order if a in names and b in names)


# ---------------------------------------------------------------------------
# finite functions


@dataclass(frozen=True)
class FiniteFunction:
    """A total function between finite carriers, stored as a table."""

    domain: FiniteCarrier
    codomain: FiniteCarrier
    table: tuple[tuple[str, str], ...]
    monotone: bool = False

    def __post_init__(self):
        mapping = dict(self.table)
        if set(mapping) != set(self.domain.elements) or len(mapping) != len(self.table):
            raise ValueError("table is not total on the domain")
        for v in mapping.values():
            self.codomain.index(v)
        canonical = tuple((x, mapping[x]) for x in self.domain.elements)
        object.__setattr__(self, "table", canonical)
        object.__setattr__(self, "_map", dict(canonical))
        if self.monotone and not self.is_monotone_map():
            raise ValueError("function flagged monotone is not monotone")

    @classmethod
    def from_dict(cls, domain, codomain, mapping, monotone=False):
        return cls(domain, codomain, tuple(mapping.items()), monotone)

    @classmethod
    def from_callable(cls, domain, codomain, fn, monotone=False):
        return cls(domain, codomain, tuple((x, fn(x)) for x in domain.elements), monotone)

    def __call__(self, name):
        try:
            return self._map[name]
        except KeyError:
            raise UnknownElement(f"{name!r} not in function domain") from None

    def as_dict(self):
        return dict(self.table)

    def is_monotone_map(self):
        if self.domain.order is None or self.codomain.order is None:
            # discrete domains are trivially monotone targets permitting
            if self.domain.order is None:
                return True
        for a, b in self.domain.order:
            if not self.codomain.leq(self(a), self(b)):
                return False
        return True

    def is_injective(self):
        vals = [v for _, v in self.table]
        return len(set(vals)) == len(vals)


def identity(carrier):
    return FiniteFunction.from_callable(carrier, carrier, lambda x: x)


def compose(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """(f∘g)(x) = f(g(x)); g feeds into f."""
    if g.codomain != f.domain:
        raise CarrierMismatch("compose: codomain of inner != domain of outer")
    return FiniteFunction.from_callable(g.domain, f.codomain, lambda x: f(g(x)))


def all_functions(domain, codomain):
    """All functions domain -> codomain, deterministic order."""
    n = len(domain.elements)
    for images in itertools.product(codomain.elements, repeat=n):
        yield FiniteFunction(domain, codomain, tuple(zip(domain.elements, images)))


# ---------------------------------------------------------------------------
# semirings


@dataclass(frozen=True)
class SemiringSpec:
    """A finite semiring given by total addition/multiplication tables."""

    elements: FiniteCarrier
    plus: tuple[tuple[str, ...], ...]
    times: tuple[tuple[str, ...], ...]
    zero: str
    one: str

    def __post_init__(self):
        n = len(self.elements)
        for name, tab in (("plus", self.plus), ("times", self.times)):
            if len(tab) != n or any(len(row) != n for row in tab):
                raise ValueError(f"{name} table must be {n}x{n}")
            for row in tab:
                for v in row:
                    self.elements.index(v)
        self.elements.index(self.zero)
        self.elements.index(self.one)
        es = self.elements.elements
        object.__setattr__(self, "_add", {
            (a, b): self.plus[i][j]
            for i, a in enumerate(es) for j, b in enumerate(es)})
        object.__setattr__(self, "_mul", {
            (a, b): self.times[i][j]
            for i, a in enumerate(es) for j, b in enumerate(es)})

    def add(self, a, b):
        return self._add[(a, b)]

    def mul(self, a, b):
        return self._mul[(a, b)]


@dataclass(frozen=True)
class SemiringReport:
    ok: bool
    violations: tuple = ()  # (axiom name, witness triple/pair)

    def __str__(self):
        if self.ok:
            return "semiring: OK"
        lines = [f"{axiom}: witness {w}" for axiom, w in self.violations]
        return "semiring violations:\n  " + "\n  ".join(lines)


def check_semiring(spec: SemiringSpec) -> SemiringReport:
    """Exhaustively check every semiring axiom; list violations with witnesses."""
    es = spec.elements.elements
    bad = []
    for a, b, c in itertools.product(es, repeat=3):
        if spec.add(spec.add(a, b), c) != spec.add(a, spec.add(b, c)):
            bad.append(("plus-associative", (a, b, c)))
        if spec.mul(spec.mul(a, b), c) != spec.mul(a, spec.mul(b, c)):
            bad.append(("times-associative", (a, b, c)))
        if spec.mul(a, spec.add(b, c)) != spec.add(spec.mul(a, b), spec.mul(a, c)):
            bad.append(("left-distributive", (a, b, c)))
        if spec.mul(spec.add(a, b), c) != spec.add(spec.mul(a, c), spec.mul(b, c)):
            bad.append(("right-distributive", (a, b, c)))
    for a, b in itertools.product(es, repeat=2):
        if spec.add(a, b) != spec.add(b, a):
            bad.append(("plus-commutative", (a, b)))
    for a in es:
        if spec.add(spec.zero, a) != a or spec.add(a, spec.zero) != a:
            bad.append(("plus-unit", a))
        if spec.mul(spec.one, a) != a or spec.mul(a, spec.one) != a:
            bad.append(("times-unit", a))
        if spec.mul(spec.zero, a) != spec.zero or spec.mul(a, spec.zero) != spec.zero:
            bad.append(("zero-absorbing", a))
    # dedupe, keep first witness per axiom
    seen = {}
    for axiom, w in bad:
        seen.setdefault(axiom, w)
    return SemiringReport(not seen, tuple(seen.items()))


def boolean_semiring():
    """({0,1}, OR, AND)."""
    c = discrete("0", "1")
    return SemiringSpec(c, (("0", "1"), ("1", "1")), (("0", "0"), ("0", "1")), "0", "1")


def f2_semiring():
    """The two-element field ({0,1}, XOR, AND)."""
    c = discrete("0", "1")
    return SemiringSpec(c, (("0", "1"), ("1", "0")), (("0", "0"), ("0", "1")), "0", "1")
