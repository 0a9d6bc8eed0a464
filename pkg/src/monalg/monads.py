"""Concrete finite-carrier monads: units, functorial action, multiplication,
enumeration, sampling, and law checking.

Supported monads: powerset, downset (on finite posets), multiset over a
table-given semiring, distribution (exact rationals), neighbourhood
(double powerset, stored extensionally), and the list monad (unbounded in
arithmetic, bounded for enumeration).

Values of T(TX) are represented over a *reified* carrier whose elements are
canonical labels of TX values; `Reified` keeps the decode table. All
operations are pure and return canonical values.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .carriers import FiniteCarrier, FiniteFunction, SemiringSpec
from .errors import (CarrierMismatch, ExplosionGuard, MalformedNesting,
                     NotApplicable, UnknownElement)

DEFAULT_MAX_ENUM = 1 << 24

POWERSET_TAG = "powerset"
DOWNSET_TAG = "downset"
MULTISET_TAG = "multiset"
DISTRIBUTION_TAG = "distribution"
NEIGHBOURHOOD_TAG = "neighbourhood"
LIST_TAG = "list"


@dataclass(frozen=True)
class MonadKind:
    tag: str
    semiring: SemiringSpec | None = None
    max_len: int | None = None

    def __post_init__(self):
        if self.tag == MULTISET_TAG and self.semiring is None:
            raise ValueError("multiset monad needs a semiring")
        if self.tag == LIST_TAG and (self.max_len is None or self.max_len < 0):
            raise ValueError("list monad needs an enumeration bound maxLen >= 0")

    def __str__(self):
        if self.tag == MULTISET_TAG:
            return f"multiset({','.join(self.semiring.elements.elements)})"
        if self.tag == LIST_TAG:
            return f"list(maxLen={self.max_len})"
        return self.tag


POWERSET = MonadKind(POWERSET_TAG)
DOWNSET = MonadKind(DOWNSET_TAG)
DISTRIBUTION = MonadKind(DISTRIBUTION_TAG)
NEIGHBOURHOOD = MonadKind(NEIGHBOURHOOD_TAG)


def multiset(semiring: SemiringSpec) -> MonadKind:
    return MonadKind(MULTISET_TAG, semiring=semiring)


def list_monad(max_len: int) -> MonadKind:
    return MonadKind(LIST_TAG, max_len=max_len)


# ---------------------------------------------------------------------------
# canonical values


@dataclass(frozen=True)
class TValue:
    """A canonical element of T X for a concrete monad.

    Payload shapes by tag:
      powerset      tuple of names, sorted by carrier order
      downset       same, downward closed
      multiset      tuple of (name, coefficient-name), zero coefficients omitted
      distribution  tuple of (name, Fraction), positive entries, sum 1
      neighbourhood tuple of subsets (each a sorted tuple), sorted
      list          tuple of names (a word; arbitrary order and repetition)
    """

    monad: MonadKind
    carrier: FiniteCarrier
    payload: tuple

    def label(self) -> str:
        tag = self.monad.tag
        if tag in (POWERSET_TAG, DOWNSET_TAG):
            return "{" + ",".join(self.payload) + "}"
        if tag == MULTISET_TAG:
            if not self.payload:
                return "0"
            return "+".join(f"{x}:{s}" for x, s in self.payload)
        if tag == DISTRIBUTION_TAG:
            return "+".join(f"{x}:{p}" for x, p in self.payload)
        if tag == NEIGHBOURHOOD_TAG:
            return "{" + ",".join("{" + ",".join(s) + "}" for s in self.payload) + "}"
        return "[" + ",".join(self.payload) + "]"

    def __str__(self):
        return self.label()


def _sorted_names(carrier, names):
    out = tuple(sorted(set(names), key=carrier.sort_key))
    return out


def subset_value(monad, carrier, names):
    for x in names:
        if x not in carrier:
            raise UnknownElement(f"{x!r} not in carrier")
    return TValue(monad, carrier, _sorted_names(carrier, names))


def downset_value(monad, carrier, names, close=False):
    names = set(names)
    for x in names:
        if x not in carrier:
            raise UnknownElement(f"{x!r} not in carrier")
    closed = set(carrier.downclose(names))
    if close:
        names = closed
    elif names != closed:
        raise ValueError(f"{sorted(names)} is not downward closed")
    return TValue(monad, carrier, _sorted_names(carrier, names))


def weighting_value(monad, carrier, mapping):
    sr = monad.semiring
    out = []
    for x, s in mapping.items():
        carrier.index(x)
        sr.elements.index(s)
        if s != sr.zero:
            out.append((x, s))
    out.sort(key=lambda p: carrier.sort_key(p[0]))
    return TValue(monad, carrier, tuple(out))


def distribution_value(monad, carrier, mapping):
    out = []
    total = Fraction(0)
    for x, p in mapping.items():
        if x not in carrier:
            raise UnknownElement(f"{x!r} not in carrier")
        p = Fraction(p)
        if p < 0 or p > 1:
            raise ValueError(f"probability {p} outside [0,1]")
        total += p
        if p > 0:
            out.append((x, p))
    if total != 1:
        raise ValueError(f"probabilities sum to {total}, not 1")
    out.sort(key=lambda q: carrier.sort_key(q[0]))
    return TValue(monad, carrier, tuple(out))


def nbhd_value(monad, carrier, subsets):
    canon = set()
    for s in subsets:
        canon.add(_sorted_names(carrier, s))
    # canonical order: by size, then by index vector
    ordered = sorted(canon, key=lambda s: (len(s), tuple(carrier.sort_key(x) for x in s)))
    return TValue(monad, carrier, tuple(ordered))


def word_value(monad, carrier, letters):
    for x in letters:
        carrier.index(x)
    return TValue(monad, carrier, tuple(letters))


def make_value(monad, carrier, raw):
    """Build a canonical TValue from a raw payload of the right shape."""
    tag = monad.tag
    if tag == POWERSET_TAG:
        return subset_value(monad, carrier, raw)
    if tag == DOWNSET_TAG:
        return downset_value(monad, carrier, raw)
    if tag == MULTISET_TAG:
        return weighting_value(monad, carrier, dict(raw))
    if tag == DISTRIBUTION_TAG:
        return distribution_value(monad, carrier, dict(raw))
    if tag == NEIGHBOURHOOD_TAG:
        return nbhd_value(monad, carrier, raw)
    if tag == LIST_TAG:
        return word_value(monad, carrier, raw)
    raise NotApplicable(f"unknown monad tag {tag}")


# ---------------------------------------------------------------------------
# unit, functorial action, Kleisli extension, multiplication


def t_unit(monad, carrier, x) -> TValue:
    tag = monad.tag
    if tag == POWERSET_TAG:
        return subset_value(monad, carrier, (x,))
    if tag == DOWNSET_TAG:
        return downset_value(monad, carrier, (x,), close=True)
    if tag == MULTISET_TAG:
        return weighting_value(monad, carrier, {x: monad.semiring.one})
    if tag == DISTRIBUTION_TAG:
        return distribution_value(monad, carrier, {x: Fraction(1)})
    if tag == NEIGHBOURHOOD_TAG:
        carrier.index(x)
        subsets = tuple(s for s in _canon_subsets(carrier) if x in s)
        return TValue(monad, carrier, subsets)
    if tag == LIST_TAG:
        return word_value(monad, carrier, (x,))
    raise NotApplicable(tag)


def _all_subsets(carrier):
    elems = carrier.elements
    n = len(elems)
    if n > 24:
        raise ExplosionGuard(2 ** n, DEFAULT_MAX_ENUM, "subsets")
    for mask in range(1 << n):
        yield tuple(elems[i] for i in range(n) if mask >> i & 1)


_CANON_SUBSETS_CACHE = {}


def _canon_subsets(carrier):
    """All subsets of a carrier in canonical (size, index-vector) order."""
    key = carrier.elements
    got = _CANON_SUBSETS_CACHE.get(key)
    if got is None:
        got = sorted(_all_subsets(carrier),
                     key=lambda s: (len(s), tuple(carrier.sort_key(x) for x in s)))
        if len(_CANON_SUBSETS_CACHE) > 64:
            _CANON_SUBSETS_CACHE.clear()
        _CANON_SUBSETS_CACHE[key] = got
    return got


def map_named(monad, fn, codomain, tv: TValue) -> TValue:
    """Functorial action along a plain name-to-name function."""
    tag = monad.tag
    if tag == POWERSET_TAG:
        return subset_value(monad, codomain, {fn(x) for x in tv.payload})
    if tag == DOWNSET_TAG:
        return downset_value(monad, codomain, {fn(x) for x in tv.payload}, close=True)
    if tag == MULTISET_TAG:
        sr = monad.semiring
        acc = {}
        for x, s in tv.payload:
            y = fn(x)
            acc[y] = sr.add(acc.get(y, sr.zero), s)
        return weighting_value(monad, codomain, acc)
    if tag == DISTRIBUTION_TAG:
        acc = {}
        for x, p in tv.payload:
            y = fn(x)
            acc[y] = acc.get(y, Fraction(0)) + p
        return distribution_value(monad, codomain, acc)
    if tag == NEIGHBOURHOOD_TAG:
        # Nf(Φ)(φ) = Φ(φ∘f): keep those φ ⊆ codomain whose preimage lies in Φ
        have = set(tv.payload)
        dom = tv.carrier
        images = {x: fn(x) for x in dom.elements}
        out = []
        for phi in _canon_subsets(codomain):
            phiset = set(phi)
            pre = tuple(x for x in dom.elements if images[x] in phiset)
            if pre in have:
                out.append(phi)
        return TValue(monad, codomain, tuple(out))
    if tag == LIST_TAG:
        return word_value(monad, codomain, tuple(fn(x) for x in tv.payload))
    raise NotApplicable(tag)


def t_map(monad, f: FiniteFunction, tv: TValue) -> TValue:
    if tv.carrier != f.domain:
        raise CarrierMismatch("t_map: value not over the function's domain")
    if monad.tag == DOWNSET_TAG and not f.is_monotone_map():
        raise ValueError("downset monad acts on monotone functions only")
    return map_named(monad, f, f.codomain, tv)


def kleisli_ext(monad, kfn, codomain, tv: TValue) -> TValue:
    """μ ∘ T(kfn): extend a map into T(codomain) along the monad."""
    tag = monad.tag
    if tag in (POWERSET_TAG, DOWNSET_TAG):
        acc = set()
        for x in tv.payload:
            acc.update(kfn(x).payload)
        # a union of downsets is already downward closed
        if tag == POWERSET_TAG:
            return subset_value(monad, codomain, acc)
        return downset_value(monad, codomain, acc)
    if tag == MULTISET_TAG:
        sr = monad.semiring
        acc = {}
        for x, s in tv.payload:
            for y, t in kfn(x).payload:
                acc[y] = sr.add(acc.get(y, sr.zero), sr.mul(s, t))
        return weighting_value(monad, codomain, acc)
    if tag == DISTRIBUTION_TAG:
        acc = {}
        for x, p in tv.payload:
            for y, q in kfn(x).payload:
                acc[y] = acc.get(y, Fraction(0)) + p * q
        return distribution_value(monad, codomain, acc)
    if tag == NEIGHBOURHOOD_TAG:
        cache = {x: set(kfn(x).payload) for x in tv.carrier.elements}
        return _nbhd_kleisli(monad, tv.carrier.elements, cache, codomain, tv)
    if tag == LIST_TAG:
        out = []
        for x in tv.payload:
            out.extend(kfn(x).payload)
        return word_value(monad, codomain, tuple(out))
    raise NotApplicable(tag)


def _nbhd_kleisli(monad, dom_elements, payload_sets, codomain, tv):
    """Kleisli extension for the neighbourhood monad with a prebuilt cache.

    result(φ) = Φ({x | φ ∈ payload_sets[x]}); iterating dom_elements in
    carrier order keeps preimages canonical without re-sorting.
    """
    have = set(tv.payload)
    out = []
    for phi in _canon_subsets(codomain):
        pre = tuple(x for x in dom_elements if phi in payload_sets[x])
        if pre in have:
            out.append(phi)
    return TValue(monad, codomain, tuple(out))


class Reified:
    """T X reified as a finite carrier of canonical labels, with decode table.

    `partial` reifications cover only an explicitly given set of values (used
    for sampled law checking when T X is infinite).
    """

    def __init__(self, monad, base, values, partial=False):
        self.monad = monad
        self.base = base
        self.values = tuple(values)
        self.partial = partial
        labels = tuple(v.label() for v in self.values)
        if len(set(labels)) != len(labels):
            raise ValueError("non-canonical duplicate labels in reification")
        order = None
        if monad.tag == DOWNSET_TAG:
            # downsets are inclusion-ordered; T P must itself be a poset
            order = frozenset(
                (a, b)
                for a, va in zip(labels, self.values)
                for b, vb in zip(labels, self.values)
                if a != b and set(va.payload) < set(vb.payload))
        self.carrier = FiniteCarrier(labels, order)
        self._by_label = dict(zip(labels, self.values))

    def decode(self, label) -> TValue:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownElement(f"{label!r} not a reified value") from None

    def label_of(self, tv: TValue) -> str:
        lab = tv.label()
        if lab not in self._by_label:
            raise UnknownElement(f"{lab!r} not in reification")
        return lab

    def __len__(self):
        return len(self.values)


def t_mult(monad, reified: Reified, ttv: TValue) -> TValue:
    """Monad multiplication: flatten a T-value over reified T-values."""
    if ttv.carrier != reified.carrier:
        raise MalformedNesting("outer value is not over the reified T-carrier")
    if ttv.monad != monad or reified.monad != monad:
        raise MalformedNesting("nesting mixes monads")
    return kleisli_ext(monad, reified.decode, reified.base, ttv)


def eta_function(monad, reified: Reified) -> FiniteFunction:
    """η as a finite function base -> reified carrier."""
    return FiniteFunction.from_callable(
        reified.base, reified.carrier,
        lambda x: t_unit(monad, reified.base, x).label())


# ---------------------------------------------------------------------------
# enumeration and sampling


def enumeration_cost(monad, carrier, bound=None):
    """Upper bound on the work enumerate_T will do (guards use this)."""
    n = len(carrier.elements)
    tag = monad.tag
    if tag in (POWERSET_TAG, DOWNSET_TAG):
        return 1 << n
    if tag == MULTISET_TAG:
        return len(monad.semiring.elements) ** n
    if tag == NEIGHBOURHOOD_TAG:
        if n > 10:
            return float("inf")
        return 1 << (1 << n)
    if tag == DISTRIBUTION_TAG:
        if bound is None:
            raise ValueError("distribution enumeration needs a denominator bound")
        return sum(math.comb(d + n - 1, n - 1) for d in range(1, bound + 1))
    if tag == LIST_TAG:
        length = monad.max_len if bound is None else bound
        return sum(n ** k for k in range(length + 1))
    raise NotApplicable(tag)


def enumerate_T(monad, carrier, bound=None, max_enum=DEFAULT_MAX_ENUM):
    """Every canonical TValue within the bound, each once, deterministic order.

    Complete for the finite monads; for distribution `bound` is the maximum
    denominator, for list the maximum word length.
    """
    cost = enumeration_cost(monad, carrier, bound)
    if cost > max_enum:
        raise ExplosionGuard(cost, max_enum, f"T over {len(carrier.elements)} elements")
    return _enumerate(monad, carrier, bound)


def _enumerate(monad, carrier, bound):
    tag = monad.tag
    if tag == POWERSET_TAG:
        for s in _all_subsets(carrier):
            yield TValue(monad, carrier, s)
    elif tag == DOWNSET_TAG:
        for s in _all_subsets(carrier):
            if carrier.downclose(s) == s:
                yield TValue(monad, carrier, s)
    elif tag == MULTISET_TAG:
        sr = monad.semiring
        elems = carrier.elements
        for vals in itertools.product(sr.elements.elements, repeat=len(elems)):
            payload = tuple((x, s) for x, s in zip(elems, vals) if s != sr.zero)
            yield TValue(monad, carrier, payload)
    elif tag == DISTRIBUTION_TAG:
        elems = carrier.elements
        n = len(elems)
        for den in range(1, bound + 1):
            for parts in _compositions(den, n):
                if math.gcd(*parts, den) != 1 and den > 1:
                    continue  # already emitted with a smaller denominator
                payload = tuple((x, Fraction(k, den)) for x, k in zip(elems, parts) if k)
                yield TValue(monad, carrier, payload)
    elif tag == NEIGHBOURHOOD_TAG:
        subsets = _canon_subsets(carrier)
        m = len(subsets)
        for mask in range(1 << m):
            chosen = tuple(subsets[i] for i in range(m) if mask >> i & 1)
            yield TValue(monad, carrier, chosen)
    elif tag == LIST_TAG:
        length = monad.max_len if bound is None else bound
        for k in range(length + 1):
            for word in itertools.product(carrier.elements, repeat=k):
                yield TValue(monad, carrier, word)
    else:
        raise NotApplicable(tag)


def _compositions(total, parts):
    """Weak compositions of `total` into `parts` nonnegative ints, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def reify(monad, base, bound=None, max_enum=DEFAULT_MAX_ENUM) -> Reified:
    return Reified(monad, base, enumerate_T(monad, base, bound, max_enum))


def reify_from_values(monad, base, values) -> Reified:
    """Partial reification from explicit values, sorted by label."""
    dedup = {v.label(): v for v in values}
    ordered = [dedup[k] for k in sorted(dedup)]
    return Reified(monad, base, ordered, partial=True)


def sample_T(monad, carrier, rng: random.Random, den_bound=12, len_bound=None) -> TValue:
    """One pseudo-random canonical TValue (seeded, deterministic)."""
    tag = monad.tag
    elems = carrier.elements
    n = len(elems)
    if tag == POWERSET_TAG:
        mask = rng.getrandbits(n)
        return subset_value(monad, carrier, [elems[i] for i in range(n) if mask >> i & 1])
    if tag == DOWNSET_TAG:
        mask = rng.getrandbits(n)
        return downset_value(
            monad, carrier, [elems[i] for i in range(n) if mask >> i & 1], close=True)
    if tag == MULTISET_TAG:
        sr = monad.semiring
        return weighting_value(
            monad, carrier, {x: rng.choice(sr.elements.elements) for x in elems})
    if tag == DISTRIBUTION_TAG:
        den = rng.randint(1, den_bound)
        counts = {}
        for _ in range(den):
            x = rng.choice(elems)
            counts[x] = counts.get(x, 0) + 1
        return distribution_value(
            monad, carrier, {x: Fraction(k, den) for x, k in counts.items()})
    if tag == NEIGHBOURHOOD_TAG:
        if n <= 12:
            subsets = list(_all_subsets(carrier))
            chosen = [s for s in subsets if rng.random() < 0.5]
            return nbhd_value(monad, carrier, chosen)
        # sparse sampling for large carriers: a few random smallish subsets
        chosen = []
        for _ in range(rng.randint(0, 4)):
            size = rng.randint(0, min(8, n))
            chosen.append(rng.sample(elems, size))
        return nbhd_value(monad, carrier, chosen)
    if tag == LIST_TAG:
        length = rng.randint(0, len_bound if len_bound is not None else monad.max_len)
        return word_value(monad, carrier, tuple(rng.choice(elems) for _ in range(length)))
    raise NotApplicable(tag)


# ---------------------------------------------------------------------------
# law checking


@dataclass
class LawCheck:
    law: str
    mode: str
    instances: int
    counterexamples: list
    note: str = ""

    @property
    def ok(self):
        return not self.counterexamples


@dataclass
class MonadLawReport:
    monad: str
    carrier: tuple
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def __str__(self):
        lines = [f"monad laws for {self.monad} over {list(self.carrier)}:"]
        for c in self.checks:
            status = "OK" if c.ok else f"FAIL {c.counterexamples[:3]}"
            note = f" ({c.note})" if c.note else ""
            lines.append(f"  {c.law}: {status} [{c.mode}, {c.instances} instances]{note}")
        return "\n".join(lines)


def _list_layer_bounds(monad, mode):
    # letters use the monad's own bound; nesting widths shrink to keep the
    # instance count enumerable (certificates state the exact bounds)
    inner = monad.max_len
    if mode == "exhaustive":
        return inner, 2, 2
    return inner, inner, inner


def check_monad_laws(monad, carrier, mode="exhaustive", n=1000, seed=0,
                     den_bound=12, max_enum=DEFAULT_MAX_ENUM) -> MonadLawReport:
    """Verify both unit laws on TX and associativity on T³X.

    Exhaustive mode enumerates everything under the ceiling; the
    neighbourhood monad's T³X is never enumerable, so associativity is
    discharged by extensionality over T²X (see the certificate note), plus a
    seeded sampled cross-check of the generic composite route. Sampled mode
    draws seeded random elements; the distribution monad is always sampled
    over a denominator grid.
    """
    checks = []
    tag = monad.tag
    sampled = mode != "exhaustive" or tag == DISTRIBUTION_TAG
    rng = random.Random(seed)

    inner_bound = den_bound if tag == DISTRIBUTION_TAG else None
    list_inner = list_mid = list_outer = None
    if tag == LIST_TAG:
        list_inner, list_mid, list_outer = _list_layer_bounds(monad, mode)
        inner_bound = list_inner

    if sampled:
        mode_desc = f"sampled(n={n}, seed={seed})"
        if tag == DISTRIBUTION_TAG:
            mode_desc += f", denominators<={den_bound}"
        infinite = tag in (DISTRIBUTION_TAG, LIST_TAG)
        full1 = full2 = None
        if not infinite:
            full1 = reify(monad, carrier, None, max_enum)
            full2 = reify(monad, full1.carrier, None, max_enum)
        unit_bad, unit_count = [], 0
        assoc_bad, assoc_count = [], 0
        for _ in range(n):
            t = sample_T(monad, carrier, rng, den_bound, list_inner)
            r1 = full1 if full1 is not None else _local_reified(
                monad, carrier, [t], rng, den_bound, list_inner)
            unit_count += 1
            if not _unit_laws_hold(monad, r1, t):
                unit_bad.append(t.label())
        checks.append(LawCheck("unit laws", mode_desc, unit_count, unit_bad))
        for _ in range(n):
            bad = _sampled_assoc_instance(monad, carrier, rng, den_bound,
                                          (list_inner, list_mid, list_outer),
                                          full1, full2)
            assoc_count += 1
            if bad is not None:
                assoc_bad.append(bad)
        checks.append(LawCheck("associativity", mode_desc, assoc_count, assoc_bad))
        return MonadLawReport(str(monad), carrier.elements, checks)

    # exhaustive
    r1 = reify(monad, carrier, inner_bound, max_enum)
    unit_bad = []
    for t in r1.values:
        if not _unit_laws_hold(monad, r1, t):
            unit_bad.append(t.label())
    checks.append(LawCheck("unit laws", "exhaustive", len(r1.values), unit_bad,
                           _bound_note(monad, list_inner)))

    if tag == NEIGHBOURHOOD_TAG:
        checks.append(_nbhd_assoc_extensional(monad, carrier, r1, max_enum))
        checks.append(_nbhd_assoc_sampled_cross(monad, carrier, r1, seed,
                                                n=3 if len(carrier) else 50))
    else:
        # middle flattenings of bounded lists can exceed the inner bound, so
        # μ-images live in a larger reification of TX
        r1mu = r1
        if tag == LIST_TAG:
            r1mu = reify(monad, carrier, list_inner * list_mid, max_enum)
        r2 = reify(monad, r1.carrier, list_mid, max_enum)
        mu21 = {v2.label(): t_mult(monad, r1, v2).label() for v2 in r2.values}
        assoc_bad = []
        count = 0
        for psi in enumerate_T(monad, r2.carrier, list_outer, max_enum):
            count += 1
            side1 = t_mult(monad, r1mu,
                           map_named(monad, mu21.__getitem__, r1mu.carrier, psi))
            side2 = t_mult(monad, r1, t_mult(monad, r2, psi))
            if side1 != side2:
                assoc_bad.append(psi.label())
        note = _bound_note(monad, list_inner, list_mid, list_outer)
        checks.append(LawCheck("associativity", "exhaustive", count, assoc_bad, note))
    return MonadLawReport(str(monad), carrier.elements, checks)


def _bound_note(monad, *bounds):
    if monad.tag == LIST_TAG:
        shown = [b for b in bounds if b is not None]
        return "bounded: layer lengths <= " + ",".join(map(str, shown))
    if monad.tag == DISTRIBUTION_TAG:
        return "denominator grid"
    return ""


def _unit_laws_hold(monad, r1, t):
    lab = r1.label_of(t)
    via_eta_T = t_mult(monad, r1, t_unit(monad, r1.carrier, lab))
    eta = lambda x: t_unit(monad, r1.base, x).label()
    via_T_eta = t_mult(monad, r1, map_named(monad, eta, r1.carrier, t))
    return via_eta_T == t and via_T_eta == t


def _local_reified(monad, carrier, needed, rng, den_bound, len_bound):
    """Reification covering `needed` values (full when cheap, partial else)."""
    if monad.tag in (DISTRIBUTION_TAG, LIST_TAG):
        extra = [sample_T(monad, carrier, rng, den_bound, len_bound) for _ in range(3)]
        want = list(needed) + extra
        for v in needed:
            for x in _support_names(v):
                want.append(t_unit(monad, carrier, x))
        return reify_from_values(monad, carrier, want)
    return reify(monad, carrier)


def _support_names(tv):
    tag = tv.monad.tag
    if tag in (POWERSET_TAG, DOWNSET_TAG, LIST_TAG):
        return set(tv.payload)
    if tag in (MULTISET_TAG, DISTRIBUTION_TAG):
        return {x for x, _ in tv.payload}
    return {x for s in tv.payload for x in s}


def _sampled_assoc_instance(monad, carrier, rng, den_bound, list_bounds,
                            full1=None, full2=None):
    """Build one random T³X element and compare both associativity sides."""
    inner_b, mid_b, outer_b = list_bounds if monad.tag == LIST_TAG else (None,) * 3
    if full1 is not None:
        r1, r2 = full1, full2
        psi = sample_T(monad, r2.carrier, rng, den_bound)
    else:
        level1 = [sample_T(monad, carrier, rng, den_bound, inner_b) for _ in range(4)]
        r1 = reify_from_values(monad, carrier, level1)
        level2 = [sample_T(monad, r1.carrier, rng, den_bound, mid_b) for _ in range(4)]
        r2 = reify_from_values(monad, r1.carrier, level2)
        psi = sample_T(monad, r2.carrier, rng, den_bound, outer_b)
    mu21 = lambda lab: t_mult(monad, r1, r2.decode(lab)).label()
    # both paths end over the base carrier; partial reifications may miss the
    # μ-image of a sampled value, so extend r1 on demand
    try:
        mapped = map_named(monad, mu21, r1.carrier, psi)
    except UnknownElement:
        flat = {lab: t_mult(monad, r1, r2.decode(lab)) for lab in _support_names(psi)}
        r1b = reify_from_values(monad, carrier, list(r1.values) + list(flat.values()))
        mapped = map_named(monad, lambda l: flat[l].label(), r1b.carrier, psi)
        side1 = t_mult(monad, r1b, mapped)
        side2 = t_mult(monad, r1b, _recarrier(t_mult(monad, r2, psi), r1b.carrier))
        return None if side1 == side2 else psi.label()
    side1 = t_mult(monad, r1, mapped)
    side2 = t_mult(monad, r1, t_mult(monad, r2, psi))
    return None if side1 == side2 else psi.label()


def _recarrier(tv, carrier):
    """Reinterpret a value over a compatible carrier with the same labels."""
    return make_value(tv.monad, carrier, _raw_payload(tv))


def _raw_payload(tv):
    tag = tv.monad.tag
    if tag in (MULTISET_TAG, DISTRIBUTION_TAG):
        return dict(tv.payload)
    return tv.payload


def _nbhd_assoc_extensional(monad, carrier, r1, max_enum):
    """Associativity for the neighbourhood monad, exhaustively.

    Both composites T³X -> TX send Ψ to Ψ evaluated at a predicate on T²X;
    two such evaluation maps agree on every Ψ iff the predicates are equal.
    Checking predicate equality over all Φ ∈ T²X and all φ ⊆ X therefore
    covers all of T³X without enumerating it.
    """
    bad = []
    count = 0
    base_subsets = _canon_subsets(carrier)
    # the unit-at-φ neighbourhood, computed independently of the μ machinery;
    # r1.values are already in carrier order, so the tuples are canonical
    eta_of = {phi: tuple(v.label() for v in r1.values if phi in set(v.payload))
              for phi in base_subsets}
    cache = {lab: set(v.payload) for lab, v in zip(r1.carrier.elements, r1.values)}
    dom = r1.carrier.elements
    for Phi in enumerate_T(monad, r1.carrier, None, max_enum):
        flat = set(_nbhd_kleisli(monad, dom, cache, r1.base, Phi).payload)
        members = set(Phi.payload)
        for phi in base_subsets:
            count += 1
            if (phi in flat) != (eta_of[phi] in members):
                bad.append((Phi.label(), phi))
    note = ("extensionality reduction: T³X is not enumerable; predicate "
            "equality checked over all T²X x subsets of X")
    return LawCheck("associativity", "exhaustive", count, bad, note)


def _nbhd_assoc_sampled_cross(monad, carrier, r1, seed, n=3):
    """Exercise the generic 3-level composite path on a few random T³X values.

    The exhaustive claim is carried by the extensionality check; this only
    cross-checks that the generic route agrees on sampled instances.
    """
    rng = random.Random(seed)
    r2 = reify(monad, r1.carrier)
    mu21 = {v2.label(): t_mult(monad, r1, v2).label() for v2 in r2.values}
    bad = []
    for _ in range(n):
        psi = sample_T(monad, r2.carrier, rng)
        side1 = t_mult(monad, r1, map_named(monad, mu21.__getitem__, r1.carrier, psi))
        side2 = t_mult(monad, r1, t_mult(monad, r2, psi))
        if side1 != side2:
            bad.append(psi.label())
    return LawCheck("associativity (generic route)", f"sampled(n={n}, seed={seed})",
                    n, bad, "cross-check of the composite path on random T³X")
