"""Finite categories, set-valued functors, and Yoneda checks.

A finite category is presented by explicit data: objects, morphisms with
source and target, chosen identities, and a full composition table.
``validate_category`` reports structural gaps and law violations instead
of raising, so broken presentations can be inspected.

Set-valued functors are likewise tabular.  ``enumerate_nat`` lists every
natural transformation between two functors; ``yoneda_check`` verifies,
by exhaustive enumeration, that transformations out of a hom-functor
correspond one to one with elements, and ``representable_iso_check``
decides whether two objects have isomorphic hom-functors and produces the
isomorphism in the category that witnesses it.
"""

from __future__ import annotations


from dataclasses import dataclass
from typing import Mapping, Optional

Obj = str
MorId = str
Elem = str


class FinCatError(Exception):
    """Structural failure while building or using category data."""


class YonedaError(FinCatError):
    """An exhaustive correspondence check failed."""


@dataclass(frozen=True)
class Morphism:
    mid: MorId
    src: Obj
    tgt: Obj


@dataclass(frozen=True, eq=False)
class FinCategory:
    """Tabular category data; validity is checked separately."""

    name: str
    objects: tuple[Obj, ...]
    morphisms: tuple[Morphism, ...]
    identity: Mapping[Obj, MorId]
    composition: Mapping[tuple[MorId, MorId], MorId]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(self.morphisms))
        object.__setattr__(self, "identity", dict(self.identity))
        object.__setattr__(self, "composition", dict(self.composition))
        object.__setattr__(
            self, "_by_id", {m.mid: m for m in self.morphisms})

    def morphism(self, mid: MorId) -> Morphism:
        try:
            return self._by_id[mid]
        except KeyError:
            raise FinCatError(f"no morphism {mid!r}") from None

    def hom(self, a: Obj, b: Obj) -> list[MorId]:
        """Morphisms a -> b, sorted by id."""
        return sorted(m.mid for m in self.morphisms
                      if m.src == a and m.tgt == b)

    def comp(self, g: MorId, f: MorId) -> MorId:
        """g after f."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise FinCatError(f"no composite for ({g!r}, {f!r})") from None


@dataclass(frozen=True)
class CategoryReport:
    structural: tuple[str, ...]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.structural and not self.violations


def validate_category(cat: FinCategory) -> CategoryReport:
    """Structural findings and law violations, deterministically ordered.

    Structural: dangling ids, missing or mistyped identities, missing
    composites for composable pairs, entries for non-composable pairs,
    composites with the wrong endpoints.  Laws (only checked once the
    structure is sound): identity absorption and associativity, checked
    exhaustively over the tables.
    """
    structural: list[str] = []
    ids = [m.mid for m in cat.morphisms]
    if len(set(ids)) != len(ids):
        structural.append("morphism ids are not unique")
    if len(set(cat.objects)) != len(cat.objects):
        structural.append("objects are not unique")
    objset = set(cat.objects)
    for m in cat.morphisms:
        if m.src not in objset:
            structural.append(f"morphism {m.mid} has unknown source {m.src!r}")
        if m.tgt not in objset:
            structural.append(f"morphism {m.mid} has unknown target {m.tgt!r}")
    by_id = {m.mid: m for m in cat.morphisms}
    for a in cat.objects:
        i = cat.identity.get(a)
        if i is None:
            structural.append(f"object {a!r} has no identity")
        elif i not in by_id:
            structural.append(f"identity of {a!r} is an unknown morphism {i!r}")
        elif by_id[i].src != a or by_id[i].tgt != a:
            structural.append(f"identity of {a!r} is not an endomorphism of it")
    for a in cat.identity:
        if a not in objset:
            structural.append(f"identity table keys unknown object {a!r}")
    for (g, f), gf in sorted(cat.composition.items()):
        if g not in by_id or f not in by_id or gf not in by_id:
            structural.append(f"composition entry ({g}, {f}) -> {gf} "
                              f"mentions an unknown morphism")
            continue
        if by_id[f].tgt != by_id[g].src:
            structural.append(f"composition entry ({g}, {f}) is not composable")
        elif by_id[gf].src != by_id[f].src or by_id[gf].tgt != by_id[g].tgt:
            structural.append(
                f"composite of ({g}, {f}) has endpoints "
                f"{by_id[gf].src}->{by_id[gf].tgt}, expected "
                f"{by_id[f].src}->{by_id[g].tgt}")
    for g in cat.morphisms:
        for f in cat.morphisms:
            if f.tgt == g.src and (g.mid, f.mid) not in cat.composition:
                structural.append(
                    f"no composite for composable pair ({g.mid}, {f.mid})")
    if structural:
        return CategoryReport(tuple(sorted(structural)), ())
    violations: list[str] = []
    for f in cat.morphisms:
        left = cat.comp(cat.identity[f.tgt], f.mid)
        if left != f.mid:
            violations.append(f"id . {f.mid} = {left}, expected {f.mid}")
        right = cat.comp(f.mid, cat.identity[f.src])
        if right != f.mid:
            violations.append(f"{f.mid} . id = {right}, expected {f.mid}")
    for h in cat.morphisms:
        for g in cat.morphisms:
            if g.tgt != h.src:
                continue
            for f in cat.morphisms:
                if f.tgt != g.src:
                    continue
                a = cat.comp(cat.comp(h.mid, g.mid), f.mid)
                b = cat.comp(h.mid, cat.comp(g.mid, f.mid))
                if a != b:
                    violations.append(
                        f"associativity fails on ({h.mid}, {g.mid}, {f.mid}): "
                        f"{a} vs {b}")
    return CategoryReport((), tuple(sorted(violations)))


# ---------------------------------------------------------------------------
# set-valued functors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SetFunctor:
    """A functor into finite sets, as tables.

    ``on_objects`` assigns each object a tuple of element names;
    ``on_morphisms`` assigns each morphism a map between the right sets.
    """

    name: str
    cat: FinCategory
    on_objects: Mapping[Obj, tuple[Elem, ...]]
    on_morphisms: Mapping[MorId, Mapping[Elem, Elem]]

    def __post_init__(self):
        object.__setattr__(self, "on_objects",
                           {a: tuple(v) for a, v in self.on_objects.items()})
        object.__setattr__(self, "on_morphisms",
                           {m: dict(v) for m, v in self.on_morphisms.items()})

    def at(self, a: Obj) -> tuple[Elem, ...]:
        try:
            return self.on_objects[a]
        except KeyError:
            raise FinCatError(f"functor {self.name!r} undefined at {a!r}") from None

    def map(self, mid: MorId) -> Mapping[Elem, Elem]:
        try:
            return self.on_morphisms[mid]
        except KeyError:
            raise FinCatError(
                f"functor {self.name!r} undefined on morphism {mid!r}") from None


def validate_functor(F: SetFunctor) -> list[str]:
    """Totality, typing, and the two functor laws; empty when valid."""
    cat = F.cat
    out: list[str] = []
    for a in cat.objects:
        if a not in F.on_objects:
            out.append(f"no value at object {a!r}")
    for m in cat.morphisms:
        if m.mid not in F.on_morphisms:
            out.append(f"no map for morphism {m.mid!r}")
    if out:
        return out
    for m in cat.morphisms:
        fm = F.map(m.mid)
        dom, cod = set(F.at(m.src)), set(F.at(m.tgt))
        if set(fm) != dom:
            out.append(f"map of {m.mid!r} is not total on its domain")
        elif not set(fm.values()) <= cod:
            out.append(f"map of {m.mid!r} leaves its codomain")
    if out:
        return out
    for a in cat.objects:
        i = cat.identity[a]
        if any(F.map(i)[x] != x for x in F.at(a)):
            out.append(f"identity of {a!r} does not act as identity")
    for g in cat.morphisms:
        for f in cat.morphisms:
            if f.tgt != g.src:
                continue
            gf = cat.comp(g.mid, f.mid)
            for x in F.at(f.src):
                if F.map(gf)[x] != F.map(g.mid)[F.map(f.mid)[x]]:
                    out.append(
                        f"composition law fails on ({g.mid}, {f.mid}) at {x!r}")
    return out


def hom_functor(cat: FinCategory, a: Obj) -> SetFunctor:
    """The covariant hom-functor of an object: sets of morphisms out of it.

    Elements at b are the ids of morphisms a -> b; a morphism g acts by
    postcomposition.
    """
    if a not in cat.objects:
        raise FinCatError(f"no object {a!r}")
    on_objects = {b: tuple(cat.hom(a, b)) for b in cat.objects}
    on_morphisms = {}
    for g in cat.morphisms:
        on_morphisms[g.mid] = {f: cat.comp(g.mid, f)
                               for f in on_objects[g.src]}
    return SetFunctor(f"hom({a},-)", cat, on_objects, on_morphisms)


# ---------------------------------------------------------------------------
# natural transformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NatTransformation:
    """A family of maps F(a) -> G(a), natural in a."""

    components: Mapping[Obj, Mapping[Elem, Elem]]

    def __post_init__(self):
        object.__setattr__(self, "components",
                           {a: dict(v) for a, v in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        return self.components == other.components

    def at(self, a: Obj) -> Mapping[Elem, Elem]:
        return self.components[a]

    def encode(self) -> tuple:
        """Canonical encoding used for deterministic ordering."""
        return tuple((a, tuple(sorted(self.components[a].items())))
                     for a in sorted(self.components))


def is_natural(F: SetFunctor, G: SetFunctor, eta: NatTransformation) -> bool:
    """Check every naturality square of eta exhaustively."""
    cat = F.cat
    for m in cat.morphisms:
        for x in F.at(m.src):
            if eta.at(m.tgt)[F.map(m.mid)[x]] != G.map(m.mid)[eta.at(m.src)[x]]:
                return False
    return True


def enumerate_nat(F: SetFunctor, G: SetFunctor) -> list[NatTransformation]:
    """All natural transformations F => G, in canonical encoding order.

    Backtracking over component values with forced-value propagation:
    choosing eta_a(x) forces eta_b(F(g)(x)) = G(g)(eta_a(x)) for every
    g: a -> b, so contradictions prune early.  Complete because every
    slot is eventually assigned and every square relates two slots.
    """
    if F.cat is not G.cat and F.cat.name != G.cat.name:
        raise FinCatError("functors live on different categories")
    cat = F.cat
    slots = [(a, x) for a in sorted(cat.objects) for x in sorted(F.at(a))]
    out_by: dict[Obj, list[Morphism]] = {a: [] for a in cat.objects}
    for m in cat.morphisms:
        out_by[m.src].append(m)

    results: list[NatTransformation] = []

    def propagate(assign: dict, queue: list) -> bool:
        while queue:
            a, x = queue.pop()
            v = assign[(a, x)]
            for m in out_by[a]:
                slot = (m.tgt, F.map(m.mid)[x])
                forced = G.map(m.mid)[v]
                if slot in assign:
                    if assign[slot] != forced:
                        return False
                else:
                    assign[slot] = forced
                    queue.append(slot)
        return True

    def search(assign: dict):
        free = next((s for s in slots if s not in assign), None)
        if free is None:
            results.append(NatTransformation(
                {a: {x: assign[(a, x)] for x in F.at(a)} for a in cat.objects}))
            return
        a, _ = free
        for v in sorted(G.at(a)):
            trial = dict(assign)
            trial[free] = v
            if propagate(trial, [free]):
                search(trial)

    search({})
    results.sort(key=NatTransformation.encode)
    return results


# ---------------------------------------------------------------------------
# Yoneda
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YonedaWitness:
    """The verified correspondence for one object and functor."""

    object: Obj
    functor: str
    pairs: tuple[tuple[tuple, Elem], ...]  # (encoded transformation, element)

    @property
    def count(self) -> int:
        return len(self.pairs)


def yoneda_check(cat: FinCategory, a: Obj, F: SetFunctor) -> YonedaWitness:
    """Verify that transformations hom(a,-) => F match elements of F(a).

    Enumerates all transformations, maps each to its value at the identity
    of a, and checks the assignment is a bijection onto F(a).  Raises
    YonedaError when any count, injectivity, or surjectivity check fails.
    """
    H = hom_functor(cat, a)
    nats = enumerate_nat(H, F)
    ida = cat.identity[a]
    pairs = tuple((eta.encode(), eta.at(a)[ida]) for eta in nats)
    elems = list(F.at(a))
    if len(nats) != len(elems):
        raise YonedaError(
            f"{len(nats)} transformations vs {len(elems)} elements at {a!r}")
    hit = [e for _, e in pairs]
    if len(set(hit)) != len(hit):
        raise YonedaError(f"evaluation at the identity of {a!r} is not injective")
    if set(hit) != set(elems):
        raise YonedaError(f"evaluation at the identity of {a!r} is not surjective")
    return YonedaWitness(a, F.name, pairs)


def representable_iso_check(cat: FinCategory, a: Obj,
                            b: Obj) -> tuple[bool, Optional[tuple[MorId, MorId]]]:
    """Are hom(a,-) and hom(b,-) naturally isomorphic?

    When they are, returns the witnessing isomorphism in the category:
    a pair (f, g) with f: b -> a and g: a -> b composing to identities
    both ways.  The witness is extracted from the natural isomorphism by
    evaluating at identities and verified by direct composition.
    """
    for x in (a, b):
        if x not in cat.objects:
            raise FinCatError(f"no object {x!r}")
    Ha, Hb = hom_functor(cat, a), hom_functor(cat, b)
    forwards = enumerate_nat(Ha, Hb)
    backwards = enumerate_nat(Hb, Ha)
    for eta in forwards:
        for theta in backwards:
            if all(all(theta.at(c)[eta.at(c)[x]] == x for x in Ha.at(c))
                   for c in cat.objects) and \
               all(all(eta.at(c)[theta.at(c)[y]] == y for y in Hb.at(c))
                   for c in cat.objects):
                f = eta.at(a)[cat.identity[a]]      # f: b -> a
                g = theta.at(b)[cat.identity[b]]    # g: a -> b
                if cat.comp(f, g) != cat.identity[a]:
                    raise YonedaError(
                        f"witness pair ({f}, {g}) does not compose to the "
                        f"identity of {a!r}")
                if cat.comp(g, f) != cat.identity[b]:
                    raise YonedaError(
                        f"witness pair ({g}, {f}) does not compose to the "
                        f"identity of {b!r}")
                return True, (f, g)
    return False, None
