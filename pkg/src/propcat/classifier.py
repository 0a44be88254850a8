"""
classifier: the internal-algebra-classifier category built from a morphism of operads
F : S -> T, in symmetric, non-symmetric and braided variants.

For each target colour j, the category has as objects pairs ((i_1, ..., i_n), alpha)
with the i_k colours of S and alpha a T-operation (f i_1, ..., f i_n) -> j.  A morphism
carries an indexing map h (an arbitrary function for the symmetric variant, a monotone
map for the non-symmetric one, an indexing vine for the braided one) together with one
decorating S-operation per target slot whose sources run over the h-fibre in ascending
source order.  The data must satisfy the commutativity condition: composing the target
operation with the F-images of the decorations and acting by the bijective part of the
indexing (the fibre-order-preserving permutation of h's bijective-monotone
factorization, or the fibre-trivial braid of the indexing vine) returns the source
operation.  For a non-symmetric ambient operad there is nothing to act by.

Every morphism factors as (monotone-indexed) ∘ (bijective-indexed, unit-decorated), and
composition is computed through that factorization: the bijective part is pushed past
the monotone part of the next morphism by the chosen-opcartesian square rule
(decorations reindex along the inverse permutation), monotone parts compose slotwise,
and the leftover intra-fibre permutation is absorbed into the decorations by the
S-action.  On monotone-indexed morphisms this reduces to the one-line substitution
formula; the general case is exactly what the corner calculus of the codescent engine
computes, and the two are compared by the acceptance suite.

The tensor of objects concatenates colour sequences and substitutes the given
T-operation; the symmetry components are block permutations with unit decorations.
The universal internal algebra lives on the one-colour objects (i, 1_{fi}) with
structure morphisms indexed by the terminal map and decorated by the operation itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .braids import (
    BraidWord,
    Vine,
    braid_cable,
    braid_compose,
    braid_restrict,
    underlying_perm,
    vine_normalize,
    vine_underlying_fn,
)
from .finmaps import (
    FinFunction,
    MonotoneMap,
    Permutation,
    all_functions,
    all_monotone,
    as_function,
    bij_mon_factorize,
    block_substitute,
    compose as fcompose,
)
from .operads import (
    BRAIDED,
    NONSYMMETRIC,
    SYMMETRIC,
    Operation,
    OperadError,
    OperadMorphism,
)


class ProfileError(ValueError):
    """Misaligned indexing/decoration data (as opposed to a failed condition)."""


@dataclass(frozen=True)
class ClassifierObject:
    """A pair ((i_1, ..., i_n), alpha) with alpha : (f i_k)_k -> j in T."""

    colours: tuple
    op: Operation

    @property
    def size(self) -> int:
        return len(self.colours)

    @property
    def target_colour(self):
        return self.op.target


@dataclass(frozen=True)
class ClassifierMorphism:
    """Indexing map plus one decorating S-operation per target slot."""

    dom: ClassifierObject
    cod: ClassifierObject
    indexing: object  # FinFunction | MonotoneMap | Vine per flavour
    decorations: tuple[Operation, ...]


def _indexing_fn(indexing) -> FinFunction:
    if isinstance(indexing, Vine):
        return vine_underlying_fn(indexing)
    return as_function(indexing)


class Classifier:
    """The classifier category (one fibre per target colour) of an operad morphism."""

    def __init__(self, F: OperadMorphism):
        if F.source.flavour != F.target.flavour:
            raise OperadError("classifier needs source and target of the same flavour")
        self.F = F
        self.S = F.source
        self.T = F.target
        self.flavour = F.source.flavour

    # ------------------------------------------------------------- objects

    def object(self, colours: Sequence, op: Operation) -> ClassifierObject:
        colours = tuple(colours)
        expected = tuple(self.F.colour_map(c) for c in colours)
        if tuple(op.source) != expected:
            raise ProfileError(f"operation source {op.source} != mapped colours {expected}")
        return ClassifierObject(colours, op)

    def objects(self, j, max_size: int) -> list[ClassifierObject]:
        """All objects over target colour j with at most max_size inputs."""
        out = []
        for n in range(max_size + 1):
            for alpha in self.T.ops(j, n):
                pools = [
                    [i for i in self.S.colours if self.F.colour_map(i) == alpha.source[k]]
                    for k in range(n)
                ]
                for colours in itertools.product(*pools):
                    out.append(ClassifierObject(colours, alpha))
        return out

    # ----------------------------------------------------------- morphisms

    def identity(self, obj: ClassifierObject) -> ClassifierMorphism:
        n = obj.size
        if self.flavour == SYMMETRIC:
            indexing = FinFunction.identity(n)
        elif self.flavour == NONSYMMETRIC:
            indexing = MonotoneMap.identity(n)
        else:
            indexing = Vine.identity(n)
        decorations = tuple(self.S.unit(c) for c in obj.colours)
        return ClassifierMorphism(obj, obj, indexing, decorations)

    def _check_profiles(self, m: ClassifierMorphism) -> None:
        fn = _indexing_fn(m.indexing)
        if fn.source != m.dom.size or fn.target != m.cod.size:
            raise ProfileError(
                f"indexing is {fn.source}->{fn.target} between objects of sizes "
                f"{m.dom.size} and {m.cod.size}"
            )
        if len(m.decorations) != m.cod.size:
            raise ProfileError(
                f"{m.cod.size} decorations required, got {len(m.decorations)}"
            )
        for k2, beta in enumerate(m.decorations):
            wanted_src = tuple(m.dom.colours[k1] for k1 in fn.fibre(k2))
            if tuple(beta.source) != wanted_src or beta.target != m.cod.colours[k2]:
                raise ProfileError(
                    f"decoration {k2} has profile {beta.source}->{beta.target}, "
                    f"wanted {wanted_src}->{m.cod.colours[k2]}"
                )
        if isinstance(m.indexing, Vine) and m.indexing.source != m.dom.size:
            raise ProfileError("vine strand count disagrees with the domain size")

    def validate(self, m: ClassifierMorphism) -> bool:
        """
        True iff the commutativity condition holds.  Profile misalignment raises
        ProfileError instead of returning False.
        """
        self._check_profiles(m)
        composite = self.T.compose(m.cod.op, [self.F(beta) for beta in m.decorations])
        if self.flavour == NONSYMMETRIC:
            return composite == m.dom.op
        if self.flavour == SYMMETRIC:
            _, rho = bij_mon_factorize(as_function(m.indexing))
            return self.T.act(composite, rho) == m.dom.op
        return self.T.act(composite, m.indexing.word) == m.dom.op

    def morphism(self, dom, cod, indexing, decorations) -> ClassifierMorphism:
        m = ClassifierMorphism(dom, cod, indexing, tuple(decorations))
        if not self.validate(m):
            raise ProfileError("commutativity condition fails for the given data")
        return m

    # ------------------------------------------------------------- compose

    def compose(self, m1: ClassifierMorphism, m2: ClassifierMorphism) -> ClassifierMorphism:
        """The composite m2 ∘ m1 of m1 : x -> y and m2 : y -> z."""
        if m1.cod != m2.dom:
            raise ProfileError("codomain of the first morphism != domain of the second")
        if self.flavour == NONSYMMETRIC:
            h3 = fcompose(m2.indexing, m1.indexing)
            decorations = self._substitute_decorations(
                m2.indexing, m2.decorations, m1.decorations
            )
            return ClassifierMorphism(m1.dom, m2.cod, h3, decorations)
        if self.flavour == SYMMETRIC:
            return self._compose_symmetric(m1, m2)
        return self._compose_braided(m1, m2)

    def _substitute_decorations(self, h2, B2, B1) -> tuple[Operation, ...]:
        """Decorations of a composite whose first indexing part is monotone/trivial:
        substitute the first morphism's decorations into the second's along h2's
        fibres (ascending).  No reordering is needed in that case."""
        h2fn = _indexing_fn(h2)
        return tuple(
            self.S.compose(B2[k3], [B1[k2] for k2 in h2fn.fibre(k3)])
            for k3 in range(h2fn.target)
        )

    def _compose_symmetric(self, m1, m2) -> ClassifierMorphism:
        h1, h2 = as_function(m1.indexing), as_function(m2.indexing)
        phi1, rho1 = bij_mon_factorize(h1)
        phi2, rho2 = bij_mon_factorize(h2)
        # push the bijective part of m2 past the monotone part of m1:
        # rho2 ∘ phi1 = phi1p ∘ rho2p with decorations reindexed along rho2^{-1}
        phi1p, rho2p = bij_mon_factorize(fcompose(rho2, phi1))
        rho2_inv = rho2.inverse()
        B1p = tuple(m1.decorations[rho2_inv(k)] for k in range(h1.target))
        # monotone parts compose by plain substitution
        C = self._substitute_decorations(phi2, m2.decorations, B1p)
        # total bijective part, and the canonical fibre-order-preserving one
        rho_total = fcompose(rho2p, rho1)
        h3 = fcompose(h2, h1)
        _, rho_h3 = bij_mon_factorize(h3)
        xi = fcompose(rho_total, rho_h3.inverse())
        # xi preserves the fibres of the composite's monotone part; absorb it
        phi3 = fcompose(phi2, phi1p)
        off = phi3.offsets()
        decorations = []
        for k3 in range(phi3.target):
            size = phi3.fibre_sizes[k3]
            xi_k = Permutation(tuple(xi(off[k3] + l) - off[k3] for l in range(size)))
            beta = C[k3] if xi_k.is_identity() else self.S.act(C[k3], xi_k)
            decorations.append(beta)
        return ClassifierMorphism(m1.dom, m2.cod, h3, tuple(decorations))

    def _compose_braided(self, m1, m2) -> ClassifierMorphism:
        v1: Vine = m1.indexing
        v2: Vine = m2.indexing
        phi1, b1 = v1.monotone, v1.word
        phi2, b2 = v2.monotone, v2.word
        # push the braid of m2 past the monotone part of m1 by cabling
        b2p = braid_cable(b2, phi1.fibre_sizes)
        perm2 = underlying_perm(b2)
        perm2_inv = perm2.inverse()
        B1p = tuple(m1.decorations[perm2_inv(k)] for k in range(phi1.target))
        permuted = [0] * v2.source
        for k in range(v2.source):
            permuted[perm2(k)] = phi1.fibre_sizes[k]
        phi1p = MonotoneMap(tuple(permuted))
        C = self._substitute_decorations(phi2, m2.decorations, B1p)
        # total raw braid, then purge the intra-fibre part into the decorations
        b_total = braid_compose(b2p, b1)
        phi3 = fcompose(phi2, phi1p)
        off = phi3.offsets()
        decorations = []
        for k3 in range(phi3.target):
            fibre = [p + 1 for p in phi3.fibre(k3)]
            r_k = braid_restrict(b_total, fibre)
            beta = C[k3] if not r_k.letters else self.S.act(C[k3], r_k)
            decorations.append(beta)
        v3 = vine_normalize(b_total, phi3)
        return ClassifierMorphism(m1.dom, m2.cod, v3, tuple(decorations))

    # -------------------------------------------------- corner factorization

    def twist(self, obj: ClassifierObject, g) -> ClassifierObject:
        """The source object of the bijective-indexed morphism g into obj."""
        if self.flavour == SYMMETRIC:
            perm = g
            acted = self.T.act(obj.op, g)
        else:
            perm = underlying_perm(g)
            acted = self.T.act(obj.op, g)
        colours = tuple(obj.colours[perm(k)] for k in range(obj.size))
        return ClassifierObject(colours, acted)

    def vertical(self, obj: ClassifierObject, g) -> ClassifierMorphism:
        """The bijective-indexed, unit-decorated morphism twist(obj, g) -> obj."""
        dom = self.twist(obj, g)
        decorations = tuple(self.S.unit(c) for c in obj.colours)
        if self.flavour == SYMMETRIC:
            indexing = as_function(g)
        else:
            indexing = vine_normalize(g, MonotoneMap.identity(obj.size))
        return ClassifierMorphism(dom, obj, indexing, decorations)

    def factor_through_corner(
        self, m: ClassifierMorphism
    ) -> tuple[ClassifierMorphism, ClassifierMorphism]:
        """
        Factor m = horizontal ∘ vertical with the vertical bijective-indexed and
        unit-decorated and the horizontal monotone-indexed, per the canonical
        bijective-monotone (resp. vine) factorization of the indexing.
        """
        if self.flavour == NONSYMMETRIC:
            return self.identity(m.dom), m
        if self.flavour == SYMMETRIC:
            phi, rho = bij_mon_factorize(as_function(m.indexing))
            vert = self.vertical(self.twist(m.dom, rho.inverse()), rho)
            mid = vert.cod
            horiz = ClassifierMorphism(mid, m.cod, as_function(phi), m.decorations)
            return vert, horiz
        v: Vine = m.indexing
        vert = self.vertical(self.twist(m.dom, v.word.inverse()), v.word)
        mid = vert.cod
        mono_vine = vine_normalize(BraidWord.empty(mid.size), v.monotone)
        horiz = ClassifierMorphism(mid, m.cod, mono_vine, m.decorations)
        return vert, horiz

    # ------------------------------------------------------------------ hom

    def hom(
        self,
        a: ClassifierObject,
        b: ClassifierObject,
        max_braid_letters: int | None = None,
    ) -> list[ClassifierMorphism]:
        """
        All morphisms a -> b, deterministically ordered.  For the braided variant the
        indexing vines are enumerated only up to the given braid word length, and the
        returned list may therefore be incomplete; the bound is mandatory there.
        """
        if a.target_colour != b.target_colour:
            return []
        out = []
        for indexing in self._indexings(a.size, b.size, max_braid_letters):
            fn = _indexing_fn(indexing)
            pools = []
            for k2 in range(b.size):
                wanted_src = tuple(a.colours[k1] for k1 in fn.fibre(k2))
                pools.append(
                    [
                        op
                        for op in self.S.ops(b.colours[k2], len(wanted_src))
                        if tuple(op.source) == wanted_src
                    ]
                )
            for decorations in itertools.product(*pools):
                m = ClassifierMorphism(a, b, indexing, decorations)
                try:
                    if self.validate(m):
                        out.append(m)
                except ProfileError:
                    continue
        return out

    def _indexings(self, n1: int, n2: int, max_braid_letters: int | None) -> Iterator:
        if self.flavour == SYMMETRIC:
            yield from all_functions(n1, n2)
        elif self.flavour == NONSYMMETRIC:
            yield from all_monotone(n1, n2)
        else:
            if max_braid_letters is None:
                raise ProfileError(
                    "braided hom enumeration needs max_braid_letters (and is then "
                    "complete only up to that word length)"
                )
            seen = set()
            letters_pool = [s * i for i in range(1, n1) for s in (1, -1)]
            for mono in all_monotone(n1, n2):
                for length in range(max_braid_letters + 1):
                    for word in itertools.product(letters_pool, repeat=length):
                        vine = vine_normalize(BraidWord(n1, word), mono)
                        key = (vine.nf, vine.monotone)
                        if key not in seen:
                            seen.add(key)
                            yield vine

    # ------------------------------------------------------------ tensoring

    def tensor_objects(self, gamma: Operation, factors: Sequence[ClassifierObject]) -> ClassifierObject:
        """The tensor of factor objects over the T-operation gamma."""
        if len(factors) != gamma.arity:
            raise ProfileError(f"{gamma.arity} factors required, got {len(factors)}")
        for k, obj in enumerate(factors):
            if obj.target_colour != gamma.source[k]:
                raise ProfileError(f"factor {k} lives over {obj.target_colour!r}")
        colours = tuple(c for obj in factors for c in obj.colours)
        op = self.T.compose(gamma, [obj.op for obj in factors])
        return ClassifierObject(colours, op)

    def tensor_morphisms(self, gamma: Operation, factors: Sequence[ClassifierMorphism]) -> ClassifierMorphism:
        """The tensor of factor morphisms over gamma: ordinal sum of indexings,
        concatenation of decorations."""
        dom = self.tensor_objects(gamma, [m.dom for m in factors])
        cod = self.tensor_objects(gamma, [m.cod for m in factors])
        if self.flavour == BRAIDED:
            indexing = _vine_ordinal_sum([m.indexing for m in factors])
        else:
            indexing = None
            for m in factors:
                part = m.indexing
                indexing = part if indexing is None else _ordinal_sum_same(indexing, part)
            if indexing is None:
                indexing = (
                    FinFunction.identity(0)
                    if self.flavour == SYMMETRIC
                    else MonotoneMap.identity(0)
                )
        decorations = tuple(beta for m in factors for beta in m.decorations)
        return ClassifierMorphism(dom, cod, indexing, decorations)

    def symmetry(
        self, gamma: Operation, rho: Permutation, factors: Sequence[ClassifierObject]
    ) -> ClassifierMorphism:
        """
        The symmetry component at the given factors: the block permutation with unit
        decorations from tensor(gamma·rho, (factors[rho k])_k) to tensor(gamma, factors).
        """
        if self.flavour != SYMMETRIC:
            raise ProfileError("symmetry components exist in the symmetric variant only")
        if rho.n != gamma.arity:
            raise ProfileError(f"permutation degree {rho.n} != arity {gamma.arity}")
        target = self.tensor_objects(gamma, factors)
        source = self.tensor_objects(
            self.T.act(gamma, rho), [factors[rho(k)] for k in range(rho.n)]
        )
        blocks = [Permutation.identity(factors[rho(k)].size) for k in range(rho.n)]
        indexing = as_function(block_substitute(rho, blocks))
        decorations = tuple(self.S.unit(c) for c in target.colours)
        return ClassifierMorphism(source, target, indexing, decorations)

    # ------------------------------------------------------ universal algebra

    def universal_object(self, colour) -> ClassifierObject:
        """The object (i, 1_{fi}) carrying the universal algebra at colour i."""
        return ClassifierObject((colour,), self.T.unit(self.F.colour_map(colour)))

    def structure_morphism(self, alpha: Operation) -> ClassifierMorphism:
        """The structure morphism ((i_k)_k, F alpha) -> (i, 1_{fi}) decorated by alpha."""
        dom = ClassifierObject(tuple(alpha.source), self.F(alpha))
        cod = self.universal_object(alpha.target)
        n = alpha.arity
        if self.flavour == SYMMETRIC:
            indexing = FinFunction((0,) * n, 1)
        elif self.flavour == NONSYMMETRIC:
            indexing = MonotoneMap((n,))
        else:
            indexing = vine_normalize(BraidWord.empty(n), MonotoneMap((n,)))
        return ClassifierMorphism(dom, cod, indexing, (alpha,))


def _ordinal_sum_same(a, b):
    from .finmaps import ordinal_sum

    return ordinal_sum(a, b)


def _vine_ordinal_sum(vines: Sequence[Vine]) -> Vine:
    letters: list[int] = []
    off = 0
    for v in vines:
        letters.extend((1 if lt > 0 else -1) * (abs(lt) + off) for lt in v.word.letters)
        off += v.source
    mono = MonotoneMap(tuple(s for v in vines for s in v.monotone.fibre_sizes))
    return vine_normalize(BraidWord(off, tuple(letters)), mono)
