"""
finmaps: exact combinatorics of permutations, monotone maps and finite functions.

A function h : m -> n between the finite ordinals {1 < ... < m} and {1 < ... < n} is stored
0-indexed, as the tuple (h(0), ..., h(m-1)) of images in [0, n).  All JSON encodings are
1-indexed; only the boundary converts.  Three kinds of map share this representation:

- Permutation: a bijection [0, n) -> [0, n), stored as its image tuple.
- MonotoneMap: a weakly order-preserving map, stored by its fibre sizes (m_1, ..., m_n),
  which determine it uniquely.  The induced image tuple is recovered on demand.
- FinFunction: an arbitrary map, stored as images plus an explicit target (the target is
  not recoverable from the images when the map is not surjective).

Composition is written compose(outer, inner) and means (outer ∘ inner)(i) = outer(inner(i)):
the inner map is applied first.  Products written by juxtaposition elsewhere in this package
follow the same reading: g·ρ applies ρ first.

The two nontrivial operations are the bijective-monotone factorization h = g∘ρ (g monotone,
ρ order-preserving on the fibres of g, and unique as such) and block substitution ρ(ρ_k)_k,
which substitutes a permutation ρ_k ∈ Σ_{m_k} into each input slot k of ρ ∈ Σ_n: the k-th
source block (of size m_k) is permuted internally by ρ_k and lands at target slot ρ(k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Union


class ArityMismatch(ValueError):
    """Raised when two maps are composed or summed with incompatible arities."""


@dataclass(frozen=True)
class Permutation:
    """A bijection on [0, n), stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a permutation of [0, {n}): {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    source = target = n

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> Permutation:
        """
        >>> Permutation((2, 0, 1)).inverse()
        Permutation(images=(1, 2, 0))
        """
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.images))

    @staticmethod
    def identity(n: int) -> Permutation:
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_cycle(n: int, cycle: Sequence[int]) -> Permutation:
        """
        Convenience constructor from a single cycle of 1-indexed points.

        >>> Permutation.from_cycle(4, [1, 2, 4]).images   # the cycle (124)
        (1, 3, 2, 0)
        """
        images = list(range(n))
        for a, b in zip(cycle, cycle[1:] + [cycle[0]]):
            images[a - 1] = b - 1
        return Permutation(tuple(images))

    def to_json(self) -> list[int]:
        return [i + 1 for i in self.images]

    @staticmethod
    def from_json(data: Sequence[int]) -> Permutation:
        return Permutation(tuple(i - 1 for i in data))


@dataclass(frozen=True)
class MonotoneMap:
    """
    A weakly order-preserving map m -> n, stored by fibre sizes (m_1, ..., m_n).
    """

    fibre_sizes: tuple[int, ...]

    def __post_init__(self):
        if any(s < 0 for s in self.fibre_sizes):
            raise ValueError(f"negative fibre size in {self.fibre_sizes}")

    @property
    def source(self) -> int:
        return sum(self.fibre_sizes)

    @property
    def target(self) -> int:
        return len(self.fibre_sizes)

    @property
    def images(self) -> tuple[int, ...]:
        out: list[int] = []
        for k, s in enumerate(self.fibre_sizes):
            out.extend([k] * s)
        return tuple(out)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def offsets(self) -> tuple[int, ...]:
        """Partial sums: offsets()[k] is the first source position of fibre k."""
        out = [0]
        for s in self.fibre_sizes:
            out.append(out[-1] + s)
        return tuple(out)

    def fibre(self, k: int) -> range:
        """The source positions mapping to k, as a (possibly empty) interval."""
        off = self.offsets()
        return range(off[k], off[k + 1])

    def is_identity(self) -> bool:
        return all(s == 1 for s in self.fibre_sizes)

    @staticmethod
    def identity(n: int) -> MonotoneMap:
        return MonotoneMap((1,) * n)

    @staticmethod
    def from_images(images: Sequence[int], target: int) -> MonotoneMap:
        sizes = [0] * target
        last = 0
        for j in images:
            if j < last:
                raise ValueError(f"images not monotone: {tuple(images)}")
            sizes[j] += 1
            last = j
        return MonotoneMap(tuple(sizes))

    def to_json(self) -> dict:
        return {"fibres": list(self.fibre_sizes), "target": self.target}

    @staticmethod
    def from_json(data: dict) -> MonotoneMap:
        m = MonotoneMap(tuple(data["fibres"]))
        if m.target != data["target"]:
            raise ValueError("fibre count disagrees with declared target")
        return m


@dataclass(frozen=True)
class FinFunction:
    """An arbitrary function m -> n: image tuple plus explicit target."""

    images: tuple[int, ...]
    target: int

    def __post_init__(self):
        if any(not 0 <= j < self.target for j in self.images):
            raise ValueError(f"images {self.images} out of range [0, {self.target})")

    @property
    def source(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def fibre(self, k: int) -> tuple[int, ...]:
        """The source positions mapping to k, in ascending order."""
        return tuple(i for i, j in enumerate(self.images) if j == k)

    def is_bijective(self) -> bool:
        return self.source == self.target and sorted(self.images) == list(range(self.target))

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.images, self.images[1:]))

    def is_identity(self) -> bool:
        return self.source == self.target and all(j == i for i, j in enumerate(self.images))

    @staticmethod
    def identity(n: int) -> FinFunction:
        return FinFunction(tuple(range(n)), n)

    def to_json(self) -> dict:
        return {"images": [j + 1 for j in self.images], "target": self.target}

    @staticmethod
    def from_json(data: dict) -> FinFunction:
        return FinFunction(tuple(j - 1 for j in data["images"]), data["target"])


FiniteMap = Union[Permutation, MonotoneMap, FinFunction]


@dataclass(frozen=True)
class BlockProfile:
    """A sequence of non-negative block sizes."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(s < 0 for s in self.sizes):
            raise ValueError(f"negative block size in {self.sizes}")

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def __len__(self) -> int:
        return len(self.sizes)


def as_function(f: FiniteMap) -> FinFunction:
    """View any of the three kinds as a FinFunction."""
    if isinstance(f, FinFunction):
        return f
    if isinstance(f, Permutation):
        return FinFunction(f.images, f.n)
    return FinFunction(f.images, f.target)


def compose(outer: FiniteMap, inner: FiniteMap) -> FiniteMap:
    """
    The composite outer ∘ inner (inner applied first).  The kind is narrowed:
    permutation ∘ permutation is a Permutation, monotone ∘ monotone a MonotoneMap,
    anything else a FinFunction.

    >>> f = FinFunction((1, 0, 1), 2)         # images (2,1,2) in 1-indexed terms
    >>> rho = Permutation((1, 0, 2))
    >>> compose(f, rho).images
    (0, 1, 1)
    """
    fo, fi = as_function(outer), as_function(inner)
    if fi.target != fo.source:
        raise ArityMismatch(f"inner target {fi.target} != outer source {fo.source}")
    images = tuple(fo(fi(i)) for i in range(fi.source))
    if isinstance(outer, Permutation) and isinstance(inner, Permutation):
        return Permutation(images)
    if isinstance(outer, MonotoneMap) and isinstance(inner, MonotoneMap):
        return MonotoneMap.from_images(images, fo.target)
    return FinFunction(images, fo.target)


def bij_mon_factorize(h: FiniteMap) -> tuple[MonotoneMap, Permutation]:
    """
    The unique factorization h = g∘ρ with g monotone and ρ a permutation that is
    order-preserving on each fibre of g: ρ sends i to the rank of i under a stable
    sort of the source by h-value.

    >>> g, rho = bij_mon_factorize(FinFunction((1, 0, 1), 2))
    >>> (g.fibre_sizes, rho.images)
    ((1, 2), (1, 0, 2))
    """
    hf = as_function(h)
    order = sorted(range(hf.source), key=lambda i: hf(i))  # stable
    rho = [0] * hf.source
    for rank, i in enumerate(order):
        rho[i] = rank
    sizes = [0] * hf.target
    for j in hf.images:
        sizes[j] += 1
    return MonotoneMap(tuple(sizes)), Permutation(tuple(rho))


def block_substitute(rho: Permutation, blocks: Sequence[Permutation]) -> Permutation:
    """
    The substituted permutation ρ(ρ_k)_k.  The k-th source block has size blocks[k].n,
    is permuted internally by blocks[k], and lands at target slot ρ(k); so the target
    profile b satisfies b_{ρ(k)} = |blocks[k]|.

    >>> swap = Permutation((1, 0))
    >>> block_substitute(swap, [Permutation.identity(1), Permutation.identity(2)]).images
    (2, 0, 1)
    """
    n = rho.n
    if len(blocks) != n:
        raise ArityMismatch(f"expected {n} blocks, got {len(blocks)}")
    a = [b.n for b in blocks]
    b_sizes = [0] * n
    for k in range(n):
        b_sizes[rho(k)] = a[k]
    a_off = list(itertools.accumulate([0] + a))
    b_off = list(itertools.accumulate([0] + b_sizes))
    images = [0] * sum(a)
    for k in range(n):
        src, tgt = a_off[k], b_off[rho(k)]
        for l in range(a[k]):
            images[src + l] = tgt + blocks[k](l)
    return Permutation(tuple(images))


def block_decompose(
    psi: Permutation, profile: BlockProfile | Sequence[int]
) -> tuple[Permutation, tuple[Permutation, ...]] | None:
    """
    Invert block_substitute against a given TARGET block profile: find (ρ, (ρ_k)_k) with
    block_substitute(ρ, (ρ_k)_k) = psi, or None.  A decomposition exists iff the psi-preimage
    of every target block is an interval of the source.  For positive profiles the
    decomposition is unique; empty blocks are matched canonically (last, by target index).

    >>> block_decompose(Permutation.from_cycle(4, [1, 2, 4]), (2, 2)) is None
    True
    >>> rho, blocks = block_decompose(Permutation((2, 3, 0, 1)), (2, 2))
    >>> (rho.images, [b.images for b in blocks])
    ((1, 0), [(0, 1), (0, 1)])
    """
    sizes = tuple(profile.sizes if isinstance(profile, BlockProfile) else profile)
    n = len(sizes)
    if sum(sizes) != psi.n:
        raise ArityMismatch(f"profile totals {sum(sizes)}, permutation has {psi.n} points")
    b_off = list(itertools.accumulate([0] + list(sizes)))
    inv = psi.inverse()
    fibres: list[tuple[int, ...]] = []
    for k in range(n):
        pre = sorted(inv(p) for p in range(b_off[k], b_off[k + 1]))
        if pre and pre[-1] - pre[0] + 1 != len(pre):
            return None  # not an interval
        fibres.append(tuple(pre))
    # Source slot order: nonempty intervals by position, then empty blocks by target index.
    order = sorted(range(n), key=lambda k: (0, fibres[k][0]) if fibres[k] else (1, k))
    rho = [0] * n
    blocks: list[Permutation] = []
    for j, k in enumerate(order):
        rho[j] = k
        blocks.append(Permutation(tuple(psi(i) - b_off[k] for i in fibres[k])))
    return Permutation(tuple(rho)), tuple(blocks)


def ordinal_sum(a: FiniteMap, b: FiniteMap) -> FiniteMap:
    """
    Block-diagonal juxtaposition m+m' -> n+n' of two maps of the same kind.

    >>> ordinal_sum(MonotoneMap((2,)), MonotoneMap((1, 1))).fibre_sizes
    (2, 1, 1)
    """
    if type(a) is not type(b):
        raise ArityMismatch(f"ordinal_sum on mixed kinds {type(a).__name__}/{type(b).__name__}")
    if isinstance(a, MonotoneMap):
        return MonotoneMap(a.fibre_sizes + b.fibre_sizes)
    if isinstance(a, Permutation):
        return Permutation(a.images + tuple(j + a.n for j in b.images))
    return FinFunction(a.images + tuple(j + a.target for j in b.images), a.target + b.target)


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of Σ_n in lexicographic order of image tuples."""
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


def all_functions(m: int, n: int) -> Iterator[FinFunction]:
    """All functions m -> n in lexicographic order (empty iff n = 0 < m)."""
    for images in itertools.product(range(n), repeat=m):
        yield FinFunction(images, n)


def all_monotone(m: int, n: int) -> Iterator[MonotoneMap]:
    """All monotone maps m -> n, ordered by fibre-size tuple (empty iff n = 0 < m)."""
    if n == 0:
        if m == 0:
            yield MonotoneMap(())
        return
    # stars-and-bars: choose n-1 bar positions among m+n-1 slots
    for cuts in itertools.combinations(range(m + n - 1), n - 1):
        sizes = []
        prev = -1
        for c in cuts:
            sizes.append(c - prev - 1)
            prev = c
        sizes.append(m + n - 2 - prev)
        yield MonotoneMap(tuple(sizes))
