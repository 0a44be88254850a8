"""
braids: braid groups with a decidable word problem, cabling, strand deletion, and the
vine calculus (fibre-trivial normal forms, composition, equality).

A braid word on n strands is a sequence of signed 1-based generator indices: +i is a
positive crossing of strands i, i+1 and -i its inverse.  A letter list (l_1, ..., l_k)
denotes the composite l_1 ∘ ... ∘ l_k, so the LAST letter acts first on strand
positions; with this reading underlying_perm is a homomorphism into permutations under
compose (outer-then-inner, matching finmaps).

Equality of group elements is decided by the left-greedy Garside normal form
Δ^p · x_1 · ... · x_l, where the x_i are permutation braids (positive braids in which
each pair of strands crosses at most once, stored as their underlying permutations),
none equal to the identity or to Δ, and each adjacent pair is left-weighted:
S(x_{i+1}) ⊆ F(x_i), with S the output-side and F the input-side descent set.  Words
normalise by the local slide rule: while some generator can move from the head of the
right factor into the tail of the left factor keeping both simple, move it.

A second, algorithmically independent solution of the word problem (Dehornoy handle
reduction, with wire-tracing invariants) is provided as a cross-check oracle; tests
compare the two on random words.

A vine m -> n is a braid whose strands may merge.  It is stored in the fibre-trivial
normal form of a (braid, monotone) pair: the restriction of the braid to the strands
ending in each fibre of the monotone map is the identity braid.  Raw pairs are purged
at construction, making vine equality structural on (BraidNF, MonotoneMap).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .finmaps import (
    ArityMismatch,
    FinFunction,
    MonotoneMap,
    Permutation,
    as_function,
    compose,
)


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators of Br_n: signed 1-based indices."""

    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        for lt in self.letters:
            if lt == 0 or not 1 <= abs(lt) < max(self.strands, 1):
                raise ValueError(f"letter {lt} out of range for {self.strands} strands")

    @staticmethod
    def empty(n: int) -> BraidWord:
        return BraidWord(n, ())

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-lt for lt in reversed(self.letters)))

    def exponent_sum(self) -> int:
        return sum(1 if lt > 0 else -1 for lt in self.letters)

    def to_json(self) -> list[int]:
        return list(self.letters)

    @staticmethod
    def from_json(strands: int, data: Sequence[int]) -> BraidWord:
        return BraidWord(strands, tuple(data))


def braid_compose(a: BraidWord, b: BraidWord) -> BraidWord:
    """Concatenation a∘b (b acts first on positions).  No normalisation."""
    if a.strands != b.strands:
        raise ArityMismatch(f"strand mismatch: {a.strands} vs {b.strands}")
    return BraidWord(a.strands, a.letters + b.letters)


def underlying_perm(w: BraidWord) -> Permutation:
    """
    The image of w under Br_n -> Σ_n sending σ_i to the transposition (i, i+1).
    Homomorphism: underlying_perm(a∘b) = compose(underlying_perm(a), underlying_perm(b)).
    """
    # Right-multiplying by t_j swaps ENTRIES j, j+1, so a left-to-right pass over the
    # letters accumulates t_{l_1}∘...∘t_{l_k}.
    images = list(range(w.strands))
    for lt in w.letters:
        j = abs(lt) - 1
        images[j], images[j + 1] = images[j + 1], images[j]
    return Permutation(tuple(images))


# --------------------------------------------------------------------------- Garside


def _descents(arr: Sequence[int]) -> set[int]:
    return {j for j in range(len(arr) - 1) if arr[j] > arr[j + 1]}


def _invert(arr: Sequence[int]) -> list[int]:
    inv = [0] * len(arr)
    for i, v in enumerate(arr):
        inv[v] = i
    return inv


def _slide(a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """
    Left-weight the pair of permutation braids (a, b): while some slot j is in
    S(b) = descents(b^{-1}) but not in F(a) = descents(a), replace (a, b) by
    (a∘t_j, t_j∘b).  Preserves the product a∘b and keeps both factors simple.
    """
    a, b = list(a), list(b)
    binv = _invert(b)
    n = len(a)
    while True:
        j = next(
            (j for j in range(n - 1) if binv[j] > binv[j + 1] and a[j] < a[j + 1]),
            None,
        )
        if j is None:
            return tuple(a), tuple(b)
        a[j], a[j + 1] = a[j + 1], a[j]
        pj, pj1 = binv[j], binv[j + 1]
        b[pj], b[pj1] = j + 1, j
        binv[j], binv[j + 1] = pj1, pj


@dataclass(frozen=True)
class BraidNF:
    """
    Garside left-greedy normal form Δ^power ∘ factors[0] ∘ ... ∘ factors[-1].
    Two braid words are equal in Br_n iff their BraidNF values are identical.
    """

    strands: int
    power: int
    factors: tuple[tuple[int, ...], ...]

    def is_trivial(self) -> bool:
        return self.power == 0 and not self.factors

    def exponent_sum(self) -> int:
        half = self.strands * (self.strands - 1) // 2
        return self.power * half + sum(_length(f) for f in self.factors)


def _length(arr: Sequence[int]) -> int:
    return sum(1 for i in range(len(arr)) for j in range(i + 1, len(arr)) if arr[i] > arr[j])


def _tau(arr: Sequence[int], omega: Sequence[int]) -> tuple[int, ...]:
    """Conjugation by Δ on permutation braids: π ↦ ω∘π∘ω."""
    return tuple(omega[arr[omega[i]]] for i in range(len(arr)))


def _normalize_factors(n: int, power: int, factors: list) -> tuple[int, tuple]:
    ident = tuple(range(n))
    omega = tuple(reversed(range(n)))
    fs = [tuple(f) for f in factors]
    # Each slide moves one crossing strictly leftwards, so the total number of
    # changes is bounded by (list length)^2 * len(Δ); the budget is a safety net.
    budget = 16 + 4 * (len(fs) + 2) ** 2 * (n * (n - 1) // 2 + 1)
    for _ in range(budget):
        changed = False
        cleaned: list[tuple[int, ...]] = []
        for x in fs:
            if x == ident:
                changed = True
            elif x == omega:
                power += 1
                cleaned = [_tau(y, omega) for y in cleaned]
                changed = True
            else:
                cleaned.append(x)
        fs = cleaned
        for i in range(len(fs) - 1):
            a, b = _slide(fs[i], fs[i + 1])
            if (a, b) != (fs[i], fs[i + 1]):
                fs[i], fs[i + 1] = a, b
                changed = True
        if not changed:
            return power, tuple(fs)
    raise RuntimeError("normal form sweep exceeded its budget")


def braid_nf(w: BraidWord) -> BraidNF:
    """
    Compute the Garside normal form of a braid word.

    >>> braid_nf(BraidWord(3, (1, 2, 1))) == braid_nf(BraidWord(3, (2, 1, 2)))
    True
    >>> braid_nf(BraidWord(2, (1, -1))).is_trivial()
    True
    """
    n = w.strands
    if n <= 1:
        return BraidNF(n, 0, ())
    omega = tuple(reversed(range(n)))
    power = 0
    fs: list[tuple[int, ...]] = []
    for lt in w.letters:
        j = abs(lt) - 1
        if lt > 0:
            t = list(range(n))
            t[j], t[j + 1] = t[j + 1], t[j]
            fs.append(tuple(t))
        else:
            power -= 1
            fs = [_tau(x, omega) for x in fs]
            c = list(omega)
            c[j], c[j + 1] = c[j + 1], c[j]  # ω∘t_j: entries j, j+1 of ω swapped
            fs.append(tuple(c))
    power, factors = _normalize_factors(n, power, fs)
    return BraidNF(n, power, factors)


def _perm_braid_word(arr: Sequence[int]) -> list[int]:
    """A reduced word (1-based letters, ∘-order) for the permutation braid of arr."""
    work = list(arr)
    picked: list[int] = []
    while True:
        j = next((j for j in range(len(work) - 1) if work[j] > work[j + 1]), None)
        if j is None:
            break
        picked.append(j + 1)
        work[j], work[j + 1] = work[j + 1], work[j]
    return list(reversed(picked))


def nf_to_word(nf: BraidNF) -> BraidWord:
    """A representative word of a normal form (Δ-power then the factors)."""
    omega = tuple(reversed(range(nf.strands)))
    delta = _perm_braid_word(omega)
    letters: list[int] = []
    if nf.power >= 0:
        letters.extend(delta * nf.power)
    else:
        inv = [-lt for lt in reversed(delta)]
        letters.extend(inv * (-nf.power))
    for f in nf.factors:
        letters.extend(_perm_braid_word(f))
    return BraidWord(nf.strands, tuple(letters))


def braid_eq(a: BraidWord, b: BraidWord) -> bool:
    """Decide equality in the braid group via Garside normal forms."""
    if a.strands != b.strands:
        raise ArityMismatch(f"strand mismatch: {a.strands} vs {b.strands}")
    return braid_nf(a) == braid_nf(b)


# ----------------------------------------------------------- handle reduction oracle


def handle_reduce(w: BraidWord, budget: int = 2_000_000) -> BraidWord:
    """
    Dehornoy handle reduction (first-closing-handle strategy).  The result contains
    no handle; it is empty iff w represents the trivial braid.  Algorithmically
    independent of the Garside kernel; used as a cross-check oracle.
    """
    word = list(w.letters)
    steps = 0
    while True:
        found = None
        last: dict[int, int] = {}
        for t, lt in enumerate(word):
            i = abs(lt)
            s = last.get(i)
            if s is not None and word[s] == -lt and all(abs(word[r]) > i for r in range(s + 1, t)):
                found = (s, t)
                break
            last[i] = t
        if found is None:
            return BraidWord(w.strands, tuple(word))
        s, t = found
        e = 1 if word[s] > 0 else -1
        i = abs(word[s])
        replacement: list[int] = []
        for lt in word[s + 1 : t]:
            if abs(lt) == i + 1:
                replacement.extend([-e * (i + 1), (1 if lt > 0 else -1) * i, e * (i + 1)])
            else:
                replacement.append(lt)
        word[s : t + 1] = replacement
        steps += 1
        if steps > budget:
            raise RuntimeError("handle reduction exceeded its step budget")


def braid_eq_by_handles(a: BraidWord, b: BraidWord) -> bool:
    """Independent word-problem oracle: reduce a∘b^{-1} and test emptiness."""
    if a.strands != b.strands:
        raise ArityMismatch(f"strand mismatch: {a.strands} vs {b.strands}")
    return not handle_reduce(braid_compose(a, b.inverse())).letters


# ------------------------------------------------------------- cabling, restriction


def braid_cable(w: BraidWord, profile: Sequence[int]) -> BraidWord:
    """
    Replace the strand entering at input position k by profile[k-1] parallel strands.
    Each crossing becomes the block crossing of the two cables involved, with all
    constituent crossings carrying the original sign.

    >>> cabled = braid_cable(BraidWord(2, (1,)), (2, 1))
    >>> (cabled.letters, underlying_perm(cabled).images)
    ((1, 2), (1, 2, 0))
    """
    if len(profile) != w.strands:
        raise ArityMismatch(f"profile of length {len(profile)} for {w.strands} strands")
    widths = list(profile)
    out_action: list[int] = []
    for lt in reversed(w.letters):  # action order
        i = abs(lt)
        e = 1 if lt > 0 else -1
        a, b = widths[i - 1], widths[i]
        off = sum(widths[: i - 1])
        for x in range(a, 0, -1):
            for y in range(b):
                out_action.append(e * (off + x + y))
        widths[i - 1], widths[i] = widths[i], widths[i - 1]
    return BraidWord(sum(profile), tuple(reversed(out_action)))


def braid_block_substitute(w: BraidWord, blocks: Sequence[BraidWord]) -> BraidWord:
    """
    Substitute the block braids into w: cable w along the block widths, composed
    after the juxtaposition of the blocks (blocks act first, at the input side).
    underlying_perm commutes with finmaps.block_substitute.
    """
    if len(blocks) != w.strands:
        raise ArityMismatch(f"expected {w.strands} blocks, got {len(blocks)}")
    profile = [b.strands for b in blocks]
    cabled = braid_cable(w, profile)
    letters = list(cabled.letters)
    off = 0
    for b in blocks:
        letters.extend((1 if lt > 0 else -1) * (abs(lt) + off) for lt in b.letters)
        off += b.strands
    return BraidWord(sum(profile), tuple(letters))


def braid_restrict(w: BraidWord, keep: Iterable[int]) -> BraidWord:
    """
    Delete all strands except those ENDING at the 1-based positions in keep,
    renumbering the surviving positions in order.  Keeps exactly the letters whose
    two crossing strands both survive.  Well-defined on group elements.
    """
    keep_set = set(keep)
    n = w.strands
    if not keep_set <= set(range(1, n + 1)):
        raise ValueError(f"keep set {sorted(keep_set)} not within 1..{n}")
    action = list(reversed(w.letters))
    cur = list(range(1, n + 1))  # cur[p] = start label of the strand at position p+1
    for lt in action:
        i = abs(lt)
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    kept_starts = {cur[p - 1] for p in keep_set}
    out_action: list[int] = []
    cur = list(range(1, n + 1))
    for lt in action:
        i = abs(lt)
        if cur[i - 1] in kept_starts and cur[i] in kept_starts:
            j = sum(1 for p in range(i) if cur[p] in kept_starts)
            out_action.append((1 if lt > 0 else -1) * j)
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    return BraidWord(len(keep_set), tuple(reversed(out_action)))


# ----------------------------------------------------------------------------- vines


@dataclass(frozen=True)
class Vine:
    """
    A vine m -> n in fibre-trivial normal form: the braid's restriction to the
    strands ending in each fibre of the monotone map is trivial.  Equality and
    hashing only use the normal form (a representative word is kept for reuse in
    composition but carries no identity).
    """

    nf: BraidNF
    monotone: MonotoneMap
    word: BraidWord = field(compare=False)

    @property
    def source(self) -> int:
        return self.monotone.source

    @property
    def target(self) -> int:
        return self.monotone.target

    @staticmethod
    def identity(n: int) -> Vine:
        return vine_normalize(BraidWord.empty(n), MonotoneMap.identity(n))

    def to_json(self) -> dict:
        return {
            "strands": self.source,
            "braid": list(self.word.letters),
            "fibres": list(self.monotone.fibre_sizes),
        }

    @staticmethod
    def from_json(data: dict) -> Vine:
        mono = MonotoneMap(tuple(data["fibres"]))
        if mono.source != data["strands"]:
            raise ValueError("fibres do not sum to the declared strand count")
        return vine_normalize(BraidWord(data["strands"], tuple(data["braid"])), mono)


def _fibre_positions(mono: MonotoneMap, k: int) -> list[int]:
    return [p + 1 for p in mono.fibre(k)]


def vine_fibre_restrictions(braid: BraidWord, mono: MonotoneMap) -> list[BraidWord]:
    """The restriction of the braid to the strands ending in each fibre of mono."""
    return [braid_restrict(braid, _fibre_positions(mono, k)) for k in range(mono.target)]


def vine_normalize(braid: BraidWord, mono: MonotoneMap) -> Vine:
    """
    Purge the braiding internal to each fibre: with r_k the restriction of the braid
    to fibre k, return the vine with braid (⊕_k r_k^{-1}) ∘ braid, whose restriction
    to every fibre is trivial, paired with the unchanged monotone map.  Idempotent
    at the level of normal forms.
    """
    if braid.strands != mono.source:
        raise ArityMismatch(f"braid on {braid.strands} strands, monotone source {mono.source}")
    restrictions = vine_fibre_restrictions(braid, mono)
    letters: list[int] = []
    off = 0
    for r in restrictions:
        letters.extend((1 if lt > 0 else -1) * (abs(lt) + off) for lt in r.inverse().letters)
        off += r.strands
    purged = BraidWord(braid.strands, tuple(letters) + braid.letters)
    nf = braid_nf(purged)
    return Vine(nf, mono, nf_to_word(nf))


def vine_compose(v1: Vine, v2: Vine) -> Vine:
    """
    The composite vine v2 ∘ v1 (v1 first).  The braid of v2 is pushed past the
    monotone part of v1 by cabling along v1's fibre sizes; the monotone parts then
    compose, and the result is renormalised.
    """
    if v1.target != v2.source:
        raise ArityMismatch(f"middle arity mismatch: {v1.target} vs {v2.source}")
    widths = v1.monotone.fibre_sizes
    rho3 = braid_cable(v2.word, widths)
    perm2 = underlying_perm(v2.word)
    permuted = [0] * v2.source
    for k in range(v2.source):
        permuted[perm2(k)] = widths[k]
    f3 = MonotoneMap(tuple(permuted))
    raw_braid = braid_compose(rho3, v1.word)
    raw_mono = compose(v2.monotone, f3)
    return vine_normalize(raw_braid, raw_mono)


def vine_underlying_fn(v: Vine) -> FinFunction:
    """The underlying function: monotone ∘ underlying_perm(braid)."""
    return compose(as_function(v.monotone), as_function(underlying_perm(v.word)))


def vine_eq(v1: Vine, v2: Vine) -> bool:
    return v1.nf == v2.nf and v1.monotone == v2.monotone


def vine_is_invertible(v: Vine) -> bool:
    """A vine is invertible iff its monotone part is the identity (it is a braid)."""
    return v.monotone.is_identity()


# ------------------------------------------------------------------ ASCII rendering


def render_braid(w: BraidWord, max_letters: int = 20) -> str:
    """
    A compact ASCII wire diagram, one row per letter from the acting end downwards.
    Refuses words longer than max_letters.
    """
    if len(w.letters) > max_letters:
        raise ValueError(f"word of length {len(w.letters)} exceeds limit {max_letters}")
    n = w.strands
    header = " ".join(str(p) for p in range(1, n + 1))
    lines = [header]
    for lt in reversed(w.letters):
        i = abs(lt)
        cells = ["|"] * n
        cells[i - 1] = cells[i] = "x"
        sign = "+" if lt > 0 else "-"
        lines.append(" ".join(cells) + f"   s{i}{sign}")
    if not w.letters:
        lines.append(" ".join(["|"] * n) + "   (empty)")
    return "\n".join(lines)
