"""
operads: coloured symmetric, non-symmetric and braided operads presented as finite
enumeration oracles, morphisms between them, and the labelled-corolla coherence maps.

An operad is exposed as an oracle rather than a global table: the only queries the
rest of the package needs are "enumerate the operations with a given target colour and
arity", units, substitution, and the group action, and these stay finite per call even
for operads with infinitely many operations overall (such as the symmetric operad for
monoids, which has n! operations in each arity).

Operations are value objects carrying an opaque, orderable name together with their
source colour sequence and target colour; all semantics (composition, action) lives on
the oracle.  The flavour fixes the acting structure: Σ_n for symmetric operads, Br_n
for braided ones, nothing for non-symmetric ones.  A morphism from a braided operad to
a symmetric one acts through the underlying permutation of the braid.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, NamedTuple, Sequence

from .braids import BraidWord, underlying_perm
from .finmaps import Permutation, block_substitute

SYMMETRIC = "symmetric"
NONSYMMETRIC = "nonsymmetric"
BRAIDED = "braided"

FLAVOURS = (SYMMETRIC, NONSYMMETRIC, BRAIDED)


class OperadError(ValueError):
    """Raised for malformed queries: unknown colours, profile mismatches, bad actions."""


class Operation(NamedTuple):
    """An operation (i_1, ..., i_n) -> i of an operad, named by an opaque token."""

    name: Hashable
    source: tuple[Hashable, ...]
    target: Hashable

    @property
    def arity(self) -> int:
        return len(self.source)


class OperadOracle:
    """
    Base class for operad oracles.  Subclasses provide ops/unit/compose/act; the base
    supplies argument checking helpers shared by every implementation.
    """

    flavour: str
    colours: tuple[Hashable, ...]
    name = "operad"

    def ops(self, target: Hashable, arity: int) -> list[Operation]:
        """All operations with the given target colour and arity, in a fixed order."""
        raise NotImplementedError

    def unit(self, colour: Hashable) -> Operation:
        raise NotImplementedError

    def compose(self, outer: Operation, inners: Sequence[Operation]) -> Operation:
        raise NotImplementedError

    def act(self, op: Operation, g) -> Operation:
        raise NotImplementedError

    # -- shared checking -------------------------------------------------------

    def _check_compose(self, outer: Operation, inners: Sequence[Operation]) -> None:
        if len(inners) != outer.arity:
            raise OperadError(f"{outer.name}: expected {outer.arity} inner operations")
        for k, inner in enumerate(inners):
            if inner.target != outer.source[k]:
                raise OperadError(
                    f"slot {k}: inner target {inner.target!r} != source colour "
                    f"{outer.source[k]!r}"
                )

    def _acting_perm(self, op: Operation, g) -> Permutation:
        if self.flavour == NONSYMMETRIC:
            raise OperadError("non-symmetric operads carry no group action")
        if self.flavour == SYMMETRIC:
            if not isinstance(g, Permutation):
                raise OperadError(f"symmetric action expects a Permutation, got {type(g)}")
            perm = g
        else:
            if not isinstance(g, BraidWord):
                raise OperadError(f"braided action expects a BraidWord, got {type(g)}")
            perm = underlying_perm(g)
        if perm.n != op.arity:
            raise OperadError(f"action degree {perm.n} != arity {op.arity}")
        return perm

    @staticmethod
    def _permuted_source(op: Operation, perm: Permutation) -> tuple:
        # new source at position k is the old source at position perm(k)
        return tuple(op.source[perm(k)] for k in range(op.arity))


class ComOperad(OperadOracle):
    """The terminal symmetric operad: one colour, one operation per arity."""

    flavour = SYMMETRIC
    colours = ("*",)
    name = "Com"

    def ops(self, target, arity):
        return [Operation(("com", arity), ("*",) * arity, "*")]

    def unit(self, colour):
        return Operation(("com", 1), ("*",), "*")

    def compose(self, outer, inners):
        self._check_compose(outer, inners)
        return Operation(("com", sum(i.arity for i in inners)), ("*",) * sum(i.arity for i in inners), "*")

    def act(self, op, g):
        self._acting_perm(op, g)
        return op


def _raw_block_substitute(rho: tuple[int, ...], blocks: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
    """block_substitute on bare image tuples (hot path for the Ass operad)."""
    n = len(rho)
    b_sizes = [0] * n
    for k in range(n):
        b_sizes[rho[k]] = len(blocks[k])
    b_off = [0] * (n + 1)
    for k in range(n):
        b_off[k + 1] = b_off[k] + b_sizes[k]
    images = []
    for k in range(n):
        tgt = b_off[rho[k]]
        images.extend(tgt + v for v in blocks[k])
    return tuple(images)


class AssOperad(OperadOracle):
    """
    The symmetric operad for monoids: one colour, an n-ary operation for each
    permutation in Σ_n (named by its image tuple).  Substitution is block substitution
    of permutations and the Σ_n-action is right multiplication.
    """

    flavour = SYMMETRIC
    colours = ("*",)
    name = "Ass"

    def __init__(self):
        self._cache: dict[int, list[Operation]] = {}

    def ops(self, target, arity):
        if arity not in self._cache:
            self._cache[arity] = [
                Operation(images, ("*",) * arity, "*")
                for images in sorted(itertools.permutations(range(arity)))
            ]
        return list(self._cache[arity])

    def unit(self, colour):
        return Operation((0,), ("*",), "*")

    def compose(self, outer, inners):
        self._check_compose(outer, inners)
        psi = _raw_block_substitute(outer.name, [i.name for i in inners])
        return Operation(psi, ("*",) * len(psi), "*")

    def act(self, op, g):
        perm = self._acting_perm(op, g)
        name = tuple(op.name[perm(k)] for k in range(op.arity))
        return Operation(name, op.source, "*")


class AssNSOperad(OperadOracle):
    """The terminal non-symmetric operad: one colour, one operation per arity."""

    flavour = NONSYMMETRIC
    colours = ("*",)
    name = "AssNS"

    def ops(self, target, arity):
        return [Operation(("assns", arity), ("*",) * arity, "*")]

    def unit(self, colour):
        return Operation(("assns", 1), ("*",), "*")

    def compose(self, outer, inners):
        self._check_compose(outer, inners)
        m = sum(i.arity for i in inners)
        return Operation(("assns", m), ("*",) * m, "*")

    def act(self, op, g):
        raise OperadError("non-symmetric operads carry no group action")


class BComOperad(OperadOracle):
    """The terminal braided operad: one colour, one operation per arity, trivial action."""

    flavour = BRAIDED
    colours = ("*",)
    name = "BCom"

    def ops(self, target, arity):
        return [Operation(("bcom", arity), ("*",) * arity, "*")]

    def unit(self, colour):
        return Operation(("bcom", 1), ("*",), "*")

    def compose(self, outer, inners):
        self._check_compose(outer, inners)
        m = sum(i.arity for i in inners)
        return Operation(("bcom", m), ("*",) * m, "*")

    def act(self, op, g):
        self._acting_perm(op, g)
        return op


class TabulatedOperad(OperadOracle):
    """
    A finite user-supplied operad, read from the JSON schema below, with every table
    trusted only up to the declared arity bound; composition requests whose result
    arity exceeds the bound raise OperadError.

        {"name": ..., "flavour": "symmetric" | "nonsymmetric" | "braided",
         "colours": [...], "bound": N,
         "operations": [{"name": ..., "source": [...], "target": ...}, ...],
         "composition": [{"outer": ..., "inners": [...], "result": ...}, ...],
         "action": [{"op": ..., "perm": [...], "result": ...}, ...]}

    Units must be listed among the operations with name ["unit", colour].  For
    braided operads the action table is keyed by generator index instead of "perm":
    {"op": ..., "generator": i, "result": ...} and words act by folding generators.
    """

    def __init__(self, data: dict):
        self.name = data.get("name", "tabulated")
        self.flavour = data["flavour"]
        if self.flavour not in FLAVOURS:
            raise OperadError(f"unknown flavour {self.flavour!r}")
        self.colours = tuple(data["colours"])
        self.bound = int(data["bound"])
        self._ops: dict[Hashable, Operation] = {}
        for entry in data["operations"]:
            op = Operation(_key(entry["name"]), tuple(entry["source"]), entry["target"])
            if op.name in self._ops:
                raise OperadError(f"duplicate operation name {op.name!r}")
            if op.target not in self.colours or any(c not in self.colours for c in op.source):
                raise OperadError(f"operation {op.name!r} uses unknown colours")
            self._ops[op.name] = op
        self._compose: dict[tuple, Hashable] = {}
        for entry in data["composition"]:
            key = (_key(entry["outer"]), tuple(_key(x) for x in entry["inners"]))
            self._compose[key] = _key(entry["result"])
        self._action: dict[tuple, Hashable] = {}
        for entry in data.get("action", []):
            if "perm" in entry:
                key = (_key(entry["op"]), tuple(i - 1 for i in entry["perm"]))
            else:
                key = (_key(entry["op"]), int(entry["generator"]))
            self._action[key] = _key(entry["result"])

    def ops(self, target, arity):
        return sorted(
            (op for op in self._ops.values() if op.target == target and op.arity == arity),
            key=lambda op: repr(op.name),
        )

    def unit(self, colour):
        name = ("unit", colour)
        if name not in self._ops:
            raise OperadError(f"no unit operation tabulated for colour {colour!r}")
        return self._ops[name]

    def compose(self, outer, inners):
        self._check_compose(outer, inners)
        if sum(i.arity for i in inners) > self.bound:
            raise OperadError(
                f"composite arity {sum(i.arity for i in inners)} exceeds bound {self.bound}"
            )
        key = (outer.name, tuple(i.name for i in inners))
        if key not in self._compose:
            raise OperadError(f"composition not tabulated for {key}")
        return self._ops[self._compose[key]]

    def act(self, op, g):
        perm = self._acting_perm(op, g)
        if self.flavour == SYMMETRIC:
            if perm.is_identity():
                return op
            key = (op.name, perm.images)
            if key not in self._action:
                raise OperadError(f"action not tabulated for {key}")
            return self._ops[self._action[key]]
        # braided: fold the word over tabulated generator actions
        result = op
        for lt in reversed(g.letters):  # the last letter acts first
            key = (result.name, abs(lt))
            if key not in self._action:
                raise OperadError(f"braided action not tabulated for {key}")
            result = self._ops[self._action[key]]
        return result


def _key(x):
    return tuple(x) if isinstance(x, list) else x


_BUILTINS = {"Com": ComOperad, "Ass": AssOperad, "AssNS": AssNSOperad, "BCom": BComOperad}


def builtin_operad(name: str) -> OperadOracle:
    """
    Look up a built-in operad, or load a tabulated one from "tabulated:<path>".
    Tabulated operads are axiom-checked to their declared bound at load.
    """
    if name in _BUILTINS:
        return _BUILTINS[name]()
    if name.startswith("tabulated:"):
        with open(name.split(":", 1)[1], "r", encoding="utf-8") as fh:
            oracle = TabulatedOperad(json.load(fh))
        report = check_operad_axioms(oracle, min(oracle.bound, 3))
        if not report.passed:
            raise OperadError(f"tabulated operad fails axioms: {report.failures[0]}")
        return oracle
    raise OperadError(f"unknown operad {name!r} (builtins: {sorted(_BUILTINS)})")


# ------------------------------------------------------------------------ morphisms


@dataclass(frozen=True)
class OperadMorphism:
    """
    A morphism of operads: a colour map together with an operation map preserving
    profiles, units, composition and the action.  A braided source may map to a
    symmetric target, in which case braids act on the target through their
    underlying permutations.
    """

    source: OperadOracle = field(compare=False)
    target: OperadOracle = field(compare=False)
    colour_map: Callable = field(compare=False)
    op_map: Callable = field(compare=False)
    name: str = "F"

    def __post_init__(self):
        ok = self.source.flavour == self.target.flavour or (
            self.source.flavour == BRAIDED and self.target.flavour == SYMMETRIC
        )
        if not ok:
            raise OperadError(
                f"no morphisms from {self.source.flavour} to {self.target.flavour} operads"
            )

    def __call__(self, op: Operation) -> Operation:
        out = self.op_map(op)
        expected = tuple(self.colour_map(c) for c in op.source)
        if out.source != expected or out.target != self.colour_map(op.target):
            raise OperadError(f"op map breaks the profile of {op.name!r}")
        return out

    def act_target(self, op: Operation, g) -> Operation:
        """Act on a target operation by g, promoting braids to permutations if needed."""
        if self.source.flavour == BRAIDED and self.target.flavour == SYMMETRIC:
            return self.target.act(op, underlying_perm(g))
        return self.target.act(op, g)


def identity_morphism(oracle: OperadOracle) -> OperadMorphism:
    return OperadMorphism(oracle, oracle, lambda c: c, lambda op: op, f"id_{oracle.name}")


def terminal_morphism(oracle: OperadOracle) -> OperadMorphism:
    """The unique morphism to the terminal operad of the same flavour."""
    terminal = {SYMMETRIC: ComOperad, NONSYMMETRIC: AssNSOperad, BRAIDED: BComOperad}[
        oracle.flavour
    ]()
    return OperadMorphism(
        oracle,
        terminal,
        lambda c: "*",
        lambda op: terminal.ops("*", op.arity)[0],
        f"{oracle.name}->{terminal.name}",
    )


# --------------------------------------------------------------------- axiom checks


@dataclass
class AxiomReport:
    passed: bool
    checks: int
    failures: list[str]

    def __bool__(self):
        return self.passed


def _compositions(total: int, parts: int):
    """All tuples of `parts` non-negative integers summing to exactly `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _enumerate_ops(oracle: OperadOracle, arity: int) -> list[Operation]:
    out = []
    for target in oracle.colours:
        out.extend(oracle.ops(target, arity))
    return out


def check_operad_axioms(oracle: OperadOracle, bound: int) -> AxiomReport:
    """
    Exhaustively verify the operad axioms on all data of total arity <= bound:
    unit laws, associativity of substitution, functoriality of the action, and the
    composition-equivariance law.  Braided operads act through words, so their action
    checks run over Artin generator words of length <= 2 (words act by folding
    generator actions, so these exercise everything a finite table can break).
    Returns a report carrying the first counterexample found.
    """
    checks = 0
    failures: list[str] = []
    ops_by_arity = {n: _enumerate_ops(oracle, n) for n in range(bound + 1)}
    perms = {n: [Permutation(im) for im in itertools.permutations(range(n))] for n in range(bound + 1)}

    # The enumeration revisits the same composites and actions many times over
    # (profiles with empty blocks especially); memoise both oracle calls.
    compose_memo: dict = {}
    act_memo: dict = {}
    raw_compose, raw_act = oracle.compose, oracle.act

    def oracle_compose(outer, inners):
        key = (outer, tuple(inners))
        out = compose_memo.get(key)
        if out is None:
            out = compose_memo[key] = raw_compose(outer, inners)
        return out

    def oracle_act(op, g):
        key = (op, g.images if isinstance(g, Permutation) else (g.strands, g.letters))
        out = act_memo.get(key)
        if out is None:
            out = act_memo[key] = raw_act(op, g)
        return out

    class _Memo:
        flavour = oracle.flavour
        colours = oracle.colours
        compose = staticmethod(oracle_compose)
        act = staticmethod(oracle_act)
        unit = staticmethod(oracle.unit)

    oracle = _Memo()

    def acting_elements(arity):
        if oracle.flavour == SYMMETRIC:
            return perms[arity]
        if oracle.flavour == BRAIDED:
            gens = list(range(1, arity))
            words = [()] + [(s * i,) for i in gens for s in (1, -1)]
            words += [(a, b) for a in gens for b in gens]
            return [BraidWord(arity, w) for w in words]
        return []

    def inner_tuples(source_colours, sizes):
        """All tuples of operations matching the given target colours and arities."""
        choices = [
            [b for b in ops_by_arity[s] if b.target == c]
            for c, s in zip(source_colours, sizes)
        ]
        return itertools.product(*choices)

    # unit laws
    for n in range(bound + 1):
        for alpha in ops_by_arity[n]:
            checks += 2
            if oracle.compose(oracle.unit(alpha.target), [alpha]) != alpha:
                return AxiomReport(False, checks, [f"left unit law fails at {alpha.name!r}"])
            if oracle.compose(alpha, [oracle.unit(c) for c in alpha.source]) != alpha:
                return AxiomReport(False, checks, [f"right unit law fails at {alpha.name!r}"])

    # associativity: alpha∘(beta_j∘(gamma_jk))_j == (alpha∘(beta_j)_j)∘(gamma_jk)_jk
    for n in range(1, bound + 1):
        alphas = ops_by_arity[n]
        if not alphas:
            continue
        source_profiles = {tuple(a.source) for a in alphas}
        for m in range(bound + 1):
            for mid_sizes in _compositions(m, n):
                for src in source_profiles:
                    for betas in inner_tuples(src, mid_sizes):
                        flat_sources = tuple(c for b in betas for c in b.source)
                        for l in range(bound + 1):
                            for leaf_sizes in _compositions(l, m):
                                for gammas in inner_tuples(flat_sources, leaf_sizes):
                                    # hoist the alpha-independent composites
                                    off = 0
                                    nested = []
                                    for b in betas:
                                        nested.append(
                                            oracle.compose(b, gammas[off : off + b.arity])
                                        )
                                        off += b.arity
                                    for alpha in alphas:
                                        if tuple(alpha.source) != src:
                                            continue
                                        checks += 1
                                        lhs = oracle.compose(alpha, nested)
                                        rhs = oracle.compose(
                                            oracle.compose(alpha, betas), gammas
                                        )
                                        if lhs != rhs:
                                            return AxiomReport(
                                                False,
                                                checks,
                                                [
                                                    "associativity fails at outer "
                                                    f"{alpha.name!r}, mids "
                                                    f"{[b.name for b in betas]}, leaves "
                                                    f"{[g.name for g in gammas]}"
                                                ],
                                            )

    if oracle.flavour != NONSYMMETRIC:
        # action functoriality (pairs of acting elements)
        for n in range(bound + 1):
            for alpha in ops_by_arity[n]:
                for g in acting_elements(n):
                    for h in acting_elements(n):
                        checks += 1
                        if oracle.flavour == SYMMETRIC:
                            from .finmaps import compose as fcompose

                            gh = fcompose(g, h)
                        else:
                            gh = BraidWord(n, g.letters + h.letters)
                        if oracle.act(oracle.act(alpha, g), h) != oracle.act(alpha, gh):
                            return AxiomReport(
                                False, checks, [f"action functoriality fails at {alpha.name!r}"]
                            )

    if oracle.flavour == BRAIDED:
        # the action must factor through the braid group: check the defining relations
        for n in range(bound + 1):
            relations = [((i, -i), ()) for i in range(1, n)]
            relations += [((-i, i), ()) for i in range(1, n)]
            relations += [
                ((i, i + 1, i), (i + 1, i, i + 1)) for i in range(1, n - 1)
            ]
            relations += [
                ((i, j), (j, i))
                for i in range(1, n)
                for j in range(i + 2, n)
            ]
            for alpha in ops_by_arity[n]:
                for u, v in relations:
                    checks += 1
                    if oracle.act(alpha, BraidWord(n, u)) != oracle.act(alpha, BraidWord(n, v)):
                        return AxiomReport(
                            False,
                            checks,
                            [f"braided action breaks the relation {u} = {v} at {alpha.name!r}"],
                        )

    if oracle.flavour == SYMMETRIC:
        # composition equivariance:
        # act(a∘(b_j)_j, rho(rho_(rho k))_k) == act(a,rho)∘(act(b_(rho k),rho_(rho k)))_k
        for n in range(1, bound + 1):
            alphas = ops_by_arity[n]
            if not alphas:
                continue
            source_profiles = {tuple(a.source) for a in alphas}
            for m in range(bound + 1):
                for mid_sizes in _compositions(m, n):
                    for src in source_profiles:
                        for betas in inner_tuples(src, mid_sizes):
                            for rho in perms[n]:
                                for rhos in itertools.product(
                                    *[perms[betas[k].arity] for k in range(n)]
                                ):
                                    big = block_substitute(
                                        rho, [rhos[rho(k)] for k in range(n)]
                                    )
                                    acted_inners = [
                                        oracle.act(betas[rho(k)], rhos[rho(k)])
                                        for k in range(n)
                                    ]
                                    for alpha in alphas:
                                        if tuple(alpha.source) != src:
                                            continue
                                        checks += 1
                                        lhs = oracle.act(oracle.compose(alpha, betas), big)
                                        rhs = oracle.compose(
                                            oracle.act(alpha, rho), acted_inners
                                        )
                                        if lhs != rhs:
                                            return AxiomReport(
                                                False,
                                                checks,
                                                [
                                                    f"equivariance fails at {alpha.name!r}, "
                                                    f"rho={rho.images}, inners="
                                                    f"{[r.images for r in rhos]}"
                                                ],
                                            )

    return AxiomReport(True, checks, failures)


def check_morphism(F: OperadMorphism, bound: int) -> AxiomReport:
    """Verify that F preserves units, composition and the action up to the bound."""
    checks = 0
    for n in range(bound + 1):
        for alpha in _enumerate_ops(F.source, n):
            img = F(alpha)
            checks += 1
            if n >= 1:
                for m in range(bound + 1):
                    for sizes in _compositions(m, n):
                        choices = [
                            [b for b in _enumerate_ops(F.source, s) if b.target == alpha.source[j]]
                            for j, s in enumerate(sizes)
                        ]
                        for betas in itertools.product(*choices):
                            checks += 1
                            lhs = F(F.source.compose(alpha, betas))
                            rhs = F.target.compose(img, [F(b) for b in betas])
                            if lhs != rhs:
                                return AxiomReport(
                                    False, checks, [f"F breaks composition at {alpha.name!r}"]
                                )
            if F.source.flavour == SYMMETRIC:
                for rho in [Permutation(im) for im in itertools.permutations(range(n))]:
                    checks += 1
                    if F(F.source.act(alpha, rho)) != F.target.act(img, rho):
                        return AxiomReport(
                            False, checks, [f"F breaks the action at {alpha.name!r}"]
                        )
            elif F.source.flavour == BRAIDED:
                for i in range(1, n):
                    for s in (1, -1):
                        g = BraidWord(n, (s * i,))
                        checks += 1
                        if F(F.source.act(alpha, g)) != F.act_target(img, g):
                            return AxiomReport(
                                False, checks, [f"F breaks the braided action at {alpha.name!r}"]
                            )
    for c in F.source.colours:
        checks += 1
        if F(F.source.unit(c)) != F.target.unit(F.colour_map(c)):
            return AxiomReport(False, checks, [f"F breaks the unit at colour {c!r}"])
    return AxiomReport(True, checks, [])


# ------------------------------------------------------------- labelled corollas


@dataclass(frozen=True)
class LabelledCorolla:
    """An operation with a label attached to each input slot."""

    op: Operation
    labels: tuple

    def __post_init__(self):
        if len(self.labels) != self.op.arity:
            raise OperadError(
                f"{self.op.arity}-ary operation with {len(self.labels)} labels"
            )


def fc_apply(F: OperadMorphism, corolla: LabelledCorolla) -> LabelledCorolla:
    """
    The colax coherence on labelled corollas: apply F to the operation and retag
    each label with its source colour, (alpha, (x_k)_k) ↦ (F alpha, ((i_k, x_k))_k).
    """
    retagged = tuple(
        (corolla.op.source[k], corolla.labels[k]) for k in range(corolla.op.arity)
    )
    return LabelledCorolla(F(corolla.op), retagged)


def fl_apply(F: OperadMorphism, corolla: LabelledCorolla) -> LabelledCorolla:
    """
    The lax coherence on labelled corollas: relabel the operation by F and keep the
    labels, (alpha, (y_k)_k) ↦ (F alpha, (y_k)_k).
    """
    return LabelledCorolla(F(corolla.op), corolla.labels)


def corolla_morphism_apply(rho_parts: tuple, corolla_pair) -> tuple:
    """
    Both coherence maps send a corolla morphism (rho, (gamma_k)_k) to itself; this
    helper exists so tests can state naturality squares without re-deriving data.
    """
    return rho_parts
