"""
codescent: finite crossed double categories, the corner 2-category, the distributive
law they induce, pi0-codescent, congruence quotients of finite categories, and the bar
construction attached to an operad morphism.

A crossed double category is stored concretely: finite vertical and horizontal
categories sharing an object set, an explicit finite set of squares with boundary
projections (top and bottom horizontal, left and right vertical), square pasting in
both directions, and a chosen-opcartesian selector kappa assigning to each horizontal
arrow f and vertical arrow g out of f's target a square with top f and right g.  The
axioms (pasting closure, interchange, the four kappa compatibility laws, and the
opcartesian universal property of every chosen square) are verified by enumeration,
never assumed.

Codescent is computed in two steps: form the corner 2-category (arrows are
vertical-then-horizontal composites, composed through kappa; 2-cells are squares with
an identity right edge) and take connected components of each hom category by
union-find over undirected zig-zags of 2-cells.  Composition descends to components;
this is verified rather than assumed, and a violation aborts with diagnostics, since it
would indicate an axiom failure upstream.

The bar construction of an operad morphism F : S -> T over a target colour j has the
classifier objects as objects, the bijective-indexed unit-decorated morphisms as
vertical arrows, the monotone-indexed morphisms as horizontal arrows, squares exactly
the commuting boundaries, and kappa given by the bijective-monotone factorization.
Composition never moves objects, so the full sub-double-category on objects of bounded
size is closed under everything above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .classifier import Classifier, ClassifierMorphism, ClassifierObject
from .finmaps import FinFunction, MonotoneMap, Permutation, all_permutations, as_function
from .operads import NONSYMMETRIC, SYMMETRIC, OperadError, OperadMorphism


class CodescentError(RuntimeError):
    """Raised when a verified property fails or a saturation budget is exceeded."""


# ------------------------------------------------------------------ finite categories


class FiniteCategory:
    """
    A finite category: objects, hom lists, identities, and a composition callback
    (memoised).  compose(g, f) means g∘f, with f applied first.
    """

    def __init__(self, objects, hom, identities, compose_fn, name="category"):
        self.name = name
        self.objects = list(objects)
        self._hom = {k: list(v) for k, v in hom.items() if v}
        self._identity = dict(identities)
        self._compose_fn = compose_fn
        self._memo: dict = {}
        self._ends: dict = {}
        for (a, b), ms in self._hom.items():
            for m in ms:
                self._ends[m] = (a, b)

    def hom(self, a, b) -> list:
        return list(self._hom.get((a, b), []))

    def morphisms(self):
        for (a, b), ms in self._hom.items():
            for m in ms:
                yield a, b, m

    def morphism_count(self) -> int:
        return sum(len(ms) for ms in self._hom.values())

    def identity(self, a):
        return self._identity[a]

    def source(self, m):
        return self._ends[m][0]

    def target(self, m):
        return self._ends[m][1]

    def compose(self, g, f):
        """g∘f (f first)."""
        if self.target(f) != self.source(g):
            raise CodescentError("morphisms are not composable")
        key = (g, f)
        out = self._memo.get(key)
        if out is None:
            out = self._memo[key] = self._compose_fn(g, f)
        return out

    def validate(self, max_triples: int | None = 200_000) -> None:
        """Check identity laws and associativity; raises on failure.  Associativity
        enumeration stops after max_triples composable triples (None = no cap)."""
        for a, b, m in self.morphisms():
            if self.compose(m, self.identity(a)) != m or self.compose(self.identity(b), m) != m:
                raise CodescentError(f"identity law fails at {m!r}")
        count = 0
        for a, b, f in self.morphisms():
            for c in self.objects:
                for g in self.hom(b, c):
                    gf = self.compose(g, f)
                    for d in self.objects:
                        for h in self.hom(c, d):
                            count += 1
                            if max_triples is not None and count > max_triples:
                                return
                            if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                                raise CodescentError(
                                    f"associativity fails at {f!r}; {g!r}; {h!r}"
                                )

    def isos(self) -> list:
        """All invertible morphisms (exhaustive two-sided inverse search)."""
        out = []
        for a, b, m in self.morphisms():
            for w in self.hom(b, a):
                if (
                    self.compose(w, m) == self.identity(a)
                    and self.compose(m, w) == self.identity(b)
                ):
                    out.append(m)
                    break
        return out

    # -------------------------------------------------------------- exports

    def to_json(self) -> dict:
        names = {}
        for i, (_, _, m) in enumerate(sorted(self.morphisms(), key=lambda t: repr(t))):
            names[m] = f"m{i}"
        table = []
        for _, b, f in self.morphisms():
            for c in self.objects:
                for g in self.hom(b, c):
                    table.append([names[g], names[f], names[self.compose(g, f)]])
        return {
            "objects": sorted(repr(o) for o in self.objects),
            "morphisms": [
                {
                    "name": names[m],
                    "src": repr(self.source(m)),
                    "tgt": repr(self.target(m)),
                    "label": repr(m),
                }
                for _, _, m in sorted(self.morphisms(), key=lambda t: repr(t))
            ],
            "identities": {repr(a): names[self.identity(a)] for a in sorted(self.objects, key=repr)},
            "composition": sorted(table),
        }

    @staticmethod
    def from_json(data: dict) -> "FiniteCategory":
        hom: dict = {}
        for m in data["morphisms"]:
            hom.setdefault((m["src"], m["tgt"]), []).append(m["name"])
        table = {(g, f): gf for g, f, gf in data["composition"]}

        def compose_fn(g, f):
            if (g, f) not in table:
                raise CodescentError(f"composition not tabulated for {(g, f)}")
            return table[(g, f)]

        return FiniteCategory(
            list(data["objects"]), hom, dict(data["identities"]), compose_fn, name="loaded"
        )

    def to_dot(self) -> str:
        lines = ["digraph category {"]
        index = {o: f"o{i}" for i, o in enumerate(sorted(self.objects, key=repr))}
        for o in sorted(self.objects, key=repr):
            lines.append(f'  {index[o]} [label="{_dot_escape(repr(o))}"];')
        for a, b, m in sorted(self.morphisms(), key=lambda t: repr(t)):
            if a == b and m == self.identity(a):
                continue
            lines.append(f'  {index[a]} -> {index[b]} [label="{_dot_escape(_short(m))}"];')
        lines.append("}")
        return "\n".join(lines)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _short(m, limit: int = 48) -> str:
    s = repr(m)
    return s if len(s) <= limit else s[: limit - 3] + "..."


# ----------------------------------------------------------------------- union-find


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if repr(ra) <= repr(rb):  # deterministic representative choice
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def classes(self, items) -> dict:
        out: dict = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return out


# -------------------------------------------------------------- crossed double cats


@dataclass(frozen=True)
class Square:
    """A square with boundary (top, left, right, bottom); the tag disambiguates
    parallel squares in data where the boundary is not determining."""

    top: Hashable
    left: Hashable
    right: Hashable
    bottom: Hashable
    tag: Hashable = None


class CrossedDoubleCategory:
    """
    A finite double category with chosen-opcartesian structure.  Vertical and
    horizontal arrows are hashable keys with explicit endpoint maps; squares form an
    explicit finite collection.  Pasting defaults to boundary lookup (sound whenever
    squares are boundary-determined, as in every bar fixture).
    """

    def __init__(
        self,
        objects: Sequence,
        vertical_hom: dict,
        vertical_id: dict,
        vertical_compose: Callable,
        horizontal_hom: dict,
        horizontal_id: dict,
        horizontal_compose: Callable,
        squares: Iterable[Square],
        kappa: Callable,
        name: str = "crossed double category",
    ):
        self.name = name
        self.objects = list(objects)
        self.v_hom = {k: list(v) for k, v in vertical_hom.items() if v}
        self.v_id = dict(vertical_id)
        self._v_comp = vertical_compose
        self.h_hom = {k: list(v) for k, v in horizontal_hom.items() if v}
        self.h_id = dict(horizontal_id)
        self._h_comp = horizontal_compose
        self.squares: list[Square] = []
        seen = set()
        for s in squares:
            if s not in seen:
                seen.add(s)
                self.squares.append(s)
        self._square_set = seen
        self._kappa = kappa
        self._v_memo: dict = {}
        self._h_memo: dict = {}
        self._kappa_memo: dict = {}
        self._v_ends = {m: k for k, ms in self.v_hom.items() for m in ms}
        self._h_ends = {m: k for k, ms in self.h_hom.items() for m in ms}
        self._verticals_from: dict = {}
        for (a, _), ms in self.v_hom.items():
            self._verticals_from.setdefault(a, []).extend(ms)
        self._by_top_left_right: dict = {}
        self._by_top_right: dict = {}
        self._by_top: dict = {}
        for s in self.squares:
            self._by_top_left_right.setdefault((s.top, s.left, s.right), []).append(s)
            self._by_top_right.setdefault((s.top, s.right), []).append(s)
            self._by_top.setdefault(s.top, []).append(s)

    # ---- endpoints
    def v_source(self, v):
        return self._v_ends[v][0]

    def v_target(self, v):
        return self._v_ends[v][1]

    def h_source(self, h):
        return self._h_ends[h][0]

    def h_target(self, h):
        return self._h_ends[h][1]

    def verticals(self):
        for (a, b), ms in self.v_hom.items():
            for m in ms:
                yield a, b, m

    def horizontals(self):
        for (a, b), ms in self.h_hom.items():
            for m in ms:
                yield a, b, m

    def verticals_from(self, a) -> list:
        return list(self._verticals_from.get(a, []))

    def horizontals_from(self, a) -> list:
        return [m for (x, _), ms in self.h_hom.items() if x == a for m in ms]

    # ---- composition and pasting
    def v_comp(self, v2, v1):
        """v2∘v1, v1 first."""
        out = self._v_memo.get((v2, v1))
        if out is None:
            if self.v_target(v1) != self.v_source(v2):
                raise CodescentError("verticals are not composable")
            out = self._v_memo[(v2, v1)] = self._v_comp(v2, v1)
        return out

    def h_comp(self, h2, h1):
        out = self._h_memo.get((h2, h1))
        if out is None:
            if self.h_target(h1) != self.h_source(h2):
                raise CodescentError("horizontals are not composable")
            out = self._h_memo[(h2, h1)] = self._h_comp(h2, h1)
        return out

    def kappa(self, f, g) -> Square:
        out = self._kappa_memo.get((f, g))
        if out is None:
            if self.v_source(g) != self.h_target(f):
                raise CodescentError("kappa needs a vertical out of the horizontal's target")
            out = self._kappa_memo[(f, g)] = self._kappa(f, g)
        return out

    def square_with_boundary(self, top, left, right, bottom) -> Square | None:
        for s in self._by_top_left_right.get((top, left, right), []):
            if s.bottom == bottom:
                return s
        return None

    def v_paste(self, s2: Square, s1: Square) -> Square:
        """Vertical pasting, s1 on top of s2 (s1's bottom = s2's top)."""
        if s1.bottom != s2.top:
            raise CodescentError("squares are not vertically composable")
        out = self.square_with_boundary(
            s1.top,
            self.v_comp(s2.left, s1.left),
            self.v_comp(s2.right, s1.right),
            s2.bottom,
        )
        if out is None:
            raise CodescentError("vertical pasting leaves the square set")
        return out

    def h_paste(self, s2: Square, s1: Square) -> Square:
        """Horizontal pasting, s1 to the left of s2 (s1's right = s2's left)."""
        if s1.right != s2.left:
            raise CodescentError("squares are not horizontally composable")
        out = self.square_with_boundary(
            self.h_comp(s2.top, s1.top),
            s1.left,
            s2.right,
            self.h_comp(s2.bottom, s1.bottom),
        )
        if out is None:
            raise CodescentError("horizontal pasting leaves the square set")
        return out

    def identity_square_on_horizontal(self, h) -> Square:
        a, b = self._h_ends[h]
        return Square(h, self.v_id[a], self.v_id[b], h)

    def identity_square_on_vertical(self, v) -> Square:
        a, b = self._v_ends[v]
        return Square(self.h_id[a], v, v, self.h_id[b])


# ---------------------------------------------------------------- axiom verification


@dataclass
class CrossedReport:
    passed: bool
    checks: int
    failures: list[str]

    def __bool__(self):
        return self.passed


def check_crossed_axioms(X: CrossedDoubleCategory) -> CrossedReport:
    """
    Verify by enumeration: square boundaries are well-typed; identity squares exist;
    pasting closure and interchange; the four kappa compatibility axioms; and the
    opcartesian universal property of every chosen square.  Stops at the first
    failure and reports it.
    """
    checks = 0

    def report(msg):
        return CrossedReport(False, checks, [msg])

    for s in X.squares:
        checks += 1
        ta, tb = X._h_ends[s.top]
        ba, bb = X._h_ends[s.bottom]
        la, lb = X._v_ends[s.left]
        ra, rb = X._v_ends[s.right]
        if (la, ra, lb, rb) != (ta, tb, ba, bb):
            return report(f"square {s} has a mismatched boundary")
    for _, _, h in X.horizontals():
        checks += 1
        if X.identity_square_on_horizontal(h) not in X._square_set:
            return report(f"missing identity square on horizontal {h!r}")
    for _, _, v in X.verticals():
        checks += 1
        if X.identity_square_on_vertical(v) not in X._square_set:
            return report(f"missing identity square on vertical {v!r}")

    by_top: dict = {}
    by_left: dict = {}
    by_top_left: dict = {}
    for s in X.squares:
        by_top.setdefault(s.top, []).append(s)
        by_left.setdefault(s.left, []).append(s)
        by_top_left.setdefault((s.top, s.left), []).append(s)

    for s1 in X.squares:
        for s2 in by_top.get(s1.bottom, []):
            checks += 1
            try:
                X.v_paste(s2, s1)
            except CodescentError as exc:
                return report(f"vertical pasting closure fails: {exc}")
        for s2 in by_left.get(s1.right, []):
            checks += 1
            try:
                X.h_paste(s2, s1)
            except CodescentError as exc:
                return report(f"horizontal pasting closure fails: {exc}")

    # interchange on 2x2 grids: when squares are determined by their boundary the two
    # pastes of a grid share a boundary, so interchange follows from pasting closure
    # (already verified); only square sets with parallel squares need the enumeration
    boundary_determined = len(X.squares) == len(
        {(s.top, s.left, s.right, s.bottom) for s in X.squares}
    )
    checks += 1
    if not boundary_determined:
        for a in X.squares:
            for b in by_left.get(a.right, []):
                for c in by_top.get(a.bottom, []):
                    for d in by_top_left.get((b.bottom, c.right), []):
                        checks += 1
                        first = X.v_paste(X.h_paste(d, c), X.h_paste(b, a))
                        second = X.h_paste(X.v_paste(d, b), X.v_paste(c, a))
                        if first != second:
                            return report("interchange fails on a 2x2 grid")

    # kappa unit axioms
    for _, _, f in X.horizontals():
        checks += 1
        if X.kappa(f, X.v_id[X.h_target(f)]) != X.identity_square_on_horizontal(f):
            return report(f"kappa(f, 1) is not the identity square at {f!r}")
    for _, _, g in X.verticals():
        checks += 1
        if X.kappa(X.h_id[X.v_source(g)], g) != X.identity_square_on_vertical(g):
            return report(f"kappa(1, g) is not the identity square at {g!r}")
    # kappa vertical compatibility
    for _, _, f in X.horizontals():
        for g1 in X.verticals_from(X.h_target(f)):
            k1 = X.kappa(f, g1)
            for g2 in X.verticals_from(X.v_target(g1)):
                checks += 1
                k2 = X.kappa(k1.bottom, g2)
                if X.v_paste(k2, k1) != X.kappa(f, X.v_comp(g2, g1)):
                    return report(f"kappa vertical compatibility fails at {f!r}")
    # kappa horizontal compatibility
    for _, _, f1 in X.horizontals():
        for f2 in X.horizontals_from(X.h_target(f1)):
            for g in X.verticals_from(X.h_target(f2)):
                checks += 1
                k2 = X.kappa(f2, g)
                k1 = X.kappa(f1, k2.left)
                if X.h_paste(k2, k1) != X.kappa(X.h_comp(f2, f1), g):
                    return report(f"kappa horizontal compatibility fails at {f2!r} ∘ {f1!r}")

    # opcartesian universal property of every chosen square
    by_top_right: dict = {}
    for s in X.squares:
        by_top_right.setdefault((s.top, s.right), []).append(s)
    for _, _, f in X.horizontals():
        for g in X.verticals_from(X.h_target(f)):
            k = X.kappa(f, g)
            for beta in by_top.get(f, []):
                for j in X.verticals_from(X.v_target(g)):
                    if X.v_comp(j, g) != beta.right:
                        continue
                    checks += 1
                    fillers = [
                        gamma
                        for gamma in by_top_right.get((k.bottom, j), [])
                        if gamma.bottom == beta.bottom
                        and X.v_comp(gamma.left, k.left) == beta.left
                        and X.v_paste(gamma, k) == beta
                    ]
                    if len(fillers) != 1:
                        return report(
                            f"opcartesian universal property fails at kappa({f!r}, {g!r}): "
                            f"{len(fillers)} fillers"
                        )

    return CrossedReport(True, checks, [])


# --------------------------------------------------------------------- corner 2-cat


@dataclass(frozen=True)
class Corner:
    """A vertical arrow followed by a horizontal arrow."""

    vertical: Hashable
    horizontal: Hashable


class CornerTwoCategory:
    """
    The 2-category of corners of a crossed double category: hom(a, b) is the finite
    category of corners a -> b with 2-cells between them, and corner composition goes
    through the chosen opcartesian squares.
    """

    def __init__(self, X: CrossedDoubleCategory):
        self.X = X
        self.objects = list(X.objects)
        self._corners: dict = {}
        for (a, z), vs in X.v_hom.items():
            for (z2, b), hs in X.h_hom.items():
                if z2 != z:
                    continue
                for v in vs:
                    for h in hs:
                        self._corners.setdefault((a, b), []).append(Corner(v, h))

    def corners(self, a, b) -> list[Corner]:
        return list(self._corners.get((a, b), []))

    def identity_corner(self, a) -> Corner:
        return Corner(self.X.v_id[a], self.X.h_id[a])

    def compose(self, c2: Corner, c1: Corner) -> Corner:
        """c2∘c1 (c1 first): reroute c1's horizontal past c2's vertical via kappa."""
        X = self.X
        k = X.kappa(c1.horizontal, c2.vertical)
        return Corner(X.v_comp(k.left, c1.vertical), X.h_comp(c2.horizontal, k.bottom))

    def two_cells_from(self, c: Corner):
        """All 2-cells out of c: pairs ((alpha, square), target corner)."""
        X = self.X
        mid = X.v_target(c.vertical)
        b = X.h_target(c.horizontal)
        for alpha in X.verticals_from(mid):
            for s in X._by_top_left_right.get((c.horizontal, alpha, X.v_id[b]), []):
                yield (alpha, s), Corner(X.v_comp(alpha, c.vertical), s.bottom)

    def hom_category(self, a, b) -> FiniteCategory:
        corners = self.corners(a, b)
        hom: dict = {}
        keys = set()
        for c in corners:
            for (alpha, s), d in self.two_cells_from(c):
                key = ("2cell", c, alpha, s)
                if key not in keys:
                    keys.add(key)
                    hom.setdefault((c, d), []).append(key)
        identities = {}
        for c in corners:
            mid = self.X.v_target(c.vertical)
            key = (
                "2cell",
                c,
                self.X.v_id[mid],
                self.X.identity_square_on_horizontal(c.horizontal),
            )
            identities[c] = key
            if key not in keys:
                keys.add(key)
                hom.setdefault((c, c), []).append(key)

        def compose_fn(t2, t1):
            _, c1, a1, s1 = t1
            _, _, a2, s2 = t2
            return ("2cell", c1, self.X.v_comp(a2, a1), self.X.v_paste(s2, s1))

        return FiniteCategory(corners, hom, identities, compose_fn, name=f"Cnr({a!r},{b!r})")


def corners_build(X: CrossedDoubleCategory) -> CornerTwoCategory:
    return CornerTwoCategory(X)


# ------------------------------------------------------------------ distributive law


@dataclass
class DeltaLaw:
    """The span-level distributive law of a crossed double category: the comma-data
    maps plus an exhaustive checker for the four distributive-law axioms."""

    X: CrossedDoubleCategory

    def on_object(self, f, g):
        """(f horizontal, g vertical out of its target) ↦ (lambda_{f,g}, rho_{f,g})."""
        k = self.X.kappa(f, g)
        return (k.left, k.bottom)

    def on_morphism(self, f, g, fp, gp, u, v, w: Square, x):
        """
        Image of the comma morphism (u, v, w, x) : (f, g) -> (fp, gp): returns
        (u, delta, x, epsilon) with epsilon the unique square with top rho_{f,g},
        right x and bottom rho_{fp,gp} satisfying eps ∘v kappa_{f,g} = kappa_{fp,gp} ∘v w.
        """
        X = self.X
        if w.top != f or w.bottom != fp or w.left != u or w.right != v:
            raise CodescentError("square does not match the comma morphism data")
        if X.v_comp(x, g) != X.v_comp(gp, v):
            raise CodescentError("comma morphism compatibility x∘g = g'∘v fails")
        k = X.kappa(f, g)
        kp = X.kappa(fp, gp)
        want = X.v_paste(kp, w)
        sols = [
            eps
            for eps in X._by_top_right.get((k.bottom, x), [])
            if eps.bottom == kp.bottom and X.v_paste(eps, k) == want
        ]
        if len(sols) != 1:
            raise CodescentError(f"distributive-law image not unique: {len(sols)} candidates")
        eps = sols[0]
        return (u, eps.left, x, eps)

    def comma_objects(self):
        X = self.X
        for _, _, f in X.horizontals():
            for g in X.verticals_from(X.h_target(f)):
                yield f, g

    def comma_morphisms(self):
        """All ((f,g), (fp,gp), (u,v,w,x)) morphisms of the comma category."""
        X = self.X
        for w in X.squares:
            f, u, v, fp = w.top, w.left, w.right, w.bottom
            for g in X.verticals_from(X.h_target(f)):
                for gp in X.verticals_from(X.h_target(fp)):
                    for x in X.verticals_from(X.v_target(g)):
                        if X.v_target(x) != X.v_target(gp):
                            continue
                        if X.v_comp(x, g) == X.v_comp(gp, v):
                            yield (f, g), (fp, gp), (u, v, w, x)

    def check(self) -> CrossedReport:
        """Verify the four distributive-law axioms (two unit, two multiplication) on
        both objects and morphisms of the comma data, by enumeration."""
        X = self.X
        checks = 0

        def report(msg):
            return CrossedReport(False, checks, [msg])

        # unit axiom (identity horizontal): delta(1, g) = (g, 1)
        for _, _, g in X.verticals():
            checks += 1
            if self.on_object(X.h_id[X.v_source(g)], g) != (g, X.h_id[X.v_target(g)]):
                return report(f"unit axiom (identity horizontal) fails at {g!r}")
        for _, _, v in X.verticals():
            w = X.identity_square_on_vertical(v)
            for g in X.verticals_from(X.h_target(w.top)):
                for x in X.verticals_from(X.v_target(g)):
                    for gp in X.verticals_from(X.h_target(w.bottom)):
                        if X.v_comp(gp, v) != X.v_comp(x, g):
                            continue
                        checks += 1
                        out = self.on_morphism(w.top, g, w.bottom, gp, v, v, w, x)
                        if out != (v, x, x, X.identity_square_on_vertical(x)):
                            return report(f"unit axiom on morphisms fails at {g!r}, {x!r}")
        # unit axiom (identity vertical): delta(f, 1) = (1, f)
        for _, _, f in X.horizontals():
            checks += 1
            a, b = X.h_source(f), X.h_target(f)
            if self.on_object(f, X.v_id[b]) != (X.v_id[a], f):
                return report(f"unit axiom (identity vertical) fails at {f!r}")
        for w in X.squares:
            checks += 1
            f, u, v, fp = w.top, w.left, w.right, w.bottom
            out = self.on_morphism(
                f, X.v_id[X.h_target(f)], fp, X.v_id[X.h_target(fp)], u, v, w, v
            )
            if out != (u, u, v, w):
                return report(f"unit axiom 2 on morphisms fails at {w!r}")
        # vertical multiplication axiom
        for f, g in self.comma_objects():
            for h in X.verticals_from(X.v_target(g)):
                checks += 1
                lam1, rho1 = self.on_object(f, g)
                lam2, rho2 = self.on_object(rho1, h)
                if self.on_object(f, X.v_comp(h, g)) != (X.v_comp(lam2, lam1), rho2):
                    return report(
                        f"vertical multiplication axiom fails at ({f!r}, {g!r}, {h!r})"
                    )
        # horizontal multiplication axiom
        for _, _, f1 in X.horizontals():
            for f2 in X.horizontals_from(X.h_target(f1)):
                for g in X.verticals_from(X.h_target(f2)):
                    checks += 1
                    lam2, rho2 = self.on_object(f2, g)
                    lam1, rho1 = self.on_object(f1, lam2)
                    if self.on_object(X.h_comp(f2, f1), g) != (lam1, X.h_comp(rho2, rho1)):
                        return report(
                            f"horizontal multiplication axiom fails at ({f1!r}, {f2!r}, {g!r})"
                        )
        return CrossedReport(True, checks, [])


def delta_law(X: CrossedDoubleCategory) -> DeltaLaw:
    return DeltaLaw(X)


# ------------------------------------------------------------------- pi0 codescent


@dataclass
class CodescentCocone:
    """The universal cocone: q0 on vertical arrows and q1 on horizontal arrows."""

    on_vertical: dict
    on_horizontal: dict


def pi0_codescent(
    X: CrossedDoubleCategory, well_defined: str = "linear"
) -> tuple[FiniteCategory, CodescentCocone]:
    """
    The codescent object of a finite crossed double category: objects those of X,
    hom(a, b) the connected components of the corner hom category under undirected
    zig-zags of 2-cells, with composition induced by corner composition.

    well_defined: "linear" checks rep∘member and member∘rep agreement on every
    composable class pair; "full" checks all member pairs; "off" skips the check.
    A violation raises CodescentError (it would mean X is not crossed).
    """
    if well_defined not in ("linear", "full", "off"):
        raise ValueError(f"unknown well-definedness mode {well_defined!r}")
    cnr = CornerTwoCategory(X)
    uf = UnionFind()
    corners_by_pair: dict = {}
    for a in X.objects:
        for b in X.objects:
            cs = cnr.corners(a, b)
            corners_by_pair[(a, b)] = cs
            for c in cs:
                uf.find((a, b, c))
            for c in cs:
                for _cell, d in cnr.two_cells_from(c):
                    uf.union((a, b, c), (a, b, d))

    class_members: dict = {}
    class_of: dict = {}
    for (a, b), cs in corners_by_pair.items():
        for c in cs:
            root = uf.find((a, b, c))
            class_members.setdefault(root, []).append(c)
            class_of[(a, b, c)] = root
    rep = {root: min(members, key=repr) for root, members in class_members.items()}

    hom: dict = {}
    for (a, b), cs in corners_by_pair.items():
        roots = sorted({class_of[(a, b, c)] for c in cs}, key=repr)
        if roots:
            hom[(a, b)] = roots
    identities = {a: class_of[(a, a, cnr.identity_corner(a))] for a in X.objects}

    def compose_fn(gcls, fcls):
        a = fcls[0]
        c = gcls[1]
        return class_of[(a, c, cnr.compose(rep[gcls], rep[fcls]))]

    C = FiniteCategory(X.objects, hom, identities, compose_fn, name=f"pi0({X.name})")

    if well_defined != "off":
        for (a, b), cs in corners_by_pair.items():
            groups1: dict = {}
            for x in cs:
                groups1.setdefault(class_of[(a, b, x)], []).append(x)
            for (b2, c), cs2 in corners_by_pair.items():
                if b2 != b:
                    continue
                groups2: dict = {}
                for y in cs2:
                    groups2.setdefault(class_of[(b, c, y)], []).append(y)
                for r1, mem1 in groups1.items():
                    for r2, mem2 in groups2.items():
                        expected = class_of[(a, c, cnr.compose(rep[r2], rep[r1]))]
                        if well_defined == "full":
                            pairs = [(y, x) for x in mem1 for y in mem2]
                        else:
                            pairs = [(rep[r2], x) for x in mem1] + [(y, rep[r1]) for y in mem2]
                        for y, x in pairs:
                            if class_of[(a, c, cnr.compose(y, x))] != expected:
                                raise CodescentError(
                                    "composition is not well-defined on pi0 classes at "
                                    f"{x!r} ; {y!r} (upstream axiom violation?)"
                                )

    cocone_v = {v: class_of[(a, b, Corner(v, X.h_id[b]))] for a, b, v in X.verticals()}
    cocone_h = {h: class_of[(a, b, Corner(X.v_id[a], h))] for a, b, h in X.horizontals()}
    return C, CodescentCocone(cocone_v, cocone_h)


# ------------------------------------------------------------------------------ bar


def bar_build(F: OperadMorphism, j, bound: int) -> tuple[CrossedDoubleCategory, Classifier]:
    """
    The crossed double category of the bar construction of F over target colour j,
    truncated to classifier objects with at most `bound` inputs.  Vertical arrows are
    the bijective-indexed unit-decorated classifier morphisms, horizontal arrows the
    monotone-indexed ones, squares exactly the commuting boundaries, and kappa comes
    from the bijective-monotone factorization.  The braided bar is not constructed:
    bounded truncations of vine-indexed squares are not known to be closed under the
    opcartesian lifts.
    """
    cls = Classifier(F)
    if cls.flavour not in (SYMMETRIC, NONSYMMETRIC):
        raise OperadError("the braided bar construction is not supported")
    objects = cls.objects(j, bound)
    obj_set = set(objects)

    vertical_hom: dict = {}
    vertical_id: dict = {}
    for y in objects:
        vertical_id[y] = cls.identity(y)
        if cls.flavour == SYMMETRIC:
            for rho in all_permutations(y.size):
                v = cls.identity(y) if rho.is_identity() else cls.vertical(y, rho)
                vertical_hom.setdefault((v.dom, y), []).append(v)
        else:
            vertical_hom.setdefault((y, y), []).append(cls.identity(y))

    horizontal_hom: dict = {}
    horizontal_id = {y: cls.identity(y) for y in objects}
    horizontal_set = set()
    for y in objects:
        for m in range(bound + 1):
            for sizes in _compositions_of(m, y.size):
                pools = [cls.S.ops(y.colours[k], sizes[k]) for k in range(y.size)]
                for betas in itertools.product(*pools):
                    dom_colours = tuple(c for b in betas for c in b.source)
                    dom_op = cls.T.compose(y.op, [cls.F(b) for b in betas])
                    dom = ClassifierObject(dom_colours, dom_op)
                    if dom not in obj_set:
                        continue
                    if cls.flavour == SYMMETRIC:
                        indexing = as_function(MonotoneMap(sizes))
                    else:
                        indexing = MonotoneMap(sizes)
                    h = ClassifierMorphism(dom, y, indexing, betas)
                    horizontal_hom.setdefault((dom, y), []).append(h)
                    horizontal_set.add(h)

    def is_monotone_indexed(m: ClassifierMorphism) -> bool:
        return as_function(m.indexing).is_monotone()

    squares: list[Square] = []
    verticals_into: dict = {}
    for (_, t), vs in vertical_hom.items():
        verticals_into.setdefault(t, []).extend(vs)
    for (xp, yp), h2s in horizontal_hom.items():
        for h2 in h2s:
            for v1 in verticals_into.get(xp, []):
                m = cls.compose(v1, h2)  # bottom ∘ left
                for v2 in verticals_into.get(yp, []):
                    top = cls.compose(m, _vertical_inverse(cls, v2))
                    if is_monotone_indexed(top) and top in horizontal_set:
                        squares.append(Square(top, v1, v2, h2))

    def vertical_compose(v2, v1):
        return cls.compose(v1, v2)

    def horizontal_compose(h2, h1):
        return cls.compose(h1, h2)

    square_set = set(squares)

    def kappa(f, g):
        vert, horiz = cls.factor_through_corner(cls.compose(f, g))
        s = Square(f, vert, g, horiz)
        if s not in square_set:
            raise CodescentError("kappa square missing from the square set")
        return s

    X = CrossedDoubleCategory(
        objects,
        vertical_hom,
        vertical_id,
        vertical_compose,
        horizontal_hom,
        horizontal_id,
        horizontal_compose,
        squares,
        kappa,
        name=f"bar({F.name}, {j!r}, {bound})",
    )
    return X, cls


def _compositions_of(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions_of(total - first, parts - 1):
            yield (first,) + rest


def _vertical_inverse(cls: Classifier, v: ClassifierMorphism) -> ClassifierMorphism:
    """The inverse of a bijective-indexed unit-decorated morphism."""
    if cls.flavour == NONSYMMETRIC:
        return v  # identities only
    inv = Permutation(v.indexing.images).inverse()
    return cls.vertical(v.dom, inv)


# ----------------------------------------------------- bar simplicial levels 0..2


@dataclass
class BarLevels:
    """
    The 2-truncated simplicial data of a bar fixture.  Level-1 cells are the
    horizontal arrows (operation-plus-decorations pairs); level-2 cells are
    composable pairs of horizontals.  The faces are: d0 forgets the inner layer,
    d1 composes (the multiplication face), d2 pushes the outer layer forward.
    """

    cls: Classifier
    X: CrossedDoubleCategory

    def level0(self):
        return list(self.X.objects)

    def level1(self):
        return [h for _, _, h in self.X.horizontals()]

    def level2(self):
        out = []
        for _, mid, inner in self.X.horizontals():
            for outer in self.X.horizontals_from(mid):
                out.append((inner, outer))
        return out

    def d0_level1(self, h):
        return h.cod

    def d1_level1(self, h):
        """The multiplication face at level 1: evaluated independently of the stored
        domain, by substituting the decorations into the target operation."""
        colours = tuple(c for b in h.decorations for c in b.source)
        op = self.cls.T.compose(h.cod.op, [self.cls.F(b) for b in h.decorations])
        return ClassifierObject(colours, op)

    def s0_level0(self, obj):
        return self.X.h_id[obj]

    def d0_level2(self, cell):
        return cell[1]

    def d1_level2(self, cell):
        return self.X.h_comp(cell[1], cell[0])

    def d2_level2(self, cell):
        return cell[0]


def bar_levels(F: OperadMorphism, j, bound: int) -> BarLevels:
    X, cls = bar_build(F, j, bound)
    return BarLevels(cls, X)


# --------------------------------------------------------------------- congruences


class Congruence:
    """
    A union-find partition of the morphisms (and objects) of a finite category,
    saturated to a congruence, with an explicit step budget.  Saturation runs
    bridged-representative rounds: for every pair of morphism classes and every
    neutral bridge (a member of an identity-containing class) between compatible
    endpoints, the composites rep2 ∘ bridge ∘ rep1 must land in one class; violations
    merge and the rounds repeat to a fixpoint.  When no violation ever occurs the
    classes are exactly two-sided orbits under the seeded neutral morphisms and the
    fixpoint is provably a congruence; otherwise a member-level stability pass
    verifies the result (and raises if the budget is exhausted first).
    """

    def __init__(self, C: FiniteCategory, step_budget: int = 5_000_000):
        self.C = C
        self.uf = UnionFind()
        self.obj_uf = UnionFind()
        self.budget = step_budget
        self._steps = 0
        self._pure = True
        for a in C.objects:
            self.obj_uf.find(a)
        for _, _, m in C.morphisms():
            self.uf.find(m)

    def _tick(self, n: int = 1):
        self._steps += n
        if self._steps > self.budget:
            raise CodescentError("congruence saturation exceeded its step budget")

    def merge(self, m1, m2):
        self.uf.union(m1, m2)

    def merge_objects(self, a, b):
        self.obj_uf.union(a, b)

    def _classes(self):
        return self.uf.classes(m for _, _, m in self.C.morphisms())

    def _neutral_bridges(self):
        """Members of identity-containing classes, grouped by exact endpoints."""
        C = self.C
        neutral_roots = {self.uf.find(C.identity(a)) for a in C.objects}
        bridges: dict = {}
        for _, _, m in C.morphisms():
            if self.uf.find(m) in neutral_roots:
                bridges.setdefault((C.source(m), C.target(m)), []).append(m)
        return bridges

    def saturate(self):
        C = self.C
        while True:
            changed = False
            classes = self._classes()
            reps = {root: min(ms, key=repr) for root, ms in classes.items()}
            bridges = self._neutral_bridges()
            roots = sorted(classes, key=repr)
            for r1 in roots:
                f = reps[r1]
                tf = C.target(f)
                for r2 in roots:
                    g = reps[r2]
                    sg = C.source(g)
                    results = set()
                    if tf == sg:
                        self._tick()
                        results.add(self.uf.find(C.compose(g, f)))
                    for b in bridges.get((tf, sg), []):
                        self._tick()
                        results.add(self.uf.find(C.compose(g, C.compose(b, f))))
                    if len(results) > 1:
                        first, *rest = sorted(results, key=repr)
                        for other in rest:
                            self.uf.union(first, other)
                        changed = True
                        self._pure = False
            if not changed:
                return

    def enforce_stability(self) -> bool:
        """
        Member-level congruence enforcement: for every morphism g and class F, all
        bridged composites g∘(b∘f) over members f of F must land in one class, and
        dually.  Violations are merged.  Returns True when anything merged (callers
        should then re-saturate and repeat to a fixpoint).
        """
        C = self.C
        classes = self._classes()
        bridges = self._neutral_bridges()
        changed = False

        def sweep(left: bool) -> None:
            nonlocal changed
            for _root, members in classes.items():
                for _, _, g in C.morphisms():
                    seen = set()
                    for f in members:
                        x, y = (f, g) if left else (g, f)
                        tf, sg = C.target(x), C.source(y)
                        if tf == sg:
                            self._tick()
                            seen.add(self.uf.find(C.compose(y, x)))
                        for b in bridges.get((tf, sg), []):
                            self._tick()
                            seen.add(self.uf.find(C.compose(y, C.compose(b, x))))
                    if len(seen) > 1:
                        first, *rest = sorted(seen, key=repr)
                        for other in rest:
                            self.uf.union(first, other)
                        changed = True

        sweep(left=True)
        sweep(left=False)
        return changed

    def quotient(self) -> FiniteCategory:
        """The quotient category on object and morphism classes; composition goes
        through bridged representatives (sound at the saturation fixpoint)."""
        C = self.C
        obj_classes = self.obj_uf.classes(C.objects)
        obj_of = {a: root for root, mem in obj_classes.items() for a in mem}
        classes = self._classes()
        reps = {root: min(ms, key=repr) for root, ms in classes.items()}
        bridges = self._neutral_bridges()
        hom: dict = {}
        for root, mem in classes.items():
            r = reps[root]
            key = (obj_of[C.source(r)], obj_of[C.target(r)])
            for m in mem:
                if (obj_of[C.source(m)], obj_of[C.target(m)]) != key:
                    raise CodescentError("a congruence class crosses object classes")
            hom.setdefault(key, []).append(root)
        for key in hom:
            hom[key] = sorted(set(hom[key]), key=repr)
        identities = {}
        for root, mem in obj_classes.items():
            ids = {self.uf.find(C.identity(a)) for a in mem}
            if len(ids) != 1:
                raise CodescentError("identities of merged objects are not identified")
            identities[root] = next(iter(ids))

        uf = self.uf

        def compose_fn(gcls, fcls):
            f, g = reps[fcls], reps[gcls]
            tf, sg = C.target(f), C.source(g)
            if tf == sg:
                return uf.find(C.compose(g, f))
            for b in bridges.get((tf, sg), []):
                return uf.find(C.compose(g, C.compose(b, f)))
            raise CodescentError("no bridge between merged middle objects")

        return FiniteCategory(
            sorted(obj_classes, key=repr), hom, identities, compose_fn, name=f"{C.name}/isos"
        )


def quotient_identify_isos(
    C: FiniteCategory, step_budget: int = 20_000_000, verify: str = "auto"
) -> FiniteCategory:
    """
    The universal quotient of C sending every isomorphism to an identity: objects
    merge along isomorphism classes and morphisms along the congruence generated by
    f ≈ f∘h and f ≈ h∘f for h invertible.  verify: "auto" runs the member-level
    stability check only when saturation had to merge beyond the two-sided orbits
    (where the fixpoint is not automatically a congruence); "always"/"never" force it.
    """
    cong = Congruence(C, step_budget)
    for h in C.isos():
        a, b = C.source(h), C.target(h)
        cong.merge_objects(a, b)
        cong.merge(h, C.identity(a))
        for x in C.objects:
            for f in C.hom(b, x):
                cong._tick()
                cong.merge(C.compose(f, h), f)
            for f in C.hom(x, a):
                cong._tick()
                cong.merge(C.compose(h, f), f)
    cong.saturate()
    if verify == "always" or (verify == "auto" and not cong._pure):
        while cong.enforce_stability():
            cong.saturate()
    return cong.quotient()


# ------------------------------------------------------------------------- fixtures


def discrete_double_category(C: FiniteCategory) -> CrossedDoubleCategory:
    """A category as a componentwise-discrete crossed double category: verticals are
    identities, horizontals the morphisms, squares the identity squares, kappa forced."""
    objects = list(C.objects)
    vertical_hom = {(a, a): [("v", a)] for a in objects}
    vertical_id = {a: ("v", a) for a in objects}
    horizontal_hom: dict = {}
    for a, b, m in C.morphisms():
        horizontal_hom.setdefault((a, b), []).append(m)
    horizontal_id = {a: C.identity(a) for a in objects}
    squares = [Square(m, ("v", a), ("v", b), m) for a, b, m in C.morphisms()]

    def kappa(f, g):
        return Square(f, g, g, f)

    return CrossedDoubleCategory(
        objects,
        vertical_hom,
        vertical_id,
        lambda v2, v1: v1,
        horizontal_hom,
        horizontal_id,
        C.compose,
        squares,
        kappa,
        name=f"discrete({C.name})",
    )
