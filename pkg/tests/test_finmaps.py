import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from propcat.finmaps import (
    ArityMismatch,
    BlockProfile,
    FinFunction,
    MonotoneMap,
    Permutation,
    all_functions,
    all_monotone,
    all_permutations,
    bij_mon_factorize,
    block_decompose,
    block_substitute,
    compose,
    ordinal_sum,
)


def fibre_order_preserving(rho: Permutation, g: MonotoneMap) -> bool:
    """Independent statement of the factorization side condition."""
    inv = rho.inverse()
    for k in range(g.target):
        pre = [inv(p) for p in g.fibre(k)]
        if any(a > b for a, b in zip(pre, pre[1:])):
            return False
    return True


def brute_force_factorizations(h: FinFunction):
    """All (g, rho) in Delta+ x Sigma with h = g∘rho and rho fibre-order-preserving."""
    out = []
    for g in all_monotone(h.source, h.target):
        for rho in all_permutations(h.source):
            if compose(g, rho).images == h.images and fibre_order_preserving(rho, g):
                out.append((g, rho))
    return out


def wire_tracked_substitution(rho: Permutation, blocks) -> Permutation:
    """Oracle for block_substitute: place each source block at target slot rho(k)."""
    a = [b.n for b in blocks]
    tgt_sizes = [0] * rho.n
    for k in range(rho.n):
        tgt_sizes[rho(k)] = a[k]
    tgt_off = list(itertools.accumulate([0] + tgt_sizes))
    src_off = list(itertools.accumulate([0] + a))
    img = [0] * sum(a)
    for k in range(rho.n):
        for l in range(a[k]):
            img[src_off[k] + l] = tgt_off[rho(k)] + blocks[k](l)
    return Permutation(tuple(img))


# ---------------------------------------------------------------- compose


def test_compose_identity():
    i3 = FinFunction.identity(3)
    assert compose(i3, i3) == i3


def test_compose_involution():
    swap = Permutation((1, 0))
    assert compose(swap, swap) == Permutation.identity(2)


def test_compose_pointwise_example():
    f = FinFunction((1, 0, 1), 2)  # (2,1,2) one-indexed
    rho = Permutation((1, 0, 2))  # (2,1,3)
    assert compose(f, rho).images == (0, 1, 1)  # (2,1,2)∘(2,1,3) = (1,2,2)... 0-indexed


def test_compose_kind_narrowing():
    assert isinstance(compose(Permutation((1, 0)), Permutation((1, 0))), Permutation)
    assert isinstance(compose(MonotoneMap((2,)), MonotoneMap((1, 1))), MonotoneMap)
    assert isinstance(compose(MonotoneMap((2,)), Permutation((1, 0))), FinFunction)


def test_compose_arity_mismatch():
    with pytest.raises(ArityMismatch):
        compose(Permutation((1, 0)), Permutation((0, 1, 2)))


# ---------------------------------------------------- bijective-monotone


def test_factorize_identity():
    g, rho = bij_mon_factorize(FinFunction.identity(4))
    assert g.is_identity() and rho.is_identity()


def test_factorize_spec_example():
    # h: 3->2 with one-indexed images (2,1,2)
    g, rho = bij_mon_factorize(FinFunction((1, 0, 1), 2))
    assert g.fibre_sizes == (1, 2)
    assert rho.images == (1, 0, 2)
    assert brute_force_factorizations(FinFunction((1, 0, 1), 2)) == [(g, rho)]


def test_factorize_round_trip_up_to_five():
    for m in range(6):
        for n in range(6):
            for h in all_functions(m, n):
                g, rho = bij_mon_factorize(h)
                assert compose(g, rho).images == h.images
                assert fibre_order_preserving(rho, g)


def test_factorize_uniqueness_by_forward_enumeration():
    # Every valid (g, rho) pair with m,n <= 5 hits a distinct h, so each h has
    # exactly one factorization over the full search space.
    seen = {}
    for m in range(6):
        for n in range(6):
            for g in all_monotone(m, n):
                for rho in all_permutations(m):
                    if fibre_order_preserving(rho, g):
                        h = compose(g, rho)
                        key = (m, n, h.images)
                        assert key not in seen
                        seen[key] = True
            total = sum(1 for _ in all_functions(m, n))
            assert sum(1 for (mm, nn, _) in seen if (mm, nn) == (m, n)) == total


def test_factorize_respects_ordinal_sum():
    for h1 in all_functions(2, 2):
        for h2 in all_functions(2, 1):
            g, rho = bij_mon_factorize(ordinal_sum(h1, h2))
            g1, r1 = bij_mon_factorize(h1)
            g2, r2 = bij_mon_factorize(h2)
            assert g == ordinal_sum(g1, g2)
            assert rho == ordinal_sum(r1, r2)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 5), max_size=8))
def test_factorize_round_trip_random(images):
    h = FinFunction(tuple(images), 6)
    g, rho = bij_mon_factorize(h)
    assert compose(g, rho).images == h.images


# ------------------------------------------------------- block operations


def test_block_substitute_identity():
    rho = Permutation.identity(3)
    blocks = [Permutation.identity(2)] * 3
    assert block_substitute(rho, blocks) == Permutation.identity(6)


def test_block_substitute_swap_example():
    swap = Permutation((1, 0))
    psi = block_substitute(swap, [Permutation.identity(1), Permutation.identity(2)])
    assert psi.images == (2, 0, 1)
    assert psi == wire_tracked_substitution(swap, [Permutation.identity(1), Permutation.identity(2)])


def test_block_substitute_matches_wire_tracking():
    for n in range(4):
        for rho in all_permutations(n):
            for sizes in itertools.product(range(3), repeat=n):
                for blocks in itertools.product(*[list(all_permutations(s)) for s in sizes]):
                    assert block_substitute(rho, blocks) == wire_tracked_substitution(rho, blocks)


def test_block_substitute_square_equation():
    # g∘psi = rho∘f where f has the rho-permuted fibre sizes and g the plain ones.
    for n in range(4):
        for rho in all_permutations(n):
            for sizes in itertools.product(range(3), repeat=n):
                blocks = [Permutation.identity(s) for s in sizes]
                psi = block_substitute(rho, blocks)
                b = [0] * n
                for k in range(n):
                    b[rho(k)] = sizes[k]
                f = MonotoneMap(tuple(sizes))
                g = MonotoneMap(tuple(b))
                assert compose(g, psi).images == compose(rho, f).images


def test_block_substitute_operadic_associativity():
    # Substituting into a substitution equals the flattened substitution,
    # exhaustively for total arity <= 6.
    for n in range(1, 4):
        for rho in all_permutations(n):
            for mid_sizes in itertools.product(range(3), repeat=n):
                if sum(mid_sizes) > 4:
                    continue
                for mids in itertools.product(*[list(all_permutations(s)) for s in mid_sizes]):
                    for leaf_sizes in itertools.product(range(3), repeat=sum(mid_sizes)):
                        if sum(leaf_sizes) > 6 or sum(mid_sizes) + sum(leaf_sizes) > 6:
                            continue
                        leaves = [Permutation.identity(s) for s in leaf_sizes]
                        # route 1: substitute leaves into mids, then into rho
                        off = 0
                        inner = []
                        for k, m in enumerate(mids):
                            inner.append(block_substitute(m, leaves[off:off + m.n]))
                            off += m.n
                        lhs = block_substitute(rho, inner)
                        # route 2: substitute mids into rho, then leaves into that
                        outer = block_substitute(rho, list(mids))
                        # the leaf family must be re-indexed along the source order
                        # of the mid substitution: block k of outer is block k of
                        # the concatenated mids, so leaves line up as-is
                        rhs = block_substitute(outer, leaves)
                        assert lhs == rhs


def test_block_decompose_paper_counterexample():
    psi = Permutation.from_cycle(4, [1, 2, 4])
    assert block_decompose(psi, BlockProfile((2, 2))) is None
    # exhaustive: no (rho, blocks) reproduces psi
    hits = [
        (rho, blocks)
        for rho in all_permutations(2)
        for blocks in itertools.product(all_permutations(2), all_permutations(2))
        if block_substitute(rho, list(blocks)) == psi
    ]
    assert hits == []


def test_block_decompose_identity():
    rho, blocks = block_decompose(Permutation.identity(4), (2, 2))
    assert rho.is_identity() and all(b.is_identity() for b in blocks)


def test_block_decompose_round_trip_sigma4():
    for psi in all_permutations(4):
        dec = block_decompose(psi, (2, 2))
        if dec is not None:
            rho, blocks = dec
            assert block_substitute(rho, list(blocks)) == psi
    for rho in all_permutations(2):
        for blocks in itertools.product(all_permutations(2), all_permutations(2)):
            psi = block_substitute(rho, list(blocks))
            assert block_decompose(psi, (2, 2)) == (rho, tuple(blocks))


# ------------------------------------------------------------ ordinal sum


def test_ordinal_sum_identities():
    assert ordinal_sum(Permutation.identity(2), Permutation.identity(3)) == Permutation.identity(5)
    assert ordinal_sum(MonotoneMap((2,)), MonotoneMap((1, 1))).fibre_sizes == (2, 1, 1)


def test_ordinal_sum_bifunctorial():
    for m, n in [(2, 2), (3, 2), (2, 3)]:
        fns_m = list(all_functions(m, m))[:6]
        fns_n = list(all_functions(n, n))[:6]
        for f, g in itertools.product(fns_m, fns_n):
            for f2, g2 in itertools.product(fns_m, fns_n):
                lhs = compose(ordinal_sum(f, g), ordinal_sum(f2, g2))
                rhs = ordinal_sum(compose(f, f2), compose(g, g2))
                assert lhs == rhs


def test_ordinal_sum_mixed_kind_rejected():
    with pytest.raises(ArityMismatch):
        ordinal_sum(Permutation((0,)), MonotoneMap((1,)))


# ------------------------------------------------------------------- JSON


def test_json_round_trips_one_indexed():
    p = Permutation((2, 0, 1))
    assert p.to_json() == [3, 1, 2]
    assert Permutation.from_json(p.to_json()) == p
    m = MonotoneMap((1, 2))
    assert m.to_json() == {"fibres": [1, 2], "target": 2}
    assert MonotoneMap.from_json(m.to_json()) == m
    f = FinFunction((1, 0, 1), 2)
    assert f.to_json() == {"images": [2, 1, 2], "target": 2}
    assert FinFunction.from_json(f.to_json()) == f


@given(st.permutations(list(range(6))))
def test_inverse_round_trip(images):
    p = Permutation(tuple(images))
    assert compose(p, p.inverse()).is_identity()
    assert compose(p.inverse(), p).is_identity()
