"""Tensor bookkeeping: Kronecker products, leg permutations, embeddings, inverses.

The embedding and permutation tests are checked against matrices built
independently from first principles: a basis-index map (i1..in) -> (j1..jn)
is turned into a 0/1 matrix entry by entry, with no call into the library's
own leg machinery.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ybt import (
    COMPLEX64,
    Operator,
    RATIONAL,
    determinant,
    embed,
    identity,
    invert,
    kron,
    leg_permute,
    residual,
    swap,
)
from ybt.errors import BackendMismatchError, ShapeMismatchError, SingularOperatorError

from conftest import diag_operator, rand_invertible, rand_operator


def index_map_matrix(site_dim, legs, index_fn):
    """Oracle: permutation matrix M with M[index_fn(idx)][idx] = 1.

    index_fn acts on multi-indices written as tuples, leftmost slowest.
    """
    side = site_dim**legs

    def to_tuple(idx):
        out = []
        for _ in range(legs):
            out.append(idx % site_dim)
            idx //= site_dim
        return tuple(reversed(out))

    def to_index(ts):
        idx = 0
        for t in ts:
            idx = idx * site_dim + t
        return idx

    rows = [[Fraction(0)] * side for _ in range(side)]
    for src in range(side):
        dst = to_index(index_fn(to_tuple(src)))
        rows[dst][src] = Fraction(1)
    return Operator(site_dim, legs, RATIONAL, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# kron
# ---------------------------------------------------------------------------


def test_kron_identities():
    assert kron(identity(2, 1), identity(2, 1)) == identity(2, 2)


def test_kron_diagonal_is_entrywise():
    a = diag_operator([1, 2], legs=1)
    b = diag_operator([1, 3], legs=1)
    assert kron(a, b) == diag_operator([1, 3, 2, 6], legs=2)


def test_kron_swap_equals_embed_and_oracle():
    # P on legs (1,2) of a 3-leg space, all three routes
    p12 = kron(swap(2), identity(2, 1))
    assert p12 == embed(swap(2), [1, 2], 3)
    oracle = index_map_matrix(2, 3, lambda t: (t[1], t[0], t[2]))
    assert p12 == oracle


def test_kron_unit_is_neutral():
    rng = random.Random(3)
    x = rand_operator(rng, legs=2)
    assert kron(identity(2, 0), x) == x
    assert kron(x, identity(2, 0)) == x


def test_kron_rejects_mixed_backends():
    with pytest.raises(BackendMismatchError):
        kron(identity(2, 1), identity(2, 1, COMPLEX64))


def test_kron_rejects_site_dim_mismatch():
    with pytest.raises(ShapeMismatchError):
        kron(identity(2, 1), identity(3, 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30))
def test_kron_associative(seed):
    rng = random.Random(seed)
    a, b, c = (rand_operator(rng, legs=1) for _ in range(3))
    assert residual(kron(kron(a, b), c), kron(a, kron(b, c))) == 0


# ---------------------------------------------------------------------------
# leg_permute
# ---------------------------------------------------------------------------


def test_leg_permute_moves_factors_to_slots():
    rng = random.Random(7)
    a, b, c = (rand_operator(rng, legs=1) for _ in range(3))
    x = kron(kron(a, b), c)
    # factor k goes to slot sigma(k): a->3, b->1, c->2
    assert leg_permute(x, (3, 1, 2)) == kron(kron(b, c), a)


def test_leg_permute_identity():
    rng = random.Random(11)
    x = rand_operator(rng, legs=3)
    assert leg_permute(x, (1, 2, 3)) == x


def test_leg_permute_roundtrip_100_instances():
    rng = random.Random(13)
    perms = [(1, 2, 3), (2, 1, 3), (3, 1, 2), (2, 3, 1), (3, 2, 1), (1, 3, 2)]
    for _ in range(100):
        x = rand_operator(rng, legs=3)
        sigma = perms[rng.randrange(len(perms))]
        inverse = [0] * 3
        for k, s in enumerate(sigma, start=1):
            inverse[s - 1] = k
        assert leg_permute(leg_permute(x, sigma), inverse) == x


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30))
def test_leg_permute_group_action(seed):
    rng = random.Random(seed)
    x = rand_operator(rng, legs=3)
    perms = [(2, 1, 3), (3, 1, 2), (1, 3, 2), (2, 3, 1)]
    rho = perms[rng.randrange(len(perms))]
    sigma = perms[rng.randrange(len(perms))]
    composed = tuple(sigma[rho[k] - 1] for k in range(3))
    assert leg_permute(x, composed) == leg_permute(leg_permute(x, rho), sigma)


def test_leg_permute_rejects_non_bijections():
    x = identity(2, 3)
    with pytest.raises(ShapeMismatchError):
        leg_permute(x, (1, 1, 2))
    with pytest.raises(ShapeMismatchError):
        leg_permute(x, (1, 2))


# ---------------------------------------------------------------------------
# embed
# ---------------------------------------------------------------------------


def test_embed_full_slots_is_identity_operation():
    rng = random.Random(17)
    f = rand_operator(rng, legs=2)
    assert embed(f, [1, 2], 2) == f


def test_embed_exchange_of_outer_legs():
    oracle = index_map_matrix(2, 3, lambda t: (t[2], t[1], t[0]))
    assert embed(swap(2), [1, 3], 3) == oracle


def test_embed_identity_stays_identity():
    assert embed(identity(2, 2), [2, 3], 3) == identity(2, 3)


def test_embed_slot_order_is_factor_order():
    rng = random.Random(19)
    f = rand_operator(rng, legs=2)
    assert embed(f, [2, 1], 2) == leg_permute(f, (2, 1))


def test_embed_matches_permuted_kron():
    rng = random.Random(23)
    for total in (3, 4):
        for slots in [(1, 2), (1, 3), (2, 3), (1, total), (2, total)]:
            if slots[1] > total:
                continue
            x = rand_operator(rng, legs=2)
            sigma = [0] * total
            sigma[0], sigma[1] = slots[0], slots[1]
            rest = [s for s in range(1, total + 1) if s not in slots]
            for k, s in enumerate(rest):
                sigma[2 + k] = s
            padded = kron(x, identity(2, total - 2))
            assert embed(x, slots, total) == leg_permute(padded, sigma)


def test_embed_oracle_at_site_dim_three():
    oracle = index_map_matrix(3, 3, lambda t: (t[2], t[1], t[0]))
    assert embed(swap(3), [1, 3], 3) == oracle


def test_embed_rejects_bad_slots():
    f = identity(2, 2)
    with pytest.raises(ShapeMismatchError):
        embed(f, [1, 1], 3)
    with pytest.raises(ShapeMismatchError):
        embed(f, [1, 4], 3)
    with pytest.raises(ShapeMismatchError):
        embed(f, [1], 3)


# ---------------------------------------------------------------------------
# invert / determinant
# ---------------------------------------------------------------------------


def test_invert_identity():
    assert invert(identity(2, 2)) == identity(2, 2)


def test_invert_diagonal():
    x = diag_operator([2, Fraction(1, 3), 1, 5])
    assert invert(x) == diag_operator([Fraction(1, 2), 3, 1, Fraction(1, 5)])


def test_invert_swap_is_involution():
    p = swap(2)
    assert invert(p) @ p == identity(2, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**30))
def test_invert_exact_roundtrip(seed):
    rng = random.Random(seed)
    legs = rng.choice([1, 2])
    x = rand_invertible(rng, legs=legs)
    inv = invert(x)
    ident = identity(2, legs)
    assert x @ inv == ident
    assert inv @ x == ident


def test_invert_singular_reports_rank():
    rows = [
        [1, 2, 3, 4],
        [2, 4, 6, 8],
        [0, 0, 1, 1],
        [0, 0, 2, 2],
    ]
    x = Operator.from_rows(2, 2, rows)
    with pytest.raises(SingularOperatorError) as err:
        invert(x)
    assert err.value.rank == 2


def test_determinant_matches_diagonal_product():
    x = diag_operator([2, 3, Fraction(1, 6), 1])
    assert determinant(x) == 1
    assert determinant(swap(2)) == -1
    assert determinant(identity(2, 2) - identity(2, 2)) == 0


def test_invert_complex_backend_within_tolerance():
    rng = random.Random(29)
    rows = [[complex(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(4)]
            for _ in range(4)]
    x = Operator.from_rows(2, 2, rows, backend=COMPLEX64)
    res = residual(x @ invert(x), identity(2, 2, COMPLEX64))
    assert isinstance(res, float)
    assert res < 1e-9


def test_invert_complex_singular():
    rows = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1]]
    x = Operator.from_rows(2, 2, rows, backend=COMPLEX64)
    with pytest.raises(SingularOperatorError):
        invert(x)


# ---------------------------------------------------------------------------
# residual and scalars
# ---------------------------------------------------------------------------


def test_residual_examples():
    rng = random.Random(31)
    x = rand_operator(rng, legs=2)
    assert residual(x, x) == 0
    two_i = 2 * identity(2, 1)
    assert residual(identity(2, 1), two_i) == 1
    p = swap(2)
    assert residual(p @ p, identity(2, 2)) == 0


def test_residual_is_exact_fraction_on_rational():
    a = diag_operator([1, 1, 1, Fraction(1, 3)])
    b = identity(2, 2)
    out = residual(a, b)
    assert out == Fraction(2, 3)
    assert isinstance(out, Fraction)


def test_residual_rejects_shape_and_backend_mixes():
    with pytest.raises(ShapeMismatchError):
        residual(identity(2, 1), identity(2, 2))
    with pytest.raises(BackendMismatchError):
        residual(identity(2, 1), identity(2, 1, COMPLEX64))


def test_from_rows_coerces_ints_exactly():
    x = Operator.from_rows(2, 1, [[1, 0], [0, 1]])
    assert x == identity(2, 1)
    assert all(isinstance(v, Fraction) for row in x.rows for v in row)


def test_backend_coercion_never_silent():
    with pytest.raises(BackendMismatchError):
        Operator.from_rows(2, 1, [[0.5, 0], [0, 1]])
    with pytest.raises(BackendMismatchError):
        Operator.from_rows(2, 1, [[Fraction(1), 0], [0, 1]], backend=COMPLEX64)
    with pytest.raises(BackendMismatchError):
        0.5 * identity(2, 1)


def test_zero_leg_scalar_unit():
    e0 = identity(2, 0)
    assert e0.side == 1
    assert e0.rows == ((Fraction(1),),)
