import pytest

from eil.errors import ParameterError
from eil.gf import FieldCtx, is_prime

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def test_examples():
    f7 = FieldCtx(7)
    assert f7.add(3, 5) == 1
    assert f7.mul(3, 5) == 1
    assert f7.sub(0, 1) == 6
    assert f7.inv(3) == 5
    assert f7.pow(2, 3) == 1
    assert f7.pow(0, 5) == 0


def test_construction_rejects_non_primes():
    for bad in (0, 1, 4, 6, 9, 12, 2**20 + 7):
        with pytest.raises(ParameterError):
            FieldCtx(bad)
    with pytest.raises(ParameterError):
        FieldCtx((1 << 20) + 1)  # above the q bound even if prime-looking


def test_is_prime_small():
    primes = {p for p in range(100) if is_prime(p)}
    assert primes == {
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
        67, 71, 73, 79, 83, 89, 97,
    }


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_field_axioms_exhaustive(q):
    ctx = FieldCtx(q)
    els = ctx.elements()
    assert els == list(range(q))
    for a in els:
        assert ctx.add(a, 0) == a
        assert ctx.mul(a, 1) == a
        assert ctx.add(a, ctx.neg(a)) == 0
        if a != 0:
            assert ctx.mul(a, ctx.inv(a)) == 1
        for b in els:
            assert ctx.add(a, b) == ctx.add(b, a)
            assert ctx.mul(a, b) == ctx.mul(b, a)
            for c in els:
                assert ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c))
                assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
                assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_pow_matches_repeated_multiplication(q):
    ctx = FieldCtx(q)
    for a in ctx.elements():
        acc = 1
        for e in range(21):
            assert ctx.pow(a, e) == acc
            acc = ctx.mul(acc, a)


def test_inv_identities():
    for q in (5, 7, 11, 13):
        ctx = FieldCtx(q)
        assert ctx.inv(1) == 1
        assert ctx.inv(q - 1) == q - 1
    with pytest.raises(ParameterError):
        FieldCtx(7).inv(0)


def test_canonical_residues_enforced():
    ctx = FieldCtx(7)
    with pytest.raises(ParameterError):
        ctx.add(7, 0)
    with pytest.raises(ParameterError):
        ctx.mul(-1, 2)
    with pytest.raises(ParameterError):
        ctx.pow(2, -1)


def test_subgroup_frozen_values():
    # enumerated by hand: solutions of x^t = 1
    assert FieldCtx(7).subgroup_of_order(3) == {1, 2, 4}
    assert FieldCtx(5).subgroup_of_order(2) == {1, 4}
    assert FieldCtx(13).subgroup_of_order(4) == {1, 5, 8, 12}


def test_subgroup_rejects_bad_orders():
    with pytest.raises(ParameterError):
        FieldCtx(7).subgroup_of_order(4)  # 4 does not divide 6
    with pytest.raises(ParameterError):
        FieldCtx(7).subgroup_of_order(1)


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_subgroup_structure(q):
    ctx = FieldCtx(q)
    for t in range(2, q):
        if (q - 1) % t != 0:
            continue
        h = ctx.subgroup_of_order(t)
        assert len(h) == t
        for a in h:
            assert ctx.inv(a) in h
            for b in h:
                assert ctx.mul(a, b) in h
        # a nontrivial multiplicative subgroup sums to zero
        assert sum(h) % q == 0
