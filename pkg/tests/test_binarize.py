import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubify.binarize import (
    build_map,
    continuous_bit_count,
    decode,
    encode_continuous,
    encode_discrete,
    encode_domain,
    encode_integer,
    encode_value,
    integer_coeffs,
    substitute,
    substitute_system,
)
from qubify.errors import CapacityError, DimensionError, DomainError
from qubify.model import Binary, Continuous, Discrete, Integer, Spin
from qubify.tensor import QuadExpr

from oracles import integer_bits, quad


def preimage_counts(enc):
    return Counter(round(enc.decode(y), 9) for y in itertools.product((0, 1), repeat=enc.bits))


@pytest.mark.parametrize("r", range(1, 65))
def test_integer_encoding_is_onto_exact_range(r):
    enc = encode_integer(-3, -3 + r)
    assert enc.bits == integer_bits(-3, -3 + r)
    assert set(preimage_counts(enc)) == set(range(-3, -3 + r + 1))


@pytest.mark.parametrize("r", range(2, 65))
def test_integer_double_representations(r):
    # values in [r - 2^(p-1) + 1, 2^(p-1) - 1] (shifted to 0) have two preimages, the rest one
    p = integer_bits(0, r)
    lo, hi = r - 2 ** (p - 1) + 1, 2 ** (p - 1) - 1
    counts = preimage_counts(encode_integer(0, r))
    for k, c in counts.items():
        assert c == (2 if lo <= k <= hi else 1), (r, k)


def test_integer_0_300():
    c = integer_coeffs(300)
    assert len(c) == 9 and c[-1] == 45 and c[:-1] == tuple(2.0**i for i in range(8))


def test_minus_one_to_one():
    enc = encode_domain(Integer(-1, 1))
    assert enc.coeffs == (1.0, 1.0) and enc.shift == -1


def test_spin_encoding():
    enc = encode_domain(Spin())
    assert [enc.decode([b]) for b in (0, 1)] == [-1, 1]


def test_discrete_onehot_bijection():
    enc = encode_discrete((0, 1, 4))
    decoded = {}
    for y in itertools.product((0, 1), repeat=3):
        if sum(y) == 1:
            decoded[y] = enc.decode(y)
    assert sorted(decoded.values()) == [0, 1, 4]
    assert len(set(decoded.values())) == 3


def test_continuous_0_100():
    enc = encode_continuous(0, 100, 0.01)
    assert enc.bits == 13
    assert enc.coeffs[0] == pytest.approx(100 / (2**13 - 1))


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-50, 50),
    st.floats(0.1, 40),
    st.floats(0.05, 2.0),
)
def test_continuous_epsilon_cover(lo, width, eps):
    hi = lo + width
    enc = encode_continuous(lo, hi, eps)
    width = hi - lo
    p = enc.bits
    # minimality of p
    assert width / (2**p - 1) <= 2 * eps * (1 + 1e-12)
    if p > 1:
        assert width / (2 ** (p - 1) - 1) > 2 * eps
    grid = np.sort(enc.image())
    assert grid[0] == pytest.approx(lo) and grid[-1] == pytest.approx(hi)
    probes = np.linspace(lo, hi, 301)
    dist = np.min(np.abs(probes[:, None] - grid[None, :]), axis=1)
    assert dist.max() <= eps + 1e-9


def test_continuous_cap():
    with pytest.raises(CapacityError):
        encode_continuous(0, 1e6, 1e-6, bit_cap=20)
    assert continuous_bit_count(7, 0.5) == 3


def test_encode_value_roundtrip():
    for dom, vals in (
        (Integer(2, 9), range(2, 10)),
        (Discrete((0.5, -1, 3)), (0.5, -1, 3)),
        (Spin(), (-1, 1)),
        (Binary(), (0, 1)),
    ):
        enc = encode_domain(dom)
        for a in vals:
            assert enc.decode(encode_value(enc, a)) == pytest.approx(a)
    enc = encode_continuous(0, 7, 0.5)
    assert enc.decode(encode_value(enc, 3.2)) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        encode_value(encode_domain(Integer(0, 3)), 5)


def test_build_map_layout():
    bmap = build_map([Binary(), Integer(0, 300), Discrete((0, 1, 4))])
    assert bmap.m == 1 + 9 + 3 and bmap.s == 3
    assert bmap.offsets() == [0, 1, 10]
    Aoh, boh = bmap.onehot
    np.testing.assert_array_equal(Aoh, [[0] * 10 + [1, 1, 1]])
    assert bmap.labels(["a", "b", "c"])[:3] == ["a", "b[0]", "b[1]"]


def test_uniform_factors():
    assert build_map([Integer(0, 3)] * 3).uniform_factors() is not None
    assert build_map([Integer(0, 3), Integer(0, 4)]).uniform_factors() is None
    b, a = build_map([Continuous(0, 3), Continuous(0, 6)], epsilon=1.0).uniform_factors()
    np.testing.assert_allclose(b, [1, 2])
    np.testing.assert_array_equal(a, [1, 2])


def _random_domains(rng, budget):
    out, bits = [], 0
    while True:
        k = rng.integers(5)
        dom = [
            Binary(),
            Spin(),
            Integer(int(rng.integers(-3, 2)), int(rng.integers(3, 6))),
            Discrete(tuple(rng.choice(np.arange(-4, 5), size=3, replace=False).tolist())),
            Continuous(-1.0, 2.0),
        ][k]
        nb = encode_domain(dom, epsilon=0.5).bits
        if bits + nb > budget:
            return out
        out.append(dom)
        bits += nb


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("use_kron", [True, False])
def test_substitution_identity_exhaustive(seed, use_kron):
    rng = np.random.default_rng(seed)
    doms = _random_domains(rng, 12) or [Binary()]
    n = len(doms)
    Q = rng.normal(size=(n, n))
    Q = Q + Q.T
    v = rng.normal(size=n)
    e = QuadExpr(Q, v, 0.25)
    bmap = build_map(doms, epsilon=0.5)
    sub = substitute(e, bmap, use_kron=use_kron)
    for y in itertools.product((0, 1), repeat=bmap.m):
        x = bmap.L @ np.array(y) + bmap.g
        assert sub(y) == pytest.approx(quad(Q, v, 0.25, x), abs=1e-9)


def test_uniform_fast_path_matches_general():
    rng = np.random.default_rng(9)
    Q = rng.normal(size=(3, 3))
    e = QuadExpr(Q + Q.T, rng.normal(size=3), 1.0)
    for doms in ([Integer(-1, 1)] * 3, [Continuous(0, 1), Continuous(0, 2), Continuous(-1, 1)]):
        bmap = build_map(doms, epsilon=0.2)
        assert substitute(e, bmap, True).allclose(substitute(e, bmap, False), atol=1e-10)


def test_substitute_system_and_decode():
    bmap = build_map([Integer(1, 4), Discrete((2, 5))])
    A = np.array([[1.0, 1.0]])
    As, bs = substitute_system(A, [6], bmap)
    for y in itertools.product((0, 1), repeat=bmap.m):
        x = bmap.L @ np.array(y) + bmap.g
        assert As @ np.array(y) - bs == pytest.approx(A @ x - 6)
    d = decode(bmap, [1, 0, 0, 1])
    assert d.values.tolist() == [2.0, 5.0] and d.onehot_violations == []
    assert decode(bmap, [0, 0, 1, 1]).onehot_violations == [2]
    with pytest.raises(DimensionError):
        decode(bmap, [0, 0])
