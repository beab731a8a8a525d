import random
from fractions import Fraction

import pytest
from gmpy2 import iroot, mpz
from hypothesis import given, strategies as st

from wacode import Variant, WeightFn, ideal_product
from wacode.oracle import (nth_root_floor, oracle_arith_length, oracle_g,
                           oracle_huffman_cost, oracle_weights)

T = b"ccabbbcaaa"
A, B, C = ord("a"), ord("b"), ord("c")


def test_positional_weight_columns():
    assert oracle_weights(T, WeightFn("pos"), 1) == {A: 14, B: 18, C: 23}
    assert oracle_weights(T, WeightFn("pos"), 4) == {A: 6, B: 18, C: 4}
    assert oracle_weights(T, WeightFn("pos"), 8) == {A: 6, B: 0, C: 0}


def test_constant_weights_are_counts():
    for data in (T, b"zzz", b"\x00\xff\x00"):
        got = oracle_weights(data, WeightFn("const"), 1)
        assert got == {s: data.count(bytes([s])) for s in set(data)}


def test_huffman_cost_goldens():
    assert oracle_huffman_cost({A: 14, B: 18, C: 23}) == 87
    assert oracle_huffman_cost({ord("x"): 5}) == 0
    with pytest.raises(ValueError):
        oracle_huffman_cost({A: 0})


def test_forward_length_golden():
    prod, bits = oracle_arith_length(T, "forward")
    assert prod == Fraction(1, 4200)
    assert abs(bits - 12.036173612553485) < 1e-9


@given(st.integers(0, 10 ** 12), st.integers(1, 9))
def test_nth_root_matches_gmp(x, b):
    assert nth_root_floor(x, b) == int(iroot(mpz(x), b)[0])


def test_arith_ideal_matches_engine():
    rng = random.Random(11)
    specs = [("static", None), ("backward", None), ("forward", None),
             ("weighted", WeightFn("pos")),
             ("weighted", WeightFn("poly", k=Fraction(1, 2)))]
    for _ in range(40):
        n = rng.randint(1, 40)
        syms = rng.sample(range(256), rng.randint(1, 5))
        data = bytes(rng.choice(syms) for _ in range(n))
        kind, g = rng.choice(specs)
        prod, _ = oracle_arith_length(data, kind, g)
        engine = ideal_product(data, Variant(kind, g))
        assert engine == prod


def test_oracle_g_matches_engine_eval():
    from wacode.weights import eval_g
    from gmpy2 import mpq
    fns = [WeightFn("pos"), WeightFn("exp2"), WeightFn("interp", j=4),
           WeightFn("poly", k=Fraction(3, 2)), WeightFn("exp", base=Fraction(7, 5))]
    for fn in fns:
        for n in (1, 4, 17):
            for i in range(1, n + 1):
                o = oracle_g(fn, i, n)
                assert mpq(o.numerator, o.denominator) == mpq(eval_g(fn, i, n))
