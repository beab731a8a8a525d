import random

import pytest
from hypothesis import HealthCheck, settings

import wacode.huffman as huffman_mod
from wacode import Variant, WeightFn

settings.register_profile(
    "wacode",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("wacode")


@pytest.fixture(autouse=True)
def _validated_trees():
    """Run every test with full sibling-property validation on each update."""
    old = huffman_mod.DEBUG_VALIDATE
    huffman_mod.DEBUG_VALIDATE = True
    yield
    huffman_mod.DEBUG_VALIDATE = old


def random_text(rng: random.Random, max_n: int = 120, max_alpha: int = 8,
                min_n: int = 1) -> bytes:
    n = rng.randint(min_n, max_n)
    alpha = rng.randint(1, max_alpha)
    syms = rng.sample(range(256), alpha)
    return bytes(rng.choice(syms) for _ in range(n))


def grid_variants() -> list[Variant]:
    from fractions import Fraction
    return [
        Variant("static"),
        Variant("backward"),
        Variant("forward"),
        Variant("weighted", WeightFn("pos")),
        Variant("weighted", WeightFn("poly", k=Fraction(2))),
        Variant("weighted", WeightFn("poly", k=Fraction(8))),
        Variant("weighted", WeightFn("exp", base=Fraction("1.0004"))),
        Variant("weighted", WeightFn("exp2")),
    ]
