"""Brute-force reference implementations used by the test suite.

Everything here recomputes from scratch with the standard library
(fractions + heapq) and deliberately shares no code with the incremental
engines: weights are literal position sums, the Huffman cost is a plain
repeated min-merge, and the arithmetic ideal length re-derives every
step's probability from a fresh weight recomputation.  Quadratic on
purpose; keep n small.
"""

from fractions import Fraction
import heapq
import math

FP_BITS = 64


def nth_root_floor(x: int, b: int) -> int:
    """floor(x ** (1/b)) for integers x >= 0, b >= 1 (Newton iteration)."""
    if x < 0 or b < 1:
        raise ValueError("nth_root_floor needs x >= 0, b >= 1")
    if x == 0 or b == 1:
        return x if b == 1 else 0
    r = 1 << -(-x.bit_length() // b)
    while True:
        nxt = ((b - 1) * r + x // r ** (b - 1)) // b
        if nxt >= r:
            break
        r = nxt
    while r ** b > x:
        r -= 1
    return r


def oracle_g(fn, i: int, n: int) -> Fraction:
    """Literal evaluation of g at position i (fn is a WeightFn-shaped spec)."""
    t = n - i + 1
    if fn.family == "const":
        return Fraction(1)
    if fn.family == "pos":
        return Fraction(t)
    if fn.family == "interp":
        return Fraction(min(fn.j, t))
    if fn.family == "exp2":
        return Fraction(1 << (t - 1))
    if fn.family == "exp":
        return Fraction(fn.base) ** (t - 1)
    a, b = fn.k.numerator, fn.k.denominator
    if b == 1:
        return Fraction(t ** a)
    return Fraction(nth_root_floor(t ** a << (FP_BITS * b), b), 1 << FP_BITS)


def oracle_weights(data: bytes, fn, i: int) -> dict[int, Fraction]:
    """Weight of every distinct symbol over positions i..n, by direct summation."""
    n = len(data)
    if not 1 <= i <= n:
        raise ValueError(f"position {i} outside 1..{n}")
    out = {sym: Fraction(0) for sym in set(data)}
    for j in range(i, n + 1):
        out[data[j - 1]] += oracle_g(fn, j, n)
    return out


def oracle_huffman_cost(weights: dict) -> Fraction:
    """Sum of weight * depth over an optimal prefix tree (textbook min-merge)."""
    live = [w for w in weights.values() if w > 0]
    if not live:
        raise ValueError("no active symbols")
    if len(live) == 1:
        return Fraction(0)
    heap = [Fraction(w) for w in live]
    heapq.heapify(heap)
    cost = Fraction(0)
    while len(heap) > 1:
        a = heapq.heappop(heap)
        b = heapq.heappop(heap)
        cost += a + b
        heapq.heappush(heap, a + b)
    return cost


def _oracle_step_weights(data: bytes, kind: str, fn, i: int) -> dict[int, Fraction]:
    """Model weights in force when position i is about to be coded."""
    n = len(data)
    if kind == "forward":
        out = {s: Fraction(0) for s in set(data)}
        for j in range(i, n + 1):
            out[data[j - 1]] += 1
        return out
    if kind == "weighted":
        return oracle_weights(data, fn, i)
    if kind == "static":
        return {s: Fraction(sum(1 for c in data if c == s)) for s in set(data)}
    if kind == "backward":
        # +1-smoothed occurrence counts of the already-processed prefix
        out = {s: Fraction(1) for s in set(data)}
        for j in range(1, i):
            out[data[j - 1]] += 1
        return out
    raise ValueError(kind)


def oracle_arith_length(data: bytes, kind: str, fn=None):
    """(product of per-step probabilities, -log2 of it) for a variant trajectory.

    Steps where a single symbol remains active contribute probability 1.
    """
    n = len(data)
    prod = Fraction(1)
    for i in range(1, n + 1):
        w = _oracle_step_weights(data, kind, fn, i)
        live = {s: v for s, v in w.items() if v > 0}
        if len(live) >= 2:
            total = sum(live.values())
            prod *= live[data[i - 1]] / total
    bits = math.log2(prod.denominator) - math.log2(prod.numerator)
    return prod, bits
