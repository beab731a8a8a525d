"""Position-weight functions and the symbol-weight tables they induce.

A weight function g assigns a positive priority to every text position
1..n.  A symbol's model weight over a position range is the sum of g at
the positions where the symbol occurs; forward-style models start from
the whole-text sums and subtract g(i) as position i is consumed, while
backward-style models count occurrences already seen.

Two arithmetic regimes are supported:

* exact      -- weights are exact rationals (gmpy2.mpq / int); used for
                theorem-level assertions and small inputs.  No rounding,
                ever.
* fixed      -- weights are integers in 64-fractional-bit fixed point
                (value * 2**64, truncated).  For every family except the
                rational-base exponential the fixed value equals the
                exact value scaled by 2**64, so the induced probabilities
                are identical; the rational-base exponential is quantized
                (relative error ~2**-52 at corpus scale) by a shared
                deterministic recurrence, so encoder and decoder still
                agree bit-exactly.
"""

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import iroot, mpq, mpz

from .errors import UsageError, DataError

FAMILIES = ("const", "pos", "poly", "exp", "exp2", "interp")

FP_BITS = 64
FP_ONE = 1 << FP_BITS


@dataclass(frozen=True)
class WeightFn:
    """Declarative description of a position-weight function g.

    family:
      const   g(i) = 1
      pos     g(i) = n - i + 1
      poly    g(i) = (n - i + 1) ** k          (k rational >= 0)
      exp     g(i) = base ** (n - i)           (base rational > 1)
      exp2    g(i) = 2 ** (n - i)
      interp  g(i) = min(j, n - i + 1)         (j = 1 -> const, j = n -> pos)
    """

    family: str
    k: Fraction | None = None
    base: Fraction | None = None
    j: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UsageError(f"unknown weight family {self.family!r}")
        if self.family == "poly":
            if self.k is None or self.k < 0:
                raise UsageError("poly requires a rational exponent k >= 0")
        elif self.k is not None:
            raise UsageError("k is only valid for the poly family")
        if self.family == "exp":
            if self.base is None or self.base <= 1:
                raise UsageError("exp requires a rational base > 1")
        elif self.base is not None:
            raise UsageError("base is only valid for the exp family")
        if self.family == "interp":
            if self.j is None or self.j < 1:
                raise UsageError("interp requires an integer j >= 1")
        elif self.j is not None:
            raise UsageError("j is only valid for the interp family")

    @classmethod
    def from_cli(cls, text: str) -> "WeightFn":
        """Parse const | pos | poly:K | exp:BASE | exp2 | interp:J."""
        name, _, arg = text.partition(":")
        try:
            if name == "const":
                return cls("const")
            if name == "pos":
                return cls("pos")
            if name == "exp2":
                return cls("exp2")
            if name == "poly":
                return cls("poly", k=Fraction(arg))
            if name == "exp":
                return cls("exp", base=Fraction(arg))
            if name == "interp":
                return cls("interp", j=int(arg))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad weight function argument {text!r}: {exc}") from None
        raise UsageError(f"unknown weight function {text!r}")

    def label(self) -> str:
        if self.family == "poly":
            return f"poly:{self.k}"
        if self.family == "exp":
            return f"exp:{self.base}"
        if self.family == "interp":
            return f"interp:{self.j}"
        return self.family


def _poly_fixed(t: int, k: Fraction) -> int:
    """floor((t ** k) * 2**64) for rational k, computed exactly."""
    a, b = k.numerator, k.denominator
    if b == 1:
        return (t ** a) << FP_BITS
    root, _ = iroot(mpz(t) ** a << (FP_BITS * b), b)
    return int(root)


def eval_g(fn: WeightFn, i: int, n: int):
    """Exact value of g at position i of an n-symbol text.

    Fractional poly exponents use a fixed dyadic approximation with
    relative error below 2**-64 (floor of the true value at 64 fractional
    bits); the same approximation is used on both coder sides.
    """
    if not 1 <= i <= n:
        raise UsageError(f"position {i} outside 1..{n}")
    t = n - i + 1
    if fn.family == "const":
        return 1
    if fn.family == "pos":
        return t
    if fn.family == "interp":
        return min(fn.j, t)
    if fn.family == "exp2":
        return 1 << (t - 1)
    if fn.family == "exp":
        return mpq(fn.base.numerator, fn.base.denominator) ** (t - 1)
    # poly
    if fn.k.denominator == 1:
        return t ** fn.k.numerator
    return mpq(_poly_fixed(t, fn.k), FP_ONE)


def eval_g_fixed(fn: WeightFn, i: int, n: int) -> int:
    """Single-point fixed-point evaluation; exp is exact here (floor)."""
    if not 1 <= i <= n:
        raise UsageError(f"position {i} outside 1..{n}")
    t = n - i + 1
    if fn.family == "const":
        return FP_ONE
    if fn.family == "pos":
        return t << FP_BITS
    if fn.family == "interp":
        return min(fn.j, t) << FP_BITS
    if fn.family == "exp2":
        return 1 << (t - 1 + FP_BITS)
    if fn.family == "exp":
        p, q = fn.base.numerator, fn.base.denominator
        return (p ** (t - 1) << FP_BITS) // q ** (t - 1)
    return _poly_fixed(t, fn.k)


class GSeq:
    """Per-run g-value source for one pass over an n-symbol text.

    Provides the values in the two orders the coders need: descending
    position (n..1, for building the initial forward table) and ascending
    position (1..n, the coding order).  For the fixed-mode exp family the
    values come from a shared truncating recurrence

        v(n) = 2**64,   v(i) = v(i+1) * p // q

    with block checkpoints so ascending access does not need O(n) memory;
    every consumer sees the identical integers.
    """

    _BLOCK = 4096

    def __init__(self, fn: WeightFn, n: int, mode: str):
        if mode not in ("exact", "fixed"):
            raise ValueError(mode)
        self.fn = fn
        self.n = n
        self.mode = mode
        self._ckpt: dict[int, int] | None = None

    # -- simple families ------------------------------------------------

    def _direct(self, i: int):
        if self.mode == "exact":
            return eval_g(self.fn, i, self.n)
        return eval_g_fixed(self.fn, i, self.n)

    def _is_recurrent(self) -> bool:
        return self.fn.family == "exp" and self.mode == "fixed"

    # -- fixed-mode exp recurrence ---------------------------------------

    def _run_recurrence(self):
        """Yield (i, v(i)) for i = n..1, recording checkpoints."""
        p = self.fn.base.numerator
        q = self.fn.base.denominator
        ck = {}
        v = FP_ONE
        for i in range(self.n, 0, -1):
            if i % self._BLOCK == 1 or i == self.n:
                ck[i] = v
            yield i, v
            if i > 1:
                v = v * p // q
        self._ckpt = ck

    def _ensure_checkpoints(self):
        if self._ckpt is None:
            for _ in self._run_recurrence():
                pass

    def _block_values(self, lo: int, hi: int) -> list[int]:
        """v(lo..hi) ascending, regenerated from the nearest checkpoint."""
        self._ensure_checkpoints()
        p = self.fn.base.numerator
        q = self.fn.base.denominator
        # nearest checkpoint index >= hi
        c = hi if hi in self._ckpt else min(k for k in self._ckpt if k >= hi)
        v = self._ckpt[c]
        vals = []
        for i in range(c, lo - 1, -1):
            if i <= hi:
                vals.append(v)
            if i > lo:
                v = v * p // q
        vals.reverse()
        return vals

    # -- public iterators -------------------------------------------------

    def descending(self):
        """g(n), g(n-1), ..., g(1) -- table-building order."""
        if self._is_recurrent():
            for _, v in self._run_recurrence():
                yield v
            return
        if self.fn.family == "exp" and self.mode == "exact":
            step = mpq(self.fn.base.numerator, self.fn.base.denominator)
            v = mpq(1)
            for i in range(self.n, 0, -1):
                yield v
                if i > 1:
                    v = v * step
            return
        for i in range(self.n, 0, -1):
            yield self._direct(i)

    def ascending(self):
        """g(1), g(2), ..., g(n) -- coding order."""
        if self._is_recurrent():
            i = 1
            while i <= self.n:
                hi = min(self.n, ((i - 1) // self._BLOCK + 1) * self._BLOCK)
                for v in self._block_values(i, hi):
                    yield v
                i = hi + 1
            return
        if self.fn.family == "exp" and self.mode == "exact":
            step = mpq(self.fn.base.numerator, self.fn.base.denominator)
            v = step ** (self.n - 1)
            for i in range(1, self.n + 1):
                yield v
                if i < self.n:
                    v = v / step
            return
        for i in range(1, self.n + 1):
            yield self._direct(i)


class WeightTable:
    """Mutable map from byte symbols to exact nonnegative weights.

    `total` and `active_count` are maintained incrementally and always
    equal the recomputed values.  The table is a value type: no sharing,
    no internal locking; copy() before handing it to another owner.
    """

    __slots__ = ("_w", "total", "active_count")

    def __init__(self, weights: dict[int, object] | None = None):
        self._w = {}
        self.total = 0
        self.active_count = 0
        if weights:
            for sym, w in sorted(weights.items()):
                if not 0 <= sym <= 255:
                    raise UsageError(f"symbol {sym} outside byte range")
                if w < 0:
                    raise UsageError("negative weight")
                self._w[sym] = w
                self.total += w
                if w > 0:
                    self.active_count += 1

    # -- constructors ----------------------------------------------------

    @classmethod
    def forward(cls, data: bytes, gseq: GSeq) -> "WeightTable":
        """Whole-text sums: weight[s] = sum of g(j) over positions with data[j]=s."""
        if not data:
            raise UsageError("empty input")
        acc: dict[int, object] = {}
        j = len(data) - 1
        for g in gseq.descending():
            sym = data[j]
            if sym in acc:
                acc[sym] = acc[sym] + g
            else:
                acc[sym] = g
            j -= 1
        return cls(acc)

    @classmethod
    def counts(cls, data: bytes) -> "WeightTable":
        if not data:
            raise UsageError("empty input")
        acc: dict[int, int] = {}
        for sym in data:
            acc[sym] = acc.get(sym, 0) + 1
        return cls(acc)

    @classmethod
    def zeros(cls, alphabet) -> "WeightTable":
        alphabet = sorted(set(alphabet))
        if not alphabet:
            raise UsageError("empty alphabet")
        return cls({sym: 0 for sym in alphabet})

    @classmethod
    def ones(cls, alphabet) -> "WeightTable":
        alphabet = sorted(set(alphabet))
        if not alphabet:
            raise UsageError("empty alphabet")
        return cls({sym: 1 for sym in alphabet})

    # -- accessors --------------------------------------------------------

    def weight(self, sym: int):
        return self._w.get(sym, 0)

    def __contains__(self, sym: int) -> bool:
        return sym in self._w

    def symbols(self) -> list[int]:
        return sorted(self._w)

    def items(self):
        return sorted(self._w.items())

    def active_items(self):
        return [(s, w) for s, w in sorted(self._w.items()) if w > 0]

    def copy(self) -> "WeightTable":
        t = WeightTable()
        t._w = dict(self._w)
        t.total = self.total
        t.active_count = self.active_count
        return t

    def as_dict(self) -> dict[int, object]:
        return dict(self._w)

    # -- updates ----------------------------------------------------------

    def update_forward(self, sym: int, delta) -> None:
        """Consume `delta` of sym's remaining weight; drop sym at zero."""
        w = self._w.get(sym)
        if w is None:
            raise DataError(f"symbol {sym} not in model")
        new = w - delta
        if new < 0:
            raise DataError("weight underflow: corrupted model or mismatched g")
        if new == 0:
            del self._w[sym]
            self.active_count -= 1
        else:
            self._w[sym] = new
        self.total -= delta

    def update_backward(self, sym: int, delta=1) -> None:
        w = self._w.get(sym)
        if w is None:
            raise DataError(f"symbol {sym} not in declared alphabet")
        if w == 0 and delta > 0:
            self.active_count += 1
        self._w[sym] = w + delta
        self.total += delta

    def probability_of(self, sym: int):
        """Exact rational weight share of sym."""
        if self.total <= 0:
            raise DataError("empty model")
        return mpq(self.weight(sym)) / mpq(self.total)

    def distribution(self) -> dict[int, object]:
        if self.total <= 0:
            raise DataError("empty model")
        return {s: mpq(w) / mpq(self.total) for s, w in self._w.items() if w > 0}

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}:{w}" for s, w in self.items())
        return f"WeightTable({{{inner}}})"
