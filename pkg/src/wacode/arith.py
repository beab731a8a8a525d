"""Adaptive arithmetic coder driven by a WeightTable trajectory.

Two coders share the model plumbing:

* exact      -- the interval is the exact rational product of the
                per-symbol probabilities; the payload is the shortest
                dyadic interval inside it (length within +1 bit of the
                information content).  Used for theorem-level checks.
* streaming  -- 62-bit integer registers with carry ("pending") bits and
                a two-bit termination that pins a quarter-aligned value
                inside the final range.  Weight totals are arbitrary-size
                integers; the only requirement is that every symbol
                actually coded keeps a nonempty sub-interval, which the
                weight families here satisfy by a huge margin.

Symbols own sub-intervals in ascending byte order, tracked by a Fenwick
tree so updates and decode lookups are O(log 256).
"""

import gmpy2
from gmpy2 import mpfr, mpq

from .bitio import BitReader, Bits
from .container import ModelHeader, header_for_model
from .errors import DataError, UsageError
from .model import CodingModel, Variant

PRECISION = 62
FULL = 1 << PRECISION
HALF = FULL >> 1
QUARTER = FULL >> 2
THREEQ = HALF + QUARTER

_LOG_PRECISION = 192


class _Fenwick:
    """Prefix sums over the 256 byte slots (values: ints or exact rationals)."""

    __slots__ = ("tree",)

    def __init__(self, table=None):
        self.tree = [0] * 257
        if table is not None:
            for sym, w in table.items():
                if w:
                    self.add(sym, w)

    def add(self, sym: int, delta) -> None:
        i = sym + 1
        tree = self.tree
        while i <= 256:
            tree[i] = tree[i] + delta
            i += i & (-i)

    def prefix(self, sym: int):
        """Total weight of symbols strictly below sym."""
        s = 0
        i = sym
        tree = self.tree
        while i > 0:
            s = s + tree[i]
            i -= i & (-i)
        return s

    def find(self, target):
        """(sym, cum_lo) of the slot whose interval contains target."""
        pos = 0
        rem = target
        bitmask = 256
        tree = self.tree
        while bitmask:
            nxt = pos + bitmask
            if nxt <= 256 and tree[nxt] <= rem:
                rem = rem - tree[nxt]
                pos = nxt
            bitmask >>= 1
        if pos >= 256:
            raise DataError("decoded value outside the model")
        return pos, target - rem


class _StreamEncoder:
    def __init__(self, out: Bits):
        self.low = 0
        self.high = FULL - 1
        self.pending = 0
        self.out = out
        self.used = False

    def _emit(self, bit: int) -> None:
        self.out.write(bit)
        inv = 1 - bit
        for _ in range(self.pending):
            self.out.write(inv)
        self.pending = 0

    def encode(self, cum_lo, w, total) -> None:
        self.used = True
        r = self.high - self.low + 1
        new_high = self.low + (r * (cum_lo + w)) // total - 1
        new_low = self.low + (r * cum_lo) // total
        if new_low > new_high:
            raise DataError("symbol interval vanished (weight too small)")
        self.low, self.high = new_low, new_high
        while True:
            if self.high < HALF:
                self._emit(0)
            elif self.low >= HALF:
                self._emit(1)
                self.low -= HALF
                self.high -= HALF
            elif self.low >= QUARTER and self.high < THREEQ:
                self.pending += 1
                self.low -= QUARTER
                self.high -= QUARTER
            else:
                break
            self.low <<= 1
            self.high = (self.high << 1) | 1

    def finish(self) -> None:
        """Emit two bits selecting a quarter-aligned value in [low, high]."""
        if not self.used:
            return
        v = -(-self.low // QUARTER) * QUARTER
        assert v <= self.high, "renormalized range lost its quarter"
        t = v >> (PRECISION - 2)
        self._emit((t >> 1) & 1)
        self._emit(t & 1)


class _StreamDecoder:
    def __init__(self, reader: BitReader):
        self.low = 0
        self.high = FULL - 1
        self.reader = reader
        code = 0
        for _ in range(PRECISION):
            code = (code << 1) | reader.read_padded()
        self.code = code

    def target(self, total):
        r = self.high - self.low + 1
        return ((self.code - self.low + 1) * total - 1) // r

    def consume(self, cum_lo, w, total) -> None:
        r = self.high - self.low + 1
        new_high = self.low + (r * (cum_lo + w)) // total - 1
        new_low = self.low + (r * cum_lo) // total
        if not new_low <= self.code <= new_high:
            raise DataError("corrupt payload: code left the symbol interval")
        self.low, self.high = new_low, new_high
        while True:
            if self.high < HALF:
                pass
            elif self.low >= HALF:
                self.low -= HALF
                self.high -= HALF
                self.code -= HALF
            elif self.low >= QUARTER and self.high < THREEQ:
                self.low -= QUARTER
                self.high -= QUARTER
                self.code -= QUARTER
            else:
                break
            self.low <<= 1
            self.high = (self.high << 1) | 1
            self.code = (self.code << 1) | self.reader.read_padded()


class _ExactEncoder:
    def __init__(self):
        self.low = mpq(0)
        self.width = mpq(1)

    def encode(self, cum_lo, w, total) -> None:
        total = mpq(total)
        self.low += self.width * (mpq(cum_lo) / total)
        self.width *= mpq(w) / total

    def finish(self, out: Bits) -> None:
        """Write the shortest dyadic interval contained in [low, low+width)."""
        if self.width == 1:
            return
        inv = 1 / self.width
        bound = int(inv.numerator)
        base = int(inv.denominator)
        # smallest L with 2**L >= 1/width
        length = max(0, bound.bit_length() - base.bit_length())
        while (base << length) < bound:
            length += 1
        hi = self.low + self.width
        for trial in (length, length + 1):
            scale = 1 << trial
            k = -(-(self.low * scale).numerator // (self.low * scale).denominator)
            if k + 1 <= hi * scale:
                out.write_int(int(k), trial)
                return
        raise AssertionError("dyadic refinement failed")


class _ExactDecoder:
    def __init__(self, payload: Bits):
        value = 0
        for i in range(len(payload)):
            value = (value << 1) | payload.bit_at(i)
        self.v = mpq(value, 1 << len(payload)) if len(payload) else mpq(0)
        self.low = mpq(0)
        self.width = mpq(1)

    def target(self, total):
        return (self.v - self.low) / self.width * mpq(total)

    def consume(self, cum_lo, w, total) -> None:
        total = mpq(total)
        self.low += self.width * (mpq(cum_lo) / total)
        self.width *= mpq(w) / total
        if not self.low <= self.v < self.low + self.width:
            raise DataError("corrupt payload: value left the interval")


def _single_active(table):
    if table.active_count != 1:
        raise DataError("no unique symbol remains")
    for sym, w in table.items():
        if w > 0:
            return sym
    raise DataError("model emptied unexpectedly")


def arith_encode(data: bytes, variant: Variant,
                 mode: str = "streaming") -> tuple[ModelHeader, Bits]:
    """Encode data with the arithmetic engine; returns (header, payload bits)."""
    if not data:
        raise UsageError("empty input")
    n = len(data)
    model = CodingModel(variant, n, mode, "arith", data=data)
    header = header_for_model("arith", model)
    fen = _Fenwick(model.table)
    bits = Bits()
    coder = _ExactEncoder() if mode == "exact" else _StreamEncoder(bits)
    table = model.table
    for i in range(1, n + 1):
        sym = data[i - 1]
        if table.active_count >= 2:
            coder.encode(fen.prefix(sym), table.weight(sym), table.total)
        elif _single_active(table) != sym:
            raise DataError("model desynchronized from input")
        w_before = table.weight(sym)
        new_w = model.advance(i, sym)
        if new_w is not None:
            fen.add(sym, new_w - w_before)
    if mode == "exact":
        coder.finish(bits)
    else:
        coder.finish()
    return header, bits


def arith_decode(header: ModelHeader, payload: Bits) -> bytes:
    """Exact inverse of arith_encode for the same header."""
    if header.engine != "arith":
        raise DataError(f"header is for engine {header.engine!r}")
    model = CodingModel(header.variant, header.n, header.mode, "arith",
                        table=header.make_table(), alphabet=header.alphabet)
    table = model.table
    fen = _Fenwick(table)
    if header.mode == "exact":
        coder = _ExactDecoder(payload)
    else:
        coder = _StreamDecoder(BitReader(payload))
    out = bytearray()
    for i in range(1, header.n + 1):
        if table.active_count >= 2:
            target = coder.target(table.total)
            sym, cum_lo = fen.find(target)
            w = table.weight(sym)
            if not w > 0:
                raise DataError("corrupt payload: zero-weight symbol decoded")
            coder.consume(cum_lo, w, table.total)
        else:
            sym = _single_active(table)
        out.append(sym)
        w_before = table.weight(sym)
        new_w = model.advance(i, sym)
        if new_w is not None:
            fen.add(sym, new_w - w_before)
    return bytes(out)


def ideal_product(data: bytes, variant: Variant, mode: str = "exact"):
    """Exact product of per-step model probabilities of the coded symbols.

    Steps where one symbol remains active contribute a factor of 1, so a
    larger product means a shorter ideal code.  Backward uses the
    +1-smoothed counts (the arithmetic baseline trajectory).
    """
    if not data:
        raise UsageError("empty input")
    n = len(data)
    model = CodingModel(variant, n, mode, "arith", data=data)
    table = model.table
    prod = mpq(1)
    for i in range(1, n + 1):
        sym = data[i - 1]
        if table.active_count >= 2:
            prod *= table.probability_of(sym)
        model.advance(i, sym)
    return prod


def ideal_code_length(data: bytes, variant: Variant, mode: str = "exact"):
    """-log2 of ideal_product, as a high-precision float (mpfr)."""
    prod = ideal_product(data, variant, mode)
    with gmpy2.context(precision=_LOG_PRECISION):
        return gmpy2.log2(mpfr(prod.denominator)) - gmpy2.log2(mpfr(prod.numerator))
